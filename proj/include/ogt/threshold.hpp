#pragma once

// Threshold matrices and graphs over representative cells, extraction of
// nicely colored subgraphs, cleaning, and witness extraction.

#include "ogt/core.hpp"
#include "ogt/ramsey.hpp"
#include "ogt/rational.hpp"
#include "ogt/rng.hpp"
#include "ogt/scheme.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ogt {

/// Color counts between disjoint vertex sets.
class PairCounts {
 public:
  PairCounts(const OrderedGraph& g, const std::vector<std::vector<Vertex>>& sets);

  std::int64_t count(int x, int y, Color c) const;
  std::int64_t size(int x) const { return sizes_[static_cast<std::size_t>(x)]; }
  Rational density(int x, int y, Color c) const;
  int sets() const noexcept { return static_cast<int>(sizes_.size()); }

 private:
  int palette_ = 0;
  std::vector<std::int64_t> sizes_;
  std::vector<std::int64_t> counts_;  // x * S * P + y * P + c, both orders filled
};

/// Entry (s, s') holds the colors whose density between a[s] and b[s'] is at
/// least eta. Requires 0 < eta < 1/|Sigma|.
ThresholdMatrix threshold_matrix(const OrderedGraph& g, const std::vector<std::vector<Vertex>>& a,
                                 const std::vector<std::vector<Vertex>>& b, const Rational& eta);

struct RepresentativeQuality {
  bool measured = false;
  Rational alpha;           ///< min |W_x| / n
  std::optional<Rational> beta;  ///< smallest tested eps passing the sampled regularity check
  Rational mu_cells;        ///< average colour-density deviation against Q'' cells
  Rational mu_parents;      ///< double-representation deviation against Q' parts
};

struct RepresentativeTuple {
  std::vector<std::vector<Vertex>> cells;  ///< index (j*b + r)*t + s
  RepresentativeQuality quality;
};

enum class RepresentativeStrategy { full, random_search };

struct RepresentativeParams {
  Rational alpha = Rational(1, 100);
  int budget = 50;              ///< candidate tuples tried by random search
  int regularity_pairs = 8;     ///< cell pairs probed for the beta estimate
  int regularity_samples = 200;
};

/// Pair-averaged color-density deviation of W against the sets of `a`, and the
/// double-representation deviation of W against the Q' parts.
Rational cell_deviation(const OrderedGraph& g, const std::vector<std::vector<Vertex>>& w,
                        const std::vector<std::vector<Vertex>>& a);
Rational parent_deviation(const OrderedGraph& g, const RegularityScheme& s, const std::vector<std::vector<Vertex>>& w);

RepresentativeTuple representatives(const OrderedGraph& g, const RegularityScheme& s, RepresentativeStrategy strategy,
                                    const RepresentativeParams& params, Rng& rng);

std::vector<std::vector<Vertex>> scheme_cells(const RegularityScheme& s);
std::vector<std::vector<Vertex>> scheme_parts(const RegularityScheme& s);

struct ThresholdGraph {
  int m = 0, b = 0, t = 0;
  int num_colors = 0;
  Rational eta, rho;
  std::vector<ThresholdMatrix> palette;  ///< colors of the graph
  ColorGrid grid;                        ///< on the m*b small intervals, vertex j*b + r
  std::vector<ThresholdMatrix> parent;   ///< M(X_j, X_j', rho), index j*m + j' for j < j'
  UndesirableSet undesirable;
  Rational deviation_sum;                ///< normalized sum of |d(W) - d(U)| over j < j'

  const ThresholdMatrix& color(int x, int y) const { return palette[static_cast<std::size_t>(grid(x, y))]; }
  KPartiteChart chart() const;
  bool edge_undesirable(int x, int y) const { return undesirable.contains(x, y); }
};

/// Requires 0 < eta < rho < 1/|Sigma|.
ThresholdGraph threshold_graph(const OrderedGraph& g, const RepresentativeTuple& w, const RegularityScheme& s,
                               const Rational& eta, const Rational& rho);

struct DesirabilityVerdict {
  bool desirable = true;
  std::int64_t undesirable_edges = 0;
  Rational limit;          ///< rho C(m,2) b^2
  Rational deviation_sum;
};

DesirabilityVerdict check_desirable(const ThresholdGraph& h, const Rational& rho);

struct NicelyColoredSubgraph {
  bool success = false;
  int m = 0, d = 0, t = 0, b = 0;
  std::vector<std::vector<int>> D;  ///< per large interval, d small-interval indices r in [0, b)
  LoopedGraph colors;               ///< C_jj' for j <= j'
  std::int64_t retained = 0;        ///< undesirable edges inside D
  Rational bound;                   ///< 2 rho C(m,2) d^2
  int tries = 0;
  bool certified = false;
  std::string failure;
};

/// Picks d small intervals per large interval with uniform threshold colors.
NicelyColoredSubgraph nicely_colored(const ThresholdGraph& h, int d, Rng& rng, int max_tries,
                                     const RamseySizing& sizing = {}, std::optional<int> inner_size = std::nullopt);

/// Re-checks sizes, uniformity of colors and the retained-undesirable bound.
std::string verify_nicely_colored(const ThresholdGraph& h, const NicelyColoredSubgraph& d);

struct CleanAudit {
  std::int64_t inside_interval = 0;
  std::int64_t undesirable_pair = 0;
  std::int64_t threshold_mismatch = 0;
  std::int64_t low_density = 0;
  std::int64_t total = 0;
  // Instance bounds for each case.
  std::int64_t inside_interval_bound = 0;
  std::int64_t undesirable_pair_bound = 0;
  std::int64_t threshold_mismatch_bound = 0;
  std::int64_t low_density_bound = 0;
  Rational inside_interval_limit;  ///< (2/m) C(n,2)
  std::int64_t undesirable_interval_pairs = 0;
};

struct CleanResult {
  OrderedGraph graph;
  CleanAudit audit;
};

/// Allowed color set for the pair (u, v), u < v.
ColorSet allowed_colors(const RegularityScheme& s, const NicelyColoredSubgraph& d, Vertex u, Vertex v);

/// Recolors every pair whose color is outside its allowed set to the smallest
/// allowed color. `h` supplies the parent matrices and undesirable edges for
/// the audit.
CleanResult clean(const OrderedGraph& g, const RegularityScheme& s, const NicelyColoredSubgraph& d, const ThresholdGraph& h);

struct WitnessCell {
  int j = 0, r = 0, s = 0;
};

struct Witness {
  int pattern = -1;
  std::vector<Vertex> copy;           ///< copy in the cleaned graph
  std::vector<WitnessCell> cells;
  std::vector<Rational> densities;    ///< per pattern pair (i < i'), row-major
  std::string failure;                ///< non-empty when cells could not be produced
};

/// Finds a family copy in g_clean and maps it to representative cells whose
/// pattern-color densities in g are at least eta; nullopt iff g_clean is
/// family-free.
std::optional<Witness> extract_witnesses(const OrderedGraph& g, const OrderedGraph& g_clean, const RegularityScheme& s,
                                         const NicelyColoredSubgraph& d, const RepresentativeTuple& w,
                                         const ForbiddenFamily& fam, const Rational& eta);

/// Independent re-check of a witness: strictly increasing (j, r) and densities.
bool verify_witness(const OrderedGraph& g, const RegularityScheme& s, const RepresentativeTuple& w,
                    const ForbiddenFamily& fam, const Rational& eta, const Witness& wit);

nlohmann::json threshold_graph_to_json(const ThresholdGraph& h, const ColorAlphabet& alphabet);
nlohmann::json nicely_colored_to_json(const NicelyColoredSubgraph& d, const ColorAlphabet& alphabet);
nlohmann::json clean_audit_to_json(const CleanAudit& a);

}  // namespace ogt
