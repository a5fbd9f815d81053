#pragma once

// Ramsey-type extraction from k-partite charts with undesirable edges.

#include "ogt/core.hpp"
#include "ogt/rational.hpp"
#include "ogt/rng.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ogt {

/// Set of cross-class pairs, stored normalized (u < v).
class UndesirableSet {
 public:
  UndesirableSet() = default;
  explicit UndesirableSet(const std::vector<std::pair<Vertex, Vertex>>& edges);

  void insert(Vertex u, Vertex v);
  bool contains(Vertex u, Vertex v) const { return keys_.count(key(u, v)) != 0; }
  std::size_t size() const noexcept { return keys_.size(); }
  bool empty() const noexcept { return keys_.empty(); }
  /// Sorted edge list.
  std::vector<std::pair<Vertex, Vertex>> edges() const;

 private:
  static std::uint64_t key(Vertex u, Vertex v) noexcept;
  std::unordered_set<std::uint64_t> keys_;
};

/// True iff, for every class pair, no color occurs both inside and outside B.
bool is_orderly(const KPartiteChart& chart, const UndesirableSet& b);

/// Picks a class with probability proportional to its size, then a uniform
/// t-subset of it (empty when the class is smaller than t). Sorted output.
std::vector<Vertex> weighted_pick(const std::vector<std::vector<Vertex>>& parts, int t, const Rational& delta, Rng& rng);

/// ceil(t * k / delta): the size from which weighted_pick is empty with
/// probability at most delta.
double weighted_pick_threshold(int k, int t, const Rational& delta);

/// Class size above which the probabilistic procedure is certified; may be +inf.
double prob_ramsey_threshold(int num_colors, int k, int t, const Rational& delta);

/// Per-level sizes (s, r) for the recursive procedure, keyed by the number of
/// classes at that level. Levels without an override use the theoretical
/// values clipped to the available class sizes.
struct RamseySizing {
  struct Level {
    int s = 0;
    int r = 0;
  };
  std::map<int, Level> levels;
};

struct Subchart {
  std::vector<std::vector<Vertex>> picks;  ///< W_1..W_k, all size t or all empty
  std::vector<Color> colors;               ///< k*k; color of W_i x W_j (kNoColor on the diagonal)
  bool empty = true;
  bool certified = false;
  std::string empty_reason;

  Color color(int i, int j) const { return colors[static_cast<std::size_t>(i) * picks.size() + static_cast<std::size_t>(j)]; }
};

/// Randomized induced subchart with monochromatic cross pairs.
Subchart prob_ramsey(const KPartiteChart& chart, int t, const Rational& delta, Rng& rng, const RamseySizing& sizing = {});

/// Re-checks that every cross pair of a non-empty subchart is monochromatic
/// with the recorded color and that sizes are all-or-nothing.
bool verify_subchart(const KPartiteChart& chart, const Subchart& h, int t);

std::int64_t retained_count(const Subchart& h, const UndesirableSet& b);

/// |B| divided by the number of cross pairs.
Rational undesirable_fraction(const KPartiteChart& chart, const UndesirableSet& b);

struct QuantitativeResult {
  bool success = false;
  Subchart chart;            ///< accepted draw, or the best non-empty draw on failure
  std::int64_t retained = 0;
  Rational bound;            ///< (1 + alpha) eps C(k,2) t^2
  Rational eps;
  int tries = 0;
};

QuantitativeResult quantitative_ramsey(const KPartiteChart& chart, const UndesirableSet& b, int t, const Rational& alpha,
                                       Rng& rng, int max_tries, const RamseySizing& sizing = {});

inline constexpr int kCliqueCap = 20;

/// Lexicographically first t-set (colors in alphabet order) whose internal
/// pairs share one color, among `vertices` of `grid`; nullopt if none.
std::optional<std::vector<Vertex>> mono_clique(const ColorGrid& grid, const std::vector<Vertex>& vertices, int t);
std::optional<std::vector<Vertex>> mono_clique(const OrderedGraph& g, int t);

/// Known classical multicolor Ramsey numbers; nullopt when not tabulated.
std::optional<int> classical_ramsey(int colors, int t);

struct OrderlyResult {
  bool success = false;
  std::vector<std::vector<Vertex>> u;   ///< U_1..U_k of size t
  std::vector<std::vector<Vertex>> w;   ///< the larger quantitative picks
  std::vector<Color> inner_colors;      ///< color inside each U_i (kNoColor when t < 2)
  std::vector<Color> cross_colors;      ///< k*k
  std::int64_t retained = 0;
  Rational bound;                       ///< 2 eps C(k,2) t^2
  Rational eps;
  int tries = 0;
  int inner_size = 0;
  bool certified = false;
  std::string failure;
};

/// Within- and cross-class monochromatic picks keeping few undesirable pairs.
/// `inner_size` overrides the size of the intermediate picks (default: the
/// classical Ramsey number, clipped to the class sizes).
OrderlyResult orderly_ramsey(const KPartiteChart& chart, const UndesirableSet& b, int t, Rng& rng, int max_tries,
                             const RamseySizing& sizing = {}, std::optional<int> inner_size = std::nullopt);

/// Verifies every postcondition of an orderly result; returns a description of
/// the first failure, or an empty string.
std::string verify_orderly(const KPartiteChart& chart, const UndesirableSet& b, int t, const OrderlyResult& r);

struct Counterexample {
  OrderedGraph graph;    ///< alphabet {"0", "1"}; "1" marks clique edges
  UndesirableSet b;
  std::vector<std::vector<Vertex>> cliques;
  std::vector<std::vector<Vertex>> planted;
};

/// k disjoint cliques of n/k consecutive vertices; B is the edge set of m
/// planted sub-cliques of size n/(mk) inside each clique.
Counterexample gen_counterexample(int n, int m, int k);

}  // namespace ogt
