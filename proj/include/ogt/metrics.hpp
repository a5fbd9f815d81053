#pragma once

// Densities, indices, regularity and closeness of partitions, and the search
// for robust refinements.

#include "ogt/core.hpp"
#include "ogt/rational.hpp"
#include "ogt/rng.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace ogt {

Rational color_density(const OrderedGraph& g, std::span<const Vertex> a, std::span<const Vertex> b, Color sigma);
/// Sum over colors of the squared densities.
Rational index_pair(const OrderedGraph& g, std::span<const Vertex> a, std::span<const Vertex> b);
/// Size-weighted index over cross-part pairs; empty parts contribute nothing.
Rational index_partition(const OrderedGraph& g, const Partition& p);
double index_partition_approx(const OrderedGraph& g, const Partition& p);

/// Index of a whole string over `num_symbols` symbols.
Rational index_string(std::span<const int> s, int num_symbols);
Rational index_string_partition(std::span<const int> s, int num_symbols, const IntervalPartition& ip);

enum class RegularityMode { exact, sampled };

struct RegularityWitness {
  std::vector<Vertex> a;
  std::vector<Vertex> b;
  Color color = kNoColor;
  Rational deviation;
};

struct RegularityVerdict {
  bool regular = true;
  std::optional<RegularityWitness> witness;
  RegularityMode mode = RegularityMode::exact;
  std::uint64_t subsets_checked = 0;
};

inline constexpr int kExactRegularityCap = 12;

/// Exact mode scans every subset pair with |a'| >= eps|a|, |b'| >= eps|b|
/// (both sides at most `exact_cap`). Sampled mode draws `samples` random
/// subset pairs; a reported witness is always genuine.
RegularityVerdict eps_regular(const OrderedGraph& g, std::span<const Vertex> a, std::span<const Vertex> b,
                              const Rational& eps, RegularityMode mode, Rng* rng = nullptr, int samples = 2000,
                              int exact_cap = kExactRegularityCap);

/// Fraction of vertices whose labels differ (parts aligned by label).
Rational closeness(const Partition& p, const Partition& q);

/// Finite table of size budgets k -> f(k). Missing entries fall back to
/// multiplier * k.
struct SizeBudget {
  std::map<int, int> table;
  int multiplier = 2;

  int operator()(int k) const;
};

enum class SearchMode { exhaustive, local };

struct RobustConfig {
  SizeBudget f;
  Rational gamma = Rational(1, 10);
  SearchMode search = SearchMode::local;
  std::int64_t budget = 200000;
  std::uint64_t seed = 0;
  int exhaustive_cap_graph = 14;
  int exhaustive_cap_string = 60;
};

struct RobustnessTrace {
  struct Step {
    int k = 0;
    Rational index;
  };
  std::vector<Step> iterations;
  bool certified = false;
  bool budget_exhausted = false;
  std::int64_t budget_used = 0;
};

/// Repeatedly replaces the partition by its best searched refinement with at
/// most f(k) parts while that raises the index by more than gamma.
std::pair<Partition, RobustnessTrace> refine_to_robust(const OrderedGraph& g, const Partition& initial,
                                                       const RobustConfig& cfg);

/// String version; candidates are the canonical interval refinements, one per
/// part count.
std::pair<IntervalPartition, RobustnessTrace> refine_to_robust(std::span<const int> s, int num_symbols,
                                                               const IntervalPartition& initial, const RobustConfig& cfg);

/// Best refinement index found by the graph search within the size budget,
/// without moving; used to audit robustness of a finished partition.
struct RobustnessAudit {
  Rational base_index;
  Rational best_index;
  int best_k = 0;
  bool certified = false;
  std::int64_t budget_used = 0;
};
RobustnessAudit audit_robustness(const OrderedGraph& g, const Partition& p, const RobustConfig& cfg);

/// Equitable refinement p_ref of p with as many parts as q_ref, agreeing with
/// q_ref on every vertex where p and q agree. Parts of p_ref carry the labels
/// of the q_ref parts they shadow.
Partition align_refinement(const Partition& p, const Partition& q, const Partition& q_ref);

}  // namespace ogt
