#pragma once

// Induced ordered copy counting, the sampling tester, distance to freeness,
// the matrix tester and the end-to-end removal pipeline.

#include "ogt/core.hpp"
#include "ogt/rational.hpp"
#include "ogt/rng.hpp"
#include "ogt/scheme.hpp"
#include "ogt/threshold.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ogt {

inline constexpr std::uint64_t kCountCap = 100000000;

/// C(n, q) saturating at UINT64_MAX.
std::uint64_t binomial_u64(std::int64_t n, std::int64_t q);

/// Number of increasing q-tuples whose induced pair colors all match f.
BigInt count_induced_ordered(const OrderedGraph& g, const OrderedGraph& f);
/// OpenMP version, parallel over the leading vertex.
BigInt count_induced_ordered_parallel(const OrderedGraph& g, const OrderedGraph& f);
/// Plain enumeration of all q-subsets in colex order, without pruning.
BigInt count_induced_ordered_colex(const OrderedGraph& g, const OrderedGraph& f);

struct PatternHit {
  int pattern = -1;
  std::vector<Vertex> tuple;
};

/// First copy of any family member: patterns in family order, tuples in
/// lexicographic order.
std::optional<PatternHit> contains_any(const OrderedGraph& g, const ForbiddenFamily& fam);
/// Same, restricted to the sorted vertex list `vertices`.
std::optional<PatternHit> contains_any_in(const OrderedGraph& g, const ForbiddenFamily& fam, const std::vector<Vertex>& vertices);

struct TestReport {
  bool reject = false;
  int trials = 0;
  int rejections = 0;
  std::uint64_t seed = 0;
  int q = 0;
  std::optional<PatternHit> first_witness;  ///< in g's vertex ids
  int first_rejecting_trial = -1;

  double rejection_rate() const { return trials ? static_cast<double>(rejections) / trials : 0.0; }
};

/// Each trial samples q vertices without replacement (stream derived from
/// seed, "sample_test" and the trial index) and rejects iff the induced
/// subgraph contains a family member.
TestReport sample_test(const OrderedGraph& g, const ForbiddenFamily& fam, int q, int trials, std::uint64_t seed);
TestReport sample_test_parallel(const OrderedGraph& g, const ForbiddenFamily& fam, int q, int trials, std::uint64_t seed);

/// Number of q-subsets of g that contain a copy of some family member.
BigInt count_witness_sets(const OrderedGraph& g, const ForbiddenFamily& fam, int q);

enum class DistanceMethod { exact, greedy };

struct DistanceResult {
  Rational distance;        ///< recolorings / C(n, 2)
  std::int64_t recolorings = 0;
  bool is_bound = false;    ///< greedy results are upper bounds
  OrderedGraph repaired;
};

inline constexpr int kExactDistanceCap = 8;

DistanceResult distance_to_freeness(const OrderedGraph& g, const ForbiddenFamily& fam, DistanceMethod method);

/// Submatrix patterns of `fam` in `m` restricted to the given sorted rows and
/// columns; first hit in (pattern, rows, cols) lexicographic order.
struct MatrixHit {
  int pattern = -1;
  std::vector<int> rows;
  std::vector<int> cols;
};
std::optional<MatrixHit> matrix_contains_any(const MatrixGrid& m, const MatrixFamily& fam, const std::vector<int>& rows,
                                             const std::vector<int>& cols);

struct MatrixTestReport {
  bool reject = false;
  int trials = 0;
  int rejections = 0;
  std::uint64_t seed = 0;
  int q = 0;
  std::optional<MatrixHit> first_witness;
  std::vector<bool> per_trial;
};

/// Samples q rows and q columns per trial and checks the submatrix directly.
MatrixTestReport matrix_test(const MatrixGrid& m, const MatrixFamily& fam, int q, int trials, std::uint64_t seed);

/// The same test run through the graph reduction: per trial the sampled rows
/// and columns become 2q vertices of the reduced graph, and patterns are the
/// reductions of the family members. Witnesses never use the fresh color.
struct ReductionTestReport {
  MatrixTestReport report;
  bool sigma0_in_witness = false;
};
ReductionTestReport matrix_test_via_graph(const MatrixGrid& m, const MatrixFamily& fam, int q, int trials, std::uint64_t seed);

// ---------------------------------------------------------------- generators

OrderedGraph gen_uniform(const ColorAlphabet& alphabet, int n, Rng& rng);
/// Two halves by vertex order: pairs inside the first half get color 0, inside
/// the second half color 1, across halves `cross` (default 0).
OrderedGraph gen_two_block(const ColorAlphabet& alphabet, int n, Color cross = 0);
/// Blow-up of `pattern` over consecutive blocks: pairs across blocks i < i'
/// take the pattern color, pairs inside a block take `inside`; every pair is
/// then re-drawn uniformly with probability `noise`.
OrderedGraph gen_planted(const OrderedGraph& pattern, int n, Color inside, double noise, Rng& rng);
/// Graph that avoids the family: starts from a uniform graph and repairs it
/// greedily.
OrderedGraph gen_free(const ForbiddenFamily& fam, int n, Rng& rng);
MatrixGrid gen_matrix(const ColorAlphabet& alphabet, int rows, int cols, Rng& rng);

// ---------------------------------------------------------------- pipeline

struct PipelineConfig {
  DeskConfig desk;
  std::optional<Rational> epsilon;   ///< rho = epsilon / (8 |Sigma|) when rho is not given
  std::optional<Rational> rho;
  std::optional<Rational> eta;       ///< default rho / 2
  std::optional<int> d;              ///< default: largest pattern size
  bool use_d_star = false;
  int max_tries = 50;
  std::uint64_t seed = 0;
  bool random_representatives = false;
  Rational rep_alpha = Rational(1, 100);
  int rep_budget = 20;
  std::optional<int> inner_size;
};

struct PipelineReport {
  nlohmann::json json;
  OrderedGraph cleaned;
  bool cleaned_free = false;
  bool witness_verified = false;
  // Intermediate objects, kept for independent re-checks.
  RegularityScheme scheme;
  RepresentativeTuple reps;
  NicelyColoredSubgraph nicely;
  CleanAudit audit;
  std::optional<Witness> witness;
  Rational rho, eta;
};

PipelineReport pipeline_demo(const OrderedGraph& g, const ForbiddenFamily& fam, const PipelineConfig& cfg);

nlohmann::json test_report_to_json(const TestReport& r);
nlohmann::json matrix_report_to_json(const MatrixTestReport& r);

}  // namespace ogt
