#pragma once

// Combined interval / graph partition schemes.

#include "ogt/core.hpp"
#include "ogt/metrics.hpp"
#include "ogt/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ogt {

struct Lcr {
  Partition cells;
  std::vector<std::pair<int, int>> parents;  ///< (part of p, part of q) per cell
};

/// Non-empty intersections of parts of p and q, ordered by (p part, q part).
Lcr lcr(const Partition& p, const Partition& q);

struct RegularityScheme {
  int k = 0, m = 0, t = 0, b = 0;
  IntervalPartition I;        ///< m intervals
  IntervalPartition I_prime;  ///< m*b intervals refining I
  Partition Q;                ///< k parts
  Partition Q_prime;          ///< m*t parts; part i*t+s is W_is
  Partition Q_dprime;         ///< m*b*t cells; cell (i*b+j)*t+s is W_ijs
  std::vector<int> owner;     ///< owner[i*t+s] = a with (i,s) in K_a

  // Rounding records.
  std::vector<Rational> lambda_first;    ///< m*k, index i*k+a
  std::vector<std::int64_t> ell_first;   ///< after the first rounding
  std::vector<std::int64_t> ell_prime;   ///< after the balancing repair
  std::vector<std::int64_t> cell_sizes;  ///< m*b*t, index (i*b+j)*t+s

  bool t_overridden = false;
  Rational closeness_to_p;  ///< fraction of vertices whose Q label differs from P
  Rational max_repair_deviation;  ///< max |ell' - lambda| over the first rounding

  std::vector<std::vector<std::pair<int, int>>> k_sets() const;
};

/// Builds the scheme from an equipartition p of size k and an interval
/// equipartition j of size m. Without `t_override`, t = k * ceil(20/delta) and
/// n >= 4 m^2 b^2 t^2 / delta is required; with it, t must be a multiple of k
/// and n >= m b t.
RegularityScheme build_scheme(const OrderedGraph& g, const Partition& p, const IntervalPartition& j, int b,
                              const Rational& delta, std::optional<int> t_override = std::nullopt);

struct SchemeCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct SchemeAudit {
  std::vector<SchemeCheck> checks;
  bool all_pass() const;
  const SchemeCheck* failed() const;
};

/// Re-derives every structural invariant by direct set arithmetic. With `p`,
/// also audits local optimality of the greedy placement.
SchemeAudit audit_scheme(const RegularityScheme& s, const Partition* p = nullptr);

struct DeskConfig {
  int k = 2;                       ///< lower bound on the number of intervals
  Rational gamma = Rational(1, 10);
  std::optional<int> m0;           ///< starting interval count (default k, made even for even n)
  std::map<std::pair<int, int>, int> r_table;  ///< (m, t) -> b
  int r_default = 2;
  SizeBudget f;
  std::int64_t budget = 200000;
  std::uint64_t seed = 0;
  Rational delta = Rational(1, 2);
  std::optional<int> t_factor;     ///< t = |P| * t_factor (default ceil(20/delta))
};

struct DeskResult {
  RegularityScheme scheme;
  Partition P;
  IntervalPartition J;
  RobustnessTrace base_trace;
  RobustnessTrace interval_trace;
  RobustnessAudit q_prime_audit;
  SchemeAudit audit;
};

/// Robust base partition, robust interval partition of its string, scheme
/// construction and a robustness audit of Q'. Errors carry their stage.
DeskResult desk_scheme(const OrderedGraph& g, const DeskConfig& cfg);

nlohmann::json scheme_to_json(const RegularityScheme& s);
nlohmann::json audit_to_json(const SchemeAudit& a);

}  // namespace ogt
