#include "ogt/scheme.hpp"

#include "ogt/errors.hpp"
#include "ogt/rounding.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace ogt {

namespace {

using Json = nlohmann::json;

std::string fmt_list(const std::vector<int>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out + "]";
}

// floor/ceil membership of a sum against its real target.
bool within_rounding(std::int64_t value, const Rational& target) {
  return value == floor_i64(target) || value == ceil_i64(target);
}

}  // namespace

Lcr lcr(const Partition& p, const Partition& q) {
  if (p.n() != q.n()) throw InputError("lcr: partitions cover different sets");
  const int n = p.n();
  std::map<std::pair<int, int>, int> seen;
  for (int v = 0; v < n; ++v) seen.emplace(std::pair{p.label(v), q.label(v)}, 0);
  Lcr out;
  int next = 0;
  for (auto& [key, id] : seen) {
    id = next++;
    out.parents.push_back(key);
  }
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) labels[static_cast<std::size_t>(v)] = seen.at({p.label(v), q.label(v)});
  out.cells = Partition(std::move(labels), next);
  return out;
}

std::vector<std::vector<std::pair<int, int>>> RegularityScheme::k_sets() const {
  std::vector<std::vector<std::pair<int, int>>> out(static_cast<std::size_t>(k));
  for (int i = 0; i < m; ++i)
    for (int s = 0; s < t; ++s) out[static_cast<std::size_t>(owner[static_cast<std::size_t>(i * t + s)])].emplace_back(i, s);
  return out;
}

RegularityScheme build_scheme(const OrderedGraph& g, const Partition& p, const IntervalPartition& j, int b,
                              const Rational& delta, std::optional<int> t_override) {
  const int n = g.n();
  if (p.n() != n || j.n() != n) throw InputError("build_scheme: partitions do not cover the graph");
  if (!p.is_equitable() || p.has_empty_part()) throw InputError("build_scheme: p must be an equipartition without empty parts");
  if (!j.is_equitable()) throw InputError("build_scheme: j must be an interval equipartition");
  if (b < 1) throw InputError("build_scheme: b must be positive");
  if (delta <= 0 || delta > 1) throw InputError("build_scheme: delta must lie in (0, 1]");
  const int k = p.k();
  const int m = j.k();

  RegularityScheme sc;
  sc.k = k;
  sc.m = m;
  sc.b = b;
  if (t_override) {
    sc.t = *t_override;
    sc.t_overridden = true;
    if (sc.t < 1 || sc.t % k != 0) throw InputError("build_scheme: t must be a positive multiple of k");
    if (static_cast<std::int64_t>(n) < static_cast<std::int64_t>(m) * b * sc.t)
      throw CapacityError("build_scheme: need n >= m*b*t (" + std::to_string(static_cast<std::int64_t>(m) * b * sc.t) + ")");
  } else {
    sc.t = k * static_cast<int>(ceil_i64(Rational(20) / delta));
    const Rational need = Rational(4) * m * m * b * b * sc.t * sc.t / delta;
    if (Rational(n) < need) throw CapacityError("build_scheme: need n >= 4 m^2 b^2 t^2 / delta = " + to_string(ceil_of(need)));
  }
  const int t = sc.t;

  // First rounding: l_ia ~ t |J_i cap V_a| / |J_i|.
  std::vector<std::vector<std::int64_t>> count(static_cast<std::size_t>(m), std::vector<std::int64_t>(static_cast<std::size_t>(k), 0));
  for (int v = 0; v < n; ++v) ++count[static_cast<std::size_t>(j.part_of(v))][static_cast<std::size_t>(p.label(v))];
  sc.lambda_first.resize(static_cast<std::size_t>(m * k));
  std::vector<std::vector<int>> rows, cols;
  for (int i = 0; i < m; ++i) {
    std::vector<int> row;
    for (int a = 0; a < k; ++a) {
      sc.lambda_first[static_cast<std::size_t>(i * k + a)] = Rational(static_cast<std::int64_t>(t) * count[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)], j.length(i));
      row.push_back(i * k + a);
    }
    rows.push_back(std::move(row));
  }
  for (int a = 0; a < k; ++a) {
    std::vector<int> col;
    for (int i = 0; i < m; ++i) col.push_back(i * k + a);
    cols.push_back(std::move(col));
  }
  auto first = round_two(sc.lambda_first, complete_multipartition(m * k, cols), complete_multipartition(m * k, rows));
  sc.ell_first = first.values;
  auto ell = [&](int i, int a) -> std::int64_t& { return sc.ell_prime[static_cast<std::size_t>(i * k + a)]; };
  sc.ell_prime = sc.ell_first;
  for (int i = 0; i < m; ++i) {
    std::int64_t sum = 0;
    for (int a = 0; a < k; ++a) sum += ell(i, a);
    if (sum != t) throw InternalError("build_scheme: first rounding row sum differs from t");
  }

  // Balancing repair: move units from over-full columns to under-full ones.
  const std::int64_t col_target = static_cast<std::int64_t>(m) * t / k;
  auto col_sum = [&](int a) {
    std::int64_t s = 0;
    for (int i = 0; i < m; ++i) s += ell(i, a);
    return s;
  };
  for (;;) {
    int hi = -1, lo = -1;
    for (int a = 0; a < k; ++a) {
      const auto s = col_sum(a);
      if (s > col_target && (hi < 0 || s > col_sum(hi))) hi = a;
      if (s < col_target && (lo < 0 || s < col_sum(lo))) lo = a;
    }
    if (hi < 0 && lo < 0) break;
    if (hi < 0 || lo < 0) throw InternalError("build_scheme: column sums do not balance");
    int row = -1;
    for (int i = 0; i < m && row < 0; ++i)
      if (ell(i, hi) > ell(i, lo)) row = i;
    if (row < 0) throw InternalError("build_scheme: repair found no compensating row");
    --ell(row, hi);
    ++ell(row, lo);
  }
  sc.max_repair_deviation = 0;
  for (std::size_t e = 0; e < sc.ell_prime.size(); ++e) {
    Rational d = Rational(sc.ell_prime[e]) - sc.lambda_first[e];
    if (d < 0) d = -d;
    if (d > sc.max_repair_deviation) sc.max_repair_deviation = d;
  }

  // K_ia: consecutive slots within each row.
  sc.owner.assign(static_cast<std::size_t>(m * t), -1);
  for (int i = 0; i < m; ++i) {
    int s = 0;
    for (int a = 0; a < k; ++a)
      for (std::int64_t c = 0; c < ell(i, a); ++c) sc.owner[static_cast<std::size_t>(i * t + s++)] = a;
  }

  // Second rounding over (i, j, s) with lambda = n / (m b t).
  auto idx = [&](int i, int jj, int s) { return (i * b + jj) * t + s; };
  const int cells = m * b * t;
  const Rational lam(n, static_cast<std::int64_t>(cells));
  std::vector<Rational> lambda2(static_cast<std::size_t>(cells), lam);
  std::vector<std::vector<int>> mset, nset;
  for (int i = 0; i < m; ++i) {
    std::vector<int> whole_row;
    for (int jj = 0; jj < b; ++jj) {
      std::vector<int> interval;
      for (int a = 0; a < k; ++a) {
        std::vector<int> group;
        for (int s = 0; s < t; ++s)
          if (sc.owner[static_cast<std::size_t>(i * t + s)] == a) group.push_back(idx(i, jj, s));
        if (!group.empty()) mset.push_back(std::move(group));
      }
      for (int s = 0; s < t; ++s) interval.push_back(idx(i, jj, s));
      whole_row.insert(whole_row.end(), interval.begin(), interval.end());
      mset.push_back(std::move(interval));
    }
    mset.push_back(std::move(whole_row));
  }
  const bool middle = n % 2 == 0 && m % 2 == 0;
  if (middle) {
    std::vector<int> left, right;
    for (int e = 0; e < cells; ++e) (e < cells / 2 ? left : right).push_back(e);
    mset.push_back(std::move(left));
    mset.push_back(std::move(right));
  }
  std::vector<std::vector<int>> per_owner(static_cast<std::size_t>(k));
  for (int i = 0; i < m; ++i) {
    std::vector<std::vector<int>> per_ia(static_cast<std::size_t>(k));
    for (int s = 0; s < t; ++s) {
      std::vector<int> column;
      for (int jj = 0; jj < b; ++jj) column.push_back(idx(i, jj, s));
      const int a = sc.owner[static_cast<std::size_t>(i * t + s)];
      per_ia[static_cast<std::size_t>(a)].insert(per_ia[static_cast<std::size_t>(a)].end(), column.begin(), column.end());
      per_owner[static_cast<std::size_t>(a)].insert(per_owner[static_cast<std::size_t>(a)].end(), column.begin(), column.end());
      nset.push_back(std::move(column));
    }
    for (auto& g2 : per_ia)
      if (!g2.empty()) nset.push_back(std::move(g2));
  }
  for (auto& g2 : per_owner)
    if (!g2.empty()) nset.push_back(std::move(g2));
  auto second = round_two(lambda2, complete_multipartition(cells, mset), complete_multipartition(cells, nset));
  sc.cell_sizes = second.values;

  // Intervals from the cell sizes.
  std::vector<int> big(static_cast<std::size_t>(m), 0), small(static_cast<std::size_t>(m * b), 0);
  for (int i = 0; i < m; ++i)
    for (int jj = 0; jj < b; ++jj)
      for (int s = 0; s < t; ++s) {
        const auto v = static_cast<int>(sc.cell_sizes[static_cast<std::size_t>(idx(i, jj, s))]);
        if (v < 1) throw InternalError("build_scheme: empty cell after rounding");
        big[static_cast<std::size_t>(i)] += v;
        small[static_cast<std::size_t>(i * b + jj)] += v;
      }
  sc.I = IntervalPartition::from_sizes(big);
  sc.I_prime = IntervalPartition::from_sizes(small);

  // Greedy placement: each cell first takes vertices of its own P part.
  std::vector<int> cell_of(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < m; ++i)
    for (int jj = 0; jj < b; ++jj) {
      const int ij = i * b + jj;
      std::vector<std::deque<Vertex>> by_part(static_cast<std::size_t>(k));
      for (Vertex v = sc.I_prime.begin(ij); v < sc.I_prime.end(ij); ++v) by_part[static_cast<std::size_t>(p.label(v))].push_back(v);
      std::vector<std::int64_t> room(static_cast<std::size_t>(t));
      for (int s = 0; s < t; ++s) {
        room[static_cast<std::size_t>(s)] = sc.cell_sizes[static_cast<std::size_t>(idx(i, jj, s))];
        auto& q = by_part[static_cast<std::size_t>(sc.owner[static_cast<std::size_t>(i * t + s)])];
        while (room[static_cast<std::size_t>(s)] > 0 && !q.empty()) {
          cell_of[static_cast<std::size_t>(q.front())] = idx(i, jj, s);
          q.pop_front();
          --room[static_cast<std::size_t>(s)];
        }
      }
      int s = 0;
      for (Vertex v = sc.I_prime.begin(ij); v < sc.I_prime.end(ij); ++v) {
        if (cell_of[static_cast<std::size_t>(v)] >= 0) continue;
        while (s < t && room[static_cast<std::size_t>(s)] == 0) ++s;
        if (s == t) throw InternalError("build_scheme: interval has more vertices than cell slots");
        cell_of[static_cast<std::size_t>(v)] = idx(i, jj, s);
        --room[static_cast<std::size_t>(s)];
      }
    }

  std::vector<int> qd(static_cast<std::size_t>(n)), qp(static_cast<std::size_t>(n)), qq(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    const int c = cell_of[static_cast<std::size_t>(v)];
    const int s = c % t;
    const int i = c / t / b;
    qd[static_cast<std::size_t>(v)] = c;
    qp[static_cast<std::size_t>(v)] = i * t + s;
    qq[static_cast<std::size_t>(v)] = sc.owner[static_cast<std::size_t>(i * t + s)];
  }
  sc.Q_dprime = Partition(std::move(qd), cells);
  sc.Q_prime = Partition(std::move(qp), m * t);
  sc.Q = Partition(std::move(qq), k);
  sc.closeness_to_p = closeness(sc.Q, p);

  auto audit = audit_scheme(sc, &p);
  if (const auto* bad = audit.failed()) throw InternalError("build_scheme: invariant failed: " + bad->name + " " + bad->detail);
  return sc;
}

bool SchemeAudit::all_pass() const { return failed() == nullptr; }

const SchemeCheck* SchemeAudit::failed() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

SchemeAudit audit_scheme(const RegularityScheme& s, const Partition* p) {
  SchemeAudit out;
  auto check = [&](std::string name, bool pass, std::string detail = {}) {
    out.checks.push_back({std::move(name), pass, pass ? std::string{} : std::move(detail)});
  };
  const int n = s.I.n();
  const int m = s.m, b = s.b, t = s.t, k = s.k;

  check("I has m intervals", s.I.k() == m);
  check("I' has m*b intervals", s.I_prime.k() == m * b);
  check("I equitable", s.I.is_equitable(), fmt_list(s.I.sizes()));
  check("I' equitable", s.I_prime.is_equitable(), fmt_list(s.I_prime.sizes()));
  check("I' refines I", s.I_prime.refines(s.I));
  check("Q has k parts", s.Q.k() == k && !s.Q.has_empty_part());
  check("Q' has m*t parts", s.Q_prime.k() == m * t && !s.Q_prime.has_empty_part());
  check("Q equitable", s.Q.is_equitable(), fmt_list(s.Q.part_sizes()));
  check("Q' equitable", s.Q_prime.is_equitable(), fmt_list(s.Q_prime.part_sizes()));
  check("Q'' equitable", s.Q_dprime.is_equitable(), fmt_list(s.Q_dprime.part_sizes()));
  check("Q' refines Q", s.Q_prime.refines(s.Q));
  check("Q' refines I", s.Q_prime.refines(s.I.to_partition()));

  // Q'' must be exactly the LCR of I' and Q', with every intersection used.
  {
    const Lcr l = lcr(s.I_prime.to_partition(), s.Q_prime);
    bool same = l.cells.k() == s.Q_dprime.k();
    std::string detail;
    for (int v = 0; v < n && same; ++v) {
      const int c = s.Q_dprime.label(v);
      const int ij = s.I_prime.part_of(v);
      const int is = s.Q_prime.label(v);
      if (c != ij * t + is % t || is / t != ij / b) {
        same = false;
        detail = "vertex " + std::to_string(v);
      }
    }
    check("Q'' = I' LCR Q' with all cells non-empty", same && !s.Q_dprime.has_empty_part(), detail);
    check("|Q''| = b|Q'|", l.cells.k() == b * s.Q_prime.k(), std::to_string(l.cells.k()));
  }

  // Each Q part is a union of exactly mt/k parts of Q'.
  {
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    bool consistent = static_cast<int>(s.owner.size()) == m * t;
    for (int v = 0; v < n && consistent; ++v)
      if (s.owner[static_cast<std::size_t>(s.Q_prime.label(v))] != s.Q.label(v)) consistent = false;
    for (int o : s.owner)
      if (o >= 0 && o < k) ++count[static_cast<std::size_t>(o)];
    bool sizes = std::all_of(count.begin(), count.end(), [&](int c) { return c == m * t / k; });
    check("each Q part is a union of mt/k Q' parts", consistent && sizes, fmt_list(count));
  }

  if (n % 2 == 0 && m % 2 == 0) check("I respects the middle", s.I.begin(m / 2) == n / 2, std::to_string(s.I.begin(m / 2)));

  // Rounding targets.
  if (!s.ell_first.empty()) {
    bool rows = true, cols = true, elems = true;
    for (int i = 0; i < m; ++i) {
      std::int64_t r1 = 0, r2 = 0;
      for (int a = 0; a < k; ++a) {
        const auto e = static_cast<std::size_t>(i * k + a);
        r1 += s.ell_first[e];
        r2 += s.ell_prime[e];
        if (!within_rounding(s.ell_first[e], s.lambda_first[e])) elems = false;
      }
      if (r1 != t || r2 != t) rows = false;
    }
    for (int a = 0; a < k; ++a) {
      std::int64_t c = 0;
      for (int i = 0; i < m; ++i) c += s.ell_prime[static_cast<std::size_t>(i * k + a)];
      if (c != static_cast<std::int64_t>(m) * t / k) cols = false;
    }
    check("first rounding: every l_ia in {floor, ceil}(lambda_ia)", elems);
    check("row sums of l and l' equal t", rows);
    check("column sums of l' equal mt/k", cols);
    bool ksizes = true;
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < k; ++a) {
        int c = 0;
        for (int x = 0; x < t; ++x) c += s.owner[static_cast<std::size_t>(i * t + x)] == a;
        if (c != s.ell_prime[static_cast<std::size_t>(i * k + a)]) ksizes = false;
      }
    check("|K_ia| = l'_ia", ksizes);
  }
  if (!s.cell_sizes.empty()) {
    const Rational lam(n, static_cast<std::int64_t>(m) * b * t);
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      for (int jj = 0; jj < b; ++jj)
        for (int a = 0; a < k; ++a) {
          std::int64_t sum = 0, slots = 0;
          for (int x = 0; x < t; ++x)
            if (s.owner[static_cast<std::size_t>(i * t + x)] == a) {
              sum += s.cell_sizes[static_cast<std::size_t>((i * b + jj) * t + x)];
              ++slots;
            }
          if (!within_rounding(sum, lam * slots)) ok = false;
        }
    check("second rounding: U_ija sums within {floor, ceil}", ok);
    bool ok2 = true;
    for (int i = 0; i < m; ++i)
      for (int a = 0; a < k; ++a) {
        std::int64_t sum = 0, slots = 0;
        for (int x = 0; x < t; ++x)
          if (s.owner[static_cast<std::size_t>(i * t + x)] == a) {
            for (int jj = 0; jj < b; ++jj) sum += s.cell_sizes[static_cast<std::size_t>((i * b + jj) * t + x)];
            slots += b;
          }
        if (!within_rounding(sum, lam * slots)) ok2 = false;
      }
    check("second rounding: U_ia sums within {floor, ceil}", ok2);
    bool match = true;
    auto sizes = s.Q_dprime.part_sizes();
    for (std::size_t c = 0; c < sizes.size() && c < s.cell_sizes.size(); ++c)
      if (sizes[c] != s.cell_sizes[c]) match = false;
    check("cell sizes match the second rounding", match && sizes.size() == s.cell_sizes.size());
  }

  if (p != nullptr) {
    // No swap of two vertices between cells of one small interval gains agreement with P.
    bool optimal = true;
    std::string detail;
    for (int ij = 0; ij < s.I_prime.k() && optimal; ++ij) {
      for (Vertex u = s.I_prime.begin(ij); u < s.I_prime.end(ij) && optimal; ++u)
        for (Vertex v = u + 1; v < s.I_prime.end(ij); ++v) {
          const int au = s.Q.label(u), av = s.Q.label(v);
          if (au == av) continue;
          const int gain = (p->label(u) == av) + (p->label(v) == au) - (p->label(u) == au) - (p->label(v) == av);
          if (gain > 0) {
            optimal = false;
            detail = "swap " + std::to_string(u) + "," + std::to_string(v);
            break;
          }
        }
    }
    check("greedy placement is swap-optimal", optimal, detail);
  }
  return out;
}

DeskResult desk_scheme(const OrderedGraph& g, const DeskConfig& cfg) {
  if (cfg.k < 1) throw StageError("config", "k must be positive", "input");
  const int n = g.n();
  DeskResult res;
  RobustConfig rc;
  rc.f = cfg.f;
  rc.gamma = cfg.gamma;
  rc.budget = cfg.budget;
  rc.seed = cfg.seed;
  rc.search = SearchMode::local;

  try {
    auto [p, trace] = refine_to_robust(g, Partition::single(n), rc);
    res.P = std::move(p);
    res.base_trace = std::move(trace);
  } catch (const Error& e) {
    throw StageError("base_partition", e.what(), e.kind());
  }

  try {
    int m0 = cfg.m0 ? *cfg.m0 : cfg.k;
    if (m0 < cfg.k) m0 = cfg.k;
    if (n % 2 == 0 && m0 % 2 == 1) ++m0;
    const auto s = p_string(res.P);
    RobustConfig sc = rc;
    // Keep interval counts even for even n so that I respects the middle.
    auto [j, trace] = refine_to_robust(s, res.P.k(), canonical_interval_equipartition(n, m0), sc);
    if (n % 2 == 0 && j.k() % 2 == 1) {
      auto even = canonical_interval_refinement(j, j.k() + 1);
      j = even ? *even : canonical_interval_equipartition(n, j.k() + 1);
    }
    res.J = std::move(j);
    res.interval_trace = std::move(trace);
  } catch (const Error& e) {
    throw StageError("interval_partition", e.what(), e.kind());
  }

  try {
    const int m = res.J.k();
    const int factor = cfg.t_factor ? *cfg.t_factor : static_cast<int>(ceil_i64(Rational(20) / cfg.delta));
    const int t = res.P.k() * factor;
    auto it = cfg.r_table.find({m, t});
    const int b = it != cfg.r_table.end() ? it->second : cfg.r_default;
    res.scheme = build_scheme(g, res.P, res.J, b, cfg.delta, cfg.t_factor ? std::optional<int>(t) : std::nullopt);
  } catch (const Error& e) {
    throw StageError("build_scheme", e.what(), e.kind());
  }

  try {
    res.q_prime_audit = audit_robustness(g, res.scheme.Q_prime, rc);
    res.audit = audit_scheme(res.scheme, &res.P);
  } catch (const Error& e) {
    throw StageError("audit", e.what(), e.kind());
  }
  return res;
}

Json scheme_to_json(const RegularityScheme& s) {
  Json j;
  j["params"] = {{"k", s.k}, {"m", s.m}, {"t", s.t}, {"b", s.b}, {"t_overridden", s.t_overridden}};
  j["I"] = s.I.cuts();
  j["I_prime"] = s.I_prime.cuts();
  j["Q"] = s.Q.labels();
  j["Q_prime"] = s.Q_prime.labels();
  j["Q_dprime"] = s.Q_dprime.labels();
  Json ks = Json::array();
  for (const auto& ka : s.k_sets()) {
    Json arr = Json::array();
    for (auto [i, x] : ka) arr.push_back({i, x});
    ks.push_back(arr);
  }
  j["K"] = ks;
  j["cell_sizes"] = s.cell_sizes;
  j["closeness_to_P"] = to_string(s.closeness_to_p);
  return j;
}

Json audit_to_json(const SchemeAudit& a) {
  Json arr = Json::array();
  for (const auto& c : a.checks) {
    Json e = {{"name", c.name}, {"pass", c.pass}};
    if (!c.detail.empty()) e["witness"] = c.detail;
    arr.push_back(e);
  }
  return {{"all_pass", a.all_pass()}, {"checks", arr}};
}

}  // namespace ogt
