#include "ogt/rounding.hpp"

#include "ogt/errors.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>

namespace ogt {

namespace {

std::int64_t to_i64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() / 4 || v < std::numeric_limits<std::int64_t>::min() / 4)
    throw CapacityError("rounding bound exceeds 64-bit range");
  return static_cast<std::int64_t>(v);
}

struct Bounds {
  std::int64_t lo;
  std::int64_t hi;
};

Bounds bounds_of(const Rational& x) { return {to_i64(floor_of(x)), to_i64(ceil_of(x))}; }

Rational sum_over(const std::vector<Rational>& lambda, const std::vector<int>& set) {
  Rational s = 0;
  for (int i : set) s += lambda[static_cast<std::size_t>(i)];
  return s;
}

// Dinic's algorithm; edges are scanned in insertion order, which fixes the
// augmentation order and makes the result deterministic.
class Dinic {
 public:
  explicit Dinic(int n) : adj_(static_cast<std::size_t>(n)), level_(static_cast<std::size_t>(n)), it_(static_cast<std::size_t>(n)) {}

  int add_edge(int u, int v, std::int64_t cap) {
    adj_[static_cast<std::size_t>(u)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({v, cap});
    adj_[static_cast<std::size_t>(v)].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({u, 0});
    return static_cast<int>(edges_.size()) - 2;
  }

  std::int64_t max_flow(int s, int t) {
    std::int64_t total = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (std::int64_t f = dfs(s, t, std::numeric_limits<std::int64_t>::max())) total += f;
    }
    return total;
  }

  // Flow pushed along an edge added by add_edge.
  std::int64_t flow_on(int id) const { return edges_[static_cast<std::size_t>(id) ^ 1U].cap; }

 private:
  struct Arc {
    int to;
    std::int64_t cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[static_cast<std::size_t>(s)] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int id : adj_[static_cast<std::size_t>(u)]) {
        const Arc& a = edges_[static_cast<std::size_t>(id)];
        if (a.cap > 0 && level_[static_cast<std::size_t>(a.to)] < 0) {
          level_[static_cast<std::size_t>(a.to)] = level_[static_cast<std::size_t>(u)] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[static_cast<std::size_t>(t)] >= 0;
  }

  std::int64_t dfs(int u, int t, std::int64_t pushed) {
    if (u == t) return pushed;
    auto& i = it_[static_cast<std::size_t>(u)];
    const auto& out = adj_[static_cast<std::size_t>(u)];
    for (; i < out.size(); ++i) {
      const int id = out[i];
      Arc& a = edges_[static_cast<std::size_t>(id)];
      if (a.cap <= 0 || level_[static_cast<std::size_t>(a.to)] != level_[static_cast<std::size_t>(u)] + 1) continue;
      if (std::int64_t f = dfs(a.to, t, std::min(pushed, a.cap))) {
        a.cap -= f;
        edges_[static_cast<std::size_t>(id) ^ 1U].cap += f;
        return f;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> adj_;
  std::vector<Arc> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> it_;
};

// Index of the smallest strict superset of each set (the covering relation of
// a laminar family); -1 for the ground set.
std::vector<int> parents_of(const std::vector<std::vector<int>>& sets) {
  std::vector<int> parent(sets.size(), -1);
  for (std::size_t a = 0; a < sets.size(); ++a) {
    std::size_t best_size = std::numeric_limits<std::size_t>::max();
    for (std::size_t b = 0; b < sets.size(); ++b) {
      if (a == b || sets[b].size() <= sets[a].size() || sets[b].size() >= best_size) continue;
      if (std::includes(sets[b].begin(), sets[b].end(), sets[a].begin(), sets[a].end())) {
        parent[a] = static_cast<int>(b);
        best_size = sets[b].size();
      }
    }
  }
  return parent;
}

}  // namespace

Multipartition complete_multipartition(int ground, std::vector<std::vector<int>> sets) {
  if (ground < 1) throw InputError("multipartition ground set must be non-empty");
  std::vector<int> all(static_cast<std::size_t>(ground));
  for (int i = 0; i < ground; ++i) all[static_cast<std::size_t>(i)] = i;
  sets.push_back(all);
  for (int i = 0; i < ground; ++i) sets.push_back({i});
  for (auto& s : sets) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  std::vector<std::vector<int>> out;
  std::map<std::vector<int>, bool> seen;
  for (auto& s : sets) {
    if (s.empty() || seen.count(s)) continue;
    seen[s] = true;
    out.push_back(std::move(s));
  }
  return {ground, std::move(out)};
}

std::optional<LaminarViolation> validate_multipartition(const Multipartition& m) {
  if (m.ground < 1) return LaminarViolation{"empty ground set", {}, {}};
  std::vector<std::vector<int>> sorted;
  for (const auto& s : m.sets) {
    auto c = s;
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end()) return LaminarViolation{"set repeats an element", s, {}};
    for (int x : c)
      if (x < 0 || x >= m.ground) return LaminarViolation{"element outside the ground set", s, {}};
    sorted.push_back(std::move(c));
  }
  std::vector<int> all(static_cast<std::size_t>(m.ground));
  for (int i = 0; i < m.ground; ++i) all[static_cast<std::size_t>(i)] = i;
  if (std::find(sorted.begin(), sorted.end(), all) == sorted.end()) return LaminarViolation{"ground set missing", all, {}};
  for (int i = 0; i < m.ground; ++i)
    if (std::find(sorted.begin(), sorted.end(), std::vector<int>{i}) == sorted.end())
      return LaminarViolation{"singleton missing", {i}, {}};
  for (std::size_t a = 0; a < sorted.size(); ++a)
    for (std::size_t b = a + 1; b < sorted.size(); ++b) {
      std::vector<int> common;
      std::set_intersection(sorted[a].begin(), sorted[a].end(), sorted[b].begin(), sorted[b].end(), std::back_inserter(common));
      if (common.empty() || common.size() == sorted[a].size() || common.size() == sorted[b].size()) continue;
      return LaminarViolation{"sets cross", m.sets[a], m.sets[b]};
    }
  return std::nullopt;
}

RoundingResult round_two(const std::vector<Rational>& lambda, const Multipartition& m, const Multipartition& n) {
  const int L = static_cast<int>(lambda.size());
  if (m.ground != L || n.ground != L) throw InputError("multipartition ground size differs from lambda length");
  if (auto v = validate_multipartition(m)) throw InputError("M is not a multipartition: " + v->reason);
  if (auto v = validate_multipartition(n)) throw InputError("N is not a multipartition: " + v->reason);

  const auto msets = complete_multipartition(L, m.sets).sets;
  const auto nsets = complete_multipartition(L, n.sets).sets;
  const auto mpar = parents_of(msets);
  const auto npar = parents_of(nsets);

  auto locate = [](const std::vector<std::vector<int>>& sets, const std::vector<int>& key) {
    return static_cast<int>(std::find(sets.begin(), sets.end(), key) - sets.begin());
  };
  int mroot = -1, nroot = -1;
  for (std::size_t a = 0; a < msets.size(); ++a)
    if (mpar[a] < 0) mroot = static_cast<int>(a);
  for (std::size_t a = 0; a < nsets.size(); ++a)
    if (npar[a] < 0) nroot = static_cast<int>(a);

  // Nodes: u_A for A in M, then w_B for B in N, then super source and sink.
  const int mcount = static_cast<int>(msets.size());
  const int ncount = static_cast<int>(nsets.size());
  const int nodes = mcount + ncount;
  const int source = nodes;
  const int sink = nodes + 1;

  std::vector<FlowEdge> edges;
  auto add = [&](int from, int to, Bounds b, std::string label) { edges.push_back({from, to, b.lo, b.hi, 0, std::move(label)}); };

  for (int a = 0; a < mcount; ++a)
    if (mpar[static_cast<std::size_t>(a)] >= 0)
      add(mpar[static_cast<std::size_t>(a)], a, bounds_of(sum_over(lambda, msets[static_cast<std::size_t>(a)])), "M");
  for (int i = 0; i < L; ++i) {
    const int u = locate(msets, {i});
    const int w = mcount + locate(nsets, {i});
    add(u, w, bounds_of(lambda[static_cast<std::size_t>(i)]), "element " + std::to_string(i));
  }
  for (int b = 0; b < ncount; ++b)
    if (npar[static_cast<std::size_t>(b)] >= 0)
      add(mcount + b, mcount + npar[static_cast<std::size_t>(b)], bounds_of(sum_over(lambda, nsets[static_cast<std::size_t>(b)])), "N");
  Rational total = 0;
  for (const auto& x : lambda) total += x;
  add(mcount + nroot, mroot, bounds_of(total), "return");

  // Lower bounds are moved into node excesses (valid for negative bounds too).
  Dinic flow(nodes + 2);
  std::vector<std::int64_t> excess(static_cast<std::size_t>(nodes), 0);
  std::vector<int> ids;
  for (const auto& e : edges) {
    if (e.lower > e.upper) throw InternalError("rounding edge with empty bound interval");
    ids.push_back(flow.add_edge(e.from, e.to, e.upper - e.lower));
    excess[static_cast<std::size_t>(e.to)] += e.lower;
    excess[static_cast<std::size_t>(e.from)] -= e.lower;
  }
  std::int64_t demand = 0;
  for (int v = 0; v < nodes; ++v) {
    const auto x = excess[static_cast<std::size_t>(v)];
    if (x > 0) {
      flow.add_edge(source, v, x);
      demand += x;
    } else if (x < 0) {
      flow.add_edge(v, sink, -x);
    }
  }
  if (flow.max_flow(source, sink) != demand) throw InternalError("rounding circulation infeasible for valid multipartitions");

  RoundingResult result;
  result.node_count = nodes;
  result.values.assign(static_cast<std::size_t>(L), 0);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    edges[k].flow = edges[k].lower + flow.flow_on(ids[k]);
  }
  for (int i = 0; i < L; ++i) result.values[static_cast<std::size_t>(i)] = edges[static_cast<std::size_t>(mcount - 1 + i)].flow;
  result.certificate = std::move(edges);

  // Element edges follow the mcount-1 tree edges of M.
  for (int i = 0; i < L; ++i)
    if (result.certificate[static_cast<std::size_t>(mcount - 1 + i)].label != "element " + std::to_string(i))
      throw InternalError("rounding network layout mismatch");

  if (!satisfies_rounding(lambda, {msets, nsets}, result.values) || !certificate_is_valid(result))
    throw InternalError("rounding output violates its constraints");
  return result;
}

bool satisfies_rounding(const std::vector<Rational>& lambda, const std::vector<std::vector<std::vector<int>>>& families,
                        const std::vector<std::int64_t>& values) {
  if (values.size() != lambda.size()) return false;
  auto within = [](const Rational& x, std::int64_t v) {
    const BigInt f = floor_of(x);
    return BigInt(v) == f || BigInt(v) == ceil_of(x);
  };
  Rational total = 0;
  std::int64_t vtotal = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!within(lambda[i], values[i])) return false;
    total += lambda[i];
    vtotal += values[i];
  }
  if (!within(total, vtotal)) return false;
  for (const auto& fam : families)
    for (const auto& set : fam) {
      Rational s = 0;
      std::int64_t v = 0;
      for (int i : set) {
        s += lambda[static_cast<std::size_t>(i)];
        v += values[static_cast<std::size_t>(i)];
      }
      if (!within(s, v)) return false;
    }
  return true;
}

bool certificate_is_valid(const RoundingResult& result) {
  std::vector<std::int64_t> balance(static_cast<std::size_t>(result.node_count), 0);
  for (const auto& e : result.certificate) {
    if (e.flow < e.lower || e.flow > e.upper) return false;
    balance[static_cast<std::size_t>(e.from)] -= e.flow;
    balance[static_cast<std::size_t>(e.to)] += e.flow;
  }
  return std::all_of(balance.begin(), balance.end(), [](std::int64_t b) { return b == 0; });
}

std::vector<std::vector<std::int64_t>> feasible_roundings(const std::vector<Rational>& lambda,
                                                          const std::vector<std::vector<std::vector<int>>>& families) {
  const int L = static_cast<int>(lambda.size());
  if (L > kFeasibleRoundingsCap) throw CapacityError("feasible_roundings supports at most 16 elements");
  for (const auto& fam : families)
    for (const auto& set : fam)
      for (int i : set)
        if (i < 0 || i >= L) throw InputError("constraint set element out of range");

  std::vector<std::int64_t> lo(static_cast<std::size_t>(L)), hi(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) {
    const auto b = bounds_of(lambda[static_cast<std::size_t>(i)]);
    lo[static_cast<std::size_t>(i)] = b.lo;
    hi[static_cast<std::size_t>(i)] = b.hi;
  }
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> cur(static_cast<std::size_t>(L));
  auto rec = [&](auto&& self, int i) -> void {
    if (i == L) {
      if (satisfies_rounding(lambda, families, cur)) out.push_back(cur);
      return;
    }
    for (std::int64_t v = lo[static_cast<std::size_t>(i)]; v <= hi[static_cast<std::size_t>(i)]; ++v) {
      cur[static_cast<std::size_t>(i)] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace ogt
