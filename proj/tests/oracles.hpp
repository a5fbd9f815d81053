#pragma once

// Brute-force reference implementations used only by the tests. Each one is
// written independently of the library code it checks: no pruning, no shared
// helpers beyond the basic containers.

#include "ogt/core.hpp"
#include "ogt/rational.hpp"
#include "ogt/rng.hpp"
#include "ogt/scheme.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using ogt::BigInt;
using ogt::Color;
using ogt::OrderedGraph;
using ogt::Rational;
using ogt::Vertex;

/// Calls fn(subset) for every q-subset of {0..n-1}, increasing order.
inline void for_each_subset(int n, int q, const std::function<void(const std::vector<int>&)>& fn) {
  if (q < 0 || q > n) return;
  std::vector<int> cur(static_cast<std::size_t>(q));
  for (int i = 0; i < q; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(cur);
    int i = q - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - q + i) --i;
    if (i < 0) return;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < q; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline bool matches(const OrderedGraph& g, const std::vector<int>& tuple, const OrderedGraph& f) {
  for (int i = 0; i < f.n(); ++i)
    for (int j = i + 1; j < f.n(); ++j)
      if (g.color(tuple[static_cast<std::size_t>(i)], tuple[static_cast<std::size_t>(j)]) != f.color(i, j)) return false;
  return true;
}

inline std::int64_t count_copies(const OrderedGraph& g, const OrderedGraph& f) {
  std::int64_t c = 0;
  for_each_subset(g.n(), f.n(), [&](const std::vector<int>& s) { c += matches(g, s, f); });
  return c;
}

/// Does the induced subgraph on `vs` (sorted) contain any family member?
inline bool contains_in(const OrderedGraph& g, const std::vector<OrderedGraph>& fam, const std::vector<int>& vs) {
  for (const auto& f : fam) {
    bool hit = false;
    for_each_subset(static_cast<int>(vs.size()), f.n(), [&](const std::vector<int>& idx) {
      if (hit) return;
      std::vector<int> tuple;
      for (int i : idx) tuple.push_back(vs[static_cast<std::size_t>(i)]);
      hit = matches(g, tuple, f);
    });
    if (hit) return true;
  }
  return false;
}

inline bool contains(const OrderedGraph& g, const std::vector<OrderedGraph>& fam) {
  std::vector<int> all(static_cast<std::size_t>(g.n()));
  for (int i = 0; i < g.n(); ++i) all[static_cast<std::size_t>(i)] = i;
  return contains_in(g, fam, all);
}

/// Number of q-subsets whose induced subgraph contains a member.
inline std::int64_t witness_sets(const OrderedGraph& g, const std::vector<OrderedGraph>& fam, int q) {
  std::int64_t c = 0;
  for_each_subset(g.n(), q, [&](const std::vector<int>& s) { c += contains_in(g, fam, s); });
  return c;
}

inline std::int64_t choose(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline Rational density(const OrderedGraph& g, const std::vector<int>& a, const std::vector<int>& b, Color c) {
  std::int64_t hits = 0;
  for (int u : a)
    for (int v : b) hits += g.color(u, v) == c;
  return Rational(hits, static_cast<std::int64_t>(a.size() * b.size()));
}

/// ind(P) = sum over part pairs a < b of |Va||Vb| / C(n,2) * sum_sigma d_sigma^2.
inline Rational index_of(const OrderedGraph& g, const std::vector<int>& labels, int k) {
  std::vector<std::vector<int>> parts(static_cast<std::size_t>(k));
  for (int v = 0; v < g.n(); ++v) parts[static_cast<std::size_t>(labels[static_cast<std::size_t>(v)])].push_back(v);
  Rational total = 0;
  const Rational pairs(static_cast<std::int64_t>(g.n()) * (g.n() - 1) / 2);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      const auto& pa = parts[static_cast<std::size_t>(a)];
      const auto& pb = parts[static_cast<std::size_t>(b)];
      if (pa.empty() || pb.empty()) continue;
      Rational idx = 0;
      for (Color c = 0; c < g.num_colors(); ++c) {
        const Rational d = density(g, pa, pb, c);
        idx += d * d;
      }
      total += Rational(static_cast<std::int64_t>(pa.size() * pb.size())) / pairs * idx;
    }
  return total;
}

/// Every 0/1 choice of floor/ceil per element, filtered by all set sums.
inline std::vector<std::vector<std::int64_t>> roundings(const std::vector<Rational>& lambda,
                                                        const std::vector<std::vector<std::vector<int>>>& families) {
  const int L = static_cast<int>(lambda.size());
  std::vector<std::vector<std::int64_t>> out;
  std::vector<int> frac;
  for (int i = 0; i < L; ++i)
    if (!ogt::is_integer(lambda[static_cast<std::size_t>(i)])) frac.push_back(i);
  const std::uint64_t combos = std::uint64_t{1} << frac.size();
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i) v[static_cast<std::size_t>(i)] = ogt::floor_i64(lambda[static_cast<std::size_t>(i)]);
    for (std::size_t b = 0; b < frac.size(); ++b)
      if (mask >> b & 1) ++v[static_cast<std::size_t>(frac[b])];
    auto ok_set = [&](const std::vector<int>& set) {
      Rational s = 0;
      std::int64_t got = 0;
      for (int i : set) {
        s += lambda[static_cast<std::size_t>(i)];
        got += v[static_cast<std::size_t>(i)];
      }
      return got == ogt::floor_i64(s) || got == ogt::ceil_i64(s);
    };
    bool ok = true;
    std::vector<int> all(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i) all[static_cast<std::size_t>(i)] = i;
    ok = ok_set(all);
    for (const auto& fam : families)
      for (const auto& set : fam)
        if (ok && !ok_set(set)) ok = false;
    if (ok) out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Some t-subset of `vs` whose internal pairs share one color.
inline bool has_mono_clique(const ogt::ColorGrid& grid, const std::vector<int>& vs, int t) {
  if (t <= 1) return static_cast<int>(vs.size()) >= t;
  bool found = false;
  for_each_subset(static_cast<int>(vs.size()), t, [&](const std::vector<int>& idx) {
    if (found) return;
    const Color c = grid(vs[static_cast<std::size_t>(idx[0])], vs[static_cast<std::size_t>(idx[1])]);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b)
        if (grid(vs[static_cast<std::size_t>(idx[a])], vs[static_cast<std::size_t>(idx[b])]) != c) return;
    found = true;
  });
  return found;
}

/// Embeddability by plain enumeration of all weakly monotone maps and all
/// index vectors.
inline bool embeds(const OrderedGraph& f, const ogt::LoopedGraph& h) {
  const int n = f.n(), m = h.m(), t = h.t();
  if (n == 0) return true;
  std::vector<int> hm(static_cast<std::size_t>(n), 0), sv(static_cast<std::size_t>(n), 0);
  std::function<bool(int)> maps = [&](int i) -> bool {
    if (i == n) {
      std::fill(sv.begin(), sv.end(), 0);
      while (true) {
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
          for (int b = a + 1; b < n && ok; ++b)
            ok = ogt::has_color(h.at(hm[static_cast<std::size_t>(a)], hm[static_cast<std::size_t>(b)])
                                    .at(sv[static_cast<std::size_t>(a)], sv[static_cast<std::size_t>(b)]),
                                f.color(a, b));
        if (ok) return true;
        int p = n - 1;
        while (p >= 0 && sv[static_cast<std::size_t>(p)] == t - 1) sv[static_cast<std::size_t>(p--)] = 0;
        if (p < 0) return false;
        ++sv[static_cast<std::size_t>(p)];
      }
    }
    for (int j = i == 0 ? 0 : hm[static_cast<std::size_t>(i - 1)]; j < m; ++j) {
      hm[static_cast<std::size_t>(i)] = j;
      if (maps(i + 1)) return true;
    }
    return false;
  };
  return maps(0);
}

/// Minimum number of pair recolorings that make g free of the family, by
/// enumerating every coloring of K_n. Only for C(n,2) * log2|Sigma| <= 20.
inline std::int64_t distance(const OrderedGraph& g, const std::vector<OrderedGraph>& fam) {
  const int n = g.n(), colors = g.num_colors();
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  std::int64_t total = 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) total *= colors;
  std::int64_t best = static_cast<std::int64_t>(pairs.size()) + 1;
  OrderedGraph h = g;
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t x = code, diff = 0;
    for (auto [u, v] : pairs) {
      const Color c = static_cast<Color>(x % colors);
      x /= colors;
      h.set_color(u, v, c);
      diff += c != g.color(u, v);
    }
    if (diff < best && !contains(h, fam)) best = diff;
  }
  return best;
}


/// Structural invariants of a regularity scheme, re-derived from raw labels.
/// Returns the first violated property, or an empty string.
inline std::string scheme_violation(const ogt::RegularityScheme& s, int n) {
  const int k = s.k, m = s.m, t = s.t, b = s.b;
  auto sizes_of = [&](const std::vector<int>& labels, int parts) {
    std::vector<int> cnt(static_cast<std::size_t>(parts), 0);
    for (int l : labels) {
      if (l < 0 || l >= parts) return std::vector<int>{};
      ++cnt[static_cast<std::size_t>(l)];
    }
    return cnt;
  };
  auto equitable_nonempty = [](const std::vector<int>& cnt) {
    if (cnt.empty()) return false;
    const auto [lo, hi] = std::minmax_element(cnt.begin(), cnt.end());
    return *lo >= 1 && *hi - *lo <= 1;
  };
  auto interval_of = [](const ogt::IntervalPartition& ip, int v) {
    int i = 0;
    while (ip.cuts()[static_cast<std::size_t>(i + 1)] <= v) ++i;
    return i;
  };
  if (s.I.n() != n || s.I_prime.n() != n || s.Q.n() != n || s.Q_prime.n() != n || s.Q_dprime.n() != n)
    return "partitions do not cover all vertices";
  if (s.I.k() != m) return "I does not have m intervals";
  if (s.I_prime.k() != m * b) return "I' does not have m*b intervals";
  if (!equitable_nonempty(s.I.sizes()) || !equitable_nonempty(s.I_prime.sizes())) return "interval partitions not equitable";
  const auto q_sizes = sizes_of(s.Q.labels(), k);
  const auto qp_sizes = sizes_of(s.Q_prime.labels(), m * t);
  const auto qdp_sizes = sizes_of(s.Q_dprime.labels(), m * b * t);
  if (!equitable_nonempty(q_sizes)) return "Q not an equipartition";
  if (!equitable_nonempty(qp_sizes)) return "Q' not an equipartition";
  if (!equitable_nonempty(qdp_sizes)) return "Q'' cells empty or unequal";
  // Refinement relations, via one pass over vertices.
  std::vector<int> qp_to_q(static_cast<std::size_t>(m * t), -1), qp_to_i(static_cast<std::size_t>(m * t), -1);
  std::vector<int> ip_to_i(static_cast<std::size_t>(m * b), -1);
  for (int v = 0; v < n; ++v) {
    const int qp = s.Q_prime.label(v), i = interval_of(s.I, v), ip = interval_of(s.I_prime, v);
    int& a = qp_to_q[static_cast<std::size_t>(qp)];
    if (a != -1 && a != s.Q.label(v)) return "Q' does not refine Q";
    a = s.Q.label(v);
    int& c = qp_to_i[static_cast<std::size_t>(qp)];
    if (c != -1 && c != i) return "Q' does not refine I";
    c = i;
    int& e = ip_to_i[static_cast<std::size_t>(ip)];
    if (e != -1 && e != i) return "I' does not refine I";
    e = i;
    // Cell (i*b + j)*t + s must be W_is intersected with the small interval.
    const int cell = s.Q_dprime.label(v);
    if (cell / t != ip || cell % t != qp % t || qp / t != i) return "Q'' cell is not the intersection W_is with I_ij";
  }
  std::vector<int> per_q(static_cast<std::size_t>(k), 0);
  for (int a : qp_to_q) ++per_q[static_cast<std::size_t>(a)];
  for (int c : per_q)
    if (c != m * t / k) return "a Q part is not a union of mt/k Q' parts";
  if (n % 2 == 0 && m % 2 == 0) {
    int half = 0;
    for (int i = 0; i < m / 2; ++i) half += s.I.length(i);
    if (half != n / 2) return "I does not respect the middle";
  }
  return {};
}

}  // namespace oracle
