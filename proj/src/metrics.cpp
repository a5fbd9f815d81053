#include "ogt/metrics.hpp"

#include "ogt/errors.hpp"
#include "ogt/rounding.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>

namespace ogt {

namespace {

void check_pair_sets(const OrderedGraph& g, std::span<const Vertex> a, std::span<const Vertex> b) {
  if (a.empty() || b.empty()) throw InputError("density needs two non-empty vertex sets");
  std::vector<char> mark(static_cast<std::size_t>(g.n()), 0);
  for (Vertex v : a) {
    if (v < 0 || v >= g.n()) throw InputError("vertex out of range");
    if (mark[static_cast<std::size_t>(v)]) throw InputError("vertex repeated in set");
    mark[static_cast<std::size_t>(v)] = 1;
  }
  for (Vertex v : b) {
    if (v < 0 || v >= g.n()) throw InputError("vertex out of range");
    if (mark[static_cast<std::size_t>(v)]) throw InputError("density sets overlap");
    mark[static_cast<std::size_t>(v)] = 2;
  }
}

std::vector<std::int64_t> color_counts(const OrderedGraph& g, std::span<const Vertex> a, std::span<const Vertex> b) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(g.num_colors()), 0);
  for (Vertex u : a)
    for (Vertex v : b) ++counts[static_cast<std::size_t>(g.color(u, v))];
  return counts;
}

// Per part-pair color counts: entry [(p * k + q) * colors + c] for p < q.
std::vector<std::int64_t> pair_counts(const OrderedGraph& g, const std::vector<int>& labels, int k) {
  const int colors = g.num_colors();
  std::vector<std::int64_t> cnt(static_cast<std::size_t>(k) * static_cast<std::size_t>(k) * static_cast<std::size_t>(colors), 0);
  for (int u = 0; u < g.n(); ++u) {
    const int lu = labels[static_cast<std::size_t>(u)];
    for (int v = u + 1; v < g.n(); ++v) {
      const int lv = labels[static_cast<std::size_t>(v)];
      if (lu == lv) continue;
      const int p = std::min(lu, lv), q = std::max(lu, lv);
      ++cnt[(static_cast<std::size_t>(p) * static_cast<std::size_t>(k) + static_cast<std::size_t>(q)) * static_cast<std::size_t>(colors) +
            static_cast<std::size_t>(g.color(u, v))];
    }
  }
  return cnt;
}

double index_from_counts(const std::vector<std::int64_t>& cnt, const std::vector<int>& sizes, int colors, int n) {
  const int k = static_cast<int>(sizes.size());
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  double total = 0;
  for (int p = 0; p < k; ++p)
    for (int q = p + 1; q < k; ++q) {
      const double denom = static_cast<double>(sizes[static_cast<std::size_t>(p)]) * sizes[static_cast<std::size_t>(q)];
      if (denom == 0) continue;
      double s = 0;
      for (int c = 0; c < colors; ++c) {
        const double x = static_cast<double>(cnt[(static_cast<std::size_t>(p) * static_cast<std::size_t>(k) + static_cast<std::size_t>(q)) *
                                                     static_cast<std::size_t>(colors) + static_cast<std::size_t>(c)]);
        s += x * x;
      }
      total += s / denom;
    }
  return pairs > 0 ? total / pairs : 1.0;
}

std::vector<int> sizes_of(const std::vector<int>& labels, int k) {
  std::vector<int> sizes(static_cast<std::size_t>(k), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

double index_labels_approx(const OrderedGraph& g, const std::vector<int>& labels, int k) {
  return index_from_counts(pair_counts(g, labels, k), sizes_of(labels, k), g.num_colors(), g.n());
}

// One search step: best equitable refinement with size in (k, f(k)].
struct StepResult {
  std::optional<Partition> best;
  double best_value = -1;
  std::int64_t used = 0;
  bool exhausted = false;
};

StepResult exhaustive_step(const OrderedGraph& g, const Partition& cur, int max_parts, std::int64_t budget) {
  StepResult res;
  const int n = g.n();
  const auto parts = cur.parts();
  const auto sizes = cur.part_sizes();
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  for (int target = cur.k() + 1; target <= std::min(max_parts, n); ++target) {
    const int small = n / target;
    for (const auto& plan : equitable_split_plans(sizes, target)) {
      int next_label = 0;
      std::function<void(std::size_t)> by_part;
      std::function<void(std::size_t, const std::vector<Vertex>&, std::vector<char>&, int, int)> by_piece;
      by_piece = [&](std::size_t part, const std::vector<Vertex>& elems, std::vector<char>& used, int bigs, int smalls) {
        if (res.exhausted) return;
        if (bigs == 0 && smalls == 0) {
          by_part(part + 1);
          return;
        }
        std::size_t first = 0;
        while (used[first]) ++first;
        const int label = next_label++;
        for (int big = 1; big >= 0; --big) {
          if (big ? bigs == 0 : smalls == 0) continue;
          const int need = small + big - 1;
          std::vector<std::size_t> rest;
          for (std::size_t x = first + 1; x < elems.size(); ++x)
            if (!used[x]) rest.push_back(x);
          if (static_cast<int>(rest.size()) < need) continue;
          used[first] = 1;
          labels[static_cast<std::size_t>(elems[first])] = label;
          std::vector<int> pick(static_cast<std::size_t>(need));
          std::iota(pick.begin(), pick.end(), 0);
          while (true) {
            for (int idx : pick) {
              used[rest[static_cast<std::size_t>(idx)]] = 1;
              labels[static_cast<std::size_t>(elems[rest[static_cast<std::size_t>(idx)]])] = label;
            }
            by_piece(part, elems, used, bigs - big, smalls - (1 - big));
            for (int idx : pick) used[rest[static_cast<std::size_t>(idx)]] = 0;
            if (res.exhausted) break;
            int pos = need - 1;
            while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == static_cast<int>(rest.size()) - need + pos) --pos;
            if (pos < 0) break;
            ++pick[static_cast<std::size_t>(pos)];
            for (int q = pos + 1; q < need; ++q) pick[static_cast<std::size_t>(q)] = pick[static_cast<std::size_t>(q - 1)] + 1;
          }
          used[first] = 0;
          if (res.exhausted) break;
        }
        --next_label;
      };
      by_part = [&](std::size_t part) {
        if (res.exhausted) return;
        if (part == parts.size()) {
          if (res.used >= budget) {
            res.exhausted = true;
            return;
          }
          ++res.used;
          const double v = index_labels_approx(g, labels, target);
          if (v > res.best_value) {
            res.best_value = v;
            res.best = Partition(labels, target);
          }
          return;
        }
        const auto [c, b] = plan[part];
        std::vector<char> used(parts[part].size(), 0);
        by_piece(part, parts[part], used, b, c - b);
      };
      by_part(0);
      if (res.exhausted) return res;
    }
  }
  return res;
}

// Random equitable refinement following `plan`, improved by swaps of vertices
// between pieces of the same parent part.
StepResult local_step(const OrderedGraph& g, const Partition& cur, int max_parts, std::int64_t budget, Rng& rng) {
  StepResult res;
  const int n = g.n();
  const int colors = g.num_colors();
  const auto parts = cur.parts();
  const auto sizes = cur.part_sizes();
  std::vector<int> targets;
  for (int target = cur.k() + 1; target <= std::min(max_parts, n); ++target)
    if (!equitable_split_plans(sizes, target, 1).empty()) targets.push_back(target);
  if (targets.empty()) return res;
  const std::int64_t per_target = std::max<std::int64_t>(1, budget / static_cast<std::int64_t>(targets.size()));

  for (int target : targets) {
    auto plans = equitable_split_plans(sizes, target, 16);
    const auto& plan = plans[rng.below(plans.size())];
    const int small = n / target;
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> pieces_of_parent(parts.size());
    int next = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      auto elems = parts[p];
      std::shuffle(elems.begin(), elems.end(), rng);
      std::size_t pos = 0;
      for (int piece = 0; piece < plan[p].first; ++piece) {
        const int len = small + (piece < plan[p].second ? 1 : 0);
        for (int x = 0; x < len; ++x) labels[static_cast<std::size_t>(elems[pos++])] = next;
        pieces_of_parent[p].push_back(next++);
      }
    }
    const int k = target;
    auto cnt = pair_counts(g, labels, k);
    auto psize = sizes_of(labels, k);
    // row[v][q][c]: neighbours of v in piece q with color c.
    std::vector<std::int64_t> row(static_cast<std::size_t>(n) * static_cast<std::size_t>(k) * static_cast<std::size_t>(colors), 0);
    auto R = [&](int v, int q, int c) -> std::int64_t& {
      return row[(static_cast<std::size_t>(v) * static_cast<std::size_t>(k) + static_cast<std::size_t>(q)) * static_cast<std::size_t>(colors) +
                 static_cast<std::size_t>(c)];
    };
    auto C = [&](int p, int q, int c) -> std::int64_t& {
      if (p > q) std::swap(p, q);
      return cnt[(static_cast<std::size_t>(p) * static_cast<std::size_t>(k) + static_cast<std::size_t>(q)) * static_cast<std::size_t>(colors) +
                 static_cast<std::size_t>(c)];
    };
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v) ++R(u, labels[static_cast<std::size_t>(v)], g.color(u, v));

    std::vector<std::vector<int>> members_of_parent(parts.size());
    for (std::size_t p = 0; p < parts.size(); ++p) members_of_parent[p] = parts[p];
    std::vector<int> movable;
    for (std::size_t p = 0; p < parts.size(); ++p)
      if (pieces_of_parent[p].size() > 1) movable.push_back(static_cast<int>(p));

    std::int64_t spent = 0;
    std::int64_t idle = 0;
    const std::int64_t patience = 20LL * n + 100;
    std::vector<std::int64_t> newA(static_cast<std::size_t>(k * colors)), newB(static_cast<std::size_t>(k * colors));
    std::vector<std::int64_t> newAB(static_cast<std::size_t>(colors));
    while (!movable.empty() && spent < per_target && idle < patience) {
      ++spent;
      ++idle;
      const auto& mem = members_of_parent[static_cast<std::size_t>(movable[rng.below(movable.size())])];
      const int u = mem[rng.below(mem.size())];
      const int v = mem[rng.below(mem.size())];
      const int A = labels[static_cast<std::size_t>(u)];
      const int B = labels[static_cast<std::size_t>(v)];
      if (A == B) continue;
      // Index change restricted to pairs touching A or B.
      double before = 0, after = 0;
      for (int q = 0; q < k; ++q) {
        if (q == A || q == B) continue;
        const double dq = psize[static_cast<std::size_t>(q)];
        const double da = static_cast<double>(psize[static_cast<std::size_t>(A)]) * dq;
        const double db = static_cast<double>(psize[static_cast<std::size_t>(B)]) * dq;
        for (int c = 0; c < colors; ++c) {
          const std::int64_t ca = C(A, q, c), cb = C(B, q, c);
          const std::int64_t na = ca - R(u, q, c) + R(v, q, c);
          const std::int64_t nb = cb - R(v, q, c) + R(u, q, c);
          before += static_cast<double>(ca * ca) / da + static_cast<double>(cb * cb) / db;
          after += static_cast<double>(na * na) / da + static_cast<double>(nb * nb) / db;
        }
      }
      const double dab = static_cast<double>(psize[static_cast<std::size_t>(A)]) * psize[static_cast<std::size_t>(B)];
      const Color cuv = g.color(u, v);
      for (int c = 0; c < colors; ++c) {
        const std::int64_t cab = C(A, B, c);
        const std::int64_t nab = cab - R(u, B, c) - R(v, A, c) + R(u, A, c) + R(v, B, c) + (c == cuv ? 2 : 0);
        newAB[static_cast<std::size_t>(c)] = nab;
        before += static_cast<double>(cab * cab) / dab;
        after += static_cast<double>(nab * nab) / dab;
      }
      if (after <= before + 1e-12) continue;
      idle = 0;
      for (int q = 0; q < k; ++q) {
        if (q == A || q == B) continue;
        for (int c = 0; c < colors; ++c) {
          const std::int64_t du = R(u, q, c), dv = R(v, q, c);
          C(A, q, c) += dv - du;
          C(B, q, c) += du - dv;
        }
      }
      for (int c = 0; c < colors; ++c) C(A, B, c) = newAB[static_cast<std::size_t>(c)];
      labels[static_cast<std::size_t>(u)] = B;
      labels[static_cast<std::size_t>(v)] = A;
      for (int w = 0; w < n; ++w) {
        if (w != u) {
          --R(w, A, g.color(w, u));
          ++R(w, B, g.color(w, u));
        }
        if (w != v) {
          --R(w, B, g.color(w, v));
          ++R(w, A, g.color(w, v));
        }
      }
    }
    res.used += spent;
    const double value = index_from_counts(cnt, psize, colors, n);
    if (value > res.best_value) {
      res.best_value = value;
      res.best = Partition(labels, k);
    }
  }
  res.exhausted = res.used >= budget;
  return res;
}

int clamp_budget_iterations(const Rational& gamma) {
  const auto it = ceil_i64(Rational(1) / gamma);
  return static_cast<int>(std::min<std::int64_t>(it, 1000000));
}

}  // namespace

Rational color_density(const OrderedGraph& g, std::span<const Vertex> a, std::span<const Vertex> b, Color sigma) {
  check_pair_sets(g, a, b);
  if (sigma < 0 || sigma >= g.num_colors()) throw InputError("color out of range");
  std::int64_t hits = 0;
  for (Vertex u : a)
    for (Vertex v : b) hits += g.color(u, v) == sigma;
  return Rational(hits, static_cast<std::int64_t>(a.size() * b.size()));
}

Rational index_pair(const OrderedGraph& g, std::span<const Vertex> a, std::span<const Vertex> b) {
  check_pair_sets(g, a, b);
  const auto counts = color_counts(g, a, b);
  BigInt num = 0;
  for (auto c : counts) num += BigInt(c) * c;
  const BigInt den = BigInt(static_cast<std::int64_t>(a.size() * b.size()));
  return Rational(num, den * den);
}

Rational index_partition(const OrderedGraph& g, const Partition& p) {
  if (p.n() != g.n()) throw InputError("partition does not cover the graph's vertices");
  const int n = g.n();
  if (n < 2) return Rational(1);
  const int k = p.k();
  const int colors = g.num_colors();
  const auto cnt = pair_counts(g, p.labels(), k);
  const auto sizes = p.part_sizes();
  Rational total = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      const std::int64_t denom = static_cast<std::int64_t>(sizes[static_cast<std::size_t>(a)]) * sizes[static_cast<std::size_t>(b)];
      if (denom == 0) continue;
      BigInt s = 0;
      for (int c = 0; c < colors; ++c) {
        const auto x = cnt[(static_cast<std::size_t>(a) * static_cast<std::size_t>(k) + static_cast<std::size_t>(b)) * static_cast<std::size_t>(colors) +
                           static_cast<std::size_t>(c)];
        s += BigInt(x) * x;
      }
      total += Rational(s, BigInt(denom));
    }
  return total / Rational(static_cast<std::int64_t>(n) * (n - 1), 2);
}

double index_partition_approx(const OrderedGraph& g, const Partition& p) {
  if (p.n() != g.n()) throw InputError("partition does not cover the graph's vertices");
  if (g.n() < 2) return 1.0;
  return index_labels_approx(g, p.labels(), p.k());
}

Rational index_string(std::span<const int> s, int num_symbols) {
  if (s.empty()) throw InputError("index of an empty string");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(num_symbols), 0);
  for (int c : s) {
    if (c < 0 || c >= num_symbols) throw InputError("string symbol out of range");
    ++counts[static_cast<std::size_t>(c)];
  }
  BigInt num = 0;
  for (auto c : counts) num += BigInt(c) * c;
  const BigInt len = BigInt(static_cast<std::int64_t>(s.size()));
  return Rational(num, len * len);
}

Rational index_string_partition(std::span<const int> s, int num_symbols, const IntervalPartition& ip) {
  if (ip.n() != static_cast<int>(s.size())) throw InputError("interval partition does not cover the string");
  Rational total = 0;
  for (int i = 0; i < ip.k(); ++i) {
    auto piece = s.subspan(static_cast<std::size_t>(ip.begin(i)), static_cast<std::size_t>(ip.length(i)));
    total += Rational(ip.length(i), static_cast<std::int64_t>(s.size())) * index_string(piece, num_symbols);
  }
  return total;
}

RegularityVerdict eps_regular(const OrderedGraph& g, std::span<const Vertex> a, std::span<const Vertex> b,
                              const Rational& eps, RegularityMode mode, Rng* rng, int samples, int exact_cap) {
  check_pair_sets(g, a, b);
  if (eps <= 0) throw InputError("eps must be positive");
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  const int colors = g.num_colors();
  const auto base = color_counts(g, a, b);
  const std::int64_t full = static_cast<std::int64_t>(na) * nb;
  const int min_a = static_cast<int>(ceil_i64(eps * na));
  const int min_b = static_cast<int>(ceil_i64(eps * nb));
  const auto ep = static_cast<std::int64_t>(numerator(eps));
  const auto eq = static_cast<std::int64_t>(denominator(eps));

  RegularityVerdict verdict;
  verdict.mode = mode;
  // |c'/(sa*sb) - c/full| > eps  <=>  eq*|c'*full - c*sa*sb| > ep*sa*sb*full
  auto violates = [&](std::int64_t sub, std::int64_t c, std::int64_t area) {
    const std::int64_t diff = sub * full - c * area;
    const std::int64_t lhs = eq * (diff < 0 ? -diff : diff);
    return lhs > ep * area * full;
  };
  auto record = [&](std::vector<Vertex> wa, std::vector<Vertex> wb, Color c, std::int64_t sub) {
    const std::int64_t area = static_cast<std::int64_t>(wa.size() * wb.size());
    Rational dev = Rational(sub, area) - Rational(base[static_cast<std::size_t>(c)], full);
    if (dev < 0) dev = -dev;
    verdict.regular = false;
    verdict.witness = RegularityWitness{std::move(wa), std::move(wb), c, dev};
  };

  if (mode == RegularityMode::exact) {
    if (na > exact_cap || nb > exact_cap) throw CapacityError("exact regularity check limited to sets of size " + std::to_string(exact_cap));
    if (min_a > na || min_b > nb) return verdict;
    // per_b[mask][j][c]: color-c edges between a-subset mask and b[j].
    const std::size_t amasks = std::size_t{1} << na, bmasks = std::size_t{1} << nb;
    std::vector<std::int64_t> colsum(bmasks * static_cast<std::size_t>(colors));
    std::vector<std::int64_t> per_b(static_cast<std::size_t>(nb) * static_cast<std::size_t>(colors));
    for (std::size_t ma = 1; ma < amasks; ++ma) {
      const int sa = std::popcount(ma);
      if (sa < min_a) continue;
      std::fill(per_b.begin(), per_b.end(), 0);
      for (int i = 0; i < na; ++i)
        if ((ma >> i) & 1U)
          for (int j = 0; j < nb; ++j) ++per_b[static_cast<std::size_t>(j * colors + g.color(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]))];
      std::fill(colsum.begin(), colsum.begin() + colors, 0);
      for (std::size_t mb = 1; mb < bmasks; ++mb) {
        const int low = std::countr_zero(mb);
        const std::size_t prev = mb & (mb - 1);
        for (int c = 0; c < colors; ++c)
          colsum[mb * static_cast<std::size_t>(colors) + static_cast<std::size_t>(c)] =
              colsum[prev * static_cast<std::size_t>(colors) + static_cast<std::size_t>(c)] + per_b[static_cast<std::size_t>(low * colors + c)];
        const int sb = std::popcount(mb);
        if (sb < min_b) continue;
        ++verdict.subsets_checked;
        const std::int64_t area = static_cast<std::int64_t>(sa) * sb;
        for (int c = 0; c < colors; ++c) {
          const auto sub = colsum[mb * static_cast<std::size_t>(colors) + static_cast<std::size_t>(c)];
          if (violates(sub, base[static_cast<std::size_t>(c)], area)) {
            std::vector<Vertex> wa, wb;
            for (int i = 0; i < na; ++i)
              if ((ma >> i) & 1U) wa.push_back(a[static_cast<std::size_t>(i)]);
            for (int j = 0; j < nb; ++j)
              if ((mb >> j) & 1U) wb.push_back(b[static_cast<std::size_t>(j)]);
            record(std::move(wa), std::move(wb), c, sub);
            return verdict;
          }
        }
      }
    }
    return verdict;
  }

  if (!rng) throw InputError("sampled regularity check needs an RNG stream");
  if (min_a > na || min_b > nb) return verdict;
  auto test = [&](std::vector<Vertex> wa, std::vector<Vertex> wb) {
    ++verdict.subsets_checked;
    const auto counts = color_counts(g, wa, wb);
    const std::int64_t area = static_cast<std::int64_t>(wa.size() * wb.size());
    for (int c = 0; c < colors; ++c)
      if (violates(counts[static_cast<std::size_t>(c)], base[static_cast<std::size_t>(c)], area)) {
        record(std::move(wa), std::move(wb), c, counts[static_cast<std::size_t>(c)]);
        return true;
      }
    return false;
  };
  // Degree-sorted candidates first: they find planted splits quickly.
  for (int c = 0; c < colors; ++c) {
    for (int dir = 0; dir < 2; ++dir) {
      std::vector<std::pair<std::int64_t, Vertex>> deg;
      for (Vertex u : a) {
        std::int64_t d = 0;
        for (Vertex v : b) d += g.color(u, v) == c;
        deg.emplace_back(dir ? -d : d, u);
      }
      std::sort(deg.begin(), deg.end(), std::greater<>());
      std::vector<Vertex> wa;
      for (int i = 0; i < min_a; ++i) wa.push_back(deg[static_cast<std::size_t>(i)].second);
      std::sort(wa.begin(), wa.end());
      std::vector<std::pair<std::int64_t, Vertex>> degb;
      for (Vertex v : b) {
        std::int64_t d = 0;
        for (Vertex u : wa) d += g.color(u, v) == c;
        degb.emplace_back(dir ? -d : d, v);
      }
      std::sort(degb.begin(), degb.end(), std::greater<>());
      std::vector<Vertex> wb;
      for (int j = 0; j < min_b; ++j) wb.push_back(degb[static_cast<std::size_t>(j)].second);
      std::sort(wb.begin(), wb.end());
      if (test(std::move(wa), std::move(wb))) return verdict;
    }
  }
  std::vector<int> ia(a.begin(), a.end()), ib(b.begin(), b.end());
  for (int s = 0; s < samples; ++s) {
    const int sa = min_a + static_cast<int>(rng->below(static_cast<std::uint64_t>(na - min_a + 1)));
    const int sb = min_b + static_cast<int>(rng->below(static_cast<std::uint64_t>(nb - min_b + 1)));
    if (test(sample_sorted_subset(ia, sa, *rng), sample_sorted_subset(ib, sb, *rng))) return verdict;
  }
  return verdict;
}

Rational closeness(const Partition& p, const Partition& q) {
  if (p.n() != q.n()) throw InputError("closeness needs partitions of the same set");
  if (p.n() == 0) return Rational(0);
  std::int64_t diff = 0;
  for (int v = 0; v < p.n(); ++v) diff += p.label(v) != q.label(v);
  return Rational(diff, p.n());
}

int SizeBudget::operator()(int k) const {
  auto it = table.find(k);
  if (it != table.end()) return it->second;
  return multiplier * k;
}

std::pair<Partition, RobustnessTrace> refine_to_robust(const OrderedGraph& g, const Partition& initial,
                                                       const RobustConfig& cfg) {
  if (initial.n() != g.n()) throw InputError("partition does not cover the graph's vertices");
  if (!initial.is_equitable()) throw InputError("refine_to_robust needs an equitable starting partition");
  if (cfg.gamma <= 0) throw InputError("gamma must be positive");
  if (cfg.search == SearchMode::exhaustive && g.n() > cfg.exhaustive_cap_graph)
    throw CapacityError("exhaustive robust search limited to n <= " + std::to_string(cfg.exhaustive_cap_graph));

  RobustnessTrace trace;
  Partition cur = initial;
  Rational cur_index = index_partition(g, cur);
  trace.iterations.push_back({cur.k(), cur_index});
  Rng rng = Rng(cfg.seed).derive("refine_to_robust");
  const int max_moves = clamp_budget_iterations(cfg.gamma);
  bool certified = cfg.search == SearchMode::exhaustive;

  for (int move = 0; move < max_moves; ++move) {
    const std::int64_t remaining = cfg.budget - trace.budget_used;
    if (remaining <= 0) {
      trace.budget_exhausted = true;
      certified = false;
      break;
    }
    const int max_parts = cfg.f(cur.k());
    StepResult step = cfg.search == SearchMode::exhaustive
                          ? exhaustive_step(g, cur, max_parts, remaining)
                          : local_step(g, cur, max_parts, std::max<std::int64_t>(1, remaining / std::max(1, max_moves - move)), rng);
    trace.budget_used += step.used;
    if (step.exhausted) {
      trace.budget_exhausted = true;
      certified = false;
    }
    if (!step.best) break;
    const Rational cand = index_partition(g, *step.best);
    if (cand > cur_index + cfg.gamma) {
      cur = *step.best;
      cur_index = cand;
      trace.iterations.push_back({cur.k(), cur_index});
      continue;
    }
    break;
  }
  trace.certified = certified && !trace.budget_exhausted;
  return {cur, trace};
}

std::pair<IntervalPartition, RobustnessTrace> refine_to_robust(std::span<const int> s, int num_symbols,
                                                               const IntervalPartition& initial, const RobustConfig& cfg) {
  if (initial.n() != static_cast<int>(s.size())) throw InputError("interval partition does not cover the string");
  if (cfg.gamma <= 0) throw InputError("gamma must be positive");
  if (cfg.search == SearchMode::exhaustive && initial.n() > cfg.exhaustive_cap_string)
    throw CapacityError("exhaustive string search limited to length " + std::to_string(cfg.exhaustive_cap_string));
  RobustnessTrace trace;
  IntervalPartition cur = initial;
  Rational cur_index = index_string_partition(s, num_symbols, cur);
  trace.iterations.push_back({cur.k(), cur_index});
  const int max_moves = clamp_budget_iterations(cfg.gamma);
  for (int move = 0; move < max_moves; ++move) {
    std::optional<IntervalPartition> best;
    Rational best_index = -1;
    const int max_parts = std::min(cfg.f(cur.k()), cur.n());
    for (int target = cur.k() + 1; target <= max_parts; ++target) {
      if (trace.budget_used >= cfg.budget) {
        trace.budget_exhausted = true;
        break;
      }
      auto cand = canonical_interval_refinement(cur, target);
      if (!cand) continue;
      ++trace.budget_used;
      Rational value = index_string_partition(s, num_symbols, *cand);
      if (value > best_index) {
        best_index = value;
        best = std::move(cand);
      }
    }
    if (!best || best_index <= cur_index + cfg.gamma) break;
    cur = std::move(*best);
    cur_index = best_index;
    trace.iterations.push_back({cur.k(), cur_index});
  }
  trace.certified = cfg.search == SearchMode::exhaustive && !trace.budget_exhausted;
  return {cur, trace};
}

RobustnessAudit audit_robustness(const OrderedGraph& g, const Partition& p, const RobustConfig& cfg) {
  RobustnessAudit audit;
  audit.base_index = index_partition(g, p);
  audit.best_index = audit.base_index;
  audit.best_k = p.k();
  const bool exhaustive = cfg.search == SearchMode::exhaustive;
  if (exhaustive && g.n() > cfg.exhaustive_cap_graph)
    throw CapacityError("exhaustive robust search limited to n <= " + std::to_string(cfg.exhaustive_cap_graph));
  Rng rng = Rng(cfg.seed).derive("audit_robustness");
  StepResult step = exhaustive ? exhaustive_step(g, p, cfg.f(p.k()), cfg.budget) : local_step(g, p, cfg.f(p.k()), cfg.budget, rng);
  audit.budget_used = step.used;
  audit.certified = exhaustive && !step.exhausted;
  if (step.best) {
    const Rational v = index_partition(g, *step.best);
    if (v > audit.best_index) {
      audit.best_index = v;
      audit.best_k = step.best->k();
    }
  }
  return audit;
}

Partition align_refinement(const Partition& p, const Partition& q, const Partition& q_ref) {
  const int n = p.n();
  if (q.n() != n || q_ref.n() != n) throw InputError("align_refinement: partitions cover different sets");
  if (p.k() != q.k()) throw InputError("align_refinement: p and q differ in size");
  if (!q_ref.refines(q)) throw InputError("align_refinement: q_ref does not refine q");
  if (!q_ref.is_equitable()) throw InputError("align_refinement: q_ref is not equitable");
  const int k = p.k();

  // Pieces of q_ref grouped under their q parent, in label order.
  std::vector<int> parent(static_cast<std::size_t>(q_ref.k()), -1);
  for (int v = 0; v < n; ++v) parent[static_cast<std::size_t>(q_ref.label(v))] = q.label(v);
  std::vector<std::vector<int>> pieces(static_cast<std::size_t>(k));
  for (int l = 0; l < q_ref.k(); ++l) {
    if (parent[static_cast<std::size_t>(l)] < 0) throw InputError("align_refinement: q_ref has an empty part");
    pieces[static_cast<std::size_t>(parent[static_cast<std::size_t>(l)])].push_back(l);
  }
  const auto vsizes = p.part_sizes();
  std::vector<std::int64_t> w(static_cast<std::size_t>(q_ref.k()), 0);  // |W_ij|
  for (int v = 0; v < n; ++v)
    if (p.label(v) == q.label(v)) ++w[static_cast<std::size_t>(q_ref.label(v))];

  // Ground elements are the q_ref labels; M groups them by parent.
  std::vector<Rational> lambda(static_cast<std::size_t>(q_ref.k()));
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < k; ++i) {
    if (pieces[static_cast<std::size_t>(i)].empty()) {
      if (vsizes[static_cast<std::size_t>(i)] > 0) throw InputError("align_refinement: a non-empty part of p has no pieces to follow");
      continue;
    }
    const auto r = static_cast<std::int64_t>(pieces[static_cast<std::size_t>(i)].size());
    for (int l : pieces[static_cast<std::size_t>(i)])
      lambda[static_cast<std::size_t>(l)] = Rational(vsizes[static_cast<std::size_t>(i)], r) - w[static_cast<std::size_t>(l)];
    rows.push_back(pieces[static_cast<std::size_t>(i)]);
  }
  const int L = q_ref.k();
  auto ell = round_two(lambda, complete_multipartition(L, rows), complete_multipartition(L, {})).values;

  // A -1 can appear; move a unit from a piece rounded up.
  for (const auto& row : rows) {
    for (int l : row) {
      while (ell[static_cast<std::size_t>(l)] < 0) {
        bool moved = false;
        for (int l2 : row) {
          const auto& lam = lambda[static_cast<std::size_t>(l2)];
          if (l2 != l && ell[static_cast<std::size_t>(l2)] > 0 && !is_integer(lam) && BigInt(ell[static_cast<std::size_t>(l2)]) == ceil_of(lam)) {
            --ell[static_cast<std::size_t>(l2)];
            ++ell[static_cast<std::size_t>(l)];
            moved = true;
            break;
          }
        }
        if (!moved) throw InputError("align_refinement: no piece can absorb a negative rounding; |p_i| and |q_i| differ too much");
      }
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<Vertex>> leftovers(static_cast<std::size_t>(k));
  for (int v = 0; v < n; ++v) {
    if (p.label(v) == q.label(v)) labels[static_cast<std::size_t>(v)] = q_ref.label(v);
    else leftovers[static_cast<std::size_t>(p.label(v))].push_back(v);
  }
  for (int i = 0; i < k; ++i) {
    std::size_t pos = 0;
    for (int l : pieces[static_cast<std::size_t>(i)])
      for (std::int64_t x = 0; x < ell[static_cast<std::size_t>(l)]; ++x) {
        if (pos >= leftovers[static_cast<std::size_t>(i)].size()) throw InternalError("align_refinement: leftover count mismatch");
        labels[static_cast<std::size_t>(leftovers[static_cast<std::size_t>(i)][pos++])] = l;
      }
    if (pos != leftovers[static_cast<std::size_t>(i)].size()) throw InternalError("align_refinement: leftover count mismatch");
  }
  Partition out(std::move(labels), q_ref.k());
  if (!out.is_equitable() || out.has_empty_part())
    throw InputError("align_refinement: the construction cannot keep the refinement equitable when part sizes of p and q differ");
  if (!out.refines(p)) throw InternalError("align_refinement: result does not refine p");
  return out;
}

}  // namespace ogt
