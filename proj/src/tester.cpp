#include "ogt/tester.hpp"

#include "ogt/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace ogt {

namespace {

void check_count_cap(int n, int q) {
  if (binomial_u64(n, q) > kCountCap)
    throw CapacityError("enumeration of C(" + std::to_string(n) + "," + std::to_string(q) + ") subsets exceeds the cap");
}

// Depth-first extension of a partial copy of f over candidate positions
// vertices[from..]. Returns the number of completions, or stops at the first
// one when `first` is set.
struct Extender {
  const OrderedGraph& g;
  const OrderedGraph& f;
  const std::vector<Vertex>& vertices;
  std::vector<Vertex> chosen;
  bool first_only = false;
  bool found = false;

  std::uint64_t run(std::size_t from) {
    const std::size_t depth = chosen.size();
    const std::size_t q = static_cast<std::size_t>(f.n());
    if (depth == q) {
      found = true;
      return 1;
    }
    std::uint64_t total = 0;
    for (std::size_t idx = from; idx + (q - depth) <= vertices.size(); ++idx) {
      const Vertex v = vertices[idx];
      bool ok = true;
      for (std::size_t p = 0; p < depth && ok; ++p)
        if (g.color(chosen[p], v) != f.color(static_cast<Vertex>(p), static_cast<Vertex>(depth))) ok = false;
      if (!ok) continue;
      chosen.push_back(v);
      total += run(idx + 1);
      if (first_only && found) return total;
      chosen.pop_back();
    }
    return total;
  }
};

std::vector<Vertex> iota_vertices(int n) {
  std::vector<Vertex> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

void check_pattern_alphabet(const OrderedGraph& g, const OrderedGraph& f) {
  if (!(g.alphabet() == f.alphabet())) throw InputError("pattern and graph use different alphabets");
}

}  // namespace

std::uint64_t binomial_u64(std::int64_t n, std::int64_t q) {
  if (q < 0 || q > n) return 0;
  q = std::min(q, n - q);
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= q; ++i) {
    r = r * static_cast<unsigned __int128>(n - q + i) / static_cast<unsigned __int128>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

BigInt count_induced_ordered(const OrderedGraph& g, const OrderedGraph& f) {
  check_pattern_alphabet(g, f);
  check_count_cap(g.n(), f.n());
  if (f.n() > g.n()) return 0;
  const auto all = iota_vertices(g.n());
  Extender ex{g, f, all, {}};
  return BigInt(ex.run(0));
}

BigInt count_induced_ordered_parallel(const OrderedGraph& g, const OrderedGraph& f) {
  check_pattern_alphabet(g, f);
  check_count_cap(g.n(), f.n());
  const int n = g.n(), q = f.n();
  if (q > n) return 0;
  if (q == 0) return 1;
  const auto all = iota_vertices(n);
  std::uint64_t total = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : total)
  for (int lead = 0; lead <= n - q; ++lead) {
    Extender ex{g, f, all, {lead}};
    total += ex.run(static_cast<std::size_t>(lead) + 1);
  }
  return BigInt(total);
}

BigInt count_induced_ordered_colex(const OrderedGraph& g, const OrderedGraph& f) {
  check_pattern_alphabet(g, f);
  check_count_cap(g.n(), f.n());
  const int n = g.n(), q = f.n();
  if (q > n) return 0;
  if (q == 0) return 1;
  std::vector<int> c(static_cast<std::size_t>(q));
  std::iota(c.begin(), c.end(), 0);
  std::uint64_t total = 0;
  for (;;) {
    bool match = true;
    for (int a = 0; a < q && match; ++a)
      for (int b = a + 1; b < q && match; ++b)
        if (g.color(c[static_cast<std::size_t>(a)], c[static_cast<std::size_t>(b)]) != f.color(a, b)) match = false;
    total += match;
    // Next combination in colex order.
    int i = 0;
    while (i < q - 1 && c[static_cast<std::size_t>(i)] + 1 == c[static_cast<std::size_t>(i) + 1]) {
      c[static_cast<std::size_t>(i)] = i;
      ++i;
    }
    if (++c[static_cast<std::size_t>(i)] >= n) break;
  }
  return BigInt(total);
}

std::optional<PatternHit> contains_any_in(const OrderedGraph& g, const ForbiddenFamily& fam, const std::vector<Vertex>& vertices) {
  for (std::size_t p = 0; p < fam.patterns.size(); ++p) {
    const auto& f = fam.patterns[p];
    check_pattern_alphabet(g, f);
    if (f.n() > static_cast<int>(vertices.size())) continue;
    check_count_cap(static_cast<int>(vertices.size()), f.n());
    Extender ex{g, f, vertices, {}, true};
    ex.run(0);
    if (ex.found) return PatternHit{static_cast<int>(p), ex.chosen};
  }
  return std::nullopt;
}

std::optional<PatternHit> contains_any(const OrderedGraph& g, const ForbiddenFamily& fam) {
  return contains_any_in(g, fam, iota_vertices(g.n()));
}

TestReport sample_test(const OrderedGraph& g, const ForbiddenFamily& fam, int q, int trials, std::uint64_t seed) {
  if (q > g.n()) throw InputError("q exceeds the number of vertices");
  if (q < fam.max_pattern_size()) throw InputError("q is smaller than the largest pattern");
  if (trials < 0) throw InputError("negative trial count");
  TestReport r;
  r.trials = trials;
  r.seed = seed;
  r.q = q;
  const Rng base(seed);
  for (int i = 0; i < trials; ++i) {
    Rng stream = base.derive("sample_test", static_cast<std::uint64_t>(i));
    const auto sample = sample_sorted_subset(g.n(), q, stream);
    if (auto hit = contains_any_in(g, fam, sample)) {
      ++r.rejections;
      if (!r.first_witness) {
        r.first_witness = std::move(hit);
        r.first_rejecting_trial = i;
      }
    }
  }
  r.reject = r.rejections > 0;
  return r;
}

TestReport sample_test_parallel(const OrderedGraph& g, const ForbiddenFamily& fam, int q, int trials, std::uint64_t seed) {
  if (q > g.n()) throw InputError("q exceeds the number of vertices");
  if (q < fam.max_pattern_size()) throw InputError("q is smaller than the largest pattern");
  if (trials < 0) throw InputError("negative trial count");
  // Validate alphabets and caps once, outside the parallel region.
  for (const auto& f : fam.patterns) {
    check_pattern_alphabet(g, f);
    check_count_cap(q, f.n());
  }
  std::vector<std::optional<PatternHit>> hits(static_cast<std::size_t>(trials));
  const Rng base(seed);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < trials; ++i) {
    Rng stream = base.derive("sample_test", static_cast<std::uint64_t>(i));
    const auto sample = sample_sorted_subset(g.n(), q, stream);
    hits[static_cast<std::size_t>(i)] = contains_any_in(g, fam, sample);
  }
  TestReport r;
  r.trials = trials;
  r.seed = seed;
  r.q = q;
  for (int i = 0; i < trials; ++i)
    if (hits[static_cast<std::size_t>(i)]) {
      ++r.rejections;
      if (!r.first_witness) {
        r.first_witness = hits[static_cast<std::size_t>(i)];
        r.first_rejecting_trial = i;
      }
    }
  r.reject = r.rejections > 0;
  return r;
}

BigInt count_witness_sets(const OrderedGraph& g, const ForbiddenFamily& fam, int q) {
  const int n = g.n();
  if (q > n || q < 0) return 0;
  check_count_cap(n, q);
  std::vector<int> c(static_cast<std::size_t>(q));
  std::iota(c.begin(), c.end(), 0);
  std::uint64_t total = 0;
  if (q == 0) return contains_any_in(g, fam, {}) ? 1 : 0;
  for (;;) {
    total += contains_any_in(g, fam, c).has_value();
    int i = 0;
    while (i < q - 1 && c[static_cast<std::size_t>(i)] + 1 == c[static_cast<std::size_t>(i) + 1]) {
      c[static_cast<std::size_t>(i)] = i;
      ++i;
    }
    if (++c[static_cast<std::size_t>(i)] >= n) break;
  }
  return BigInt(total);
}

// ---------------------------------------------------------------- distance

namespace {

std::uint64_t total_copies(const OrderedGraph& g, const ForbiddenFamily& fam) {
  std::uint64_t s = 0;
  for (const auto& f : fam.patterns) s += static_cast<std::uint64_t>(count_induced_ordered(g, f));
  return s;
}

// Iterative-deepening search: some pair of every remaining copy must end in a
// different color, and a recolored pair is never touched again.
bool exact_search(OrderedGraph& g, const ForbiddenFamily& fam, std::vector<char>& locked, int budget) {
  auto hit = contains_any(g, fam);
  if (!hit) return true;
  if (budget == 0) return false;
  const auto& f = fam.patterns[static_cast<std::size_t>(hit->pattern)];
  const int q = f.n();
  const int n = g.n();
  for (int a = 0; a < q; ++a)
    for (int b = a + 1; b < q; ++b) {
      const Vertex u = hit->tuple[static_cast<std::size_t>(a)], v = hit->tuple[static_cast<std::size_t>(b)];
      const std::size_t key = static_cast<std::size_t>(u) * static_cast<std::size_t>(n) + static_cast<std::size_t>(v);
      if (locked[key]) continue;
      const Color old = g.color(u, v);
      locked[key] = 1;
      for (Color c = 0; c < g.alphabet().size(); ++c) {
        if (c == old) continue;
        g.set_color(u, v, c);
        if (exact_search(g, fam, locked, budget - 1)) return true;
      }
      g.set_color(u, v, old);
      locked[key] = 0;
    }
  return false;
}

}  // namespace

DistanceResult distance_to_freeness(const OrderedGraph& g, const ForbiddenFamily& fam, DistanceMethod method) {
  fam.validate();
  const int n = g.n();
  const std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
  DistanceResult res;
  res.repaired = g;
  if (method == DistanceMethod::greedy) {
    res.is_bound = true;
    std::uint64_t copies = total_copies(res.repaired, fam);
    while (copies > 0) {
      auto hit = contains_any(res.repaired, fam);
      const auto& f = fam.patterns[static_cast<std::size_t>(hit->pattern)];
      std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
      Vertex bu = -1, bv = -1;
      Color bc = kNoColor;
      for (int a = 0; a < f.n(); ++a)
        for (int b = a + 1; b < f.n(); ++b) {
          const Vertex u = hit->tuple[static_cast<std::size_t>(a)], v = hit->tuple[static_cast<std::size_t>(b)];
          const Color old = res.repaired.color(u, v);
          for (Color c = 0; c < g.alphabet().size(); ++c) {
            if (c == old) continue;
            res.repaired.set_color(u, v, c);
            const auto after = total_copies(res.repaired, fam);
            if (after < best) {
              best = after;
              bu = u;
              bv = v;
              bc = c;
            }
          }
          res.repaired.set_color(u, v, old);
        }
      if (bu < 0) throw InputError("family contains a pattern no recoloring can break");
      res.repaired.set_color(bu, bv, bc);
      copies = best;
    }
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) res.recolorings += res.repaired.color(u, v) != g.color(u, v);
  } else {
    if (n > kExactDistanceCap || g.alphabet().size() > 3)
      throw CapacityError("exact distance limited to n <= 8 and at most 3 colors");
    std::vector<char> locked(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
    int depth = 0;
    for (;; ++depth) {
      OrderedGraph work = g;
      std::fill(locked.begin(), locked.end(), 0);
      if (exact_search(work, fam, locked, depth)) {
        res.repaired = std::move(work);
        break;
      }
      if (depth > pairs) throw InputError("family cannot be avoided on this vertex count");
    }
    res.recolorings = depth;
  }
  res.distance = pairs == 0 ? Rational(0) : Rational(res.recolorings, pairs);
  return res;
}

// ---------------------------------------------------------------- matrices

std::optional<MatrixHit> matrix_contains_any(const MatrixGrid& m, const MatrixFamily& fam, const std::vector<int>& rows,
                                             const std::vector<int>& cols) {
  for (std::size_t p = 0; p < fam.patterns.size(); ++p) {
    const auto& pat = fam.patterns[p];
    const int a = pat.rows(), b = pat.cols();
    if (a > static_cast<int>(rows.size()) || b > static_cast<int>(cols.size())) continue;
    std::vector<int> rc(static_cast<std::size_t>(a));
    std::iota(rc.begin(), rc.end(), 0);
    for (;;) {
      // Greedy leftmost column match is exact for ordered submatrices:
      // each pattern column takes the first later column that fits.
      std::vector<int> picked;
      std::size_t next = 0;
      for (int pc = 0; pc < b; ++pc) {
        bool placed = false;
        for (; next < cols.size(); ++next) {
          bool ok = true;
          for (int pr = 0; pr < a && ok; ++pr)
            if (m.at(rows[static_cast<std::size_t>(rc[static_cast<std::size_t>(pr)])], cols[next]) != pat.at(pr, pc)) ok = false;
          if (ok) {
            picked.push_back(cols[next++]);
            placed = true;
            break;
          }
        }
        if (!placed) break;
      }
      if (static_cast<int>(picked.size()) == b) {
        MatrixHit hit;
        hit.pattern = static_cast<int>(p);
        for (int r : rc) hit.rows.push_back(rows[static_cast<std::size_t>(r)]);
        hit.cols = std::move(picked);
        return hit;
      }
      // Next row combination in lexicographic order.
      int i = a - 1;
      while (i >= 0 && rc[static_cast<std::size_t>(i)] == static_cast<int>(rows.size()) - a + i) --i;
      if (i < 0) break;
      ++rc[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < a; ++j) rc[static_cast<std::size_t>(j)] = rc[static_cast<std::size_t>(j) - 1] + 1;
    }
  }
  return std::nullopt;
}

namespace {

void check_matrix_inputs(const MatrixGrid& m, const MatrixFamily& fam, int q) {
  fam.validate();
  if (!(m.alphabet() == fam.alphabet)) throw InputError("matrix and family use different alphabets");
  if (q > m.rows() || q > m.cols()) throw InputError("q exceeds the matrix rows or columns");
  if (q < fam.max_side()) throw InputError("q is smaller than the largest pattern side");
}

std::pair<std::vector<int>, std::vector<int>> matrix_trial_sample(const MatrixGrid& m, int q, const Rng& base, int trial) {
  Rng stream = base.derive("matrix_test", static_cast<std::uint64_t>(trial));
  auto rows = sample_sorted_subset(m.rows(), q, stream);
  auto cols = sample_sorted_subset(m.cols(), q, stream);
  return {std::move(rows), std::move(cols)};
}

}  // namespace

MatrixTestReport matrix_test(const MatrixGrid& m, const MatrixFamily& fam, int q, int trials, std::uint64_t seed) {
  check_matrix_inputs(m, fam, q);
  MatrixTestReport r;
  r.trials = trials;
  r.seed = seed;
  r.q = q;
  const Rng base(seed);
  for (int i = 0; i < trials; ++i) {
    auto [rows, cols] = matrix_trial_sample(m, q, base, i);
    auto hit = matrix_contains_any(m, fam, rows, cols);
    r.per_trial.push_back(hit.has_value());
    if (hit) {
      ++r.rejections;
      if (!r.first_witness) r.first_witness = std::move(hit);
    }
  }
  r.reject = r.rejections > 0;
  return r;
}

ReductionTestReport matrix_test_via_graph(const MatrixGrid& m, const MatrixFamily& fam, int q, int trials, std::uint64_t seed) {
  check_matrix_inputs(m, fam, q);
  const MatrixReduction red = matrix_to_graph(m);
  ForbiddenFamily gfam;
  gfam.alphabet = red.graph.alphabet();
  for (const auto& p : fam.patterns) {
    // Re-express the pattern over the reduced alphabet (same symbols, sigma0 appended).
    MatrixGrid widened(gfam.alphabet, p.rows(), p.cols());
    for (int r = 0; r < p.rows(); ++r)
      for (int c = 0; c < p.cols(); ++c) widened.set(r, c, p.at(r, c));
    auto pg = matrix_to_graph(widened).graph;
    // matrix_to_graph appended a second fresh symbol; map it back to sigma0.
    OrderedGraph pat(gfam.alphabet, pg.n(), red.sigma0);
    for (int u = 0; u < pg.n(); ++u)
      for (int v = u + 1; v < pg.n(); ++v) {
        const Color c = pg.color(u, v);
        pat.set_color(u, v, c < gfam.alphabet.size() ? c : red.sigma0);
      }
    gfam.patterns.push_back(std::move(pat));
  }
  ReductionTestReport out;
  auto& r = out.report;
  r.trials = trials;
  r.seed = seed;
  r.q = q;
  const Rng base(seed);
  for (int i = 0; i < trials; ++i) {
    auto [rows, cols] = matrix_trial_sample(m, q, base, i);
    std::vector<Vertex> verts(rows.begin(), rows.end());
    for (int c : cols) verts.push_back(m.rows() + c);
    auto hit = contains_any_in(red.graph, gfam, verts);
    r.per_trial.push_back(hit.has_value());
    if (!hit) continue;
    ++r.rejections;
    const auto& p = fam.patterns[static_cast<std::size_t>(hit->pattern)];
    MatrixHit mh;
    mh.pattern = hit->pattern;
    for (int x = 0; x < p.rows(); ++x) mh.rows.push_back(hit->tuple[static_cast<std::size_t>(x)]);
    for (int y = 0; y < p.cols(); ++y) mh.cols.push_back(hit->tuple[static_cast<std::size_t>(p.rows() + y)] - m.rows());
    for (int x = 0; x < p.rows(); ++x)
      for (int y = 0; y < p.cols(); ++y)
        if (red.graph.color(hit->tuple[static_cast<std::size_t>(x)], hit->tuple[static_cast<std::size_t>(p.rows() + y)]) == red.sigma0)
          out.sigma0_in_witness = true;
    for (int x : mh.rows)
      if (x < 0 || x >= m.rows()) out.sigma0_in_witness = true;
    for (int y : mh.cols)
      if (y < 0 || y >= m.cols()) out.sigma0_in_witness = true;
    if (!r.first_witness) r.first_witness = std::move(mh);
  }
  r.reject = r.rejections > 0;
  return out;
}

// ---------------------------------------------------------------- generators

OrderedGraph gen_uniform(const ColorAlphabet& alphabet, int n, Rng& rng) {
  OrderedGraph g(alphabet, n, 0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.set_color(u, v, static_cast<Color>(rng.below(static_cast<std::uint64_t>(alphabet.size()))));
  return g;
}

OrderedGraph gen_two_block(const ColorAlphabet& alphabet, int n, Color cross) {
  if (alphabet.size() < 2) throw InputError("two-block graphs need two colors");
  OrderedGraph g(alphabet, n, cross);
  const int half = n / 2;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (v < half) g.set_color(u, v, 0);
      else if (u >= half) g.set_color(u, v, 1);
    }
  return g;
}

OrderedGraph gen_planted(const OrderedGraph& pattern, int n, Color inside, double noise, Rng& rng) {
  const int q = pattern.n();
  if (q < 1 || q > n) throw InputError("planted pattern must have between 1 and n vertices");
  if (noise < 0 || noise > 1) throw InputError("noise must lie in [0, 1]");
  const auto blocks = canonical_interval_equipartition(n, q);
  OrderedGraph g(pattern.alphabet(), n, inside);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const int bu = blocks.part_of(u), bv = blocks.part_of(v);
      Color c = bu == bv ? inside : pattern.color(bu, bv);
      if (noise > 0 && rng.uniform01() < noise) c = static_cast<Color>(rng.below(static_cast<std::uint64_t>(pattern.alphabet().size())));
      g.set_color(u, v, c);
    }
  return g;
}

OrderedGraph gen_free(const ForbiddenFamily& fam, int n, Rng& rng) {
  fam.validate();
  OrderedGraph g = gen_uniform(fam.alphabet, n, rng);
  const int limit = 50 * n * n + 100;
  for (int step = 0; step < limit; ++step) {
    auto hit = contains_any(g, fam);
    if (!hit) return g;
    const auto& f = fam.patterns[static_cast<std::size_t>(hit->pattern)];
    if (f.n() < 2) throw InputError("family contains a single-vertex pattern; no graph avoids it");
    const int pairs = f.n() * (f.n() - 1) / 2;
    int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(pairs)));
    int a = 0, b = 1;
    for (; pick > 0; --pick)
      if (++b == f.n()) b = ++a + 1;
    const Vertex u = hit->tuple[static_cast<std::size_t>(a)], v = hit->tuple[static_cast<std::size_t>(b)];
    Color c = static_cast<Color>(rng.below(static_cast<std::uint64_t>(fam.alphabet.size() - 1)));
    if (c >= g.color(u, v)) ++c;
    g.set_color(u, v, c);
  }
  throw InputError("could not generate a family-free graph within the step limit");
}

MatrixGrid gen_matrix(const ColorAlphabet& alphabet, int rows, int cols, Rng& rng) {
  MatrixGrid m(alphabet, rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m.set(r, c, static_cast<Color>(rng.below(static_cast<std::uint64_t>(alphabet.size()))));
  return m;
}

nlohmann::json test_report_to_json(const TestReport& r) {
  nlohmann::json j = {{"verdict", r.reject ? "reject" : "accept"},
                      {"trials", r.trials},
                      {"rejections", r.rejections},
                      {"seed", r.seed},
                      {"q", r.q}};
  if (r.first_witness) j["witness"] = {{"pattern", r.first_witness->pattern}, {"vertices", r.first_witness->tuple}, {"trial", r.first_rejecting_trial}};
  return j;
}

nlohmann::json matrix_report_to_json(const MatrixTestReport& r) {
  nlohmann::json j = {{"verdict", r.reject ? "reject" : "accept"},
                      {"trials", r.trials},
                      {"rejections", r.rejections},
                      {"seed", r.seed},
                      {"q", r.q}};
  if (r.first_witness)
    j["witness"] = {{"pattern", r.first_witness->pattern}, {"rows", r.first_witness->rows}, {"cols", r.first_witness->cols}};
  return j;
}

}  // namespace ogt
