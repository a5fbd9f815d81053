#include "ogt/threshold.hpp"

#include "ogt/errors.hpp"
#include "ogt/io.hpp"
#include "ogt/metrics.hpp"
#include "ogt/tester.hpp"

#include <algorithm>
#include <map>

namespace ogt {

namespace {

using Json = nlohmann::json;

Rational abs_r(const Rational& x) { return x < 0 ? Rational(-x) : x; }

void check_eta(const OrderedGraph& g, const Rational& eta, const char* name) {
  if (eta <= 0 || eta >= Rational(1, g.alphabet().size()))
    throw InputError(std::string(name) + " must lie strictly between 0 and 1/|Sigma|");
}

ThresholdMatrix matrix_from_counts(const PairCounts& pc, const std::vector<int>& a, const std::vector<int>& b, int colors,
                                   const Rational& eta) {
  const int t = static_cast<int>(a.size());
  ThresholdMatrix mat(t, 0);
  for (int s = 0; s < t; ++s)
    for (int s2 = 0; s2 < t; ++s2) {
      ColorSet set = 0;
      for (Color c = 0; c < colors; ++c)
        if (pc.density(a[static_cast<std::size_t>(s)], b[static_cast<std::size_t>(s2)], c) >= eta) set |= color_bit(c);
      if (set == 0) throw InternalError("threshold matrix entry came out empty");
      mat.set(s, s2, set);
    }
  return mat;
}

// Cell index helpers for a scheme.
struct Layout {
  int m, b, t;
  int cell(int j, int r, int s) const { return (j * b + r) * t + s; }
  int part(int j, int s) const { return j * t + s; }
  std::vector<int> row(int j, int r) const {
    std::vector<int> out;
    for (int s = 0; s < t; ++s) out.push_back(cell(j, r, s));
    return out;
  }
  std::vector<int> parents(int j) const {
    std::vector<int> out;
    for (int s = 0; s < t; ++s) out.push_back(part(j, s));
    return out;
  }
};

std::int64_t choose2(std::int64_t x) { return x * (x - 1) / 2; }

}  // namespace

// ---------------------------------------------------------------- counts

PairCounts::PairCounts(const OrderedGraph& g, const std::vector<std::vector<Vertex>>& sets) : palette_(g.alphabet().size()) {
  const int n = g.n();
  const std::size_t S = sets.size();
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  sizes_.resize(S);
  for (std::size_t x = 0; x < S; ++x) {
    sizes_[x] = static_cast<std::int64_t>(sets[x].size());
    for (Vertex v : sets[x]) {
      if (v < 0 || v >= n) throw InputError("set vertex out of range");
      if (owner[static_cast<std::size_t>(v)] != -1) throw InputError("sets must be disjoint");
      owner[static_cast<std::size_t>(v)] = static_cast<int>(x);
    }
  }
  const std::size_t P = static_cast<std::size_t>(palette_);
  counts_.assign(S * S * P, 0);
  std::vector<Vertex> members;
  for (int v = 0; v < n; ++v)
    if (owner[static_cast<std::size_t>(v)] >= 0) members.push_back(v);
  for (std::size_t a = 0; a < members.size(); ++a) {
    const Vertex u = members[a];
    const std::size_t x = static_cast<std::size_t>(owner[static_cast<std::size_t>(u)]);
    const Color* row = g.grid().row(u);
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const Vertex v = members[b];
      const std::size_t y = static_cast<std::size_t>(owner[static_cast<std::size_t>(v)]);
      if (x == y) continue;
      const std::size_t c = static_cast<std::size_t>(row[v]);
      ++counts_[(x * S + y) * P + c];
      ++counts_[(y * S + x) * P + c];
    }
  }
}

std::int64_t PairCounts::count(int x, int y, Color c) const {
  const std::size_t S = sizes_.size();
  return counts_[(static_cast<std::size_t>(x) * S + static_cast<std::size_t>(y)) * static_cast<std::size_t>(palette_) + static_cast<std::size_t>(c)];
}

Rational PairCounts::density(int x, int y, Color c) const {
  const std::int64_t den = size(x) * size(y);
  if (den == 0) return 0;
  return Rational(count(x, y, c), den);
}

ThresholdMatrix threshold_matrix(const OrderedGraph& g, const std::vector<std::vector<Vertex>>& a,
                                 const std::vector<std::vector<Vertex>>& b, const Rational& eta) {
  check_eta(g, eta, "eta");
  if (a.size() != b.size() || a.empty()) throw InputError("threshold_matrix needs two tuples of equal positive length");
  for (const auto& x : a)
    if (x.empty()) throw InputError("threshold_matrix sets must be non-empty");
  for (const auto& x : b)
    if (x.empty()) throw InputError("threshold_matrix sets must be non-empty");
  std::vector<std::vector<Vertex>> sets(a);
  sets.insert(sets.end(), b.begin(), b.end());
  const PairCounts pc(g, sets);
  const int t = static_cast<int>(a.size());
  std::vector<int> ia(static_cast<std::size_t>(t)), ib(static_cast<std::size_t>(t));
  for (int s = 0; s < t; ++s) {
    ia[static_cast<std::size_t>(s)] = s;
    ib[static_cast<std::size_t>(s)] = t + s;
  }
  return matrix_from_counts(pc, ia, ib, g.alphabet().size(), eta);
}

// ---------------------------------------------------------------- representatives

std::vector<std::vector<Vertex>> scheme_cells(const RegularityScheme& s) { return s.Q_dprime.parts(); }
std::vector<std::vector<Vertex>> scheme_parts(const RegularityScheme& s) { return s.Q_prime.parts(); }

Rational cell_deviation(const OrderedGraph& g, const std::vector<std::vector<Vertex>>& w,
                        const std::vector<std::vector<Vertex>>& a) {
  if (w.size() != a.size()) throw InputError("cell_deviation: tuples differ in length");
  const int L = static_cast<int>(w.size());
  if (L < 2) return 0;
  const PairCounts pw(g, w), pa(g, a);
  Rational sum = 0;
  for (int x = 0; x < L; ++x)
    for (int y = x + 1; y < L; ++y)
      for (Color c = 0; c < g.alphabet().size(); ++c) sum += abs_r(pw.density(x, y, c) - pa.density(x, y, c));
  return sum / choose2(L);
}

Rational parent_deviation(const OrderedGraph& g, const RegularityScheme& s, const std::vector<std::vector<Vertex>>& w) {
  const Layout lay{s.m, s.b, s.t};
  const int parts = s.m * s.t;
  if (parts < 2) return 0;
  const PairCounts pw(g, w), pp(g, scheme_parts(s));
  Rational sum = 0;
  for (int x = 0; x < parts; ++x)
    for (int y = x + 1; y < parts; ++y)
      for (int r = 0; r < s.b; ++r)
        for (int r2 = 0; r2 < s.b; ++r2) {
          const int cx = lay.cell(x / s.t, r, x % s.t), cy = lay.cell(y / s.t, r2, y % s.t);
          for (Color c = 0; c < g.alphabet().size(); ++c) sum += abs_r(pw.density(cx, cy, c) - pp.density(x, y, c));
        }
  return sum / (Rational(choose2(parts)) * s.b * s.b);
}

RepresentativeTuple representatives(const OrderedGraph& g, const RegularityScheme& s, RepresentativeStrategy strategy,
                                    const RepresentativeParams& params, Rng& rng) {
  const auto cells = scheme_cells(s);
  const int n = g.n();
  std::size_t min_cell = n;
  for (const auto& c : cells) min_cell = std::min(min_cell, c.size());
  RepresentativeTuple out;
  if (strategy == RepresentativeStrategy::full) {
    out.cells = cells;
    out.quality.measured = false;
    out.quality.alpha = Rational(static_cast<std::int64_t>(min_cell), n);
    out.quality.mu_cells = 0;
    out.quality.mu_parents = parent_deviation(g, s, out.cells);
    return out;
  }
  if (params.alpha < 0) throw InputError("alpha must be non-negative");
  const int size = std::max<int>(1, static_cast<int>(ceil_i64(params.alpha * n)));
  if (static_cast<std::size_t>(size) > min_cell) throw InputError("alpha too large for the cell sizes");
  Rational best_score = -1;
  for (int it = 0; it < std::max(1, params.budget); ++it) {
    std::vector<std::vector<Vertex>> cand;
    cand.reserve(cells.size());
    for (const auto& c : cells) cand.push_back(sample_sorted_subset(c, size, rng));
    const Rational mc = cell_deviation(g, cand, cells);
    const Rational mp = parent_deviation(g, s, cand);
    if (best_score < 0 || mc + mp < best_score) {
      best_score = mc + mp;
      out.cells = std::move(cand);
      out.quality.mu_cells = mc;
      out.quality.mu_parents = mp;
    }
  }
  out.quality.measured = true;
  out.quality.alpha = Rational(size, n);
  // Smallest grid eps passing the sampled check on the probed pairs.
  const int L = static_cast<int>(out.cells.size());
  std::vector<std::pair<int, int>> probes;
  for (int p = 0; p < params.regularity_pairs && L >= 2; ++p) {
    int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(L)));
    int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(L - 1)));
    if (y >= x) ++y;
    probes.emplace_back(x, y);
  }
  for (const Rational& eps : {Rational(1, 20), Rational(1, 10), Rational(1, 5), Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(1)}) {
    bool all = true;
    for (auto [x, y] : probes) {
      Rng probe = rng.derive("regularity_probe", static_cast<std::uint64_t>(x * L + y));
      const auto& a = out.cells[static_cast<std::size_t>(x)];
      const auto& b = out.cells[static_cast<std::size_t>(y)];
      auto verdict = eps_regular(g, a, b, eps, RegularityMode::sampled, &probe, params.regularity_samples);
      if (!verdict.regular) {
        all = false;
        break;
      }
    }
    if (all) {
      out.quality.beta = eps;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------- threshold graphs

KPartiteChart ThresholdGraph::chart() const {
  std::vector<std::vector<Vertex>> classes(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j)
    for (int r = 0; r < b; ++r) classes[static_cast<std::size_t>(j)].push_back(j * b + r);
  return KPartiteChart(std::move(classes), grid);
}

ThresholdGraph threshold_graph(const OrderedGraph& g, const RepresentativeTuple& w, const RegularityScheme& s,
                               const Rational& eta, const Rational& rho) {
  check_eta(g, eta, "eta");
  check_eta(g, rho, "rho");
  if (!(eta < rho)) throw InputError("threshold_graph needs eta < rho");
  const Layout lay{s.m, s.b, s.t};
  if (static_cast<int>(w.cells.size()) != s.m * s.b * s.t) throw InputError("representative tuple does not match the scheme");
  for (std::size_t c = 0; c < w.cells.size(); ++c)
    for (Vertex v : w.cells[c])
      if (s.Q_dprime.label(v) != static_cast<int>(c)) throw InputError("representative leaves its cell");

  ThresholdGraph h;
  h.m = s.m;
  h.b = s.b;
  h.t = s.t;
  h.eta = eta;
  h.rho = rho;
  h.num_colors = g.alphabet().size();
  const int colors = g.alphabet().size();
  const PairCounts pw(g, w.cells);
  const PairCounts pu(g, scheme_parts(s));
  const int V = s.m * s.b;

  std::map<ThresholdMatrix, int> intern;
  std::vector<int> ids(static_cast<std::size_t>(V) * static_cast<std::size_t>(V), -1);
  for (int x = 0; x < V; ++x)
    for (int y = x + 1; y < V; ++y) {
      auto mat = matrix_from_counts(pw, lay.row(x / s.b, x % s.b), lay.row(y / s.b, y % s.b), colors, eta);
      auto [it, fresh] = intern.emplace(std::move(mat), static_cast<int>(h.palette.size()));
      if (fresh) h.palette.push_back(it->first);
      ids[static_cast<std::size_t>(x * V + y)] = it->second;
    }
  h.grid = ColorGrid(V, static_cast<int>(h.palette.size()));
  for (int x = 0; x < V; ++x)
    for (int y = x + 1; y < V; ++y) h.grid.set(x, y, ids[static_cast<std::size_t>(x * V + y)]);

  h.parent.assign(static_cast<std::size_t>(s.m * s.m), ThresholdMatrix());
  for (int j = 0; j < s.m; ++j)
    for (int j2 = j + 1; j2 < s.m; ++j2)
      h.parent[static_cast<std::size_t>(j * s.m + j2)] = matrix_from_counts(pu, lay.parents(j), lay.parents(j2), colors, rho);

  const Rational need = rho * s.t * s.t;
  for (int x = 0; x < V; ++x)
    for (int y = x + 1; y < V; ++y) {
      const int j = x / s.b, j2 = y / s.b;
      if (j == j2) continue;
      const auto& pm = h.parent[static_cast<std::size_t>(j * s.m + j2)];
      const auto& wm = h.color(x, y);
      int bad = 0;
      for (int a = 0; a < s.t; ++a)
        for (int c = 0; c < s.t; ++c) bad += (pm.at(a, c) & ~wm.at(a, c)) != 0;
      if (Rational(bad) >= need) h.undesirable.insert(x, y);
    }

  Rational dev = 0;
  for (int j = 0; j < s.m; ++j)
    for (int j2 = j + 1; j2 < s.m; ++j2)
      for (int a = 0; a < s.t; ++a)
        for (int c = 0; c < s.t; ++c)
          for (int r = 0; r < s.b; ++r)
            for (int r2 = 0; r2 < s.b; ++r2)
              for (Color col = 0; col < colors; ++col)
                dev += abs_r(pw.density(lay.cell(j, r, a), lay.cell(j2, r2, c), col) - pu.density(lay.part(j, a), lay.part(j2, c), col));
  const std::int64_t norm = choose2(s.m) * s.t * s.t * s.b * s.b;
  h.deviation_sum = norm == 0 ? Rational(0) : dev / norm;

  if (V > 0 && !is_orderly(h.chart(), h.undesirable)) throw InternalError("threshold graph undesirable set is not orderly");
  return h;
}

DesirabilityVerdict check_desirable(const ThresholdGraph& h, const Rational& rho) {
  DesirabilityVerdict v;
  v.undesirable_edges = static_cast<std::int64_t>(h.undesirable.size());
  v.limit = rho * choose2(h.m) * h.b * h.b;
  v.desirable = Rational(v.undesirable_edges) < v.limit;
  v.deviation_sum = h.deviation_sum;
  return v;
}

// ---------------------------------------------------------------- nicely colored subgraphs

NicelyColoredSubgraph nicely_colored(const ThresholdGraph& h, int d, Rng& rng, int max_tries, const RamseySizing& sizing,
                                     std::optional<int> inner_size) {
  if (d < 1 || d > h.b) throw InputError("nicely_colored needs 1 <= d <= b");
  NicelyColoredSubgraph out;
  out.m = h.m;
  out.d = d;
  out.t = h.t;
  out.b = h.b;
  out.bound = 2 * h.rho * choose2(h.m) * d * d;
  const ThresholdMatrix full(h.t, full_color_set(h.num_colors));
  out.colors = LoopedGraph(h.m, h.t, full);
  const KPartiteChart chart = h.chart();
  OrderlyResult r = orderly_ramsey(chart, h.undesirable, d, rng, max_tries, sizing, inner_size);
  out.tries = r.tries;
  out.certified = r.certified;
  if (!r.success) {
    out.failure = r.failure.empty() ? "extraction failed" : r.failure;
    return out;
  }
  out.success = true;
  out.retained = r.retained;
  out.D.resize(static_cast<std::size_t>(h.m));
  for (int j = 0; j < h.m; ++j) {
    for (Vertex v : r.u[static_cast<std::size_t>(j)]) out.D[static_cast<std::size_t>(j)].push_back(v - j * h.b);
    if (d >= 2) out.colors.set(j, j, h.palette[static_cast<std::size_t>(r.inner_colors[static_cast<std::size_t>(j)])]);
  }
  for (int j = 0; j < h.m; ++j)
    for (int j2 = j + 1; j2 < h.m; ++j2)
      out.colors.set(j, j2, h.palette[static_cast<std::size_t>(r.cross_colors[static_cast<std::size_t>(j * h.m + j2)])]);
  if (auto err = verify_nicely_colored(h, out); !err.empty()) throw InternalError("nicely_colored: " + err);
  return out;
}

std::string verify_nicely_colored(const ThresholdGraph& h, const NicelyColoredSubgraph& d) {
  if (!d.success) return "extraction reported failure";
  if (static_cast<int>(d.D.size()) != h.m) return "wrong number of interval groups";
  std::int64_t retained = 0;
  for (int j = 0; j < h.m; ++j) {
    const auto& dj = d.D[static_cast<std::size_t>(j)];
    if (static_cast<int>(dj.size()) != d.d) return "group " + std::to_string(j) + " has the wrong size";
    for (std::size_t a = 0; a < dj.size(); ++a) {
      if (dj[a] < 0 || dj[a] >= h.b || (a > 0 && dj[a] <= dj[a - 1])) return "group " + std::to_string(j) + " is not a sorted index set";
      for (std::size_t c = a + 1; c < dj.size(); ++c)
        if (!(h.color(j * h.b + dj[a], j * h.b + dj[c]) == d.colors.at(j, j))) return "group " + std::to_string(j) + " is not uniform inside";
    }
  }
  for (int j = 0; j < h.m; ++j)
    for (int j2 = j + 1; j2 < h.m; ++j2)
      for (int r : d.D[static_cast<std::size_t>(j)])
        for (int r2 : d.D[static_cast<std::size_t>(j2)]) {
          const int x = j * h.b + r, y = j2 * h.b + r2;
          if (!(h.color(x, y) == d.colors.at(j, j2))) return "groups " + std::to_string(j) + "," + std::to_string(j2) + " are not uniform";
          retained += h.undesirable.contains(x, y);
        }
  if (retained != d.retained) return "retained count mismatch";
  if (check_desirable(h, h.rho).desirable && Rational(retained) > d.bound) return "retained undesirable edges exceed 2 rho C(m,2) d^2";
  return {};
}

// ---------------------------------------------------------------- cleaning

ColorSet allowed_colors(const RegularityScheme& s, const NicelyColoredSubgraph& d, Vertex u, Vertex v) {
  if (u > v) std::swap(u, v);
  const int j = s.I.part_of(u), j2 = s.I.part_of(v);
  const int su = s.Q_prime.label(u) % s.t, sv = s.Q_prime.label(v) % s.t;
  return d.colors.at(j, j2).at(su, sv);
}

CleanResult clean(const OrderedGraph& g, const RegularityScheme& s, const NicelyColoredSubgraph& d, const ThresholdGraph& h) {
  if (!d.success) throw InputError("clean needs a successful nicely colored subgraph");
  if (d.m != s.m || d.t != s.t || h.m != s.m || h.b != s.b) throw InputError("nicely colored subgraph does not match the scheme");
  const int n = g.n();
  const int m = s.m;
  CleanResult res{g, {}};
  auto& au = res.audit;

  std::vector<char> in_j(static_cast<std::size_t>(m * m), 0);
  for (int j = 0; j < m; ++j)
    for (int j2 = j + 1; j2 < m; ++j2)
      for (int r : d.D[static_cast<std::size_t>(j)])
        for (int r2 : d.D[static_cast<std::size_t>(j2)])
          if (h.undesirable.contains(j * s.b + r, j2 * s.b + r2)) in_j[static_cast<std::size_t>(j * m + j2)] = 1;

  auto mismatch = [&](int j, int j2, int a, int c) {
    return (h.parent[static_cast<std::size_t>(j * m + j2)].at(a, c) & ~d.colors.at(j, j2).at(a, c)) != 0;
  };

  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      const ColorSet allowed = allowed_colors(s, d, u, v);
      const Color c = g.color(u, v);
      if (has_color(allowed, c)) continue;
      res.graph.set_color(u, v, min_color(allowed));
      ++au.total;
      const int j = s.I.part_of(u), j2 = s.I.part_of(v);
      if (j == j2) ++au.inside_interval;
      else if (in_j[static_cast<std::size_t>(j * m + j2)]) ++au.undesirable_pair;
      else if (mismatch(j, j2, s.Q_prime.label(u) % s.t, s.Q_prime.label(v) % s.t)) ++au.threshold_mismatch;
      else ++au.low_density;
    }

  // Instance bounds per case.
  const auto parts = scheme_parts(s);
  const PairCounts pu(g, parts);
  for (int j = 0; j < m; ++j) {
    au.inside_interval_bound += choose2(s.I.length(j));
    for (int j2 = j + 1; j2 < m; ++j2) {
      if (in_j[static_cast<std::size_t>(j * m + j2)]) {
        ++au.undesirable_interval_pairs;
        au.undesirable_pair_bound += static_cast<std::int64_t>(s.I.length(j)) * s.I.length(j2);
        continue;
      }
      for (int a = 0; a < s.t; ++a)
        for (int c = 0; c < s.t; ++c) {
          const int x = j * s.t + a, y = j2 * s.t + c;
          if (mismatch(j, j2, a, c)) {
            au.threshold_mismatch_bound += pu.size(x) * pu.size(y);
          } else {
            for (Color col = 0; col < g.alphabet().size(); ++col)
              if (pu.density(x, y, col) < h.rho) au.low_density_bound += pu.count(x, y, col);
          }
        }
    }
  }
  au.inside_interval_limit = Rational(2, m) * choose2(n);
  return res;
}

// ---------------------------------------------------------------- witnesses

bool verify_witness(const OrderedGraph& g, const RegularityScheme& s, const RepresentativeTuple& w,
                    const ForbiddenFamily& fam, const Rational& eta, const Witness& wit) {
  if (!wit.failure.empty() || wit.pattern < 0 || wit.pattern >= static_cast<int>(fam.patterns.size())) return false;
  const auto& f = fam.patterns[static_cast<std::size_t>(wit.pattern)];
  if (static_cast<int>(wit.cells.size()) != f.n()) return false;
  for (std::size_t i = 0; i < wit.cells.size(); ++i) {
    const auto& c = wit.cells[i];
    if (c.j < 0 || c.j >= s.m || c.r < 0 || c.r >= s.b || c.s < 0 || c.s >= s.t) return false;
    if (i > 0) {
      const auto& p = wit.cells[i - 1];
      if (!(c.j > p.j || (c.j == p.j && c.r > p.r))) return false;
    }
  }
  for (int i = 0; i < f.n(); ++i)
    for (int i2 = i + 1; i2 < f.n(); ++i2) {
      const auto& a = w.cells[static_cast<std::size_t>((wit.cells[static_cast<std::size_t>(i)].j * s.b + wit.cells[static_cast<std::size_t>(i)].r) * s.t + wit.cells[static_cast<std::size_t>(i)].s)];
      const auto& b = w.cells[static_cast<std::size_t>((wit.cells[static_cast<std::size_t>(i2)].j * s.b + wit.cells[static_cast<std::size_t>(i2)].r) * s.t + wit.cells[static_cast<std::size_t>(i2)].s)];
      std::int64_t hits = 0;
      for (Vertex x : a)
        for (Vertex y : b) hits += g.color(x, y) == f.color(i, i2);
      if (Rational(hits, static_cast<std::int64_t>(a.size() * b.size())) < eta) return false;
    }
  return true;
}

std::optional<Witness> extract_witnesses(const OrderedGraph& g, const OrderedGraph& g_clean, const RegularityScheme& s,
                                         const NicelyColoredSubgraph& d, const RepresentativeTuple& w,
                                         const ForbiddenFamily& fam, const Rational& eta) {
  auto hit = contains_any(g_clean, fam);
  if (!hit) return std::nullopt;
  Witness wit;
  wit.pattern = hit->pattern;
  wit.copy = hit->tuple;
  const auto& f = fam.patterns[static_cast<std::size_t>(hit->pattern)];
  if (f.n() > d.d) {
    wit.failure = "pattern has more vertices than d";
    return wit;
  }
  for (int i = 0; i < f.n(); ++i) {
    const Vertex v = hit->tuple[static_cast<std::size_t>(i)];
    const int j = s.I.part_of(v);
    wit.cells.push_back({j, d.D[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)], s.Q_prime.label(v) % s.t});
  }
  const Layout lay{s.m, s.b, s.t};
  for (int i = 0; i < f.n(); ++i)
    for (int i2 = i + 1; i2 < f.n(); ++i2) {
      const auto& ci = wit.cells[static_cast<std::size_t>(i)];
      const auto& c2 = wit.cells[static_cast<std::size_t>(i2)];
      const auto& a = w.cells[static_cast<std::size_t>(lay.cell(ci.j, ci.r, ci.s))];
      const auto& b = w.cells[static_cast<std::size_t>(lay.cell(c2.j, c2.r, c2.s))];
      std::int64_t hits = 0;
      for (Vertex x : a)
        for (Vertex y : b) hits += g.color(x, y) == f.color(i, i2);
      wit.densities.push_back(Rational(hits, static_cast<std::int64_t>(a.size() * b.size())));
    }
  if (!verify_witness(g, s, w, fam, eta, wit)) wit.failure = "witness cells failed re-verification";
  return wit;
}

// ---------------------------------------------------------------- JSON

Json threshold_graph_to_json(const ThresholdGraph& h, const ColorAlphabet& alphabet) {
  Json edges = Json::array();
  const int V = h.m * h.b;
  for (int x = 0; x < V; ++x)
    for (int y = x + 1; y < V; ++y) edges.push_back({x, y, h.grid(x, y)});
  Json pal = Json::array();
  for (const auto& mat : h.palette) pal.push_back(io::threshold_to_json(mat, alphabet));
  Json und = Json::array();
  for (auto [x, y] : h.undesirable.edges()) und.push_back({x, y});
  return {{"m", h.m}, {"b", h.b}, {"t", h.t}, {"eta", to_string(h.eta)}, {"rho", to_string(h.rho)},
          {"palette", pal}, {"edges", edges}, {"undesirable", und}, {"deviation_sum", to_string(h.deviation_sum)}};
}

Json nicely_colored_to_json(const NicelyColoredSubgraph& d, const ColorAlphabet& alphabet) {
  Json j = {{"success", d.success}, {"m", d.m}, {"d", d.d}, {"t", d.t}, {"tries", d.tries}, {"certified", d.certified}};
  if (!d.success) {
    j["failure"] = d.failure;
    return j;
  }
  j["D"] = d.D;
  j["colors"] = io::looped_to_json(d.colors, alphabet);
  j["retained_undesirable"] = d.retained;
  j["bound"] = to_string(d.bound);
  return j;
}

Json clean_audit_to_json(const CleanAudit& a) {
  return {{"inside_interval", {{"count", a.inside_interval}, {"bound", a.inside_interval_bound}, {"limit", to_string(a.inside_interval_limit)}}},
          {"undesirable_pair", {{"count", a.undesirable_pair}, {"bound", a.undesirable_pair_bound}, {"interval_pairs", a.undesirable_interval_pairs}}},
          {"threshold_mismatch", {{"count", a.threshold_mismatch}, {"bound", a.threshold_mismatch_bound}}},
          {"low_density", {{"count", a.low_density}, {"bound", a.low_density_bound}}},
          {"total", a.total}};
}

}  // namespace ogt
