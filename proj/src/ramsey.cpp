#include "ogt/ramsey.hpp"

#include "ogt/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>

namespace ogt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Groups vertices by their color vector toward `anchors`; classes appear in
// order of their first vertex.
std::vector<std::vector<Vertex>> classify(const ColorGrid& grid, const std::vector<Vertex>& vertices,
                                          const std::vector<Vertex>& anchors) {
  std::map<std::vector<Color>, std::size_t> index;
  std::vector<std::vector<Vertex>> classes;
  std::vector<Color> key(anchors.size());
  for (Vertex v : vertices) {
    for (std::size_t a = 0; a < anchors.size(); ++a) key[a] = grid(v, anchors[a]);
    auto [it, fresh] = index.emplace(key, classes.size());
    if (fresh) classes.emplace_back();
    classes[it->second].push_back(v);
  }
  return classes;
}

Subchart empty_subchart(int k, std::string reason) {
  Subchart h;
  h.picks.assign(static_cast<std::size_t>(k), {});
  h.colors.assign(static_cast<std::size_t>(k * k), kNoColor);
  h.empty = true;
  h.empty_reason = std::move(reason);
  return h;
}

double ceil_ratio(double num, const Rational& delta) {
  const double d = to_double(delta);
  if (!std::isfinite(num)) return kInf;
  return std::ceil(num / d - 1e-9);
}

Subchart prob_ramsey_rec(const ColorGrid& grid, const std::vector<std::vector<Vertex>>& classes, int t, const Rational& delta,
                         Rng& rng, const RamseySizing& sizing, int num_colors) {
  const int k = static_cast<int>(classes.size());
  if (k == 1) {
    if (static_cast<int>(classes[0].size()) < t) return empty_subchart(1, "class smaller than t");
    Subchart h = empty_subchart(1, "");
    h.picks[0] = sample_sorted_subset(classes[0], t, rng);
    h.empty = false;
    return h;
  }
  const Rational sub_delta = delta / (k + 1);
  int s = 0, r = 0;
  int min_rest = std::numeric_limits<int>::max();
  for (int i = 1; i < k; ++i) min_rest = std::min(min_rest, static_cast<int>(classes[static_cast<std::size_t>(i)].size()));
  if (auto it = sizing.levels.find(k); it != sizing.levels.end()) {
    s = it->second.s;
    r = it->second.r;
  } else {
    const double s_theory = ceil_ratio(static_cast<double>(t) * std::pow(static_cast<double>(num_colors), k - 1), sub_delta);
    const double r_theory = prob_ramsey_threshold(num_colors, k - 1, t, sub_delta);
    s = static_cast<int>(std::min<double>(s_theory, static_cast<double>(classes[0].size())));
    // Below the theoretical size the inner classes are kept as small as the
    // recursion allows.
    r = r_theory <= min_rest ? static_cast<int>(r_theory) : std::min(t, min_rest);
  }
  s = std::min<int>(s, static_cast<int>(classes[0].size()));
  if (s < 1 || r < 1) return empty_subchart(k, "level sizes below one");

  const std::vector<Vertex> first = sample_sorted_subset(classes[0], s, rng);
  std::vector<std::vector<Vertex>> reduced(static_cast<std::size_t>(k - 1));
  for (int i = 1; i < k; ++i) {
    auto parts = classify(grid, classes[static_cast<std::size_t>(i)], first);
    reduced[static_cast<std::size_t>(i - 1)] = weighted_pick(parts, r, sub_delta, rng);
    if (reduced[static_cast<std::size_t>(i - 1)].empty()) return empty_subchart(k, "class " + std::to_string(i) + " pick came out empty");
  }
  Subchart inner = prob_ramsey_rec(grid, reduced, t, sub_delta, rng, sizing, num_colors);
  if (inner.empty) return empty_subchart(k, "inner level: " + inner.empty_reason);

  // The color from v in V'_1 toward W_i only depends on i.
  std::vector<Vertex> anchors;
  for (const auto& w : inner.picks) anchors.push_back(w.front());
  auto parts = classify(grid, first, anchors);
  std::vector<Vertex> w1 = weighted_pick(parts, t, sub_delta, rng);
  if (w1.empty()) return empty_subchart(k, "first class pick came out empty");

  Subchart h = empty_subchart(k, "");
  h.empty = false;
  h.picks[0] = std::move(w1);
  for (int i = 1; i < k; ++i) h.picks[static_cast<std::size_t>(i)] = std::move(inner.picks[static_cast<std::size_t>(i - 1)]);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (i != j)
        h.colors[static_cast<std::size_t>(i * k + j)] = grid(h.picks[static_cast<std::size_t>(i)].front(), h.picks[static_cast<std::size_t>(j)].front());
  return h;
}

bool cross_pair_monochromatic(const ColorGrid& grid, const std::vector<Vertex>& a, const std::vector<Vertex>& b, Color c) {
  for (Vertex u : a)
    for (Vertex v : b)
      if (grid(u, v) != c) return false;
  return true;
}

Color inner_color(const ColorGrid& grid, const std::vector<Vertex>& u) {
  if (u.size() < 2) return kNoColor;
  return grid(u[0], u[1]);
}

}  // namespace

// ---------------------------------------------------------------- undesirable sets

UndesirableSet::UndesirableSet(const std::vector<std::pair<Vertex, Vertex>>& edges) {
  for (auto [u, v] : edges) insert(u, v);
}

std::uint64_t UndesirableSet::key(Vertex u, Vertex v) noexcept {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
}

void UndesirableSet::insert(Vertex u, Vertex v) {
  if (u == v || u < 0 || v < 0) throw InputError("undesirable edge must join two distinct vertices");
  keys_.insert(key(u, v));
}

std::vector<std::pair<Vertex, Vertex>> UndesirableSet::edges() const {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(keys_.size());
  for (auto k : keys_) out.emplace_back(static_cast<Vertex>(k >> 32), static_cast<Vertex>(k & 0xffffffffU));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_orderly(const KPartiteChart& chart, const UndesirableSet& b) {
  const int colors = chart.palette();
  for (int i = 0; i < chart.k(); ++i)
    for (int j = i + 1; j < chart.k(); ++j) {
      std::vector<signed char> state(static_cast<std::size_t>(colors), -1);
      for (Vertex u : chart.part(i))
        for (Vertex v : chart.part(j)) {
          auto& s = state[static_cast<std::size_t>(chart.color(u, v))];
          const signed char in = b.contains(u, v) ? 1 : 0;
          if (s == -1) s = in;
          else if (s != in) return false;
        }
    }
  return true;
}

// ---------------------------------------------------------------- probabilistic picks

std::vector<Vertex> weighted_pick(const std::vector<std::vector<Vertex>>& parts, int t, const Rational& delta, Rng& rng) {
  if (t <= 0) throw InputError("weighted_pick needs t > 0");
  if (delta <= 0) throw InputError("weighted_pick needs delta > 0");
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  if (total == 0) return {};
  // Class of a uniform element: Pr[I = i] = |A_i| / |A|.
  std::uint64_t x = rng.below(total);
  std::size_t idx = 0;
  while (x >= parts[idx].size()) {
    x -= parts[idx].size();
    ++idx;
  }
  if (static_cast<int>(parts[idx].size()) < t) return {};
  return sample_sorted_subset(parts[idx], t, rng);
}

double weighted_pick_threshold(int k, int t, const Rational& delta) {
  return ceil_ratio(static_cast<double>(t) * k, delta);
}

double prob_ramsey_threshold(int num_colors, int k, int t, const Rational& delta) {
  if (k <= 1) return t;
  const Rational sub = delta / (k + 1);
  const double s = ceil_ratio(static_cast<double>(t) * std::pow(static_cast<double>(num_colors), k - 1), sub);
  const double r = prob_ramsey_threshold(num_colors, k - 1, t, sub);
  if (!std::isfinite(s) || !std::isfinite(r) || s > 1000) return kInf;
  const double classes = std::pow(static_cast<double>(num_colors), s);
  return ceil_ratio(r * classes, sub);
}

Subchart prob_ramsey(const KPartiteChart& chart, int t, const Rational& delta, Rng& rng, const RamseySizing& sizing) {
  if (t <= 0) throw InputError("prob_ramsey needs t > 0");
  if (delta <= 0 || delta > 1) throw InputError("prob_ramsey needs 0 < delta <= 1");
  if (chart.k() < 1) throw InputError("prob_ramsey needs at least one class");
  const double threshold = prob_ramsey_threshold(chart.palette(), chart.k(), t, delta);
  bool certified = sizing.levels.empty();
  for (const auto& c : chart.classes())
    if (static_cast<double>(c.size()) < threshold) certified = false;
  Subchart h = prob_ramsey_rec(chart.grid(), chart.classes(), t, delta, rng, sizing, chart.palette());
  h.certified = certified;
  if (!h.empty && !verify_subchart(chart, h, t)) throw InternalError("prob_ramsey produced a non-monochromatic cross pair");
  return h;
}

bool verify_subchart(const KPartiteChart& chart, const Subchart& h, int t) {
  const int k = chart.k();
  if (static_cast<int>(h.picks.size()) != k) return false;
  if (h.empty) {
    return std::all_of(h.picks.begin(), h.picks.end(), [](const auto& p) { return p.empty(); });
  }
  for (int i = 0; i < k; ++i) {
    const auto& p = h.picks[static_cast<std::size_t>(i)];
    if (static_cast<int>(p.size()) != t) return false;
    for (Vertex v : p)
      if (chart.class_of(v) != i) return false;
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (!cross_pair_monochromatic(chart.grid(), h.picks[static_cast<std::size_t>(i)], h.picks[static_cast<std::size_t>(j)], h.color(i, j)))
        return false;
  return true;
}

std::int64_t retained_count(const Subchart& h, const UndesirableSet& b) {
  std::int64_t count = 0;
  for (std::size_t i = 0; i < h.picks.size(); ++i)
    for (std::size_t j = i + 1; j < h.picks.size(); ++j)
      for (Vertex u : h.picks[i])
        for (Vertex v : h.picks[j]) count += b.contains(u, v);
  return count;
}

Rational undesirable_fraction(const KPartiteChart& chart, const UndesirableSet& b) {
  std::int64_t cross = 0;
  for (int i = 0; i < chart.k(); ++i)
    for (int j = i + 1; j < chart.k(); ++j)
      cross += static_cast<std::int64_t>(chart.part(i).size()) * static_cast<std::int64_t>(chart.part(j).size());
  for (auto [u, v] : b.edges()) {
    const int cu = chart.class_of(u), cv = chart.class_of(v);
    if (cu < 0 || cv < 0 || cu == cv) throw InputError("undesirable edge is not a cross-class pair");
  }
  if (cross == 0) return Rational(0);
  return Rational(static_cast<std::int64_t>(b.size()), cross);
}

QuantitativeResult quantitative_ramsey(const KPartiteChart& chart, const UndesirableSet& b, int t, const Rational& alpha,
                                       Rng& rng, int max_tries, const RamseySizing& sizing) {
  if (alpha <= 0) throw InputError("alpha must be positive");
  if (max_tries < 1) throw InputError("max_tries must be positive");
  QuantitativeResult res;
  res.eps = undesirable_fraction(chart, b);
  const std::int64_t k = chart.k();
  res.bound = (1 + alpha) * res.eps * Rational(k * (k - 1) / 2) * Rational(static_cast<std::int64_t>(t) * t);
  const Rational delta = alpha / 3;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    Rng stream = rng.derive("quantitative_ramsey", static_cast<std::uint64_t>(attempt));
    Subchart h = prob_ramsey(chart, t, delta > 1 ? Rational(1) : delta, stream, sizing);
    res.tries = attempt + 1;
    if (h.empty) continue;
    const std::int64_t kept = retained_count(h, b);
    if (Rational(kept) <= res.bound) {
      res.success = true;
      res.chart = std::move(h);
      res.retained = kept;
      return res;
    }
    if (kept < best) {
      best = kept;
      res.chart = std::move(h);
      res.retained = kept;
    }
  }
  return res;
}

// ---------------------------------------------------------------- classical Ramsey

std::optional<std::vector<Vertex>> mono_clique(const ColorGrid& grid, const std::vector<Vertex>& vertices, int t) {
  const int n = static_cast<int>(vertices.size());
  if (n > kCliqueCap) throw CapacityError("mono_clique limited to " + std::to_string(kCliqueCap) + " vertices");
  if (t < 0) throw InputError("negative clique size");
  if (t > n) return std::nullopt;
  if (t <= 1) return std::vector<Vertex>(vertices.begin(), vertices.begin() + t);
  using Mask = std::uint32_t;
  for (Color c = 0; c < grid.palette(); ++c) {
    std::vector<Mask> nbr(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && grid(vertices[static_cast<std::size_t>(i)], vertices[static_cast<std::size_t>(j)]) == c) nbr[static_cast<std::size_t>(i)] |= Mask{1} << j;
    std::vector<int> chosen;
    auto search = [&](auto&& self, Mask cand) -> bool {
      if (static_cast<int>(chosen.size()) == t) return true;
      while (cand) {
        if (static_cast<int>(chosen.size()) + std::popcount(cand) < t) return false;
        const int v = std::countr_zero(cand);
        cand &= cand - 1;
        chosen.push_back(v);
        // Only later vertices, so each set is visited in increasing order once.
        const Mask later = v + 1 >= 32 ? 0 : ~((Mask{1} << (v + 1)) - 1);
        if (self(self, cand & nbr[static_cast<std::size_t>(v)] & later)) return true;
        chosen.pop_back();
      }
      return false;
    };
    const Mask all = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;
    if (search(search, all)) {
      std::vector<Vertex> out;
      for (int i : chosen) out.push_back(vertices[static_cast<std::size_t>(i)]);
      return out;
    }
  }
  return std::nullopt;
}

std::optional<std::vector<Vertex>> mono_clique(const OrderedGraph& g, int t) {
  std::vector<Vertex> all(static_cast<std::size_t>(g.n()));
  for (int v = 0; v < g.n(); ++v) all[static_cast<std::size_t>(v)] = v;
  return mono_clique(g.grid(), all, t);
}

std::optional<int> classical_ramsey(int colors, int t) {
  if (t <= 1) return t < 0 ? std::nullopt : std::optional<int>(t);
  if (t == 2) return 2;
  if (colors == 1) return t;
  if (colors == 2 && t == 3) return 6;
  if (colors == 2 && t == 4) return 18;
  if (colors == 3 && t == 3) return 17;
  return std::nullopt;
}

OrderlyResult orderly_ramsey(const KPartiteChart& chart, const UndesirableSet& b, int t, Rng& rng, int max_tries,
                             const RamseySizing& sizing, std::optional<int> inner_size) {
  if (t < 1) throw InputError("orderly_ramsey needs t >= 1");
  if (!is_orderly(chart, b)) throw InputError("undesirable set is not orderly");
  if (t >= 2)
    for (const auto& c : chart.classes())
      for (std::size_t x = 0; x < c.size(); ++x)
        for (std::size_t y = x + 1; y < c.size(); ++y)
          if (chart.color(c[x], c[y]) == kNoColor) throw InputError("orderly_ramsey needs colored pairs inside every class");
  OrderlyResult res;
  res.eps = undesirable_fraction(chart, b);
  const std::int64_t k = chart.k();
  res.bound = 2 * res.eps * Rational(k * (k - 1) / 2) * Rational(static_cast<std::int64_t>(t) * t);
  std::size_t min_class = std::numeric_limits<std::size_t>::max();
  for (const auto& c : chart.classes()) min_class = std::min(min_class, c.size());

  const auto ram = classical_ramsey(chart.palette(), t);
  int inner = inner_size ? *inner_size : (ram ? *ram : static_cast<int>(min_class));
  inner = std::min<int>(inner, static_cast<int>(std::min<std::size_t>(min_class, kCliqueCap)));
  res.inner_size = inner;
  res.certified = ram && inner >= *ram && sizing.levels.empty() &&
                  static_cast<double>(min_class) >= prob_ramsey_threshold(chart.palette(), chart.k(), inner, Rational(1, 3));
  if (inner < t) {
    res.failure = "classes too small for inner picks of size t";
    return res;
  }

  for (int attempt = 0; attempt < max_tries; ++attempt) {
    res.tries = attempt + 1;
    Rng stream = rng.derive("orderly_ramsey", static_cast<std::uint64_t>(attempt));
    std::vector<std::vector<Vertex>> w;
    if (k == 1) {
      w.push_back(chart.part(0).size() <= static_cast<std::size_t>(kCliqueCap) ? chart.part(0)
                                                                                : sample_sorted_subset(chart.part(0), inner, stream));
    } else {
      auto q = quantitative_ramsey(chart, b, inner, Rational(1), stream, 1, sizing);
      if (!q.success) {
        res.failure = "quantitative step failed";
        continue;
      }
      w = q.chart.picks;
    }
    std::vector<std::vector<Vertex>> u;
    bool ok = true;
    for (const auto& wi : w) {
      auto clique = mono_clique(chart.grid(), wi, t);
      if (!clique) {
        ok = false;
        break;
      }
      u.push_back(std::move(*clique));
    }
    if (!ok) {
      res.failure = "no monochromatic clique of size t inside a pick";
      continue;
    }
    res.success = true;
    res.failure.clear();
    res.w = std::move(w);
    res.u = std::move(u);
    res.inner_colors.clear();
    for (const auto& ui : res.u) res.inner_colors.push_back(inner_color(chart.grid(), ui));
    res.cross_colors.assign(static_cast<std::size_t>(k * k), kNoColor);
    for (std::int64_t i = 0; i < k; ++i)
      for (std::int64_t j = 0; j < k; ++j)
        if (i != j)
          res.cross_colors[static_cast<std::size_t>(i * k + j)] =
              chart.color(res.u[static_cast<std::size_t>(i)].front(), res.u[static_cast<std::size_t>(j)].front());
    res.retained = 0;
    for (std::size_t i = 0; i < res.u.size(); ++i)
      for (std::size_t j = i + 1; j < res.u.size(); ++j)
        for (Vertex x : res.u[i])
          for (Vertex y : res.u[j]) res.retained += b.contains(x, y);
    if (auto err = verify_orderly(chart, b, t, res); !err.empty()) throw InternalError("orderly_ramsey: " + err);
    return res;
  }
  return res;
}

std::string verify_orderly(const KPartiteChart& chart, const UndesirableSet& b, int t, const OrderlyResult& r) {
  const int k = chart.k();
  if (!r.success) return "result is a failure";
  if (static_cast<int>(r.u.size()) != k) return "wrong number of picks";
  for (int i = 0; i < k; ++i) {
    const auto& ui = r.u[static_cast<std::size_t>(i)];
    if (static_cast<int>(ui.size()) != t) return "pick " + std::to_string(i) + " has wrong size";
    for (Vertex v : ui)
      if (chart.class_of(v) != i) return "pick " + std::to_string(i) + " leaves its class";
    for (std::size_t x = 0; x < ui.size(); ++x)
      for (std::size_t y = x + 1; y < ui.size(); ++y)
        if (chart.color(ui[x], ui[y]) != r.inner_colors[static_cast<std::size_t>(i)]) return "pick " + std::to_string(i) + " is not monochromatic inside";
  }
  std::int64_t retained = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const auto& a = r.u[static_cast<std::size_t>(i)];
      const auto& c = r.u[static_cast<std::size_t>(j)];
      if (!cross_pair_monochromatic(chart.grid(), a, c, r.cross_colors[static_cast<std::size_t>(i * k + j)]))
        return "cross pair " + std::to_string(i) + "," + std::to_string(j) + " is not monochromatic";
      if (!r.w.empty()) {
        const auto& wa = r.w[static_cast<std::size_t>(i)];
        const auto& wc = r.w[static_cast<std::size_t>(j)];
        std::size_t in = 0;
        for (Vertex x : wa)
          for (Vertex y : wc) in += b.contains(x, y);
        if (in != 0 && in != wa.size() * wc.size()) return "intermediate pair " + std::to_string(i) + "," + std::to_string(j) + " is mixed";
      }
      for (Vertex x : a)
        for (Vertex y : c) retained += b.contains(x, y);
    }
  if (retained != r.retained) return "retained count mismatch";
  if (Rational(retained) > r.bound) return "retained undesirable pairs exceed 2 eps C(k,2) t^2";
  return {};
}

Counterexample gen_counterexample(int n, int m, int k) {
  if (n < 1 || m < 1 || k < 1) throw InputError("gen_counterexample needs positive n, m, k");
  if (n % (m * k) != 0) throw InputError("gen_counterexample needs m*k to divide n");
  Counterexample ce;
  const ColorAlphabet alphabet({"0", "1"});
  ce.graph = OrderedGraph(alphabet, n, 0);
  const int clique = n / k;
  const int planted = n / (m * k);
  for (int c = 0; c < k; ++c) {
    std::vector<Vertex> members;
    for (int v = c * clique; v < (c + 1) * clique; ++v) members.push_back(v);
    for (std::size_t x = 0; x < members.size(); ++x)
      for (std::size_t y = x + 1; y < members.size(); ++y) ce.graph.set_color(members[x], members[y], 1);
    ce.cliques.push_back(std::move(members));
  }
  for (int p = 0; p < m * k; ++p) {
    std::vector<Vertex> members;
    for (int v = p * planted; v < (p + 1) * planted; ++v) members.push_back(v);
    for (std::size_t x = 0; x < members.size(); ++x)
      for (std::size_t y = x + 1; y < members.size(); ++y) ce.b.insert(members[x], members[y]);
    ce.planted.push_back(std::move(members));
  }
  return ce;
}

}  // namespace ogt
