#include "ogt/embed.hpp"

#include "ogt/errors.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>

namespace ogt {

namespace {

class Embedder {
 public:
  Embedder(const OrderedGraph& f, const LoopedGraph& h) : f_(f), h_(h), n_(f.n()) {
    e_.h.assign(static_cast<std::size_t>(n_), 0);
    e_.s.assign(static_cast<std::size_t>(n_), 0);
  }

  std::optional<Embedding> run() {
    if (n_ == 0) return e_;
    if (h_.m() < 1) return std::nullopt;
    if (place(0)) return e_;
    return std::nullopt;
  }

 private:
  bool fits(int i) const {
    const int hi = e_.h[static_cast<std::size_t>(i)], si = e_.s[static_cast<std::size_t>(i)];
    for (int p = 0; p < i; ++p) {
      const ThresholdMatrix& mat = h_.at(e_.h[static_cast<std::size_t>(p)], hi);
      if (!mat.contains(e_.s[static_cast<std::size_t>(p)], si, f_.color(p, i))) return false;
    }
    return true;
  }

  bool place(int i) {
    if (i == n_) return true;
    const int lo = i == 0 ? 0 : e_.h[static_cast<std::size_t>(i - 1)];
    for (int j = lo; j < h_.m(); ++j) {
      e_.h[static_cast<std::size_t>(i)] = j;
      for (int s = 0; s < h_.t(); ++s) {
        e_.s[static_cast<std::size_t>(i)] = s;
        if (fits(i) && place(i + 1)) return true;
      }
    }
    return false;
  }

  const OrderedGraph& f_;
  const LoopedGraph& h_;
  int n_;
  Embedding e_;
};

struct Shape {
  int colors, m, t;
  std::uint64_t base;  // non-empty subsets per entry
  int entries;
};

Shape dstar_shape(int colors, int m, int t) {
  if (colors < 1 || colors > kMaxColors) throw InputError("palette size out of range");
  if (m < 1 || t < 1) throw InputError("d_star needs m, t >= 1");
  const std::int64_t entries = static_cast<std::int64_t>(t) * t * m * (m + 1) / 2;
  if (static_cast<std::int64_t>(colors) * entries > kDStarLogCap)
    throw CapacityError("d_star enumeration exceeds 2^" + std::to_string(kDStarLogCap) + " candidates");
  return {colors, m, t, (std::uint64_t{1} << colors) - 1, static_cast<int>(entries)};
}

LoopedGraph decode(const Shape& sh, std::uint64_t index) {
  std::vector<ColorSet> digits(static_cast<std::size_t>(sh.entries));
  for (int e = sh.entries - 1; e >= 0; --e) {
    digits[static_cast<std::size_t>(e)] = static_cast<ColorSet>(index % sh.base + 1);
    index /= sh.base;
  }
  LoopedGraph h(sh.m, sh.t, ThresholdMatrix(sh.t, 1));
  std::size_t pos = 0;
  for (int j = 0; j < sh.m; ++j)
    for (int j2 = j; j2 < sh.m; ++j2) {
      ThresholdMatrix mat(sh.t, 1);
      for (int s = 0; s < sh.t; ++s)
        for (int s2 = 0; s2 < sh.t; ++s2) mat.set(s, s2, digits[pos++]);
      h.set(j, j2, std::move(mat));
    }
  return h;
}

// Family members sorted by size (stable), with the capacity check done up front.
std::vector<const OrderedGraph*> by_size(const ForbiddenFamily& fam) {
  fam.validate();
  std::vector<const OrderedGraph*> out;
  for (const auto& p : fam.patterns) {
    if (p.n() > kEmbedCap) throw CapacityError("pattern exceeds the embedding cap of " + std::to_string(kEmbedCap));
    out.push_back(&p);
  }
  std::stable_sort(out.begin(), out.end(), [](const OrderedGraph* a, const OrderedGraph* b) { return a->n() < b->n(); });
  return out;
}

int min_embedded(const std::vector<const OrderedGraph*>& pats, const LoopedGraph& h) {
  for (const OrderedGraph* p : pats)
    if (Embedder(*p, h).run()) return p->n();
  return 0;
}

}  // namespace

std::optional<Embedding> embeddable(const OrderedGraph& f, const LoopedGraph& h, int t) {
  if (t != h.t()) throw InputError("looped graph entries are not t x t");
  if (f.n() > kEmbedCap) throw CapacityError("pattern exceeds the embedding cap of " + std::to_string(kEmbedCap));
  auto e = Embedder(f, h).run();
  if (e && !verify_embedding(f, h, *e)) throw InternalError("embedding failed re-verification");
  return e;
}

bool verify_embedding(const OrderedGraph& f, const LoopedGraph& h, const Embedding& e) {
  const int n = f.n();
  if (static_cast<int>(e.h.size()) != n || static_cast<int>(e.s.size()) != n) return false;
  for (int i = 0; i < n; ++i) {
    const int hi = e.h[static_cast<std::size_t>(i)], si = e.s[static_cast<std::size_t>(i)];
    if (hi < 0 || hi >= h.m() || si < 0 || si >= h.t()) return false;
    if (i > 0 && e.h[static_cast<std::size_t>(i - 1)] > hi) return false;
  }
  for (int i = 0; i < n; ++i)
    for (int i2 = i + 1; i2 < n; ++i2) {
      const auto a = static_cast<std::size_t>(i), b = static_cast<std::size_t>(i2);
      if (!h.at(e.h[a], e.h[b]).contains(e.s[a], e.s[b], f.color(i, i2))) return false;
    }
  return true;
}

LoopedGraph loops_from_d(const NicelyColoredSubgraph& d) { return d.colors; }

std::optional<std::uint64_t> dstar_candidates(int colors, int m, int t) {
  const std::uint64_t base = (std::uint64_t{1} << colors) - 1;
  const std::int64_t entries = static_cast<std::int64_t>(t) * t * m * (m + 1) / 2;
  std::uint64_t total = 1;
  for (std::int64_t e = 0; e < entries; ++e) {
    if (total > UINT64_MAX / base) return std::nullopt;
    total *= base;
  }
  return total;
}

LoopedGraph dstar_candidate(int colors, int m, int t, std::uint64_t index) {
  const Shape sh = dstar_shape(colors, m, t);
  if (index >= *dstar_candidates(colors, m, t)) throw InputError("candidate index out of range");
  return decode(sh, index);
}

int d_star(const ForbiddenFamily& fam, int m, int t) {
  const Shape sh = dstar_shape(fam.alphabet.size(), m, t);
  const auto pats = by_size(fam);
  if (pats.empty()) return 0;
  const int top = pats.back()->n();
  const std::uint64_t total = *dstar_candidates(sh.colors, m, t);
  int best = 0;
  for (std::uint64_t i = 0; i < total && best < top; ++i) best = std::max(best, min_embedded(pats, decode(sh, i)));
  return best;
}

int d_star_parallel(const ForbiddenFamily& fam, int m, int t) {
  const Shape sh = dstar_shape(fam.alphabet.size(), m, t);
  const auto pats = by_size(fam);
  if (pats.empty()) return 0;
  const int top = pats.back()->n();
  const auto total = static_cast<std::int64_t>(*dstar_candidates(sh.colors, m, t));
  std::atomic<int> best{0};
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t i = 0; i < total; ++i) {
    if (best.load(std::memory_order_relaxed) >= top) continue;
    const int v = min_embedded(pats, decode(sh, static_cast<std::uint64_t>(i)));
    int cur = best.load(std::memory_order_relaxed);
    while (v > cur && !best.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
    }
  }
  return best.load();
}

nlohmann::json embedding_to_json(const Embedding& e) { return {{"h", e.h}, {"s", e.s}}; }

}  // namespace ogt
