#include "ogt/core.hpp"

#include "ogt/errors.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_set>

namespace ogt {

// ---------------------------------------------------------------- alphabet

ColorAlphabet::ColorAlphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  if (symbols_.size() < 2) throw InputError("alphabet needs at least two symbols");
  if (symbols_.size() > static_cast<std::size_t>(kMaxColors))
    throw InputError("alphabet larger than " + std::to_string(kMaxColors) + " symbols");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!lookup_.emplace(symbols_[i], static_cast<Color>(i)).second)
      throw InputError("duplicate alphabet symbol '" + symbols_[i] + "'");
  }
}

std::optional<Color> ColorAlphabet::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Color ColorAlphabet::index_of(std::string_view name) const {
  if (auto c = find(name)) return *c;
  throw InputError("unknown color '" + std::string(name) + "'");
}

std::pair<ColorAlphabet, Color> ColorAlphabet::with_fresh_symbol(std::string_view base) const {
  std::string name(base);
  while (lookup_.count(name)) name += "'";
  auto symbols = symbols_;
  symbols.push_back(name);
  return {ColorAlphabet(std::move(symbols)), size()};
}

// ---------------------------------------------------------------- grids

ColorGrid::ColorGrid(int n, int palette, Color fill)
    : n_(n), palette_(palette), cells_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {
  if (n < 0) throw InputError("negative vertex count");
  for (int v = 0; v < n; ++v) cells_[static_cast<std::size_t>(v) * static_cast<std::size_t>(n + 1)] = kNoColor;
}

void ColorGrid::set(Vertex u, Vertex v, Color c) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_ || u == v) throw InputError("pair out of range");
  if (c != kNoColor && (c < 0 || c >= palette_)) throw InputError("color index out of range");
  cells_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)] = c;
  cells_[static_cast<std::size_t>(v) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(u)] = c;
}

OrderedGraph::OrderedGraph(ColorAlphabet alphabet, int n, Color fill)
    : alphabet_(std::move(alphabet)), grid_(n, alphabet_.size(), fill) {
  if (fill < 0 || fill >= alphabet_.size()) throw InputError("fill color out of range");
}

OrderedGraph::OrderedGraph(ColorAlphabet alphabet, ColorGrid grid)
    : alphabet_(std::move(alphabet)), grid_(std::move(grid)) {
  if (grid_.palette() != alphabet_.size()) throw InputError("grid palette does not match alphabet");
  for (int u = 0; u < grid_.n(); ++u)
    for (int v = u + 1; v < grid_.n(); ++v) {
      const Color c = grid_(u, v);
      if (c < 0 || c >= alphabet_.size()) throw InputError("pair (" + std::to_string(u) + "," + std::to_string(v) + ") is uncolored");
    }
}

void OrderedGraph::set_color(Vertex u, Vertex v, Color c) {
  if (c < 0 || c >= alphabet_.size()) throw InputError("color index out of range");
  grid_.set(u, v, c);
}

ColorSet full_color_set(int num_colors) noexcept {
  return num_colors >= 32 ? ~ColorSet{0} : (ColorSet{1} << num_colors) - 1;
}

Color min_color(ColorSet set) noexcept { return static_cast<Color>(std::countr_zero(set)); }

ThresholdMatrix::ThresholdMatrix(int t, ColorSet fill) : t_(t), entries_(static_cast<std::size_t>(t * t), fill) {
  if (t < 1) throw InputError("threshold matrix dimension must be positive");
}

bool ThresholdMatrix::all_entries_nonempty() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](ColorSet s) { return s != 0; });
}

bool ThresholdMatrix::subset_of(const ThresholdMatrix& other) const {
  if (t_ != other.t_) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if ((entries_[i] & ~other.entries_[i]) != 0) return false;
  return true;
}

LoopedGraph::LoopedGraph(int m, int t, const ThresholdMatrix& fill)
    : m_(m), t_(t), colors_(static_cast<std::size_t>(m) * static_cast<std::size_t>(m + 1) / 2, fill) {
  if (m < 1) throw InputError("looped graph needs at least one vertex");
  if (fill.t() != t) throw InputError("matrix dimension mismatch");
}

std::size_t LoopedGraph::slot(int j, int j2) const {
  if (j > j2) std::swap(j, j2);
  if (j < 0 || j2 >= m_) throw InputError("looped graph vertex out of range");
  // Row-major over the upper triangle including the diagonal.
  const auto a = static_cast<std::size_t>(j);
  const auto b = static_cast<std::size_t>(j2);
  const auto m = static_cast<std::size_t>(m_);
  return a * m - (a * (a + 1)) / 2 + b;
}

void LoopedGraph::set(int j, int j2, ThresholdMatrix value) {
  if (value.t() != t_) throw InputError("matrix dimension mismatch");
  colors_.at(slot(j, j2)) = std::move(value);
}

// ---------------------------------------------------------------- charts

KPartiteChart::KPartiteChart(std::vector<std::vector<Vertex>> classes, ColorGrid grid)
    : classes_(std::move(classes)), class_of_(static_cast<std::size_t>(grid.n()), -1), grid_(std::move(grid)) {
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    for (Vertex v : classes_[i]) {
      if (v < 0 || v >= grid_.n()) throw InputError("chart vertex out of range");
      if (class_of_[static_cast<std::size_t>(v)] != -1) throw InputError("chart classes overlap");
      class_of_[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
  }
  for (std::size_t i = 0; i < classes_.size(); ++i)
    for (std::size_t j = i + 1; j < classes_.size(); ++j)
      for (Vertex u : classes_[i])
        for (Vertex v : classes_[j])
          if (grid_(u, v) == kNoColor) throw InputError("chart cross pair left uncolored");
}

int KPartiteChart::class_of(Vertex v) const {
  if (v < 0 || v >= static_cast<int>(class_of_.size())) return -1;
  return class_of_[static_cast<std::size_t>(v)];
}

// ---------------------------------------------------------------- partitions

Partition::Partition(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
  if (k < 0) throw InputError("negative part count");
  for (int l : labels_)
    if (l < 0 || l >= k) throw InputError("partition label out of range");
}

Partition Partition::from_parts(int n, const std::vector<std::vector<Vertex>>& parts) {
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (Vertex v : parts[i]) {
      if (v < 0 || v >= n) throw InputError("partition vertex out of range");
      if (labels[static_cast<std::size_t>(v)] != -1) throw InputError("partition parts overlap");
      labels[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
  if (std::find(labels.begin(), labels.end(), -1) != labels.end()) throw InputError("partition does not cover every vertex");
  return Partition(std::move(labels), static_cast<int>(parts.size()));
}

std::vector<std::vector<Vertex>> Partition::parts() const {
  std::vector<std::vector<Vertex>> out(static_cast<std::size_t>(k_));
  for (std::size_t v = 0; v < labels_.size(); ++v) out[static_cast<std::size_t>(labels_[v])].push_back(static_cast<Vertex>(v));
  return out;
}

std::vector<int> Partition::part_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(k_), 0);
  for (int l : labels_) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

bool Partition::is_equitable() const {
  if (k_ == 0) return labels_.empty();
  const auto sizes = part_sizes();
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  return *hi - *lo <= 1;
}

bool Partition::has_empty_part() const {
  const auto sizes = part_sizes();
  return std::find(sizes.begin(), sizes.end(), 0) != sizes.end();
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.n() != n()) return false;
  std::vector<int> parent(static_cast<std::size_t>(k_), -1);
  for (std::size_t v = 0; v < labels_.size(); ++v) {
    int& p = parent[static_cast<std::size_t>(labels_[v])];
    if (p == -1) p = coarser.labels_[v];
    else if (p != coarser.labels_[v]) return false;
  }
  return true;
}

IntervalPartition::IntervalPartition(std::vector<int> cuts) : cuts_(std::move(cuts)) {
  if (cuts_.size() < 2 || cuts_.front() != 0) throw InputError("interval cuts must start at 0 and have at least one part");
  for (std::size_t i = 1; i < cuts_.size(); ++i)
    if (cuts_[i] <= cuts_[i - 1]) throw InputError("interval cuts must be strictly increasing");
}

IntervalPartition IntervalPartition::from_sizes(const std::vector<int>& sizes) {
  std::vector<int> cuts{0};
  for (int s : sizes) cuts.push_back(cuts.back() + s);
  return IntervalPartition(std::move(cuts));
}

std::vector<int> IntervalPartition::sizes() const {
  std::vector<int> out;
  for (int i = 0; i < k(); ++i) out.push_back(length(i));
  return out;
}

int IntervalPartition::part_of(Vertex v) const {
  if (v < 0 || v >= n()) throw InputError("vertex out of range");
  auto it = std::upper_bound(cuts_.begin(), cuts_.end(), v);
  return static_cast<int>(it - cuts_.begin()) - 1;
}

bool IntervalPartition::is_equitable() const {
  const int lo = n() / k();
  const int hi = (n() + k() - 1) / k();
  for (int i = 0; i < k(); ++i)
    if (length(i) != lo && length(i) != hi) return false;
  return true;
}

bool IntervalPartition::refines(const IntervalPartition& coarser) const {
  if (coarser.n() != n()) return false;
  return std::includes(cuts_.begin(), cuts_.end(), coarser.cuts_.begin(), coarser.cuts_.end());
}

Partition IntervalPartition::to_partition() const {
  std::vector<int> labels(static_cast<std::size_t>(n()));
  for (int i = 0; i < k(); ++i)
    for (int v = begin(i); v < end(i); ++v) labels[static_cast<std::size_t>(v)] = i;
  return Partition(std::move(labels), k());
}

// ---------------------------------------------------------------- families

void ForbiddenFamily::validate() const {
  if (patterns.empty()) throw InputError("forbidden family is empty");
  for (const auto& p : patterns) {
    if (p.n() < 1) throw InputError("pattern with no vertices");
    if (!(p.alphabet() == alphabet)) throw InputError("pattern alphabet differs from family alphabet");
  }
}

int ForbiddenFamily::max_pattern_size() const {
  int best = 0;
  for (const auto& p : patterns) best = std::max(best, p.n());
  return best;
}

MatrixGrid::MatrixGrid(ColorAlphabet alphabet, int rows, int cols, Color fill)
    : alphabet_(std::move(alphabet)), rows_(rows), cols_(cols),
      cells_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
  if (rows < 0 || cols < 0) throw InputError("negative matrix dimension");
  if (fill < 0 || fill >= alphabet_.size()) throw InputError("fill color out of range");
}

void MatrixGrid::set(int r, int c, Color value) {
  if (value < 0 || value >= alphabet_.size()) throw InputError("color index out of range");
  cells_.at(static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c)) = value;
}

void MatrixFamily::validate() const {
  if (patterns.empty()) throw InputError("matrix family is empty");
  for (const auto& p : patterns) {
    if (p.rows() < 1 || p.cols() < 1) throw InputError("matrix pattern with an empty side");
    if (!(p.alphabet() == alphabet)) throw InputError("pattern alphabet differs from family alphabet");
  }
}

int MatrixFamily::max_side() const {
  int best = 0;
  for (const auto& p : patterns) best = std::max({best, p.rows(), p.cols()});
  return best;
}

// ---------------------------------------------------------------- operations

OrderedGraph induced_subgraph(const OrderedGraph& g, std::span<const Vertex> vertices) {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] < 0 || vertices[i] >= g.n()) throw InputError("induced_subgraph: vertex out of range");
    if (i > 0 && vertices[i] <= vertices[i - 1]) throw InputError("induced_subgraph: vertex list not strictly increasing");
  }
  const int q = static_cast<int>(vertices.size());
  ColorGrid grid(q, g.num_colors());
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j)
      grid.set(i, j, g.color(vertices[static_cast<std::size_t>(i)], vertices[static_cast<std::size_t>(j)]));
  return OrderedGraph(g.alphabet(), std::move(grid));
}

MatrixReduction matrix_to_graph(const MatrixGrid& m) {
  auto [alphabet, sigma0] = m.alphabet().with_fresh_symbol("sigma0");
  const int n = m.rows() + m.cols();
  OrderedGraph g(alphabet, n, sigma0);
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) g.set_color(r, m.rows() + c, m.at(r, c));
  return {std::move(g), sigma0};
}

MatrixGrid cross_pairs_to_matrix(const OrderedGraph& g, int rows, const ColorAlphabet& alphabet) {
  if (rows < 0 || rows > g.n()) throw InputError("row count out of range");
  MatrixGrid m(alphabet, rows, g.n() - rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < g.n() - rows; ++c) m.set(r, c, alphabet.index_of(g.alphabet().symbol(g.color(r, rows + c))));
  return m;
}

std::vector<int> p_string(const Partition& p) { return p.labels(); }

IntervalPartition canonical_interval_equipartition(int n, int m) {
  if (m < 1 || m > n) throw InputError("canonical_interval_equipartition requires 1 <= m <= n");
  std::vector<int> sizes(static_cast<std::size_t>(m), n / m);
  for (int i = 0; i < n % m; ++i) ++sizes[static_cast<std::size_t>(i)];
  return IntervalPartition::from_sizes(sizes);
}

std::vector<std::vector<std::pair<int, int>>> equitable_split_plans(const std::vector<int>& part_sizes, int target,
                                                                      std::size_t limit) {
  std::vector<std::vector<std::pair<int, int>>> plans;
  const int n = std::accumulate(part_sizes.begin(), part_sizes.end(), 0);
  if (target < 1 || target > n) return plans;
  const int small = n / target;
  const int big_total = n % target;
  // Options per part: (pieces c, big pieces b) with c*small + b = size, 0 <= b <= c
  // (b = 0 whenever there are no big pieces globally).
  std::vector<std::vector<std::pair<int, int>>> options;
  for (int size : part_sizes) {
    std::vector<std::pair<int, int>> opts;
    for (int c = 1; c * small <= size; ++c) {
      const int b = size - c * small;
      if (b <= c && (big_total > 0 || b == 0) && (b == 0 || small + 1 > 0)) opts.emplace_back(c, b);
    }
    if (opts.empty()) return plans;
    options.push_back(std::move(opts));
  }
  std::vector<std::pair<int, int>> current;
  auto rec = [&](auto&& self, std::size_t idx, int pieces, int bigs) -> void {
    if (plans.size() >= limit) return;
    if (pieces > target || bigs > big_total) return;
    if (idx == options.size()) {
      if (pieces == target && bigs == big_total) plans.push_back(current);
      return;
    }
    for (auto [c, b] : options[idx]) {
      current.emplace_back(c, b);
      self(self, idx + 1, pieces + c, bigs + b);
      current.pop_back();
    }
  };
  rec(rec, 0, 0, 0);
  return plans;
}

std::optional<IntervalPartition> canonical_interval_refinement(const IntervalPartition& coarse, int target) {
  auto plans = equitable_split_plans(coarse.sizes(), target, 1);
  if (plans.empty()) return std::nullopt;
  const int small = coarse.n() / target;
  std::vector<int> sizes;
  for (const auto& [c, b] : plans.front())
    for (int piece = 0; piece < c; ++piece) sizes.push_back(small + (piece < b ? 1 : 0));
  return IntervalPartition::from_sizes(sizes);
}

}  // namespace ogt
