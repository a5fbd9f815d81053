#pragma once

// Ordered, edge-colored combinatorial objects shared by every module.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ogt {

using Vertex = int;
using Color = int;
inline constexpr Color kNoColor = -1;

/// Finite ordered set of color names. The order is the tie-break order used
/// everywhere a "lexicographically smallest color" is needed.
class ColorAlphabet {
 public:
  ColorAlphabet() = default;
  /// Requires at least two distinct symbols.
  explicit ColorAlphabet(std::vector<std::string> symbols);

  int size() const noexcept { return static_cast<int>(symbols_.size()); }
  const std::string& symbol(Color c) const { return symbols_.at(static_cast<std::size_t>(c)); }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }
  std::optional<Color> find(std::string_view name) const;
  /// Throws InputError for unknown names.
  Color index_of(std::string_view name) const;

  /// Copy of this alphabet with one extra symbol that does not clash with the
  /// existing ones; returns the extended alphabet and the new symbol's index.
  std::pair<ColorAlphabet, Color> with_fresh_symbol(std::string_view base) const;

  bool operator==(const ColorAlphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, Color> lookup_;
};

/// Dense symmetric coloring of the pairs of {0, ..., n-1}. Entries may be
/// kNoColor (charts leave same-class pairs uncolored).
class ColorGrid {
 public:
  ColorGrid() = default;
  ColorGrid(int n, int palette, Color fill = kNoColor);

  int n() const noexcept { return n_; }
  int palette() const noexcept { return palette_; }

  Color operator()(Vertex u, Vertex v) const noexcept {
    return cells_[static_cast<std::size_t>(u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v)];
  }
  void set(Vertex u, Vertex v, Color c);
  const Color* row(Vertex u) const noexcept {
    return cells_.data() + static_cast<std::size_t>(u) * static_cast<std::size_t>(n_);
  }

  bool operator==(const ColorGrid&) const = default;

 private:
  int n_ = 0;
  int palette_ = 0;
  std::vector<Color> cells_;
};

/// Complete vertex-ordered graph on 0..n-1 with every pair colored from an
/// alphabet.
class OrderedGraph {
 public:
  OrderedGraph() = default;
  OrderedGraph(ColorAlphabet alphabet, int n, Color fill = 0);
  /// Validates that every pair carries a color of the alphabet.
  OrderedGraph(ColorAlphabet alphabet, ColorGrid grid);

  int n() const noexcept { return grid_.n(); }
  const ColorAlphabet& alphabet() const noexcept { return alphabet_; }
  int num_colors() const noexcept { return alphabet_.size(); }
  Color color(Vertex u, Vertex v) const noexcept { return grid_(u, v); }
  void set_color(Vertex u, Vertex v, Color c);
  const ColorGrid& grid() const noexcept { return grid_; }

  bool operator==(const OrderedGraph& other) const {
    return alphabet_ == other.alphabet_ && grid_ == other.grid_;
  }

 private:
  ColorAlphabet alphabet_;
  ColorGrid grid_;
};

/// Set of colors as a bitmask over alphabet indices (alphabets up to 32).
using ColorSet = std::uint32_t;
inline constexpr int kMaxColors = 32;
inline constexpr ColorSet color_bit(Color c) noexcept { return ColorSet{1} << c; }
inline constexpr bool has_color(ColorSet set, Color c) noexcept { return (set >> c) & 1U; }
ColorSet full_color_set(int num_colors) noexcept;
/// Smallest color index in a non-empty set.
Color min_color(ColorSet set) noexcept;

/// t x t grid of color sets; an element of Gamma(Sigma, t) when no entry is empty.
class ThresholdMatrix {
 public:
  ThresholdMatrix() = default;
  ThresholdMatrix(int t, ColorSet fill);

  int t() const noexcept { return t_; }
  ColorSet at(int s, int s2) const { return entries_.at(static_cast<std::size_t>(s * t_ + s2)); }
  void set(int s, int s2, ColorSet value) { entries_.at(static_cast<std::size_t>(s * t_ + s2)) = value; }
  bool contains(int s, int s2, Color c) const { return has_color(at(s, s2), c); }
  bool all_entries_nonempty() const noexcept;
  /// Entry-wise inclusion.
  bool subset_of(const ThresholdMatrix& other) const;
  const std::vector<ColorSet>& entries() const noexcept { return entries_; }

  auto operator<=>(const ThresholdMatrix&) const = default;

 private:
  int t_ = 0;
  std::vector<ColorSet> entries_;
};

/// Graph with loops on 0..m-1 whose pairs {j, j'} (j <= j') carry threshold matrices.
class LoopedGraph {
 public:
  LoopedGraph() = default;
  LoopedGraph(int m, int t, const ThresholdMatrix& fill);

  int m() const noexcept { return m_; }
  int t() const noexcept { return t_; }
  const ThresholdMatrix& at(int j, int j2) const { return colors_.at(slot(j, j2)); }
  void set(int j, int j2, ThresholdMatrix value);

 private:
  std::size_t slot(int j, int j2) const;
  int m_ = 0;
  int t_ = 0;
  std::vector<ThresholdMatrix> colors_;
};

/// Edge-colored complete k-partite graph; only cross-class pairs are colored.
class KPartiteChart {
 public:
  KPartiteChart() = default;
  /// Classes must be pairwise disjoint vertex sets of `grid`; cross pairs
  /// must be colored.
  KPartiteChart(std::vector<std::vector<Vertex>> classes, ColorGrid grid);

  int k() const noexcept { return static_cast<int>(classes_.size()); }
  const std::vector<std::vector<Vertex>>& classes() const noexcept { return classes_; }
  const std::vector<Vertex>& part(int i) const { return classes_.at(static_cast<std::size_t>(i)); }
  Color color(Vertex u, Vertex v) const noexcept { return grid_(u, v); }
  const ColorGrid& grid() const noexcept { return grid_; }
  int palette() const noexcept { return grid_.palette(); }
  /// Class index of a vertex, or -1.
  int class_of(Vertex v) const;

 private:
  std::vector<std::vector<Vertex>> classes_;
  std::vector<int> class_of_;
  ColorGrid grid_;
};

/// Labelled partition of 0..n-1 into k (possibly empty) parts.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<int> labels, int k);
  static Partition from_parts(int n, const std::vector<std::vector<Vertex>>& parts);
  static Partition single(int n) { return Partition(std::vector<int>(static_cast<std::size_t>(n), 0), 1); }

  int n() const noexcept { return static_cast<int>(labels_.size()); }
  int k() const noexcept { return k_; }
  int label(Vertex v) const { return labels_.at(static_cast<std::size_t>(v)); }
  const std::vector<int>& labels() const noexcept { return labels_; }
  std::vector<std::vector<Vertex>> parts() const;
  std::vector<int> part_sizes() const;
  /// All k part sizes differ by at most one.
  bool is_equitable() const;
  bool has_empty_part() const;
  /// Every part of *this lies inside a single part of `coarser`.
  bool refines(const Partition& coarser) const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

/// Partition of 0..n-1 into consecutive ranges [cuts[i], cuts[i+1]).
class IntervalPartition {
 public:
  IntervalPartition() = default;
  /// Requires 0 = cuts[0] < cuts[1] < ... < cuts[k] = n.
  explicit IntervalPartition(std::vector<int> cuts);
  static IntervalPartition from_sizes(const std::vector<int>& sizes);

  int n() const noexcept { return cuts_.empty() ? 0 : cuts_.back(); }
  int k() const noexcept { return cuts_.empty() ? 0 : static_cast<int>(cuts_.size()) - 1; }
  int begin(int i) const { return cuts_.at(static_cast<std::size_t>(i)); }
  int end(int i) const { return cuts_.at(static_cast<std::size_t>(i) + 1); }
  int length(int i) const { return end(i) - begin(i); }
  const std::vector<int>& cuts() const noexcept { return cuts_; }
  std::vector<int> sizes() const;
  int part_of(Vertex v) const;
  /// Sizes in {floor(n/k), ceil(n/k)}.
  bool is_equitable() const;
  bool refines(const IntervalPartition& coarser) const;
  Partition to_partition() const;

  bool operator==(const IntervalPartition&) const = default;

 private:
  std::vector<int> cuts_;
};

/// Finite non-empty family of forbidden ordered patterns over one alphabet.
struct ForbiddenFamily {
  ColorAlphabet alphabet;
  std::vector<OrderedGraph> patterns;

  void validate() const;
  int max_pattern_size() const;
};

/// rows x cols grid of colors.
class MatrixGrid {
 public:
  MatrixGrid() = default;
  MatrixGrid(ColorAlphabet alphabet, int rows, int cols, Color fill = 0);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  const ColorAlphabet& alphabet() const noexcept { return alphabet_; }
  Color at(int r, int c) const {
    return cells_.at(static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c));
  }
  void set(int r, int c, Color value);

  bool operator==(const MatrixGrid&) const = default;

 private:
  ColorAlphabet alphabet_;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Color> cells_;
};

/// Finite family of forbidden submatrices.
struct MatrixFamily {
  ColorAlphabet alphabet;
  std::vector<MatrixGrid> patterns;

  void validate() const;
  int max_side() const;
};

/// Ordered subgraph on a strictly increasing vertex list.
OrderedGraph induced_subgraph(const OrderedGraph& g, std::span<const Vertex> vertices);

struct MatrixReduction {
  OrderedGraph graph;
  Color sigma0 = kNoColor;  ///< fresh color placed on same-side pairs
};

/// Rows become vertices 0..rows-1, columns follow; same-side pairs get sigma0.
MatrixReduction matrix_to_graph(const MatrixGrid& m);

/// Inverse of matrix_to_graph on cross pairs.
MatrixGrid cross_pairs_to_matrix(const OrderedGraph& g, int rows, const ColorAlphabet& alphabet);

/// Position v holds the part label of v.
std::vector<int> p_string(const Partition& p);

/// The first (n mod m) intervals get size ceil(n/m), the rest floor(n/m).
IntervalPartition canonical_interval_equipartition(int n, int m);

/// Canonical equitable interval partition whose pieces refine `coarse`:
/// interval i is split into counts[i] consecutive pieces, larger pieces first.
/// Returns nullopt when no equitable refinement of total size `target` exists.
std::optional<IntervalPartition> canonical_interval_refinement(const IntervalPartition& coarse, int target);

/// Per-part split plans (pieces, big pieces) such that every piece has size
/// floor(n/target) or ceil(n/target) with exactly n mod target big pieces.
/// `limit` caps the number of returned plans.
std::vector<std::vector<std::pair<int, int>>> equitable_split_plans(const std::vector<int>& part_sizes, int target,
                                                                      std::size_t limit = SIZE_MAX);

}  // namespace ogt
