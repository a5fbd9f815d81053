#pragma once

#include "ogt/core.hpp"
#include "ogt/rational.hpp"
#include "ogt/rng.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace testing_util {

inline ogt::ColorAlphabet ab() { return ogt::ColorAlphabet({"a", "b"}); }
inline ogt::ColorAlphabet abc() { return ogt::ColorAlphabet({"a", "b", "c"}); }

/// Pattern from the upper triangle read row by row: "ab" for n = 3 means
/// c(0,1) = a, c(0,2) = b, then c(1,2) from the next symbol.
inline ogt::OrderedGraph graph_from(const ogt::ColorAlphabet& alpha, int n, const std::string& upper) {
  ogt::OrderedGraph g(alpha, n);
  std::size_t pos = 0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.set_color(u, v, alpha.index_of(std::string(1, upper.at(pos++))));
  return g;
}

inline ogt::OrderedGraph random_graph(const ogt::ColorAlphabet& alpha, int n, ogt::Rng& rng) {
  ogt::OrderedGraph g(alpha, n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.set_color(u, v, static_cast<ogt::Color>(rng.below(static_cast<std::uint64_t>(alpha.size()))));
  return g;
}

inline ogt::Partition random_partition(int n, int k, ogt::Rng& rng) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
  return ogt::Partition(labels, k);
}

inline ogt::Partition random_equipartition(int n, int k, ogt::Rng& rng) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) labels[static_cast<std::size_t>(v)] = v % k;
  for (int i = n - 1; i > 0; --i) std::swap(labels[static_cast<std::size_t>(i)], labels[rng.below(static_cast<std::uint64_t>(i + 1))]);
  return ogt::Partition(labels, k);
}

// Random laminar family: repeatedly split a random existing block.
inline std::vector<std::vector<int>> random_laminar(int ground, ogt::Rng& rng) {
  std::vector<std::vector<int>> sets;
  std::vector<std::vector<int>> frontier;
  std::vector<int> all(static_cast<std::size_t>(ground));
  for (int i = 0; i < ground; ++i) all[static_cast<std::size_t>(i)] = i;
  std::shuffle(all.begin(), all.end(), rng);
  frontier.push_back(all);
  while (!frontier.empty()) {
    auto block = frontier.back();
    frontier.pop_back();
    if (block.size() < 2) continue;
    const std::size_t cut = 1 + rng.below(block.size() - 1);
    std::vector<int> left(block.begin(), block.begin() + static_cast<std::ptrdiff_t>(cut));
    std::vector<int> right(block.begin() + static_cast<std::ptrdiff_t>(cut), block.end());
    if (rng.below(3) != 0) sets.push_back(left);
    if (rng.below(3) != 0) sets.push_back(right);
    frontier.push_back(left);
    frontier.push_back(right);
  }
  return sets;
}

inline std::vector<ogt::Rational> random_lambda(int ground, ogt::Rng& rng) {
  std::vector<ogt::Rational> lambda;
  for (int i = 0; i < ground; ++i)
    lambda.emplace_back(static_cast<std::int64_t>(rng.below(40)), 1 + static_cast<std::int64_t>(rng.below(6)));
  return lambda;
}

}  // namespace testing_util
