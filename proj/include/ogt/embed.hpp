#pragma once

// Embeddability of ordered patterns into looped graphs colored by threshold
// matrices, and the worst-case witness size d_F(m, t).

#include "ogt/core.hpp"
#include "ogt/threshold.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace ogt {

inline constexpr int kEmbedCap = 8;
inline constexpr int kDStarLogCap = 24;

struct Embedding {
  std::vector<int> h;  ///< weakly increasing vertex images in [0, m)
  std::vector<int> s;  ///< entry indices in [0, t)
};

/// Backtracking over weakly monotone maps and entry indices. The returned
/// embedding has been re-verified. Throws CapacityError when the pattern has
/// more than kEmbedCap vertices.
std::optional<Embedding> embeddable(const OrderedGraph& f, const LoopedGraph& h, int t);

bool verify_embedding(const OrderedGraph& f, const LoopedGraph& h, const Embedding& e);

/// Looped graph on the large intervals of d, pair (j, j') colored C_jj'.
LoopedGraph loops_from_d(const NicelyColoredSubgraph& d);

/// Number of candidate looped graphs on [m] with t x t entries that are
/// non-empty subsets of a palette of `colors`; nullopt if it overflows.
std::optional<std::uint64_t> dstar_candidates(int colors, int m, int t);

/// max over candidate looped graphs of min size of an embeddable member; 0 if
/// no candidate embeds any member. Throws CapacityError when
/// 2^(|Sigma| t^2 m(m+1)/2) exceeds 2^kDStarLogCap.
int d_star(const ForbiddenFamily& fam, int m, int t);
int d_star_parallel(const ForbiddenFamily& fam, int m, int t);

/// Candidate number `index` in lexicographic order.
LoopedGraph dstar_candidate(int colors, int m, int t, std::uint64_t index);

nlohmann::json embedding_to_json(const Embedding& e);

}  // namespace ogt
