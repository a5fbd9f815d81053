#pragma once

// Simultaneous rounding of reals under two laminar families of sum constraints.

#include "ogt/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ogt {

/// Laminar family over {0, ..., ground-1}; must contain the ground set and
/// every singleton.
struct Multipartition {
  int ground = 0;
  std::vector<std::vector<int>> sets;
};

/// Sorts each set, drops duplicates, and adds the ground set and singletons.
Multipartition complete_multipartition(int ground, std::vector<std::vector<int>> sets);

struct LaminarViolation {
  std::string reason;
  std::vector<int> first;
  std::vector<int> second;
};

/// nullopt when valid; otherwise names the first offending set or pair.
std::optional<LaminarViolation> validate_multipartition(const Multipartition& m);

struct FlowEdge {
  int from = 0;
  int to = 0;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  std::int64_t flow = 0;
  std::string label;
};

struct RoundingResult {
  std::vector<std::int64_t> values;
  std::vector<FlowEdge> certificate;
  int node_count = 0;
};

/// Integer l_i in {floor, ceil}(lambda_i) such that every set of `m` and `n`
/// (and the whole ground set) keeps its sum in {floor, ceil} of the real sum.
/// Throws InputError for invalid families and InternalError if the
/// constructed circulation is infeasible.
RoundingResult round_two(const std::vector<Rational>& lambda, const Multipartition& m, const Multipartition& n);

/// Checks every element, every set of every family, and the total.
bool satisfies_rounding(const std::vector<Rational>& lambda, const std::vector<std::vector<std::vector<int>>>& families,
                        const std::vector<std::int64_t>& values);

/// Certificate check: bounds on every edge and conservation at every node.
bool certificate_is_valid(const RoundingResult& result);

/// All integer sequences meeting the floor/ceil constraints of every family,
/// in lexicographic order. Ground set at most 16 elements.
std::vector<std::vector<std::int64_t>> feasible_roundings(const std::vector<Rational>& lambda,
                                                          const std::vector<std::vector<std::vector<int>>>& families);

inline constexpr int kFeasibleRoundingsCap = 16;

}  // namespace ogt
