#include "../helpers.hpp"
#include "../oracles.hpp"
#include "ogt/embed.hpp"
#include "ogt/errors.hpp"
#include "ogt/tester.hpp"

#include <doctest.h>

using namespace ogt;
using testing_util::ab;
using testing_util::graph_from;

namespace {

LoopedGraph random_looped(int m, int t, int colors, Rng& rng) {
  LoopedGraph h(m, t, ThresholdMatrix(t, 1));
  for (int j = 0; j < m; ++j)
    for (int j2 = j; j2 < m; ++j2) {
      ThresholdMatrix mat(t, 1);
      for (int s = 0; s < t; ++s)
        for (int s2 = 0; s2 < t; ++s2)
          mat.set(s, s2, static_cast<ColorSet>(1 + rng.below((std::uint64_t{1} << colors) - 1)));
      h.set(j, j2, mat);
    }
  return h;
}

// Brute-force d_F(m, t) straight from the definition.
int d_star_oracle(const ForbiddenFamily& fam, int m, int t) {
  const auto count = dstar_candidates(fam.alphabet.size(), m, t);
  int best = 0;
  for (std::uint64_t i = 0; i < *count; ++i) {
    const LoopedGraph h = dstar_candidate(fam.alphabet.size(), m, t, i);
    int least = 0;
    for (const auto& f : fam.patterns)
      if (oracle::embeds(f, h) && (least == 0 || f.n() < least)) least = f.n();
    best = std::max(best, least);
  }
  return best;
}

}  // namespace

TEST_SUITE("embed") {
  TEST_CASE("trivial embeddings") {
    Rng rng(1);
    const OrderedGraph dot(ab(), 1);
    for (int rep = 0; rep < 10; ++rep) {
      const LoopedGraph h = random_looped(1 + static_cast<int>(rng.below(3)), 2, 2, rng);
      const auto e = embeddable(dot, h, 2);
      REQUIRE(e.has_value());
      CHECK(verify_embedding(dot, h, *e));
    }
    // A loop whose entries all contain b takes a b-edge on one vertex.
    const OrderedGraph edge = graph_from(ab(), 2, "b");
    const LoopedGraph loop(1, 2, ThresholdMatrix(2, color_bit(1)));
    const auto e = embeddable(edge, loop, 2);
    REQUIRE(e.has_value());
    CHECK(e->h == std::vector<int>{0, 0});
    const LoopedGraph only_a(1, 2, ThresholdMatrix(2, color_bit(0)));
    CHECK_FALSE(embeddable(edge, only_a, 2).has_value());
    CHECK_THROWS_AS(embeddable(edge, loop, 3), InputError);
    CHECK_THROWS_AS(embeddable(OrderedGraph(ab(), 9), loop, 2), CapacityError);
  }

  TEST_CASE("embeddable agrees with plain enumeration") {
    Rng rng(6);
    for (int rep = 0; rep < 300; ++rep) {
      const int m = 1 + static_cast<int>(rng.below(3)), t = 1 + static_cast<int>(rng.below(2));
      const LoopedGraph h = random_looped(m, t, 2, rng);
      const OrderedGraph f = testing_util::random_graph(ab(), 1 + static_cast<int>(rng.below(4)), rng);
      const auto e = embeddable(f, h, t);
      CHECK(e.has_value() == oracle::embeds(f, h));
      if (e) {
        CHECK(verify_embedding(f, h, *e));
        CHECK(std::is_sorted(e->h.begin(), e->h.end()));
      }
    }
  }

  TEST_CASE("embeddability is monotone under enlarging entries") {
    Rng rng(10);
    for (int rep = 0; rep < 100; ++rep) {
      const LoopedGraph h = random_looped(2, 2, 3, rng);
      LoopedGraph big = h;
      const int j = static_cast<int>(rng.below(2)), j2 = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(2 - j)));
      ThresholdMatrix mat = h.at(j, j2);
      mat.set(0, 1, mat.at(0, 1) | color_bit(static_cast<Color>(rng.below(3))));
      big.set(j, j2, mat);
      const OrderedGraph f = testing_util::random_graph(testing_util::abc(), 3, rng);
      if (const auto e = embeddable(f, h, 2)) CHECK(verify_embedding(f, big, *e));
    }
  }

  TEST_CASE("d_star small cases") {
    const ForbiddenFamily dot{ab(), {OrderedGraph(ab(), 1)}};
    CHECK(d_star(dot, 1, 1) == 1);
    CHECK(d_star(dot, 2, 1) == 1);
    const ForbiddenFamily edge{ab(), {graph_from(ab(), 2, "b")}};
    CHECK(dstar_candidates(2, 1, 1) == 3u);
    CHECK(d_star(edge, 1, 1) == 2);
    CHECK(d_star_oracle(edge, 1, 1) == 2);
    CHECK_THROWS_AS(d_star(edge, 3, 3), CapacityError);
  }

  TEST_CASE("d_star matches the definition and is monotone") {
    Rng rng(14);
    for (int rep = 0; rep < 6; ++rep) {
      ForbiddenFamily fam{ab(), {}};
      const int members = 1 + static_cast<int>(rng.below(2));
      for (int i = 0; i < members; ++i) fam.patterns.push_back(testing_util::random_graph(ab(), 2 + static_cast<int>(rng.below(2)), rng));
      const int small = d_star(fam, 1, 1);
      const int wide = d_star(fam, 2, 1);
      const int deep = d_star(fam, 1, 2);
      CHECK(small == d_star_oracle(fam, 1, 1));
      CHECK(wide == d_star_oracle(fam, 2, 1));
      CHECK(small <= wide);
      CHECK(small <= deep);
      CHECK(wide <= fam.max_pattern_size());
      CHECK(d_star_parallel(fam, 2, 1) == wide);

      ForbiddenFamily bigger = fam;
      bigger.patterns.push_back(testing_util::random_graph(ab(), fam.max_pattern_size() + 1, rng));
      CHECK(d_star(bigger, 2, 1) >= wide);
    }
  }

  TEST_CASE("loops from a nicely colored subgraph") {
    Rng rng(5);
    const OrderedGraph g = gen_planted(graph_from(ColorAlphabet({"0", "1"}), 2, "1"), 400, 0, 0.05, rng);
    PipelineConfig cfg;
    cfg.desk.gamma = Rational(1, 4);
    cfg.desk.t_factor = 1;
    const ForbiddenFamily fam{ColorAlphabet({"0", "1"}), {graph_from(ColorAlphabet({"0", "1"}), 2, "1")}};
    const PipelineReport rep = pipeline_demo(g, fam, cfg);
    REQUIRE(rep.nicely.success);
    const LoopedGraph h = loops_from_d(rep.nicely);
    CHECK(h.m() == rep.nicely.m);
    for (int j = 0; j < h.m(); ++j)
      for (int j2 = j; j2 < h.m(); ++j2) CHECK(h.at(j, j2) == rep.nicely.colors.at(j, j2));
    REQUIRE(rep.witness.has_value());
    // The pattern found in the cleaned graph embeds into D's looped graph.
    const auto e = embeddable(fam.patterns[0], h, h.t());
    REQUIRE(e.has_value());
    CHECK(oracle::embeds(fam.patterns[0], h));
    Embedding own;
    for (const auto& cell : rep.witness->cells) {
      own.h.push_back(cell.j);
      own.s.push_back(cell.s);
    }
    CHECK(verify_embedding(fam.patterns[0], h, own));
  }
}
