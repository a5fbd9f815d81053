// Acceptance checks: one PASS/FAIL line per criterion. Seeds, tolerances and
// time limits are fixed below; the exit status is non-zero if any line fails.

#include "../helpers.hpp"
#include "../oracles.hpp"
#include "ogt/embed.hpp"
#include "ogt/errors.hpp"
#include "ogt/metrics.hpp"
#include "ogt/ramsey.hpp"
#include "ogt/rounding.hpp"
#include "ogt/scheme.hpp"
#include "ogt/tester.hpp"
#include "ogt/threshold.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace ogt;
using testing_util::ab;
using testing_util::graph_from;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
  // Extra time limit checks that are not simply "whole criterion < X".
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

// ---------------------------------------------------------------- 1, 2 rounding

bool rounding_constraints_hold(const std::vector<Rational>& lambda, const std::vector<std::vector<int>>& sets,
                               const std::vector<std::int64_t>& ell) {
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (ell[i] != floor_i64(lambda[i]) && ell[i] != ceil_i64(lambda[i])) return false;
  auto sum_ok = [&](const std::vector<int>& set) {
    Rational want = 0;
    std::int64_t got = 0;
    for (int e : set) {
      want += lambda[static_cast<std::size_t>(e)];
      got += ell[static_cast<std::size_t>(e)];
    }
    return got == floor_i64(want) || got == ceil_i64(want);
  };
  for (const auto& s : sets)
    if (!sum_ok(s)) return false;
  std::vector<int> all(lambda.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return sum_ok(all);
}

Outcome rounding_exactness() {
  constexpr int kInstances = 1000;
  constexpr double kPerInstanceMs = 1.0;
  Outcome out;
  Rng rng(1001);
  double worst_ms = 0;
  int cross_checked = 0;
  for (int rep = 0; rep < kInstances; ++rep) {
    const int ground = 1 + static_cast<int>(rng.below(20));
    const auto lambda = testing_util::random_lambda(ground, rng);
    const auto m = complete_multipartition(ground, testing_util::random_laminar(ground, rng));
    const auto n = complete_multipartition(ground, testing_util::random_laminar(ground, rng));
    // Best of three identical runs, so a preempted run does not count.
    RoundingResult r;
    double best_ms = 1e9;
    for (int rerun = 0; rerun < 3; ++rerun) {
      const auto start = Clock::now();
      r = round_two(lambda, m, n);
      best_ms = std::min(best_ms, seconds_since(start) * 1000);
    }
    worst_ms = std::max(worst_ms, best_ms);
    std::vector<std::vector<int>> sets = m.sets;
    sets.insert(sets.end(), n.sets.begin(), n.sets.end());
    if (!rounding_constraints_hold(lambda, sets, r.values)) out.fail("constraint violated on instance " + std::to_string(rep));
    if (ground <= 12) {
      ++cross_checked;
      const auto brute = oracle::roundings(lambda, {m.sets, n.sets});
      if (brute != feasible_roundings(lambda, {m.sets, n.sets}))
        out.fail("feasible_roundings disagrees with enumeration on instance " + std::to_string(rep));
      if (std::find(brute.begin(), brute.end(), r.values) == brute.end())
        out.fail("rounding missing from enumeration on instance " + std::to_string(rep));
    }
  }
  if (worst_ms >= kPerInstanceMs) out.fail("slowest instance took " + std::to_string(worst_ms) + " ms");
  if (out.pass) {
    std::ostringstream os;
    os << kInstances << " instances, " << cross_checked << " cross-checked, slowest " << worst_ms << " ms";
    out.detail = os.str();
  }
  return out;
}

Outcome three_family_infeasibility() {
  // Element 4i + 2j + k; lambda 1/2 on a checkerboard of four corners.
  std::vector<Rational> lambda(8, Rational(0));
  for (int idx : {7, 4, 2, 1}) lambda[static_cast<std::size_t>(idx)] = Rational(1, 2);
  std::vector<std::vector<std::vector<int>>> families(3);
  for (int axis = 0; axis < 3; ++axis)
    for (int value = 0; value < 2; ++value) {
      std::vector<int> plane;
      for (int idx = 0; idx < 8; ++idx)
        if ((idx >> (2 - axis) & 1) == value) plane.push_back(idx);
      families[static_cast<std::size_t>(axis)].push_back(plane);
    }
  Outcome out;
  if (!oracle::roundings(lambda, families).empty()) out.fail("enumeration found a rounding");
  if (!feasible_roundings(lambda, families).empty()) out.fail("feasible_roundings found a rounding");
  if (feasible_roundings(lambda, {families[0], families[1]}).empty()) out.fail("two families already infeasible");
  if (out.pass) out.detail = "no rounding for three plane families; two families feasible";
  return out;
}

// ---------------------------------------------------------------- 3 index

Outcome index_monotonicity() {
  constexpr int kChains = 500;
  Outcome out;
  Rng rng(3003);
  for (int rep = 0; rep < kChains && out.pass; ++rep) {
    const int n = 2 + static_cast<int>(rng.below(59));
    const int colors = 2 + static_cast<int>(rng.below(3));
    std::vector<std::string> names;
    for (int c = 0; c < colors; ++c) names.push_back(std::string(1, static_cast<char>('a' + c)));
    const OrderedGraph g = testing_util::random_graph(ColorAlphabet(names), n, rng);
    const int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(n, 6))));
    const Partition p = testing_util::random_partition(n, k, rng);
    const int split = 1 + static_cast<int>(rng.below(3));
    std::vector<int> labels(p.labels());
    for (auto& l : labels) l = l * split + static_cast<int>(rng.below(static_cast<std::uint64_t>(split)));
    const Partition q(labels, k * split);
    if (!q.refines(p)) {
      out.fail("generated chain is not a refinement");
      break;
    }
    const Rational ip = index_partition(g, p), iq = index_partition(g, q);
    if (ip != oracle::index_of(g, p.labels(), p.k()) || iq != oracle::index_of(g, q.labels(), q.k()))
      out.fail("index differs from the direct formula on chain " + std::to_string(rep));
    else if (!(ip <= iq && iq <= 1))
      out.fail("ind(P) <= ind(P') <= 1 fails on chain " + std::to_string(rep));
  }
  if (out.pass) out.detail = std::to_string(kChains) + " chains, exact rationals";
  return out;
}

// ---------------------------------------------------------------- 4 Ramsey statistics

// Three classes of 24. Cross colors depend only on vertex types: x in 0..3
// on the first class, y and z in {0, 1} on the other two.
KPartiteChart ensemble_chart(Rng& rng) {
  constexpr int kSize = 24;
  std::vector<std::vector<Vertex>> classes(3);
  for (int i = 0; i < 3; ++i)
    for (int v = 0; v < kSize; ++v) classes[static_cast<std::size_t>(i)].push_back(i * kSize + v);
  Color c23[2][2];
  for (auto& row : c23)
    for (auto& c : row) c = static_cast<Color>(rng.below(2));
  ColorGrid grid(3 * kSize, 2);
  for (int u = 0; u < 3 * kSize; ++u)
    for (int v = u + 1; v < 3 * kSize; ++v) {
      const int cu = u / kSize, cv = v / kSize;
      Color c = 0;
      if (cu == 0 && cv == 1) c = static_cast<Color>(((u % 4) & 1) ^ (v % 2));
      else if (cu == 0 && cv == 2) c = static_cast<Color>(((u % 4) >> 1 & 1) ^ (v % 2));
      else if (cu == 1 && cv == 2) c = c23[u % 2][v % 2];
      grid.set(u, v, c);
    }
  return KPartiteChart(classes, grid);
}

Outcome ramsey_statistics() {
  constexpr int kTrials = 10000;
  constexpr int kQuantRuns = 1000;
  constexpr int kT = 2;
  const Rational delta(1, 2);
  const Rational alpha(1);
  Outcome out;
  Rng chart_rng(4004);
  const KPartiteChart chart = ensemble_chart(chart_rng);
  const int n_class = static_cast<int>(chart.part(0).size());
  const int n = 3 * n_class;
  RamseySizing sizing;
  sizing.levels[3] = {6, 8};
  sizing.levels[2] = {8, 4};

  std::vector<int> vertex_hits(static_cast<std::size_t>(n), 0);
  std::vector<int> pair_hits(static_cast<std::size_t>(n * n), 0);
  int empty = 0;
  const Rng base(4005);
  for (int trial = 0; trial < kTrials; ++trial) {
    Rng rng = base.derive("trial", static_cast<std::uint64_t>(trial));
    const Subchart h = prob_ramsey(chart, kT, delta, rng, sizing);
    if (h.empty) {
      ++empty;
      continue;
    }
    for (int i = 0; i < 3; ++i) {
      const auto& wi = h.picks[static_cast<std::size_t>(i)];
      if (static_cast<int>(wi.size()) != kT) out.fail("pick of wrong size");
      for (Vertex v : wi) {
        if (chart.class_of(v) != i) out.fail("pick outside its class");
        ++vertex_hits[static_cast<std::size_t>(v)];
      }
      for (int j = i + 1; j < 3; ++j) {
        const auto& wj = h.picks[static_cast<std::size_t>(j)];
        const Color c = chart.color(wi.front(), wj.front());
        for (Vertex u : wi)
          for (Vertex v : wj) {
            if (chart.color(u, v) != c) out.fail("non-monochromatic cross pair in trial " + std::to_string(trial));
            ++pair_hits[static_cast<std::size_t>(u * n + v)];
          }
      }
    }
  }
  auto sigma = [](double p, double trials) { return std::sqrt(p * (1 - p) / trials); };
  const double d = to_double(delta);
  const double empty_rate = static_cast<double>(empty) / kTrials;
  if (empty_rate > d + 3 * sigma(d, kTrials)) out.fail("empty rate " + std::to_string(empty_rate));

  const double pv = static_cast<double>(kT) / n_class;
  double worst_vertex = 0;
  for (int v = 0; v < n; ++v) worst_vertex = std::max(worst_vertex, static_cast<double>(vertex_hits[static_cast<std::size_t>(v)]) / kTrials);
  if (worst_vertex > pv + 3 * sigma(pv, kTrials)) out.fail("vertex inclusion " + std::to_string(worst_vertex));

  const double pp = pv * pv;
  double worst_pair = 0;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u / n_class < v / n_class)
        worst_pair = std::max(worst_pair, static_cast<double>(pair_hits[static_cast<std::size_t>(u * n + v)]) / kTrials);
  if (worst_pair > pp + 3 * sigma(pp, kTrials)) out.fail("pair inclusion " + std::to_string(worst_pair));

  // Quantitative variant: 10% of the cross pairs undesirable.
  Rng b_rng(4006);
  UndesirableSet b;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (u / n_class != v / n_class && b_rng.below(10) == 0) b.insert(u, v);
  double tries_sum = 0;
  const Rng qbase(4007);
  for (int run = 0; run < kQuantRuns; ++run) {
    Rng rng = qbase.derive("run", static_cast<std::uint64_t>(run));
    const QuantitativeResult q = quantitative_ramsey(chart, b, kT, alpha, rng, 1000, sizing);
    if (!q.success) out.fail("quantitative run " + std::to_string(run) + " never succeeded");
    else if (Rational(q.retained) > q.bound) out.fail("accepted draw above the bound");
    tries_sum += q.tries;
  }
  const double mean_tries = tries_sum / kQuantRuns;
  const double p_success = to_double(alpha) / 6;
  const double sigma_mean = std::sqrt((1 - p_success) / (p_success * p_success)) / std::sqrt(static_cast<double>(kQuantRuns));
  if (mean_tries > 6 / to_double(alpha) + 3 * sigma_mean) out.fail("mean tries " + std::to_string(mean_tries));

  if (out.pass) {
    std::ostringstream os;
    os << "empty " << empty_rate << ", max vertex " << worst_vertex << " (t/n " << pv << "), max pair " << worst_pair
       << " ((t/n)^2 " << pp << "), mean tries " << mean_tries;
    out.detail = os.str();
  }
  return out;
}

// ---------------------------------------------------------------- 5 classical Ramsey

Outcome classical_ramsey_truth() {
  Outcome out;
  auto sweep = [&](int n, bool& some_free, bool& all_have) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;
    some_free = false;
    all_have = true;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << pairs.size()); ++mask) {
      ColorGrid grid(n, 2);
      for (std::size_t e = 0; e < pairs.size(); ++e) grid.set(pairs[e].first, pairs[e].second, static_cast<Color>(mask >> e & 1));
      const bool truth = oracle::has_mono_clique(grid, all, 3);
      const auto found = mono_clique(grid, all, 3);
      if (found.has_value() != truth) out.fail("mono_clique disagrees on K" + std::to_string(n) + " coloring " + std::to_string(mask));
      if (found) {
        const Color c = grid((*found)[0], (*found)[1]);
        if (grid((*found)[0], (*found)[2]) != c || grid((*found)[1], (*found)[2]) != c) out.fail("reported clique not monochromatic");
      }
      some_free = some_free || !truth;
      all_have = all_have && truth;
    }
  };
  bool k5_free = false, k5_all = false, k6_free = false, k6_all = false;
  sweep(5, k5_free, k5_all);
  sweep(6, k6_free, k6_all);
  if (!k5_free) out.fail("no triangle-free 2-coloring of K5 found");
  if (!k6_all) out.fail("a 2-coloring of K6 without a monochromatic triangle");
  if (out.pass) out.detail = "all 1024 K5 and 32768 K6 colorings";
  return out;
}

// ---------------------------------------------------------------- 6 schemes

Outcome scheme_structure() {
  constexpr int kGraphs = 50;
  constexpr int kN = 240, kK = 2, kM = 4, kT = 4, kB = 2;
  Outcome out;
  Rng rng(6006);
  for (int rep = 0; rep < kGraphs && out.pass; ++rep) {
    const OrderedGraph g = testing_util::random_graph(ab(), kN, rng);
    const Partition p = testing_util::random_equipartition(kN, kK, rng);
    const RegularityScheme s = build_scheme(g, p, canonical_interval_equipartition(kN, kM), kB, Rational(1, 2), kT);
    if (const std::string v = oracle::scheme_violation(s, kN); !v.empty()) out.fail("graph " + std::to_string(rep) + ": " + v);
    if (s.Q_dprime.k() != 32 || s.Q_prime.k() * kB != 32) out.fail("graph " + std::to_string(rep) + ": wrong cell count");
    const SchemeAudit audit = audit_scheme(s, &p);
    if (!audit.all_pass()) out.fail("graph " + std::to_string(rep) + ": audit " + audit.failed()->name);
  }
  if (out.pass) out.detail = std::to_string(kGraphs) + " graphs, 32 cells each";
  return out;
}

// ---------------------------------------------------------------- pipeline instances

ColorAlphabet zero_one() { return ColorAlphabet({"0", "1"}); }

PipelineConfig desk_config() {
  PipelineConfig cfg;
  cfg.desk.gamma = Rational(1, 4);
  cfg.desk.t_factor = 1;
  cfg.desk.r_default = 2;
  cfg.epsilon = Rational(1, 4);
  return cfg;
}

struct PlantedInstance {
  std::string name;
  OrderedGraph graph;
  ForbiddenFamily family;
};

// Blow-ups of a single colored edge: half of all pairs must change to remove
// every copy, so each instance is far from free.
std::vector<PlantedInstance> planted_far_instances() {
  std::vector<PlantedInstance> out;
  const ColorAlphabet three({"0", "1", "2"});
  for (std::uint64_t seed : {1, 2, 3}) {
    Rng rng(seed);
    const OrderedGraph pat = graph_from(zero_one(), 2, "1");
    out.push_back({"edge n=400 seed " + std::to_string(seed), gen_planted(pat, 400, 0, 0.0, rng), {zero_one(), {pat}}});
  }
  {
    Rng rng(4);
    const OrderedGraph pat = graph_from(zero_one(), 2, "1");
    out.push_back({"edge n=480", gen_planted(pat, 480, 0, 0.0, rng), {zero_one(), {pat}}});
  }
  {
    Rng rng(5);
    const OrderedGraph pat = graph_from(three, 2, "2");
    out.push_back({"3-color edge n=400", gen_planted(pat, 400, 0, 0.0, rng), {three, {pat}}});
  }
  return out;
}

struct PipelineRun {
  std::string name;
  OrderedGraph graph;
  ForbiddenFamily family;
  std::optional<PipelineReport> report;
  std::string error;
  double seconds = 0;
};

std::vector<PipelineRun> run_planted_far() {
  std::vector<PipelineRun> runs;
  for (auto& inst : planted_far_instances()) {
    PipelineRun run{inst.name, inst.graph, inst.family, std::nullopt, "", 0};
    const auto start = Clock::now();
    try {
      run.report = pipeline_demo(inst.graph, inst.family, desk_config());
    } catch (const std::exception& e) {
      run.error = e.what();
    }
    run.seconds = seconds_since(start);
    runs.push_back(std::move(run));
  }
  return runs;
}

// ---------------------------------------------------------------- 7 cleaning audit

// Allowed set re-derived from the threshold graph and the chosen small
// intervals: C_jj' is the threshold color between any chosen pair.
std::string check_cleaned(const OrderedGraph& before, const OrderedGraph& after, const RegularityScheme& s,
                          const NicelyColoredSubgraph& d, const ThresholdGraph& h, const CleanAudit& audit) {
  const int m = s.m, t = s.t, num_colors = before.num_colors();
  std::vector<ThresholdMatrix> expect(static_cast<std::size_t>(m * m));
  for (int j = 0; j < m; ++j)
    for (int j2 = j; j2 < m; ++j2) {
      const auto& dj = d.D[static_cast<std::size_t>(j)];
      const auto& dj2 = d.D[static_cast<std::size_t>(j2)];
      ThresholdMatrix mat(t, full_color_set(num_colors));
      if (j != j2) mat = h.color(j * s.b + dj.front(), j2 * s.b + dj2.front());
      else if (dj.size() >= 2) mat = h.color(j * s.b + dj[0], j * s.b + dj[1]);
      expect[static_cast<std::size_t>(j * m + j2)] = mat;
    }
  std::int64_t changed = 0;
  for (Vertex u = 0; u < before.n(); ++u)
    for (Vertex v = u + 1; v < before.n(); ++v) {
      const int j = s.I.part_of(u), j2 = s.I.part_of(v);
      const ColorSet allowed =
          expect[static_cast<std::size_t>(j * m + j2)].at(s.Q_prime.label(u) % t, s.Q_prime.label(v) % t);
      if (!has_color(allowed, after.color(u, v))) return "pair (" + std::to_string(u) + "," + std::to_string(v) + ") not allowed";
      if (after.color(u, v) != before.color(u, v)) {
        ++changed;
        if (has_color(allowed, before.color(u, v))) return "allowed pair was recolored";
      }
    }
  if (audit.inside_interval + audit.undesirable_pair + audit.threshold_mismatch + audit.low_density != audit.total)
    return "case counts do not sum to the total";
  if (audit.total != changed) return "audit total " + std::to_string(audit.total) + " != changed " + std::to_string(changed);
  const std::int64_t n = before.n();
  if (n >= 100 * static_cast<std::int64_t>(m) * m && Rational(audit.inside_interval) > Rational(2, m) * Rational(n * (n - 1) / 2))
    return "inside-interval case above (2/m) C(n,2)";
  return "";
}

Outcome cleaning_audit(const std::vector<PipelineRun>& planted) {
  constexpr double kPerRunSeconds = 120;
  constexpr int kPerturbations = 3;
  Outcome out;
  int runs = 0, nontrivial = 0, size_checked = 0, noisy_reached = 0, noisy_total = 0;
  double worst = 0;
  auto check_run = [&](const std::string& name, const OrderedGraph& g, const PipelineReport& rep, double secs) {
    ++runs;
    worst = std::max(worst, secs);
    if (secs >= kPerRunSeconds) out.fail(name + ": run took " + std::to_string(secs) + " s");
    const Rational want_rho = Rational(1, 4) / (8 * g.num_colors());
    if (rep.rho != want_rho) out.fail(name + ": rho is not eps/(8|Sigma|)");
    const ThresholdGraph h = threshold_graph(g, rep.reps, rep.scheme, rep.eta, rep.rho);
    if (const auto err = check_cleaned(g, rep.cleaned, rep.scheme, rep.nicely, h, rep.audit); !err.empty()) out.fail(name + ": " + err);
    nontrivial += rep.audit.total > 0;
    size_checked += g.n() >= 100 * rep.scheme.m * rep.scheme.m;
    // The cleaning stage applied to perturbed copies with the same scheme.
    Rng rng(stable_hash(name));
    for (int k = 0; k < kPerturbations; ++k) {
      OrderedGraph noisy = g;
      for (Vertex u = 0; u < g.n(); ++u)
        for (Vertex v = u + 1; v < g.n(); ++v)
          if (rng.below(50) == 0) noisy.set_color(u, v, static_cast<Color>(rng.below(static_cast<std::uint64_t>(g.num_colors()))));
      const CleanResult c = clean(noisy, rep.scheme, rep.nicely, h);
      ++runs;
      nontrivial += c.audit.total > 0;
      if (const auto err = check_cleaned(noisy, c.graph, rep.scheme, rep.nicely, h, c.audit); !err.empty())
        out.fail(name + " perturbed: " + err);
    }
  };
  for (const auto& run : planted) {
    if (!run.report) {
      out.fail(run.name + ": " + run.error);
      continue;
    }
    check_run(run.name, run.graph, *run.report, run.seconds);
  }
  // Noisy inputs: only runs that reach the cleaning stage can be audited.
  for (std::uint64_t seed = 11; seed < 17; ++seed) {
    Rng rng(seed);
    const OrderedGraph pat = graph_from(zero_one(), 2, "1");
    const OrderedGraph g = gen_planted(pat, 400, 0, 0.01, rng);
    ++noisy_total;
    const auto start = Clock::now();
    try {
      const PipelineReport rep = pipeline_demo(g, {zero_one(), {pat}}, desk_config());
      ++noisy_reached;
      check_run("noisy seed " + std::to_string(seed), g, rep, seconds_since(start));
    } catch (const StageError&) {
    }
  }
  if (nontrivial == 0) out.fail("no run recolored anything");
  if (size_checked == 0) out.fail("no run had n >= 100 m^2");
  if (out.pass) {
    std::ostringstream os;
    os << runs << " cleanings (" << nontrivial << " with changes, " << noisy_reached << "/" << noisy_total
       << " noisy inputs reached cleaning), slowest pipeline " << worst << " s";
    out.detail = os.str();
  }
  return out;
}

// ---------------------------------------------------------------- 8 one-sidedness

std::optional<std::pair<std::vector<int>, std::vector<int>>> matrix_copy(const MatrixGrid& m, const MatrixGrid& pat) {
  std::optional<std::pair<std::vector<int>, std::vector<int>>> hit;
  oracle::for_each_subset(m.rows(), pat.rows(), [&](const std::vector<int>& rows) {
    if (hit) return;
    oracle::for_each_subset(m.cols(), pat.cols(), [&](const std::vector<int>& cols) {
      if (hit) return;
      for (int r = 0; r < pat.rows(); ++r)
        for (int c = 0; c < pat.cols(); ++c)
          if (m.at(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]) != pat.at(r, c)) return;
      hit = std::make_pair(rows, cols);
    });
  });
  return hit;
}

MatrixGrid random_pattern(int rows, int cols, Rng& rng) {
  MatrixGrid p(ab(), rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) p.set(r, c, static_cast<Color>(rng.below(2)));
  return p;
}

Outcome one_sidedness() {
  constexpr int kInstances = 100;
  constexpr int kTrials = 1000;
  Outcome out;
  Rng rng(8008);
  std::int64_t rejections = 0;
  int graphs = 0, unavoidable = 0;
  while (graphs < kInstances) {
    const int rep = graphs;
    ForbiddenFamily fam{ab(), {testing_util::random_graph(ab(), 3, rng)}};
    if (rng.below(2) == 0) fam.patterns.push_back(testing_util::random_graph(ab(), 4, rng));
    // Some families are unavoidable at this size ({aaa, bbb} by Ramsey); draw again.
    OrderedGraph g;
    try {
      g = gen_free(fam, 20, rng);
    } catch (const InputError&) {
      ++unavoidable;
      continue;
    }
    ++graphs;
    if (oracle::contains(g, fam.patterns)) {
      out.fail("generated graph " + std::to_string(rep) + " is not free");
      continue;
    }
    rejections += sample_test(g, fam, 6, kTrials, static_cast<std::uint64_t>(rep)).rejections;
  }
  int matrices = 0;
  while (matrices < kInstances) {
    const int side = 2 + static_cast<int>(rng.below(2));
    MatrixFamily fam{ab(), {random_pattern(side - 1 + static_cast<int>(rng.below(2)), side, rng)}};
    MatrixGrid m = gen_matrix(ab(), 8, 8, rng);
    // Random repair: recolor one cell of some copy until none is left.
    bool free = false;
    for (int step = 0; step < 2000; ++step) {
      const auto hit = matrix_copy(m, fam.patterns[0]);
      if (!hit) {
        free = true;
        break;
      }
      const int r = hit->first[rng.below(hit->first.size())], c = hit->second[rng.below(hit->second.size())];
      m.set(r, c, static_cast<Color>(1 - m.at(r, c)));
    }
    if (!free) continue;
    rejections += matrix_test(m, fam, 4, kTrials, static_cast<std::uint64_t>(matrices)).rejections;
    ++matrices;
  }
  if (rejections != 0) out.fail(std::to_string(rejections) + " rejections on free inputs");
  if (out.pass) out.detail = "100 graphs and 100 matrices, 1000 trials each, 0 rejections (" + std::to_string(unavoidable) + " families redrawn)";
  return out;
}

// ---------------------------------------------------------------- 9 sampling

Outcome sampling_consistency() {
  constexpr int kInstances = 20;
  constexpr int kTrials = 10000;
  Outcome out;
  Rng rng(9009);
  double worst_z = 0;
  for (int rep = 0; rep < kInstances; ++rep) {
    const int n = 12 + static_cast<int>(rng.below(19));
    const int q = 3 + static_cast<int>(rng.below(2));
    const OrderedGraph pat = testing_util::random_graph(ab(), 3, rng);
    const double noise = 0.3 + 0.5 * rng.uniform01();
    const OrderedGraph g = gen_planted(pat, n, static_cast<Color>(rng.below(2)), noise, rng);
    const ForbiddenFamily fam{ab(), {pat}};
    const double p = static_cast<double>(oracle::witness_sets(g, fam.patterns, q)) / static_cast<double>(oracle::choose(n, q));
    const double rate = sample_test(g, fam, q, kTrials, static_cast<std::uint64_t>(rep)).rejection_rate();
    const double sigma = std::sqrt(p * (1 - p) / kTrials);
    const double dev = std::abs(rate - p);
    if (sigma == 0) {
      if (dev != 0) out.fail("instance " + std::to_string(rep) + ": rate " + std::to_string(rate) + " with p exactly " + std::to_string(p));
      continue;
    }
    worst_z = std::max(worst_z, dev / sigma);
    if (dev > 3 * sigma)
      out.fail("instance " + std::to_string(rep) + ": rate " + std::to_string(rate) + " vs " + std::to_string(p));
  }
  if (out.pass) {
    std::ostringstream os;
    os << kInstances << " instances, largest deviation " << worst_z << " sigma";
    out.detail = os.str();
  }
  return out;
}

// ---------------------------------------------------------------- 10 matrix duality

Outcome matrix_duality() {
  constexpr int kGrids = 50;
  Outcome out;
  Rng rng(10010);
  int rejecting = 0;
  for (int rep = 0; rep < kGrids; ++rep) {
    const int rows = 4 + static_cast<int>(rng.below(6)), cols = 4 + static_cast<int>(rng.below(6));
    const MatrixGrid m = gen_matrix(ab(), rows, cols, rng);
    const int side = 2 + static_cast<int>(rng.below(2));
    MatrixFamily fam{ab(), {random_pattern(side, side, rng)}};
    if (rng.below(2) == 0) fam.patterns.push_back(random_pattern(side, 3, rng));
    const int q = 3;
    const auto seed = static_cast<std::uint64_t>(rep);
    const MatrixTestReport direct = matrix_test(m, fam, q, 8, seed);
    const ReductionTestReport via = matrix_test_via_graph(m, fam, q, 8, seed);
    if (direct.per_trial != via.report.per_trial || direct.reject != via.report.reject)
      out.fail("verdicts differ on grid " + std::to_string(rep));
    if (via.sigma0_in_witness) out.fail("fresh color in a witness on grid " + std::to_string(rep));
    rejecting += direct.reject;
  }
  if (out.pass) out.detail = std::to_string(kGrids) + " grids, " + std::to_string(rejecting) + " rejecting";
  return out;
}

// ---------------------------------------------------------------- 11 embeddability

int d_star_by_definition(const ForbiddenFamily& fam, int m, int t) {
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

Outcome embeddability(const std::vector<PipelineRun>& planted) {
  Outcome out;
  int self = 0;
  for (const auto& run : planted) {
    if (!run.report || !run.report->witness) continue;
    const PipelineReport& rep = *run.report;
    const LoopedGraph h = loops_from_d(rep.nicely);
    const OrderedGraph& f = run.family.patterns[static_cast<std::size_t>(rep.witness->pattern)];
    Embedding own;
    for (const auto& cell : rep.witness->cells) {
      own.h.push_back(cell.j);
      own.s.push_back(cell.s);
    }
    if (!verify_embedding(f, h, own) || !oracle::embeds(f, h) || !embeddable(f, h, h.t()))
      out.fail(run.name + ": witness pattern does not embed");
    ++self;
  }
  if (self == 0) out.fail("no pipeline witness to check");

  const ForbiddenFamily dot{ab(), {OrderedGraph(ab(), 1)}};
  for (int m = 1; m <= 2; ++m)
    for (int t = 1; t <= 2; ++t)
      if (d_star(dot, m, t) != 1) out.fail("d_star of the one-vertex family is not 1");
  const ForbiddenFamily edge{ab(), {graph_from(ab(), 2, "b")}};
  if (d_star(edge, 1, 1) != 2 || d_star_by_definition(edge, 1, 1) != 2) out.fail("single-edge d_star is not 2");

  // Monotonicity in m, t and the family, on every family of up to two
  // patterns on 2 or 3 vertices drawn below.
  Rng rng(11011);
  for (int rep = 0; rep < 8 && out.pass; ++rep) {
    ForbiddenFamily fam{ab(), {testing_util::random_graph(ab(), 2 + static_cast<int>(rng.below(2)), rng)}};
    if (rng.below(2) == 0) fam.patterns.push_back(testing_util::random_graph(ab(), 2 + static_cast<int>(rng.below(2)), rng));
    const int d11 = d_star(fam, 1, 1), d21 = d_star(fam, 2, 1), d12 = d_star(fam, 1, 2), d22 = d_star_parallel(fam, 2, 2);
    if (d11 != d_star_by_definition(fam, 1, 1) || d21 != d_star_by_definition(fam, 2, 1)) out.fail("d_star differs from its definition");
    if (!(d11 <= d21 && d11 <= d12 && d21 <= d22 && d12 <= d22)) out.fail("d_star not monotone in (m, t)");
    if (d22 > fam.max_pattern_size()) out.fail("d_star above the largest pattern");
    ForbiddenFamily bigger = fam;
    bigger.patterns.push_back(testing_util::random_graph(ab(), fam.max_pattern_size() + 1, rng));
    if (d_star(bigger, 2, 1) < d21) out.fail("d_star decreased when a pattern was added");
  }
  if (out.pass) out.detail = std::to_string(self) + " self-embeddings, d_star checks up to m = t = 2";
  return out;
}

// ---------------------------------------------------------------- 12 end to end

Outcome end_to_end(const std::vector<PipelineRun>& planted) {
  constexpr double kPerInstanceSeconds = 300;
  Outcome out;
  double worst = 0;
  for (const auto& run : planted) {
    worst = std::max(worst, run.seconds);
    if (run.seconds >= kPerInstanceSeconds) out.fail(run.name + ": " + std::to_string(run.seconds) + " s");
    if (!run.report) {
      out.fail(run.name + ": " + run.error);
      continue;
    }
    const PipelineReport& rep = *run.report;
    if (!rep.witness || !rep.witness->failure.empty()) {
      out.fail(run.name + ": no witness cells");
      continue;
    }
    const Witness& w = *rep.witness;
    const OrderedGraph& f = run.family.patterns[static_cast<std::size_t>(w.pattern)];
    if (static_cast<int>(w.cells.size()) != f.n() || static_cast<int>(w.copy.size()) != f.n()) {
      out.fail(run.name + ": witness has the wrong size");
      continue;
    }
    if (!oracle::matches(rep.cleaned, w.copy, f)) out.fail(run.name + ": copy is not in the cleaned graph");
    const RegularityScheme& s = rep.scheme;
    for (std::size_t i = 0; i + 1 < w.cells.size(); ++i) {
      const auto& a = w.cells[i];
      const auto& b = w.cells[i + 1];
      if (!(a.j < b.j || (a.j == b.j && a.r < b.r))) out.fail(run.name + ": (j, r) not strictly increasing");
    }
    auto cell = [&](const WitnessCell& c) { return rep.reps.cells[static_cast<std::size_t>((c.j * s.b + c.r) * s.t + c.s)]; };
    for (int i = 0; i < f.n(); ++i)
      for (int i2 = i + 1; i2 < f.n(); ++i2)
        if (oracle::density(run.graph, cell(w.cells[static_cast<std::size_t>(i)]), cell(w.cells[static_cast<std::size_t>(i2)]),
                            f.color(i, i2)) < rep.eta)
          out.fail(run.name + ": witness density below eta");
  }
  if (out.pass) {
    std::ostringstream os;
    os << planted.size() << " planted instances, slowest " << worst << " s";
    out.detail = os.str();
  }
  return out;
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  std::vector<PipelineRun> planted;
  const std::vector<Criterion> criteria{
      {1, "rounding exactness", 60, rounding_exactness},
      {2, "three-family infeasibility", 1, three_family_infeasibility},
      {3, "index monotonicity", 30, index_monotonicity},
      {4, "quantitative Ramsey statistics", 120, ramsey_statistics},
      {5, "classical Ramsey ground truth", 60, classical_ramsey_truth},
      {6, "scheme structure", 60, scheme_structure},
      // Pipeline time is limited per run inside the criterion.
      {7, "cleaning audit", 1e9,
       [&] {
         planted = run_planted_far();
         return cleaning_audit(planted);
       }},
      {8, "one-sidedness", 120, one_sidedness},
      {9, "sampling consistency", 300, sampling_consistency},
      {10, "matrix duality", 60, matrix_duality},
      {11, "embeddability and d_star", 60, [&] { return embeddability(planted); }},
      {12, "end-to-end demo", 1e9, [&] { return end_to_end(planted); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(start);
    if (secs >= c.limit_seconds) o.fail("took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_seconds) + " s");
    failures += !o.pass;
    std::printf("%s %2d %-32s %.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
