#include "cli.hpp"

#include "ogt/embed.hpp"
#include "ogt/errors.hpp"
#include "ogt/io.hpp"
#include "ogt/ramsey.hpp"
#include "ogt/rounding.hpp"
#include "ogt/scheme.hpp"
#include "ogt/tester.hpp"
#include "ogt/threshold.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <functional>
#include <sstream>

namespace ogt::cli {

namespace {

using Json = nlohmann::json;

struct Options {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
  std::string format = "json";

  std::string graph, family, pattern, matrix, chart, looped, cfg, input, undesirable;
  std::string model = "uniform";
  std::string alphabet = "0,1";
  std::string inside;
  std::string method = "greedy";
  std::string mode = "prob";
  int n = 0, m = 0, k = 0, t = 0, q = 0, trials = 100, rows = 0, cols = 0, size = 0, max_tries = 50;
  int cross = 0;
  double density = 1.0;
  std::string delta = "1/2", alpha = "1";
  bool via_graph = false;
  std::optional<int> inner_size, level_s, level_r;
};

ColorAlphabet parse_alphabet(const std::string& text) {
  std::vector<std::string> symbols;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) symbols.push_back(item);
  return ColorAlphabet(std::move(symbols));
}

Json load(const std::string& path, const char* what) {
  if (path.empty()) throw InputError(std::string("missing --") + what);
  return io::read_json_file(path);
}

// -------------------------------------------------------------- pipeline cfg

template <class T>
void maybe(const Json& j, const char* key, std::optional<T>& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

Rational rational_field(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
  throw InputError("rationals must be integers or \"p/q\" strings");
}

void maybe_rational(const Json& j, const char* key, std::optional<Rational>& dst) {
  if (j.contains(key)) dst = rational_field(j.at(key));
}

DeskConfig desk_from_json(const Json& j) {
  DeskConfig c;
  if (j.contains("k")) c.k = j.at("k").get<int>();
  if (j.contains("gamma")) c.gamma = rational_field(j.at("gamma"));
  maybe(j, "m0", c.m0);
  if (j.contains("r_default")) c.r_default = j.at("r_default").get<int>();
  if (j.contains("r_table"))
    for (const auto& e : j.at("r_table")) c.r_table[{e.at(0).get<int>(), e.at(1).get<int>()}] = e.at(2).get<int>();
  if (j.contains("f_table"))
    for (const auto& e : j.at("f_table")) c.f.table[e.at(0).get<int>()] = e.at(1).get<int>();
  if (j.contains("f_multiplier")) c.f.multiplier = j.at("f_multiplier").get<int>();
  if (j.contains("budget")) c.budget = j.at("budget").get<std::int64_t>();
  if (j.contains("delta")) c.delta = rational_field(j.at("delta"));
  maybe(j, "t_factor", c.t_factor);
  return c;
}

PipelineConfig pipeline_from_json(const Json& j, std::uint64_t seed) {
  PipelineConfig c;
  c.desk = desk_from_json(j);
  maybe_rational(j, "epsilon", c.epsilon);
  maybe_rational(j, "rho", c.rho);
  maybe_rational(j, "eta", c.eta);
  maybe(j, "d", c.d);
  if (j.contains("use_d_star")) c.use_d_star = j.at("use_d_star").get<bool>();
  if (j.contains("max_tries")) c.max_tries = j.at("max_tries").get<int>();
  if (j.contains("random_representatives")) c.random_representatives = j.at("random_representatives").get<bool>();
  if (j.contains("rep_alpha")) c.rep_alpha = rational_field(j.at("rep_alpha"));
  if (j.contains("rep_budget")) c.rep_budget = j.at("rep_budget").get<int>();
  maybe(j, "inner_size", c.inner_size);
  c.seed = seed;
  c.desk.seed = seed;
  return c;
}

// -------------------------------------------------------------- commands

Json cmd_gen(const std::string& what, const Options& o) {
  Rng rng = Rng(o.seed).derive("gen");
  if (what == "graph") {
    if (o.model == "uniform") return io::graph_to_json(gen_uniform(parse_alphabet(o.alphabet), o.n, rng));
    if (o.model == "two-block") return io::graph_to_json(gen_two_block(parse_alphabet(o.alphabet), o.n, o.cross));
    if (o.model == "planted") {
      const OrderedGraph p = io::graph_from_json(load(o.pattern, "pattern"));
      const Color inside = o.inside.empty() ? 0 : p.alphabet().index_of(o.inside);
      if (o.density < 0 || o.density > 1) throw InputError("--density must lie in [0, 1]");
      return io::graph_to_json(gen_planted(p, o.n, inside, 1.0 - o.density, rng));
    }
    if (o.model == "free") return io::graph_to_json(gen_free(io::family_from_json(load(o.family, "family")), o.n, rng));
    throw InputError("unknown graph model: " + o.model);
  }
  if (what == "matrix") return io::matrix_to_json(gen_matrix(parse_alphabet(o.alphabet), o.rows, o.cols, rng));
  if (what == "chart") {
    if (o.k < 1 || o.size < 1) throw InputError("--k and --size must be positive");
    const ColorAlphabet a = parse_alphabet(o.alphabet);
    const int n = o.k * o.size;
    std::vector<std::vector<Vertex>> classes(static_cast<std::size_t>(o.k));
    for (int v = 0; v < n; ++v) classes[static_cast<std::size_t>(v / o.size)].push_back(v);
    ColorGrid grid(n, a.size());
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) grid.set(u, v, static_cast<Color>(rng.below(static_cast<std::uint64_t>(a.size()))));
    return io::chart_to_json(KPartiteChart(std::move(classes), std::move(grid)), a);
  }
  if (what == "counterexample") {
    const Counterexample c = gen_counterexample(o.n, o.m, o.k);
    Json b = Json::array();
    for (auto [u, v] : c.b.edges()) b.push_back({u, v});
    return {{"graph", io::graph_to_json(c.graph)}, {"undesirable", b}, {"cliques", c.cliques}, {"planted", c.planted}};
  }
  throw InputError("unknown gen target: " + what);
}

Json cmd_count(const Options& o) {
  const OrderedGraph g = io::graph_from_json(load(o.graph, "graph"));
  const OrderedGraph f = io::graph_from_json(load(o.pattern, "pattern"));
  const BigInt c = o.jobs > 1 ? count_induced_ordered_parallel(g, f) : count_induced_ordered(g, f);
  return {{"count", c.str()}, {"n", g.n()}, {"pattern_size", f.n()}};
}

Json cmd_distance(const Options& o) {
  const OrderedGraph g = io::graph_from_json(load(o.graph, "graph"));
  const ForbiddenFamily fam = io::family_from_json(load(o.family, "family"));
  DistanceMethod m;
  if (o.method == "exact")
    m = DistanceMethod::exact;
  else if (o.method == "greedy")
    m = DistanceMethod::greedy;
  else
    throw InputError("--method must be exact or greedy");
  const DistanceResult r = distance_to_freeness(g, fam, m);
  return {{"distance", to_string(r.distance)}, {"recolorings", r.recolorings}, {"is_bound", r.is_bound},
          {"method", o.method}, {"repaired", io::graph_to_json(r.repaired)}};
}

Json cmd_test(const Options& o, bool& reject) {
  const OrderedGraph g = io::graph_from_json(load(o.graph, "graph"));
  const ForbiddenFamily fam = io::family_from_json(load(o.family, "family"));
  const TestReport r =
      o.jobs > 1 ? sample_test_parallel(g, fam, o.q, o.trials, o.seed) : sample_test(g, fam, o.q, o.trials, o.seed);
  reject = r.reject;
  return test_report_to_json(r);
}

Json cmd_matrix_test(const Options& o, bool& reject) {
  const MatrixGrid m = io::matrix_from_json(load(o.matrix, "matrix"));
  const MatrixFamily fam = io::matrix_family_from_json(load(o.family, "family"));
  if (o.via_graph) {
    const ReductionTestReport r = matrix_test_via_graph(m, fam, o.q, o.trials, o.seed);
    reject = r.report.reject;
    Json j = matrix_report_to_json(r.report);
    j["path"] = "graph";
    j["sigma0_in_witness"] = r.sigma0_in_witness;
    return j;
  }
  const MatrixTestReport r = matrix_test(m, fam, o.q, o.trials, o.seed);
  reject = r.reject;
  Json j = matrix_report_to_json(r);
  j["path"] = "matrix";
  return j;
}

Json trace_to_json(const RobustnessTrace& t) {
  Json it = Json::array();
  for (const auto& st : t.iterations) it.push_back({{"k", st.k}, {"index", to_string(st.index)}});
  return {{"iterations", it}, {"certified", t.certified}, {"budget_used", t.budget_used}};
}

Json cmd_scheme(const Options& o) {
  const OrderedGraph g = io::graph_from_json(load(o.graph, "graph"));
  DeskConfig c = o.cfg.empty() ? DeskConfig{} : desk_from_json(io::read_json_file(o.cfg));
  c.seed = o.seed;
  const DeskResult r = desk_scheme(g, c);
  return {{"scheme", scheme_to_json(r.scheme)}, {"audit", audit_to_json(r.audit)}, {"base_parts", r.P.k()},
          {"base_labels", r.P.labels()}, {"interval_cuts", r.J.cuts()},
          {"base_trace", trace_to_json(r.base_trace)}, {"interval_trace", trace_to_json(r.interval_trace)},
          {"q_prime_robustness", {{"base_index", to_string(r.q_prime_audit.base_index)},
                                  {"best_index", to_string(r.q_prime_audit.best_index)},
                                  {"certified", r.q_prime_audit.certified}}}};
}

Json subchart_to_json(const Subchart& s) {
  Json j = {{"empty", s.empty}, {"certified", s.certified}};
  if (s.empty) {
    j["reason"] = s.empty_reason;
    return j;
  }
  j["picks"] = s.picks;
  j["colors"] = s.colors;
  return j;
}

Json cmd_ramsey(const Options& o) {
  const io::ChartInput in = io::chart_from_json(load(o.chart, "chart"));
  UndesirableSet b;
  if (!o.undesirable.empty())
    for (const auto& e : io::read_json_file(o.undesirable)) b.insert(e.at(0).get<int>(), e.at(1).get<int>());
  const Rational delta = parse_rational(o.delta), alpha = parse_rational(o.alpha);
  RamseySizing sizing;
  if (o.level_s || o.level_r) {
    if (!(o.level_s && o.level_r)) throw InputError("--level-s and --level-r go together");
    for (int lvl = 2; lvl <= in.chart.k(); ++lvl) sizing.levels[lvl] = {*o.level_s, *o.level_r};
  }
  Rng rng = Rng(o.seed).derive("ramsey");
  if (o.mode == "prob") {
    Json j = subchart_to_json(prob_ramsey(in.chart, o.t, delta, rng, sizing));
    j["threshold"] = prob_ramsey_threshold(in.chart.palette(), in.chart.k(), o.t, delta);
    return j;
  }
  if (o.mode == "quantitative") {
    const QuantitativeResult r = quantitative_ramsey(in.chart, b, o.t, alpha, rng, o.max_tries, sizing);
    return {{"success", r.success}, {"chart", subchart_to_json(r.chart)}, {"retained", r.retained},
            {"bound", to_string(r.bound)}, {"eps", to_string(r.eps)}, {"tries", r.tries}};
  }
  if (o.mode == "orderly") {
    const OrderlyResult r = orderly_ramsey(in.chart, b, o.t, rng, o.max_tries, sizing, o.inner_size);
    Json j = {{"success", r.success}, {"tries", r.tries}, {"certified", r.certified}, {"inner_size", r.inner_size}};
    if (!r.success) {
      j["failure"] = r.failure;
      return j;
    }
    j["u"] = r.u;
    j["inner_colors"] = r.inner_colors;
    j["cross_colors"] = r.cross_colors;
    j["retained"] = r.retained;
    j["bound"] = to_string(r.bound);
    j["eps"] = to_string(r.eps);
    return j;
  }
  throw InputError("--mode must be prob, quantitative or orderly");
}

Json cmd_round(const Options& o) {
  const Json in = load(o.input, "input");
  std::vector<Rational> lambda;
  for (const auto& v : in.at("lambda")) lambda.push_back(rational_field(v));
  const int ground = static_cast<int>(lambda.size());
  const auto sets = [&](const char* upper, const char* lower) {
    if (in.contains(upper)) return in.at(upper).get<std::vector<std::vector<int>>>();
    return in.value(lower, std::vector<std::vector<int>>{});
  };
  const auto fm = sets("M", "m"), fn = sets("N", "n");
  const Multipartition mm = complete_multipartition(ground, fm), mn = complete_multipartition(ground, fn);
  const RoundingResult r = round_two(lambda, mm, mn);
  Json constraints = Json::array();
  auto echo = [&](const char* family, const std::vector<std::vector<int>>& sets) {
    for (const auto& set : sets) {
      Rational sum = 0;
      std::int64_t got = 0;
      for (int i : set) {
        sum += lambda[static_cast<std::size_t>(i)];
        got += r.values[static_cast<std::size_t>(i)];
      }
      constraints.push_back({{"family", family}, {"set", set}, {"sum", to_string(sum)}, {"floor", floor_i64(sum)},
                             {"ceil", ceil_i64(sum)}, {"rounded", got}});
    }
  };
  echo("M", mm.sets);
  echo("N", mn.sets);
  return {{"ell", r.values},
          {"feasible", satisfies_rounding(lambda, {mm.sets, mn.sets}, r.values)},
          {"certificate_valid", certificate_is_valid(r)},
          {"constraints", constraints}};
}

Json cmd_pipeline(const Options& o, bool clean_only) {
  const OrderedGraph g = io::graph_from_json(load(o.graph, "graph"));
  const ForbiddenFamily fam = io::family_from_json(load(o.family, "family"));
  const PipelineConfig c = pipeline_from_json(o.cfg.empty() ? Json::object() : io::read_json_file(o.cfg), o.seed);
  const PipelineReport r = pipeline_demo(g, fam, c);
  if (!clean_only) return r.json;
  return {{"graph", io::graph_to_json(r.cleaned)}, {"audit", r.json.at("stages").at("clean")},
          {"closeness", r.json.at("closeness")}, {"cleaned_free", r.cleaned_free}};
}

Json cmd_embed(const Options& o) {
  ColorAlphabet a;
  const LoopedGraph h = io::looped_from_json(load(o.looped, "looped"), &a);
  const OrderedGraph f = io::graph_from_json(load(o.pattern, "pattern"));
  if (!(f.alphabet() == a)) throw InputError("pattern and looped graph alphabets differ");
  const auto e = embeddable(f, h, h.t());
  Json j = {{"embeddable", e.has_value()}};
  if (e) j["witness"] = embedding_to_json(*e);
  return j;
}

Json cmd_dstar(const Options& o) {
  const ForbiddenFamily fam = io::family_from_json(load(o.family, "family"));
  const int d = o.jobs > 1 ? d_star_parallel(fam, o.m, o.t) : d_star(fam, o.m, o.t);
  return {{"d_star", d}, {"m", o.m}, {"t", o.t}, {"candidates", *dstar_candidates(fam.alphabet.size(), o.m, o.t)}};
}

Json error_json(const char* kind, const std::string& msg, const std::string& stage = {}) {
  Json j = {{"error", kind}, {"message", msg}};
  if (!stage.empty()) j["stage"] = stage;
  return j;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Ordered graph testing toolkit"};
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "Root seed")->capture_default_str();
  app.add_option("--jobs", o.jobs, "OpenMP threads for parallel kernels")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "Write output to this file");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json"}));
  app.fallthrough();

  std::string gen_target;
  auto* gen = app.add_subcommand("gen", "Generate instances");
  gen->add_option("target", gen_target, "graph | matrix | chart | counterexample")->required();
  gen->add_option("--model", o.model, "uniform | planted | two-block | free");
  gen->add_option("--alphabet", o.alphabet, "Comma-separated symbols");
  gen->add_option("--n", o.n);
  gen->add_option("--m", o.m);
  gen->add_option("--k", o.k);
  gen->add_option("--size", o.size, "Chart class size");
  gen->add_option("--rows", o.rows);
  gen->add_option("--cols", o.cols);
  gen->add_option("--pattern", o.pattern, "Pattern graph JSON for the planted model");
  gen->add_option("--family", o.family, "Family JSON for the free model");
  gen->add_option("--density", o.density, "Probability a planted pair keeps its color");
  gen->add_option("--inside", o.inside, "Color inside planted blocks");
  gen->add_option("--cross", o.cross, "Cross color for two-block");

  auto* count = app.add_subcommand("count", "Count induced ordered copies");
  count->add_option("--graph", o.graph)->required();
  count->add_option("--pattern", o.pattern)->required();

  auto* dist = app.add_subcommand("distance", "Distance to family-freeness");
  dist->add_option("--graph", o.graph)->required();
  dist->add_option("--family", o.family)->required();
  dist->add_option("--method", o.method, "exact | greedy");

  auto* test = app.add_subcommand("test", "Sampling tester");
  test->add_option("--graph", o.graph)->required();
  test->add_option("--family", o.family)->required();
  test->add_option("--q", o.q)->required();
  test->add_option("--trials", o.trials);

  auto* mtest = app.add_subcommand("matrix-test", "Submatrix sampling tester");
  mtest->add_option("--matrix", o.matrix)->required();
  mtest->add_option("--family", o.family)->required();
  mtest->add_option("--q", o.q)->required();
  mtest->add_option("--trials", o.trials);
  mtest->add_flag("--via-graph", o.via_graph, "Run through the graph reduction");

  auto* scheme = app.add_subcommand("scheme", "Build and audit a regularity scheme");
  scheme->add_option("--graph", o.graph)->required();
  scheme->add_option("--cfg", o.cfg, "Config JSON");

  auto* ramsey = app.add_subcommand("ramsey", "Ramsey extraction on a k-partite chart");
  ramsey->add_option("--chart", o.chart)->required();
  ramsey->add_option("--t", o.t)->required();
  ramsey->add_option("--mode", o.mode, "prob | quantitative | orderly");
  ramsey->add_option("--delta", o.delta);
  ramsey->add_option("--alpha", o.alpha);
  ramsey->add_option("--undesirable", o.undesirable, "JSON array of [u, v] pairs");
  ramsey->add_option("--max-tries", o.max_tries);
  ramsey->add_option("--inner-size", o.inner_size);
  ramsey->add_option("--level-s", o.level_s);
  ramsey->add_option("--level-r", o.level_r);

  auto* round = app.add_subcommand("round", "Round reals under two laminar families");
  round->add_option("--input", o.input)->required();

  auto* clean = app.add_subcommand("clean", "Run the removal pipeline and emit the cleaned graph");
  clean->add_option("--graph", o.graph)->required();
  clean->add_option("--family", o.family)->required();
  clean->add_option("--cfg", o.cfg);

  auto* embed = app.add_subcommand("embed", "Embeddability of a pattern into a looped graph");
  embed->add_option("--pattern", o.pattern)->required();
  embed->add_option("--looped", o.looped)->required();

  auto* dstar = app.add_subcommand("dstar", "Worst-case embeddable member size");
  dstar->add_option("--family", o.family)->required();
  dstar->add_option("--m", o.m)->required();
  dstar->add_option("--t", o.t)->required();

  auto* pipe = app.add_subcommand("pipeline", "End-to-end removal pipeline");
  pipe->add_option("--graph", o.graph)->required();
  pipe->add_option("--family", o.family)->required();
  pipe->add_option("--cfg", o.cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json("usage", e.what()).dump() << "\n";
    return 2;
  }

  omp_set_num_threads(o.jobs);
  bool reject = false;
  try {
    Json result;
    if (gen->parsed())
      result = cmd_gen(gen_target, o);
    else if (count->parsed())
      result = cmd_count(o);
    else if (dist->parsed())
      result = cmd_distance(o);
    else if (test->parsed())
      result = cmd_test(o, reject);
    else if (mtest->parsed())
      result = cmd_matrix_test(o, reject);
    else if (scheme->parsed())
      result = cmd_scheme(o);
    else if (ramsey->parsed())
      result = cmd_ramsey(o);
    else if (round->parsed())
      result = cmd_round(o);
    else if (clean->parsed())
      result = cmd_pipeline(o, true);
    else if (embed->parsed())
      result = cmd_embed(o);
    else if (dstar->parsed())
      result = cmd_dstar(o);
    else
      result = cmd_pipeline(o, false);
    const std::string text = result.dump(2) + "\n";
    if (o.out.empty())
      out << text;
    else
      io::write_file(o.out, text);
  } catch (const StageError& e) {
    err << error_json("stage", e.what(), e.stage()).dump() << "\n";
    return 4;
  } catch (const InputError& e) {
    err << error_json("input", e.what()).dump() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    err << error_json("capacity", e.what()).dump() << "\n";
    return 3;
  } catch (const InternalError& e) {
    err << error_json("internal", e.what()).dump() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    err << error_json("input", e.what()).dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << error_json("error", e.what()).dump() << "\n";
    return 4;
  }
  return reject ? 1 : 0;
}

}  // namespace ogt::cli
