#include "ogt/embed.hpp"
#include "ogt/errors.hpp"
#include "ogt/io.hpp"
#include "ogt/tester.hpp"
#include "ogt/threshold.hpp"

#include <algorithm>

namespace ogt {

namespace {

using Json = nlohmann::json;

template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.what(), e.kind());
  }
}

Json witness_to_json(const Witness& w, const Rational& eta) {
  Json cells = Json::array();
  for (const auto& c : w.cells) cells.push_back({{"j", c.j}, {"r", c.r}, {"s", c.s}});
  Json dens = Json::array();
  for (const auto& d : w.densities) dens.push_back(to_string(d));
  Json j = {{"pattern", w.pattern}, {"copy", w.copy}, {"cells", cells}, {"densities", dens}, {"eta", to_string(eta)}};
  if (!w.failure.empty()) j["failure"] = w.failure;
  return j;
}

}  // namespace

PipelineReport pipeline_demo(const OrderedGraph& g, const ForbiddenFamily& fam, const PipelineConfig& cfg) {
  stage("input", [&] {
    fam.validate();
    if (!(fam.alphabet == g.alphabet())) throw InputError("family and graph alphabets differ");
    return 0;
  });
  const Rng root(cfg.seed);
  const int colors = g.alphabet().size();
  PipelineReport rep;
  Json stages = Json::object();

  DeskConfig desk = cfg.desk;
  desk.seed = cfg.seed;
  const DeskResult dr = desk_scheme(g, desk);
  const RegularityScheme& s = dr.scheme;
  stages["desk_scheme"] = {{"scheme", scheme_to_json(s)}, {"audit", audit_to_json(dr.audit)}, {"base_parts", dr.P.k()},
                           {"interval_parts", dr.J.k()}};

  const RepresentativeTuple w = stage("representatives", [&] {
    Rng rng = root.derive("representatives");
    RepresentativeParams rp;
    rp.alpha = cfg.rep_alpha;
    rp.budget = cfg.rep_budget;
    return representatives(g, s,
                           cfg.random_representatives ? RepresentativeStrategy::random_search : RepresentativeStrategy::full,
                           rp, rng);
  });
  {
    Json q = {{"measured", w.quality.measured}, {"alpha", to_string(w.quality.alpha)},
              {"mu_cells", to_string(w.quality.mu_cells)}, {"mu_parents", to_string(w.quality.mu_parents)}};
    if (w.quality.beta) q["beta"] = to_string(*w.quality.beta);
    stages["representatives"] = q;
  }

  const Rational epsilon = cfg.epsilon.value_or(Rational(1, 4));
  const Rational rho = cfg.rho.value_or(epsilon / (8 * colors));
  const Rational eta = cfg.eta.value_or(rho / 2);

  const ThresholdGraph h = stage("threshold_graph", [&] { return threshold_graph(g, w, s, eta, rho); });
  stages["threshold_graph"] = threshold_graph_to_json(h, g.alphabet());

  const DesirabilityVerdict dv = stage("check_desirable", [&] { return check_desirable(h, rho); });
  stages["check_desirable"] = {{"desirable", dv.desirable}, {"undesirable_edges", dv.undesirable_edges},
                               {"limit", to_string(dv.limit)}, {"deviation_sum", to_string(dv.deviation_sum)}};

  const int d = stage("choose_d", [&] {
    if (cfg.d) return *cfg.d;
    if (cfg.use_d_star) return std::max(1, d_star(fam, s.m, s.t));
    return std::max(1, fam.max_pattern_size());
  });

  const NicelyColoredSubgraph nd = stage("nicely_colored", [&] {
    Rng rng = root.derive("nicely_colored");
    auto out = nicely_colored(h, d, rng, cfg.max_tries, {}, cfg.inner_size);
    if (!out.success) throw InternalError(out.failure);
    const std::string bad = verify_nicely_colored(h, out);
    if (!bad.empty()) throw InternalError(bad);
    return out;
  });
  stages["nicely_colored"] = nicely_colored_to_json(nd, g.alphabet());

  const CleanResult cr = stage("clean", [&] { return clean(g, s, nd, h); });
  stages["clean"] = clean_audit_to_json(cr.audit);

  std::int64_t changed = 0;
  for (Vertex u = 0; u < g.n(); ++u)
    for (Vertex v = u + 1; v < g.n(); ++v) changed += g.color(u, v) != cr.graph.color(u, v);
  const std::int64_t pairs = static_cast<std::int64_t>(g.n()) * (g.n() - 1) / 2;
  const Rational closeness = pairs ? Rational(changed, pairs) : Rational(0);

  const auto wit = stage("extract_witnesses", [&] { return extract_witnesses(g, cr.graph, s, nd, w, fam, eta); });
  rep.cleaned_free = !wit.has_value();

  Json out = {{"params", {{"epsilon", to_string(epsilon)}, {"rho", to_string(rho)}, {"eta", to_string(eta)}, {"d", d},
                          {"seed", cfg.seed}}},
              {"stages", stages},
              {"changed_pairs", changed},
              {"closeness", to_string(closeness)},
              {"closeness_matches_audit", changed == cr.audit.total},
              {"cleaned_free", rep.cleaned_free}};
  if (wit) {
    out["witness"] = witness_to_json(*wit, eta);
    rep.witness_verified = wit->failure.empty() && verify_witness(g, s, w, fam, eta, *wit);
    out["witness_verified"] = rep.witness_verified;
    if (wit->failure.empty()) {
      const auto& f = fam.patterns[static_cast<std::size_t>(wit->pattern)];
      Embedding e;
      for (const auto& c : wit->cells) {
        e.h.push_back(c.j);
        e.s.push_back(c.s);
      }
      const LoopedGraph dl = loops_from_d(nd);
      out["self_embedding"] = {{"witness_map", verify_embedding(f, dl, e)},
                               {"search", stage("embed", [&] { return embeddable(f, dl, s.t).has_value(); })}};
    }
  }
  rep.json = std::move(out);
  rep.cleaned = cr.graph;
  rep.scheme = s;
  rep.reps = w;
  rep.nicely = nd;
  rep.audit = cr.audit;
  rep.witness = wit;
  rep.rho = rho;
  rep.eta = eta;
  return rep;
}

}  // namespace ogt
