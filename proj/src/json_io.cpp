#include "featred/json_io.hpp"

#include <string>

#include "featred/errors.hpp"

namespace featred {

namespace {

std::string_view kind_name(BoundReport::Kind kind) {
  return kind == BoundReport::Kind::upper ? "upper" : "lower";
}

Json proportion_json(const Proportion& p) {
  return Json{{"value", p.value()}, {"hits", p.hits}, {"trials", p.trials}, {"std_error", p.std_error()}};
}

Json conflict_spec_json(const ConflictSpec& spec) {
  if (spec.kind == ConflictSpec::Kind::none) return Json{{"kind", "none"}};
  return Json{{"kind", "uniform-k"}, {"k", spec.k}};
}

}  // namespace

Json instance_to_json(const Instance& inst) {
  Json edges = Json::array();
  for (auto [u, v] : inst.edges().edges()) edges.push_back({u + 1, v + 1});
  Json conflicts = Json::object();
  for (int v = 0; v < inst.order(); ++v) {
    const auto& t = inst.conflicts_of(v);
    if (t.none()) continue;
    Json list = Json::array();
    t.for_each([&](std::size_t u) { list.push_back(static_cast<int>(u) + 1); });
    conflicts[std::to_string(v + 1)] = std::move(list);
  }
  return Json{{"m", inst.order()}, {"edges", std::move(edges)}, {"conflicts", std::move(conflicts)}};
}

Instance instance_from_json(const Json& j) {
  try {
    const int m = j.at("m").get<int>();
    if (m < 1) throw DomainError("instance m must be positive");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw DomainError("edges must be [u, v] pairs");
      edges.emplace_back(e[0].get<int>() - 1, e[1].get<int>() - 1);
    }
    std::vector<std::vector<Vertex>> conflicts(static_cast<std::size_t>(m));
    if (j.contains("conflicts")) {
      for (const auto& [key, list] : j.at("conflicts").items()) {
        std::size_t pos = 0;
        const int v = std::stoi(key, &pos);
        if (pos != key.size() || v < 1 || v > m) throw DomainError("conflict key '" + key + "' is not a vertex");
        for (const auto& u : list) conflicts[static_cast<std::size_t>(v - 1)].push_back(u.get<int>() - 1);
      }
    }
    return Instance::from_lists(m, edges, conflicts);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed instance JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    // std::stoi failures
    if (dynamic_cast<const DomainError*>(&e)) throw;
    throw DomainError(std::string("malformed instance JSON: ") + e.what());
  }
}

Json to_json(const BoundReport& report) {
  const auto& cfg = report.config;
  return Json{
      {"schema", kSchemaVersion},
      {"experiment", kind_name(report.kind)},
      {"config",
       {{"m", cfg.m},
        {"p", cfg.p},
        {"gamma", cfg.gamma},
        {"delta", cfg.delta},
        {"conflicts", conflict_spec_json(cfg.conflicts)},
        {"trials", cfg.trials},
        {"solver", to_string(cfg.solver)}}},
      {"seeds", {{"master", cfg.seed}, {"trial_seed", "splitmix64(master ^ splitmix64(trial_index))"}}},
      {"empirical", report.empirical},
      {"max_conflict", report.max_conflict},
      {"tau", {{"mean", report.tau}, {"sd", report.tau_sd}}},
      {"upper_value", report.upper_value},
      {"threshold_upper", report.threshold_upper},
      {"frac_exceed_upper", proportion_json(report.exceed_upper)},
      {"claimed_upper_failure", report.claimed_upper_failure},
      {"lower_value", report.lower_value},
      {"threshold_lower", report.threshold_lower},
      {"frac_below_lower", proportion_json(report.below_lower)},
      {"claimed_lower_failure", report.claimed_lower_failure},
  };
}

Json to_json(const LemmaReport& report) {
  Json cex = Json::array();
  for (const auto& c : report.counterexamples)
    cex.push_back({{"system", c.system},
                   {"n", c.n},
                   {"L", c.L},
                   {"p", std::to_string(c.p.num) + "/" + std::to_string(c.p.den)},
                   {"q", std::to_string(c.q.num) + "/" + std::to_string(c.q.den)}});
  return Json{{"schema", kSchemaVersion},
              {"experiment", "lemma"},
              {"count", report.count},
              {"n_max", report.n_max},
              {"seeds", {{"master", report.seed}, {"system_seed", "splitmix64(master ^ splitmix64(system_index))"}}},
              {"conditions_met", report.conditions_met},
              {"counterexamples", std::move(cex)}};
}

Json to_json(const ChernoffReport& report) {
  return Json{{"schema", kSchemaVersion},
              {"experiment", "chernoff"},
              {"r", report.r},
              {"bernoulli_p", report.bernoulli_p},
              {"gamma", report.gamma},
              {"seeds", {{"master", report.seed}, {"trial_seed", "splitmix64(master ^ splitmix64(trial_index))"}}},
              {"theta", report.theta},
              {"bound", report.bound},
              {"exact_tail", report.exact_tail},
              {"empirical", proportion_json(report.deviations)},
              {"pass", report.pass}};
}

Json to_json(const SelectionReport& report) {
  Json j{{"schema", kSchemaVersion},
         {"selected", report.selected},
         {"method", to_string(report.method)},
         {"lambda_c", report.lambda_c},
         {"lambda_mc", report.lambda_mc},
         {"k_top", report.k_top},
         {"edge_count", report.edge_count},
         {"conflict_stats", {{"max", report.conflict_max}, {"mean", report.conflict_mean}}},
         {"witness_checked", report.witness_checked}};
  if (report.seed) j["seed"] = *report.seed;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace featred
