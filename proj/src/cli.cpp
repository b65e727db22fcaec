#include "featred/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "featred/errors.hpp"
#include "featred/json_io.hpp"

namespace featred {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBudget = 2;
constexpr int kExitCheckFailed = 3;

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string json_path;
  std::optional<int> trials;
};

struct SimulateOptions {
  ExperimentConfig cfg;
  std::string conflicts = "none";
  std::string solver = "exact";
};

struct BoundsOptions {
  double m = 100;
  double p = 0.5;
  double gamma = 1.0;
  std::optional<double> delta;
  double tau = 1.0;
  std::optional<double> delta1;
  std::optional<double> delta2;
  std::optional<double> theta;
  double chernoff_gamma = 0.5;
};

struct SelectOptions {
  std::string input;
  std::string delimiter = ",";
  bool no_header = false;
  std::string method = "exact";
  std::string instance_json;
  SelectionOptions selection;
};

void write_json(const std::string& path, const Json& j) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  out << dump(j);
}

void add_simulate_options(CLI::App* sub, SimulateOptions& o) {
  sub->add_option("--m", o.cfg.m, "number of vertices (features)")->capture_default_str();
  sub->add_option("--p", o.cfg.p, "edge probability")->capture_default_str();
  sub->add_option("--gamma", o.cfg.gamma, "upper-bound exponent gamma > 0")->capture_default_str();
  sub->add_option("--delta", o.cfg.delta, "lower-bound exponent delta in (0, 1/2)")->capture_default_str();
  sub->add_option("--conflicts", o.conflicts, "conflict-set law")
      ->check(CLI::IsMember({"none", "uniform-k"}))
      ->capture_default_str();
  sub->add_option("--k", o.cfg.conflicts.k, "partners per vertex for uniform-k")->capture_default_str();
  sub->add_option("--solver", o.solver, "solver for N_m")
      ->check(CLI::IsMember({"exact", "greedy", "randomized"}))
      ->capture_default_str();
  sub->add_option("--workers", o.cfg.workers, "worker threads (results do not depend on it)")->capture_default_str();
  sub->add_option("--node-budget", o.cfg.node_budget, "exact solver node budget per trial")->capture_default_str();
  sub->fallthrough();
}

ExperimentConfig finish_config(SimulateOptions& o, const GlobalOptions& g) {
  ExperimentConfig cfg = o.cfg;
  cfg.seed = g.seed;
  cfg.trials = g.trials.value_or(200);
  cfg.conflicts.kind = o.conflicts == "none" ? ConflictSpec::Kind::none : ConflictSpec::Kind::uniform_k;
  if (cfg.conflicts.kind == ConflictSpec::Kind::none) cfg.conflicts.k = 0;
  cfg.solver = *parse_solver_method(o.solver);
  return cfg;
}

void print_bound_report(std::ostream& out, const BoundReport& r) {
  out << std::setprecision(6);
  out << (r.kind == BoundReport::Kind::upper ? "upper" : "lower") << "-bound experiment: m=" << r.config.m
      << " p=" << r.config.p << " trials=" << r.config.trials << " solver=" << to_string(r.config.solver) << "\n";
  int lo = r.empirical.front(), hi = r.empirical.front();
  double mean = 0;
  for (int v : r.empirical) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v;
  }
  mean /= static_cast<double>(r.empirical.size());
  out << "  N_m: min " << lo << "  mean " << mean << "  max " << hi << "\n";
  out << "  tau (mean max |T(v)|): " << r.tau << " (sd " << r.tau_sd << ")\n";
  out << "  upper threshold " << r.threshold_upper << ": fraction N_m >= threshold " << r.exceed_upper.value()
      << " (se " << r.exceed_upper.std_error() << "), claimed <= " << r.claimed_upper_failure << "\n";
  out << "  lower threshold " << r.threshold_lower << " (raw " << r.lower_value
      << "): fraction N_m < threshold " << r.below_lower.value() << " (se " << r.below_lower.std_error()
      << "), claimed <= " << r.claimed_lower_failure << "\n";
}

Json bounds_json(const BoundsOptions& o, std::ostream& out) {
  Json j{{"schema", kSchemaVersion}, {"experiment", "bounds"}};
  BoundParams params;
  params.m = o.m;
  params.p = o.p;
  params.gamma = o.gamma;
  params.tau = o.tau;
  const auto upper = theorem1_upper(params);
  out << std::setprecision(6) << "upper bound: " << upper.value << "\n"
      << "upper failure probability: " << upper.failure_probability << "\n"
      << "upper threshold (with +1): " << upper_threshold(params) << "\n";
  j["upper"] = {{"value", upper.value},
                {"failure_probability", upper.failure_probability},
                {"threshold", upper_threshold(params)}};
  if (o.delta) {
    params.delta = *o.delta;
    const auto lower = theorem1_lower(params);
    out << "lower bound: " << lower.value << "\n"
        << "lower failure probability: " << lower.failure_probability << "\n"
        << "lower threshold: " << lower_threshold(params) << "\n";
    Json lj{{"value", lower.value},
            {"failure_probability", lower.failure_probability},
            {"threshold", lower_threshold(params)},
            {"tau", o.tau}};
    if (o.delta1 && o.delta2) {
      params.delta1 = *o.delta1;
      params.delta2 = *o.delta2;
      const bool ok = lower_bound_preconditions_hold(params);
      out << "lower-bound preconditions hold: " << (ok ? "yes" : "no") << "\n";
      lj["preconditions_hold"] = ok;
    }
    j["lower"] = std::move(lj);
  }
  if (o.theta) {
    const double c = chernoff_bound(*o.theta, o.chernoff_gamma);
    out << "chernoff bound: " << c << "\n";
    j["chernoff"] = {{"theta", *o.theta}, {"gamma", o.chernoff_gamma}, {"bound", c}};
  }
  return j;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nice feature subsets: random-model bounds, mutually good sets and feature selection", "featred"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "master RNG seed")->capture_default_str();
  app.add_option("--json", global.json_path, "write the JSON report to this path");
  app.add_option("--trials", global.trials, "number of Monte Carlo trials");

  SimulateOptions upper_opts;
  SimulateOptions lower_opts;
  auto* upper = app.add_subcommand("simulate-upper", "Monte Carlo check of the upper bound on N_m");
  add_simulate_options(upper, upper_opts);
  auto* lower = app.add_subcommand("simulate-lower", "Monte Carlo check of the lower bound on N_m");
  add_simulate_options(lower, lower_opts);

  int lemma_count = 500;
  int lemma_n_max = 8;
  auto* lemma = app.add_subcommand("verify-lemma", "brute-force check of the mutually good set existence claim");
  lemma->add_option("--count", lemma_count, "random systems to check")->capture_default_str();
  lemma->add_option("--n-max", lemma_n_max, "largest universe size (<= 10)")->capture_default_str();
  lemma->fallthrough();

  int chernoff_r = 40;
  double chernoff_p = 0.5;
  double chernoff_gamma = 0.5;
  auto* chernoff = app.add_subcommand("chernoff", "empirical check of the Bernoulli deviation estimate");
  chernoff->add_option("--r", chernoff_r, "number of Bernoulli summands")->capture_default_str();
  chernoff->add_option("--p", chernoff_p, "Bernoulli success probability")->capture_default_str();
  chernoff->add_option("--gamma", chernoff_gamma, "relative deviation, 0 < gamma <= 1/2")->capture_default_str();
  chernoff->fallthrough();

  BoundsOptions bounds_opts;
  auto* bounds = app.add_subcommand("bounds", "evaluate the closed-form bounds");
  bounds->add_option("--m", bounds_opts.m, "number of vertices")->capture_default_str();
  bounds->add_option("--p", bounds_opts.p, "edge probability")->capture_default_str();
  bounds->add_option("--gamma", bounds_opts.gamma, "upper-bound exponent")->capture_default_str();
  bounds->add_option("--delta", bounds_opts.delta, "lower-bound exponent; enables the lower bound");
  bounds->add_option("--tau", bounds_opts.tau, "expected max conflict-set size")->capture_default_str();
  bounds->add_option("--delta1", bounds_opts.delta1, "precondition exponent for p");
  bounds->add_option("--delta2", bounds_opts.delta2, "precondition exponent for tau");
  bounds->add_option("--theta", bounds_opts.theta, "Bernoulli-sum mean; enables the Chernoff estimate");
  bounds->add_option("--chernoff-gamma", bounds_opts.chernoff_gamma, "Chernoff relative deviation")
      ->capture_default_str();
  bounds->fallthrough();

  SelectOptions select_opts;
  auto* select = app.add_subcommand("select", "select a nice feature subset from a CSV file");
  select->add_option("--input", select_opts.input, "CSV file, one column per feature")->required();
  select->add_option("--delimiter", select_opts.delimiter, "field delimiter")->capture_default_str();
  select->add_flag("--no-header", select_opts.no_header, "first row is data; names become f1..fm");
  select->add_option("--lambda-c", select_opts.selection.lambda_c, "correlation threshold in (0, 1]")
      ->capture_default_str();
  select->add_option("--lambda-mc", select_opts.selection.lambda_mc, "VIF threshold > 1")->capture_default_str();
  select->add_option("--k-top", select_opts.selection.k_top, "conflict partners taken per high-VIF feature")
      ->capture_default_str();
  select->add_option("--method", select_opts.method, "solver")
      ->check(CLI::IsMember({"exact", "greedy", "randomized"}))
      ->capture_default_str();
  select->add_option("--restarts", select_opts.selection.restarts, "randomized solver restarts")
      ->capture_default_str();
  select->add_option("--instance-json", select_opts.instance_json, "also write the derived instance");
  select->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitError;
  }

  try {
    if (upper->parsed() || lower->parsed()) {
      const bool is_upper = upper->parsed();
      const auto cfg = finish_config(is_upper ? upper_opts : lower_opts, global);
      const auto report = is_upper ? run_upper_bound_experiment(cfg) : run_lower_bound_experiment(cfg);
      print_bound_report(out, report);
      write_json(global.json_path, to_json(report));
      return kExitOk;
    }
    if (lemma->parsed()) {
      const auto report = run_lemma_verification(lemma_count, lemma_n_max, global.seed);
      out << "checked " << report.count << " systems (N <= " << report.n_max << "), " << report.conditions_met
          << " (system, L) pairs met the existence condition\n"
          << report.counterexamples.size() << " counterexamples\n";
      write_json(global.json_path, to_json(report));
      return report.counterexamples.empty() ? kExitOk : kExitCheckFailed;
    }
    if (chernoff->parsed()) {
      const auto report =
          run_chernoff_check(chernoff_r, chernoff_p, chernoff_gamma, global.trials.value_or(100000), global.seed);
      out << std::setprecision(6) << "theta " << report.theta << ", deviation frequency "
          << report.deviations.value() << " (se " << report.deviations.std_error() << ")\n"
          << "exact binomial tail " << report.exact_tail << ", Chernoff bound " << report.bound << "\n"
          << (report.pass ? "pass" : "FAIL") << "\n";
      write_json(global.json_path, to_json(report));
      return report.pass ? kExitOk : kExitCheckFailed;
    }
    if (bounds->parsed()) {
      write_json(global.json_path, bounds_json(bounds_opts, out));
      return kExitOk;
    }
    if (select->parsed()) {
      if (select_opts.delimiter.size() != 1) throw DomainError("delimiter must be a single character");
      CsvOptions csv{select_opts.delimiter.front(), !select_opts.no_header};
      const auto fm = load_csv(select_opts.input, csv);
      select_opts.selection.method = *parse_solver_method(select_opts.method);
      select_opts.selection.seed = global.seed;
      const auto selection = select_features(fm, select_opts.selection);
      const Json report = to_json(selection.report);
      out << dump(report);
      write_json(global.json_path, report);
      write_json(select_opts.instance_json, instance_to_json(selection.instance));
      return kExitOk;
    }
  } catch (const BudgetExceededError& e) {
    err << "budget exceeded: " << e.what() << " (best lower bound " << e.best_lower_bound() << ")\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  err << app.help();
  return kExitError;
}

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

}  // namespace featred
