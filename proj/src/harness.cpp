#include "featred/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "featred/errors.hpp"

namespace featred {

namespace {

struct TrialOutcome {
  int nice_size = 0;
  std::size_t max_conflict = 0;
};

TrialOutcome run_trial(const ExperimentConfig& cfg, std::size_t t) {
  const std::uint64_t trial_seed = derive_seed(cfg.seed, t);
  const Instance inst = sample_instance(cfg.m, cfg.p, cfg.conflicts, trial_seed);
  NiceSetResult result;
  switch (cfg.solver) {
    case SolverMethod::exact: result = max_nice_exact(inst, cfg.node_budget); break;
    case SolverMethod::greedy: result = greedy_nice(inst); break;
    case SolverMethod::randomized: result = randomized_nice(inst, cfg.restarts, splitmix64(trial_seed)); break;
  }
  return {static_cast<int>(result.size), inst.max_conflict_size()};
}

// Runs every trial, on up to cfg.workers threads, and returns outcomes in trial order.
// The first failing trial (by index) is rethrown.
std::vector<TrialOutcome> run_trials(const ExperimentConfig& cfg) {
  const auto trials = static_cast<std::size_t>(cfg.trials);
  std::vector<TrialOutcome> outcomes(trials);
  std::vector<std::exception_ptr> errors(trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < trials; t = next++) {
      try {
        outcomes[t] = run_trial(cfg, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, cfg.workers));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, trials); ++w) pool.emplace_back(worker);
  }
  for (std::size_t t = 0; t < trials; ++t) {
    if (!errors[t]) continue;
    try {
      std::rethrow_exception(errors[t]);
    } catch (const BudgetExceededError& e) {
      throw BudgetExceededError("trial " + std::to_string(t) + ": " + e.what(), e.best_lower_bound(),
                                e.best_witness());
    }
  }
  return outcomes;
}

BoundReport run_bound_experiment(const ExperimentConfig& cfg, BoundReport::Kind kind) {
  validate(cfg);
  const auto outcomes = run_trials(cfg);

  BoundReport report;
  report.kind = kind;
  report.config = cfg;
  double sum = 0.0;
  for (const auto& o : outcomes) {
    report.empirical.push_back(o.nice_size);
    report.max_conflict.push_back(o.max_conflict);
    sum += static_cast<double>(o.max_conflict);
  }
  const double n = static_cast<double>(outcomes.size());
  const double mean = sum / n;
  double sq = 0.0;
  for (const auto& o : outcomes) sq += (static_cast<double>(o.max_conflict) - mean) * (static_cast<double>(o.max_conflict) - mean);
  report.tau_sd = outcomes.size() > 1 ? std::sqrt(sq / (n - 1.0)) : 0.0;
  report.tau = std::max(1.0, mean);

  BoundParams params;
  params.m = cfg.m;
  params.p = cfg.p;
  params.gamma = cfg.gamma;
  params.delta = cfg.delta;
  params.tau = report.tau;
  const BoundValue upper = theorem1_upper(params);
  const BoundValue lower = theorem1_lower(params);
  report.upper_value = upper.value;
  report.threshold_upper = upper_threshold(params);
  report.claimed_upper_failure = upper.failure_probability;
  report.lower_value = lower.value;
  report.threshold_lower = lower_threshold(params);
  report.claimed_lower_failure = lower.failure_probability;

  report.exceed_upper.trials = report.below_lower.trials = outcomes.size();
  for (int size : report.empirical) {
    if (size >= report.threshold_upper) ++report.exceed_upper.hits;
    if (size < report.threshold_lower) ++report.below_lower.hits;
  }
  return report;
}

}  // namespace

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw DomainError("trials must be at least 1");
  if (cfg.m < 2) throw DomainError("experiments need m >= 2");
  if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw DomainError("experiments need 0 < p < 1");
  if (!(cfg.gamma > 0.0)) throw DomainError("gamma must be positive");
  if (!(cfg.delta > 0.0 && cfg.delta < 0.5)) throw DomainError("delta must lie in (0, 1/2)");
  if (cfg.solver == SolverMethod::exact && cfg.m > kMaxExactOrder)
    throw DomainError("the exact solver is limited to m <= " + std::to_string(kMaxExactOrder));
  if (cfg.conflicts.kind == ConflictSpec::Kind::uniform_k && (cfg.conflicts.k < 0 || cfg.conflicts.k > cfg.m - 1))
    throw InvalidSpecError("uniform-k conflicts need 0 <= k <= m - 1");
}

double Proportion::value() const noexcept {
  return trials == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(trials);
}

double Proportion::std_error() const noexcept {
  if (trials == 0) return 0.0;
  const double f = value();
  return std::sqrt(f * (1.0 - f) / static_cast<double>(trials));
}

BoundReport run_upper_bound_experiment(const ExperimentConfig& cfg) {
  return run_bound_experiment(cfg, BoundReport::Kind::upper);
}

BoundReport run_lower_bound_experiment(const ExperimentConfig& cfg) {
  return run_bound_experiment(cfg, BoundReport::Kind::lower);
}

Instance random_lemma_instance(int n_max, Rng& rng) {
  if (n_max < 2) throw DomainError("n_max must be at least 2");
  const int n = 2 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n_max - 1)));
  const double edge_p = 0.05 + 0.55 * uniform01(rng);
  const double conflict_p = 0.3 * uniform01(rng);
  Graph g(n);
  ConflictFamily family = empty_conflicts(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (bernoulli(rng, edge_p)) g.add_edge(u, v);
      if (bernoulli(rng, conflict_p)) {
        family[static_cast<std::size_t>(u)].set(static_cast<std::size_t>(v));
        family[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(u));
      }
    }
  return Instance(std::move(g), std::move(family));
}

LemmaSystemCheck check_lemma_on_system(const GoodnessSystem& sys) {
  LemmaSystemCheck check;
  const int n = sys.size();
  if (n < 2) return check;
  check.table = compute_fraction_table(sys, n - 1);
  for (int L = 2; L <= n; ++L) {
    if (!(check.table.p_at(L - 1) > check.table.q_at(L - 1))) continue;
    ++check.conditions_met;
    if (!brute_force_mutually_good(sys, L)) check.failed_sizes.push_back(L);
  }
  return check;
}

LemmaReport run_lemma_verification(int count, int n_max, std::uint64_t seed) {
  if (count < 0) throw DomainError("count must be non-negative");
  if (n_max < 2 || n_max > 10) throw DomainError("n_max must lie in [2, 10]");
  LemmaReport report;
  report.count = count;
  report.n_max = n_max;
  report.seed = seed;
  for (int s = 0; s < count; ++s) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(s)));
    const auto sys = GoodnessSystem::nice_sets(random_lemma_instance(n_max, rng));
    const auto check = check_lemma_on_system(sys);
    report.conditions_met += static_cast<std::uint64_t>(check.conditions_met);
    for (int L : check.failed_sizes)
      report.counterexamples.push_back(
          {static_cast<std::size_t>(s), sys.size(), L, check.table.p_at(L - 1), check.table.q_at(L - 1)});
  }
  return report;
}

double binomial_deviation_tail(int r, double p, double gamma) {
  if (r < 1) throw DomainError("r must be at least 1");
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("Bernoulli probability must lie in (0, 1]");
  const double theta = r * p;
  double tail = 0.0;
  for (int k = 0; k <= r; ++k) {
    if (!(std::abs(k - theta) >= gamma * theta)) continue;
    if (p == 1.0) {
      tail += k == r ? 1.0 : 0.0;
      continue;
    }
    const double log_pmf = std::lgamma(r + 1.0) - std::lgamma(k + 1.0) - std::lgamma(r - k + 1.0) +
                           k * std::log(p) + (r - k) * std::log1p(-p);
    tail += std::exp(log_pmf);
  }
  return std::min(1.0, tail);
}

ChernoffReport run_chernoff_check(int r, double bernoulli_p, double gamma, int trials, std::uint64_t seed) {
  if (r < 1) throw DomainError("r must be at least 1");
  if (trials < 1) throw DomainError("trials must be at least 1");
  if (!(bernoulli_p > 0.0 && bernoulli_p <= 1.0)) throw DomainError("Bernoulli probability must lie in (0, 1]");
  ChernoffReport report;
  report.r = r;
  report.bernoulli_p = bernoulli_p;
  report.gamma = gamma;
  report.seed = seed;
  report.theta = r * bernoulli_p;
  report.bound = chernoff_bound(report.theta, gamma);
  report.exact_tail = binomial_deviation_tail(r, bernoulli_p, gamma);
  report.deviations.trials = static_cast<std::uint64_t>(trials);
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    int sum = 0;
    for (int j = 0; j < r; ++j) sum += bernoulli(rng, bernoulli_p) ? 1 : 0;
    if (std::abs(sum - report.theta) >= gamma * report.theta) ++report.deviations.hits;
  }
  report.pass = report.deviations.value() <= report.bound + 3.0 * report.deviations.std_error();
  return report;
}

}  // namespace featred
