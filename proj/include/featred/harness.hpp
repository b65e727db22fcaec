#pragma once

#include <cstdint>
#include <vector>

#include "featred/bounds.hpp"
#include "featred/graph_model.hpp"
#include "featred/mutually_good.hpp"

namespace featred {

struct ExperimentConfig {
  int m = 40;
  double p = 0.5;
  double gamma = 1.0;
  double delta = 0.25;
  ConflictSpec conflicts;
  int trials = 200;
  std::uint64_t seed = 1;
  SolverMethod solver = SolverMethod::exact;
  int workers = 1;  // does not affect results
  std::uint64_t node_budget = kDefaultNodeBudget;
  int restarts = 64;  // randomized solver only
};

/// Throws DomainError for trials < 1, p outside (0, 1), or an exact solver with m > 60.
void validate(const ExperimentConfig& cfg);

struct Proportion {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;

  double value() const noexcept;
  // sqrt(f (1 - f) / trials) at the observed frequency f.
  double std_error() const noexcept;
};

struct BoundReport {
  enum class Kind { upper, lower };
  Kind kind = Kind::upper;
  ExperimentConfig config;
  std::vector<int> empirical;             // N_m per trial, in trial order
  std::vector<std::size_t> max_conflict;  // max_v |T(v)| per trial
  double upper_value = 0;                 // (2 + gamma) log m / |log(1 - p)|
  int threshold_upper = 0;
  double tau = 1;  // mean of max_v |T(v)| over trials, at least 1
  double tau_sd = 0;
  double lower_value = 0;
  int threshold_lower = 1;
  Proportion exceed_upper;  // N_m >= threshold_upper
  Proportion below_lower;   // N_m < threshold_lower
  double claimed_upper_failure = 0;  // m^-gamma
  double claimed_lower_failure = 0;  // m^-delta
};

/// The instance of trial t is sampled from derive_seed(cfg.seed, t).
BoundReport run_upper_bound_experiment(const ExperimentConfig& cfg);
BoundReport run_lower_bound_experiment(const ExperimentConfig& cfg);

/// Random instance for lemma checks: N uniform in [2, n_max], edge probability uniform in
/// [0.05, 0.6], each pair in conflict with probability uniform in [0, 0.3].
Instance random_lemma_instance(int n_max, Rng& rng);

struct LemmaCounterexample {
  std::size_t system = 0;
  int n = 0;
  int L = 0;
  Fraction p;  // p_{L-1}
  Fraction q;  // q_{L-1}
};

struct LemmaSystemCheck {
  int conditions_met = 0;  // values of L in [2, N] with p_{L-1} > q_{L-1}
  std::vector<int> failed_sizes;
  FractionTable table;
};

/// For every L in [2, N] with p_{L-1} > q_{L-1}, brute-force search for a mutually good
/// B-constrained set of size L.
LemmaSystemCheck check_lemma_on_system(const GoodnessSystem& sys);

struct LemmaReport {
  int count = 0;
  int n_max = 0;
  std::uint64_t seed = 0;
  std::uint64_t conditions_met = 0;
  std::vector<LemmaCounterexample> counterexamples;
};

/// System s is built from derive_seed(seed, s). Requires 2 <= n_max <= 10.
LemmaReport run_lemma_verification(int count, int n_max, std::uint64_t seed);

struct ChernoffReport {
  int r = 0;
  double bernoulli_p = 0;
  double gamma = 0;
  std::uint64_t seed = 0;
  double theta = 0;
  double bound = 0;
  double exact_tail = 0;  // by direct binomial summation
  Proportion deviations;
  bool pass = false;  // deviation frequency <= bound + 3 standard errors
};

ChernoffReport run_chernoff_check(int r, double bernoulli_p, double gamma, int trials, std::uint64_t seed);

/// P(|S - r p| >= gamma r p) for S ~ Binomial(r, p).
double binomial_deviation_tail(int r, double p, double gamma);

}  // namespace featred
