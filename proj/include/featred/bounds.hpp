#pragma once

namespace featred {

// Parameters for the closed-form size bounds on the largest nice set.
struct BoundParams {
  double m = 2;
  double p = 0.5;
  double gamma = 1.0;
  double delta = 0.25;
  double delta1 = 0.25;
  double delta2 = 0.25;
  double tau = 1.0;
};

struct BoundValue {
  double value = 0;
  double failure_probability = 0;
};

/// (2 + gamma) log m / |log(1 - p)|, holding with probability at least 1 - m^-gamma.
BoundValue theorem1_upper(const BoundParams& params);

/// (1 - 2 delta) log m / |log(1-p)| - log(4 tau / p) / |log(1-p)|, failure m^-delta.
/// May be negative for small m.
BoundValue theorem1_lower(const BoundParams& params);

/// True when p >= m^-delta1, tau <= m^delta2 and 2 delta1 + delta2 < 1.
bool lower_bound_preconditions_hold(const BoundParams& params);

/// ceil(1 + (2 + gamma) log m / |log(1 - p)|): the stable-set size whose existence
/// probability the union bound pushes below m^-gamma.
int upper_threshold(const BoundParams& params);

/// max(1, ceil(theorem1_lower)).
int lower_threshold(const BoundParams& params);

/// 2 exp(-gamma^2 theta / 4), bounding P(|S - theta| >= gamma theta) for a sum S of
/// independent Bernoulli variables with mean theta. Requires 0 < gamma <= 1/2.
double chernoff_bound(double theta, double gamma);

}  // namespace featred
