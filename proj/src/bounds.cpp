#include "featred/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "featred/errors.hpp"

namespace featred {

namespace {

void require_open_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("bound evaluators need 0 < p < 1");
}

void require_order(double m) {
  if (!(m >= 2.0) || !std::isfinite(m)) throw DomainError("bound evaluators need m >= 2");
}

// |log(1 - p)|, computed via log1p so small p keeps full precision.
double log_complement(double p) { return -std::log1p(-p); }

}  // namespace

BoundValue theorem1_upper(const BoundParams& params) {
  require_order(params.m);
  require_open_probability(params.p);
  if (!(params.gamma > 0.0)) throw DomainError("gamma must be positive");
  const double log_m = std::log(params.m);
  return {(2.0 + params.gamma) * log_m / log_complement(params.p), std::exp(-params.gamma * log_m)};
}

BoundValue theorem1_lower(const BoundParams& params) {
  require_order(params.m);
  require_open_probability(params.p);
  if (!(params.tau >= 1.0)) throw DomainError("tau must be at least 1 (some conflict set is non-empty)");
  if (!(params.delta > 0.0 && params.delta < 0.5)) throw DomainError("delta must lie in (0, 1/2)");
  const double log_m = std::log(params.m);
  const double scale = log_complement(params.p);
  const double value =
      (1.0 - 2.0 * params.delta) * log_m / scale - std::log(4.0 * params.tau / params.p) / scale;
  return {value, std::exp(-params.delta * log_m)};
}

bool lower_bound_preconditions_hold(const BoundParams& params) {
  const bool deltas_ok = params.delta1 > 0.0 && params.delta1 < 1.0 && params.delta2 > 0.0 &&
                         params.delta2 < 1.0 && 2.0 * params.delta1 + params.delta2 < 1.0;
  return deltas_ok && params.p >= std::pow(params.m, -params.delta1) &&
         params.tau <= std::pow(params.m, params.delta2);
}

int upper_threshold(const BoundParams& params) {
  return static_cast<int>(std::ceil(1.0 + theorem1_upper(params).value));
}

int lower_threshold(const BoundParams& params) {
  const double value = std::ceil(theorem1_lower(params).value);
  return value < 1.0 ? 1 : static_cast<int>(value);
}

double chernoff_bound(double theta, double gamma) {
  if (!(gamma > 0.0 && gamma <= 0.5)) throw DomainError("Chernoff estimate needs 0 < gamma <= 1/2");
  if (!(theta > 0.0)) throw DomainError("Chernoff estimate needs theta > 0");
  return 2.0 * std::exp(-gamma * gamma * theta / 4.0);
}

}  // namespace featred
