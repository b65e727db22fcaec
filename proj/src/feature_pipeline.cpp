#include "featred/feature_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "featred/errors.hpp"
#include "featred/rng.hpp"

namespace featred {

namespace {

// Columns centered and scaled to unit Euclidean norm, so Z^T Z is the correlation matrix.
Eigen::MatrixXd standardized(const FeatureMatrix& fm) {
  const Eigen::MatrixXd& x = fm.data();
  Eigen::MatrixXd z = x.rowwise() - x.colwise().mean();
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const double scale = x.col(j).cwiseAbs().maxCoeff();
    const double norm = z.col(j).norm();
    const bool constant = (x.col(j).array() == x(0, j)).all();
    if (constant || norm <= 1e-14 * std::max(scale, 1e-300) * std::sqrt(static_cast<double>(z.rows())))
      throw DegenerateFeatureError("feature '" + fm.name(static_cast<int>(j)) + "' has zero variance",
                                   fm.name(static_cast<int>(j)));
    z.col(j) /= norm;
  }
  return z;
}

void check_feature(const FeatureMatrix& fm, int j) {
  if (j < 0 || j >= fm.features()) throw DomainError("feature index " + std::to_string(j) + " out of range");
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::vector<std::string> names, Eigen::MatrixXd data)
    : names_(std::move(names)), data_(std::move(data)) {
  if (data_.cols() < 2) throw DomainError("a feature matrix needs at least 2 features");
  if (data_.rows() < 3)
    throw InsufficientDataError("a feature matrix needs at least 3 observations, got " +
                                std::to_string(data_.rows()));
  if (names_.size() != static_cast<std::size_t>(data_.cols()))
    throw DomainError("feature name count does not match column count");
  if (!data_.allFinite()) throw DomainError("feature matrix contains non-finite entries");
}

Eigen::MatrixXd pearson_matrix(const FeatureMatrix& fm) {
  const Eigen::MatrixXd z = standardized(fm);
  const Eigen::MatrixXd gram = z.transpose() * z;
  // Symmetrize explicitly; the product is symmetric only up to rounding.
  Eigen::MatrixXd corr = (0.5 * (gram + gram.transpose())).cwiseMax(-1.0).cwiseMin(1.0);
  corr.diagonal().setOnes();
  return corr;
}

Graph collinearity_graph(const Eigen::MatrixXd& corr, double lambda_c) {
  if (!(lambda_c > 0.0 && lambda_c <= 1.0)) throw DomainError("lambda_c must lie in (0, 1]");
  if (corr.rows() != corr.cols()) throw DomainError("correlation matrix must be square");
  const int m = static_cast<int>(corr.rows());
  Graph g(m);
  for (int u = 0; u < m; ++u)
    for (int v = u + 1; v < m; ++v)
      if (std::abs(corr(u, v)) >= lambda_c) g.add_edge(u, v);
  return g;
}

namespace {

RegressionFit regress_standardized(const Eigen::MatrixXd& z, int j, std::span<const int> regressors) {
  const Eigen::Index k = static_cast<Eigen::Index>(regressors.size());
  Eigen::MatrixXd x(z.rows(), k);
  for (Eigen::Index c = 0; c < k; ++c) x.col(c) = z.col(regressors[static_cast<std::size_t>(c)]);
  const Eigen::VectorXd y = z.col(j);

  Eigen::MatrixXd normal = x.transpose() * x;
  normal.diagonal().array() += kRidge;
  const Eigen::VectorXd beta = normal.ldlt().solve(x.transpose() * y);

  // y has unit norm, so R^2 = 1 - RSS.
  const double rss = (y - x * beta).squaredNorm();
  RegressionFit fit;
  fit.r_squared = std::clamp(1.0 - rss, 0.0, 1.0);
  fit.vif = fit.r_squared >= 1.0 - 1e-12 ? kVifMax : std::min(kVifMax, 1.0 / (1.0 - fit.r_squared));
  fit.standardized_coefficients.assign(beta.data(), beta.data() + beta.size());
  return fit;
}

}  // namespace

RegressionFit regress(const FeatureMatrix& fm, int j, std::span<const int> regressors) {
  check_feature(fm, j);
  if (regressors.empty()) throw DomainError("regression needs at least one regressor");
  for (int r : regressors) {
    check_feature(fm, r);
    if (r == j) throw DomainError("response feature appears among its regressors");
  }
  if (fm.observations() <= static_cast<Eigen::Index>(regressors.size()) + 1)
    throw DomainError("regression needs more observations than regressors + 1");
  return regress_standardized(standardized(fm), j, regressors);
}

double vif(const FeatureMatrix& fm, int j, std::span<const int> regressors) {
  return regress(fm, j, regressors).vif;
}

ConflictFamily conflict_sets(const FeatureMatrix& fm, double lambda_mc, int k_top) {
  if (!(lambda_mc > 1.0)) throw DomainError("lambda_mc must exceed 1");
  if (k_top < 1) throw DomainError("k_top must be at least 1");
  const int m = fm.features();
  if (fm.observations() <= m)
    throw DomainError("VIF against all other features needs more observations than features");
  const Eigen::MatrixXd z = standardized(fm);
  ConflictFamily family = empty_conflicts(m);
  std::vector<int> others;
  for (int v = 0; v < m; ++v) {
    others.clear();
    for (int u = 0; u < m; ++u)
      if (u != v) others.push_back(u);
    const RegressionFit fit = regress_standardized(z, v, others);
    if (!(fit.vif > lambda_mc)) continue;

    std::vector<std::size_t> order(others.size());
    std::iota(order.begin(), order.end(), 0);
    const auto& beta = fit.standardized_coefficients;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(beta[a]) > std::abs(beta[b]); });
    const auto take = std::min(order.size(), static_cast<std::size_t>(k_top));
    for (std::size_t i = 0; i < take; ++i)
      family[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(others[order[i]]));
  }
  symmetrize(family);
  return family;
}

Selection select_features(const FeatureMatrix& fm, const SelectionOptions& options) {
  const int m = fm.features();
  if (options.method == SolverMethod::exact && m > kMaxExactFeatures)
    throw BudgetExceededError("exact selection supports at most " + std::to_string(kMaxExactFeatures) +
                              " features (got " + std::to_string(m) + "); use --method greedy or randomized");

  Graph edges = collinearity_graph(pearson_matrix(fm), options.lambda_c);
  Instance inst(std::move(edges), conflict_sets(fm, options.lambda_mc, options.k_top));

  NiceSetResult result;
  switch (options.method) {
    case SolverMethod::exact: result = max_nice_exact(inst, options.node_budget); break;
    case SolverMethod::greedy: result = greedy_nice(inst); break;
    case SolverMethod::randomized: result = randomized_nice(inst, options.restarts, options.seed); break;
  }
  if (!is_nice(result.vertices, inst)) throw std::logic_error("solver returned a set that is not nice");

  SelectionReport report;
  report.selected_indices = result.vertices;
  for (int v : result.vertices) report.selected.push_back(fm.name(v));
  report.method = options.method;
  report.lambda_c = options.lambda_c;
  report.lambda_mc = options.lambda_mc;
  report.k_top = options.k_top;
  report.edge_count = inst.edges().edge_count();
  report.conflict_max = inst.max_conflict_size();
  report.conflict_mean = inst.mean_conflict_size();
  report.witness_checked = true;
  report.seed = result.seed;
  return {std::move(report), std::move(inst)};
}

FeatureMatrix planted_block_dataset(int n, int blocks, int block_size, int independents, double noise,
                                    std::uint64_t seed) {
  if (n < 3 || blocks < 0 || block_size < 1 || independents < 0 || noise < 0.0)
    throw DomainError("invalid planted-block parameters");
  const int m = blocks * block_size + independents;
  Rng rng(seed);
  Eigen::MatrixXd data(n, m);
  std::vector<std::string> names;
  for (int b = 0; b < blocks; ++b)
    for (int i = 0; i < block_size; ++i) names.push_back("b" + std::to_string(b + 1) + "_" + std::to_string(i + 1));
  for (int i = 0; i < independents; ++i) names.push_back("x" + std::to_string(i + 1));

  for (int r = 0; r < n; ++r) {
    int col = 0;
    for (int b = 0; b < blocks; ++b) {
      const double latent = standard_normal(rng);
      for (int i = 0; i < block_size; ++i) data(r, col++) = latent + noise * standard_normal(rng);
    }
    for (int i = 0; i < independents; ++i) data(r, col++) = standard_normal(rng);
  }
  return FeatureMatrix(std::move(names), std::move(data));
}

}  // namespace featred
