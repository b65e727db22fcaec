#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "featred/graph_model.hpp"

namespace featred {

/// n observations (rows) by m named numeric features (columns).
/// Invariants: all entries finite, n >= 3, m >= 2, one name per column.
class FeatureMatrix {
 public:
  FeatureMatrix(std::vector<std::string> names, Eigen::MatrixXd data);

  Eigen::Index observations() const noexcept { return data_.rows(); }
  int features() const noexcept { return static_cast<int>(data_.cols()); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(int j) const { return names_.at(static_cast<std::size_t>(j)); }
  const Eigen::MatrixXd& data() const noexcept { return data_; }

 private:
  std::vector<std::string> names_;
  Eigen::MatrixXd data_;
};

struct CsvOptions {
  char delimiter = ',';
  bool has_header = true;
};

// RFC 4180 quoting; '.' decimal point; empty or non-finite cells are rejected.
FeatureMatrix parse_csv(std::string_view text, const CsvOptions& options = {});
FeatureMatrix load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
std::string to_csv(const FeatureMatrix& fm, char delimiter = ',');

/// Sample Pearson correlations. Symmetric, unit diagonal, entries clamped to [-1, 1].
/// Throws DegenerateFeatureError for a zero-variance column.
Eigen::MatrixXd pearson_matrix(const FeatureMatrix& fm);

/// u ~ v iff |corr(u, v)| >= lambda_c, u != v. lambda_c must lie in (0, 1].
Graph collinearity_graph(const Eigen::MatrixXd& corr, double lambda_c);

inline constexpr double kVifMax = 1e12;
inline constexpr double kRidge = 1e-10;

struct RegressionFit {
  double r_squared = 0;
  double vif = 1;
  // One per regressor, in the order given: coefficients on standardized columns.
  std::vector<double> standardized_coefficients;
};

/// Least squares (with intercept) of column j on `regressors`, solved on standardized
/// columns with ridge damping kRidge so exactly collinear designs stay solvable.
/// VIF = 1 / (1 - R^2), capped at kVifMax once R^2 >= 1 - 1e-12.
RegressionFit regress(const FeatureMatrix& fm, int j, std::span<const int> regressors);
double vif(const FeatureMatrix& fm, int j, std::span<const int> regressors);

/// T(v) = the k_top regressors with the largest |standardized coefficient| when v's VIF
/// against all other features exceeds lambda_mc, else empty; then symmetrized.
ConflictFamily conflict_sets(const FeatureMatrix& fm, double lambda_mc, int k_top);

struct SelectionOptions {
  double lambda_c = 0.8;
  double lambda_mc = 5.0;
  int k_top = 3;
  SolverMethod method = SolverMethod::exact;
  std::uint64_t seed = 0;
  int restarts = 64;
  std::uint64_t node_budget = kDefaultNodeBudget;
};

inline constexpr int kMaxExactFeatures = kMaxExactOrder;

struct SelectionReport {
  std::vector<std::string> selected;
  std::vector<int> selected_indices;
  SolverMethod method = SolverMethod::exact;
  double lambda_c = 0;
  double lambda_mc = 0;
  int k_top = 0;
  std::size_t edge_count = 0;
  std::size_t conflict_max = 0;
  double conflict_mean = 0;
  bool witness_checked = false;
  std::optional<std::uint64_t> seed;
};

struct Selection {
  SelectionReport report;
  Instance instance;
};

/// Builds the instance from correlation edges and VIF conflict sets, solves for a nice
/// set, and re-checks niceness before reporting.
Selection select_features(const FeatureMatrix& fm, const SelectionOptions& options);

/// Synthetic data: `blocks` groups of `block_size` columns, each a shared latent normal
/// signal plus N(0, noise^2), followed by `independents` independent standard normal columns.
/// Block columns are named b<k>_<i>, independents x<i>.
FeatureMatrix planted_block_dataset(int n, int blocks, int block_size, int independents, double noise,
                                    std::uint64_t seed);

}  // namespace featred
