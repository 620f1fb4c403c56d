#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "fgp/covariance.hpp"

namespace fgp {

/// Uniform grid t_k = k T / n, k = 0..n.
class Grid {
 public:
  Grid(double T, int n);

  double T() const { return T_; }
  int n() const { return n_; }
  double dt() const { return T_ / n_; }
  double node(int k) const { return T_ * k / n_; }
  /// Trapezoid weights on the n + 1 nodes; they sum to T.
  Eigen::VectorXd weights() const;

 private:
  double T_;
  int n_;
};

/// Covariance of the increments G(t_{k+1}) - G(t_k), k = 0..n-1, as
/// second differences of R. For n <= kPsdCheckMaxSize the spectrum is
/// checked and an eigenvalue below -1e-8 times the spectral radius raises
/// DomainError; larger matrices are checked by the factorization.
inline constexpr int kPsdCheckMaxSize = 1024;
Eigen::MatrixXd increment_cov_matrix(const CovarianceModel& m, const Grid& grid);

double min_eigenvalue(const Eigen::MatrixXd& sym);

/// Lower Cholesky factor of a PSD matrix, found with the ridge ladder
/// 0, 1e-14, 1e-12, 1e-10 (relative to the largest diagonal entry).
class IncrementFactor {
 public:
  /// Factorizes in place; `sigma` is consumed.
  explicit IncrementFactor(Eigen::MatrixXd sigma);

  int size() const { return static_cast<int>(L_.rows()); }
  double ridge() const { return ridge_; }
  const Eigen::MatrixXd& lower() const { return L_; }

  /// n x n_paths matrix of increments. Column p is drawn from
  /// derive_seed(seed, p); the output never depends on the thread count.
  Eigen::MatrixXd sample(int n_paths, std::uint64_t seed) const;

 private:
  Eigen::MatrixXd L_;  // only the lower triangle is meaningful
  double ridge_ = 0.0;
  bool zero_ = false;
};

/// Levels G(t_0..t_n) from increments (first row zero).
Eigen::MatrixXd cumulative_paths(const Eigen::MatrixXd& increments);

/// Paths of G sampled from the increment covariance: (n + 1) x n_paths.
Eigen::MatrixXd sample_paths(const Eigen::MatrixXd& sigma_inc, int n_paths,
                             std::uint64_t seed);

/// Discrete fractional Ornstein-Uhlenbeck system
///   zeta_{t_j} = sum_{k<j} exp(-theta (t_j - tau_k)) dG_k,
/// tau_k the midpoint of [t_k, t_{k+1}], i.e. the recursion
///   zeta_j = e^{-theta dt} zeta_{j-1} + e^{-theta dt / 2} dG_{j-1}.
struct FouSystem {
  CovarianceModel model;
  Grid grid;
  double theta;
  Eigen::MatrixXd sigma_inc;   // n x n
  Eigen::MatrixXd sigma_zeta;  // (n+1) x (n+1), node 0 included (zero)
  /// E[zeta_{t_j} dG_j], j = 0..n-1: the diagonal of A Sigma_inc.
  Eigen::VectorXd lse_correction;
  std::shared_ptr<const IncrementFactor> factor;

  /// The (n+1) x n weight map A from increments to zeta values.
  Eigen::MatrixXd weight_matrix() const;
};

FouSystem fou_system(const CovarianceModel& m, const Grid& grid, double theta);

struct FouDraw {
  Eigen::MatrixXd zeta;  // (n+1) x n_paths
  Eigen::MatrixXd dG;    // n x n_paths
};

FouDraw fou_paths(const FouSystem& sys, int n_paths, std::uint64_t seed);

/// Applies the zeta recursion to given increments.
FouDraw fou_from_increments(const FouSystem& sys, Eigen::MatrixXd dG);

}  // namespace fgp
