#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "fgp/simulate.hpp"

namespace fgp {

/// Trapezoid integral of grid values over [0, T].
double trapezoid(const Eigen::VectorXd& values, const Grid& grid);

/// ( int zeta^2 dt / (H Gamma(2H) T) )^{-1/(2H)}.
double moment_estimator(const Eigen::VectorXd& zeta, const Grid& grid, double H);

/// Verification form of the least-squares statistic,
///   theta - delta(zeta) / int zeta^2 dt,
/// with delta(zeta) = sum_j zeta_j dG_j - sum_j E[zeta_j dG_j] the discrete
/// divergence integral. Needs the true theta and the model (through sys),
/// so it is not an estimator usable on data.
double lse_informal(const Eigen::VectorXd& zeta, const Eigen::VectorXd& dG,
                    const FouSystem& sys);

/// Same statistic with the divergence taken from the continuous-time
/// identity delta(zeta) = (zeta_T^2 - E zeta_T^2) / 2 + theta int (zeta^2 - E zeta^2) dt
/// instead of the grid sum. The grid sum's variance converges like
/// dt^{4H-1} for H < 1/2; this form only carries trapezoid error.
double lse_identity(const Eigen::VectorXd& zeta, const FouSystem& sys);

/// sqrt(4 H^2 T / (theta sigma_H^2)) (estimate - theta).
double normalized_moment_stat(double estimate, double theta, double H, double T);
/// sqrt(T / (theta sigma_H^2)) (estimate - theta).
double normalized_lse_stat(double estimate, double theta, double H, double T);

/// V_n = (2^n / T)^{2H-1} sum_k (G(kT/2^n) - G((k-1)T/2^n))^2 for a path
/// given at the 2^n + 1 dyadic nodes.
double gladyshev_qv(const Eigen::VectorXd& path, int n, double T, double H);

/// H = (1 + log(T / S_n) / log(2^n / T)) / 2, S_n the plain sum of squares.
double hurst_estimate(const Eigen::VectorXd& path, int n, double T);

/// Every 2^{n_fine - n}-th node of a dyadic path.
Eigen::VectorXd dyadic_subsample(const Eigen::VectorXd& path, int n_fine, int n);

struct EstimatorRun {
  std::string estimator;
  std::string model;
  double H = 0.0;
  double theta_true = 0.0;
  double T = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
  double value = 0.0;
  double normalized_stat = 0.0;
};

}  // namespace fgp
