#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fgp/simulate.hpp"

namespace fgp {

/// Limiting variance constant of the moment estimator, H in (0, 1/2).
double sigma_H2(double H);
/// Limiting variance of W_T: theta^{-1-4H} (H Gamma(2H))^2 sigma_H2(H).
double sigma_B2(double H, double theta);

/// W_T = T^{-1/2} sum_j w_j (zeta_j^2 - E zeta_j^2), trapezoid weights.
std::vector<double> wt_from_zeta(const FouSystem& sys, const Eigen::MatrixXd& zeta);
std::vector<double> wt_samples(const FouSystem& sys, int n_paths, std::uint64_t seed);

struct CumulantReport {
  double T = 0.0;
  int n = 0;
  std::string family;
  double H = 0.0;
  double theta = 0.0;
  double kappa2 = 0.0;
  double kappa3 = 0.0;
  double kappa4 = 0.0;
  /// 2/T sum_{j,k} w_j w_k Sigma_zeta[j,k]^2, computed independently.
  double kappa2_direct = 0.0;
  /// sigma_B2 at the effective Hurst exponent; NaN when H >= 1/2.
  double sigma_B2_target = 0.0;
  double gap2 = 0.0;
};

/// Exact cumulants of the discretized W_T:
/// kappa_p = 2^{p-1} (p-1)! tr((W Sigma_zeta)^p) / T^{p/2}, W the weights.
CumulantReport cumulants(const FouSystem& sys);

/// Cumulants of T^{-1/2} z^T W z for z ~ N(0, sigma) and weights w.
std::array<double, 3> quadratic_form_cumulants(const Eigen::MatrixXd& sigma,
                                               const Eigen::VectorXd& w, double T);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares of log y on log x. Needs at least 3 pairs, all positive.
RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y);

struct BoundCheck {
  double fitted_C = 0.0;
  std::vector<double> grid;
  std::vector<double> values;  // the integral at each grid point
  std::vector<double> ratios;  // value / bound shape
  std::vector<std::string> violations;
};

/// e^{-theta s} int_0^s e^{theta r} r^{beta-1} dr against s^beta ^ s^{beta-1}.
double exp_power_integral(double theta, double beta, double s);
BoundCheck exp_power_check(double theta, double beta, const std::vector<double>& s_grid);

/// int_0^inf e^{-x} dx int_0^t e^{y-t} (x+y)^{2H-2} dy against 1 ^ t^{2H-2}.
double exp_double_integral(double H, double t);
BoundCheck exp_double_check(double H, const std::vector<double>& t_grid);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace fgp
