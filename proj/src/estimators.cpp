#include "fgp/estimators.hpp"

#include <cmath>

#include "fgp/chaos.hpp"
#include "fgp/errors.hpp"

namespace fgp {
namespace {

double sum_of_squared_increments(const Eigen::VectorXd& path, int n) {
  if (n < 1 || n > 30) throw DomainError("dyadic level must be in 1..30");
  const Eigen::Index m = Eigen::Index{1} << n;
  if (path.size() != m + 1)
    throw DomainError("path length does not match the dyadic grid 2^n + 1");
  return (path.tail(m) - path.head(m)).squaredNorm();
}

}  // namespace

double trapezoid(const Eigen::VectorXd& values, const Grid& grid) {
  if (values.size() != grid.n() + 1) throw DomainError("values do not match the grid");
  return grid.weights().dot(values);
}

double moment_estimator(const Eigen::VectorXd& zeta, const Grid& grid, double H) {
  if (!(H > 0 && H < 1)) throw DomainError("moment estimator needs H in (0,1)");
  const double I = trapezoid(zeta.cwiseAbs2(), grid);
  if (!(I > 0)) throw DegeneratePathError("moment estimator: int zeta^2 dt is zero");
  const double arg = I / (H * std::tgamma(2 * H) * grid.T());
  return std::pow(arg, -1.0 / (2 * H));
}

double lse_informal(const Eigen::VectorXd& zeta, const Eigen::VectorXd& dG,
                    const FouSystem& sys) {
  const int n = sys.grid.n();
  if (zeta.size() != n + 1 || dG.size() != n)
    throw DomainError("path and increments do not match the system grid");
  const double I = trapezoid(zeta.cwiseAbs2(), sys.grid);
  if (!(I > 0)) throw DegeneratePathError("least-squares statistic: division by zero");
  const double delta = zeta.head(n).dot(dG) - sys.lse_correction.sum();
  return sys.theta - delta / I;
}

double lse_identity(const Eigen::VectorXd& zeta, const FouSystem& sys) {
  const int n = sys.grid.n();
  if (zeta.size() != n + 1) throw DomainError("path does not match the system grid");
  const double I = trapezoid(zeta.cwiseAbs2(), sys.grid);
  if (!(I > 0)) throw DegeneratePathError("least-squares statistic: division by zero");
  // Stratonovich integral of zeta against G is zeta_T^2 / 2 + theta int zeta^2;
  // for a first-chaos integrand the divergence differs from it by its mean.
  const double EI = sys.grid.weights().dot(sys.sigma_zeta.diagonal());
  const double delta =
      0.5 * (zeta(n) * zeta(n) - sys.sigma_zeta(n, n)) + sys.theta * (I - EI);
  return sys.theta - delta / I;
}

double normalized_moment_stat(double estimate, double theta, double H, double T) {
  return std::sqrt(4 * H * H * T / (theta * sigma_H2(H))) * (estimate - theta);
}

double normalized_lse_stat(double estimate, double theta, double H, double T) {
  return std::sqrt(T / (theta * sigma_H2(H))) * (estimate - theta);
}

double gladyshev_qv(const Eigen::VectorXd& path, int n, double T, double H) {
  if (!(T > 0)) throw DomainError("horizon must be positive");
  const double S = sum_of_squared_increments(path, n);
  return std::pow(std::ldexp(1.0, n) / T, 2 * H - 1) * S;
}

double hurst_estimate(const Eigen::VectorXd& path, int n, double T) {
  if (!(T > 0)) throw DomainError("horizon must be positive");
  const double S = sum_of_squared_increments(path, n);
  if (!(S > 0)) throw DegeneratePathError("hurst estimate: zero quadratic variation");
  const double scale = std::log(std::ldexp(1.0, n) / T);
  if (scale == 0.0) throw DomainError("hurst estimate undefined for 2^n == T");
  return 0.5 * (1.0 + std::log(T / S) / scale);
}

Eigen::VectorXd dyadic_subsample(const Eigen::VectorXd& path, int n_fine, int n) {
  if (n > n_fine || n < 1) throw DomainError("subsample level must be in 1..n_fine");
  const Eigen::Index m_fine = Eigen::Index{1} << n_fine;
  if (path.size() != m_fine + 1) throw DomainError("path does not match 2^n_fine + 1");
  const Eigen::Index stride = Eigen::Index{1} << (n_fine - n);
  const Eigen::Index m = Eigen::Index{1} << n;
  Eigen::VectorXd out(m + 1);
  for (Eigen::Index k = 0; k <= m; ++k) out(k) = path(k * stride);
  return out;
}

}  // namespace fgp
