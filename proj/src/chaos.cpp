#include "fgp/chaos.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fgp/errors.hpp"
#include "fgp/parallel.hpp"
#include "fgp/quadrature.hpp"

namespace fgp {

double sigma_H2(double H) {
  if (!(H > 0.0 && H < 0.5)) throw DomainError("sigma_H2 needs H in (0, 1/2)");
  return (4 * H - 1) + 2 * std::tgamma(2 - 4 * H) * std::tgamma(4 * H) /
                           (std::tgamma(2 * H) * std::tgamma(1 - 2 * H));
}

double sigma_B2(double H, double theta) {
  if (!(theta > 0)) throw DomainError("sigma_B2 needs theta > 0");
  const double c = H * std::tgamma(2 * H);
  return std::pow(theta, -1 - 4 * H) * c * c * sigma_H2(H);
}

std::vector<double> wt_from_zeta(const FouSystem& sys, const Eigen::MatrixXd& zeta) {
  const Eigen::VectorXd w = sys.grid.weights();
  if (zeta.rows() != w.size()) throw DomainError("zeta paths do not match the grid");
  const double norm = 1.0 / std::sqrt(sys.grid.T());
  const Eigen::VectorXd mean_sq = sys.sigma_zeta.diagonal();
  std::vector<double> out(zeta.cols());
  for (Eigen::Index p = 0; p < zeta.cols(); ++p)
    out[p] = norm * w.dot((zeta.col(p).array().square() - mean_sq.array()).matrix());
  return out;
}

std::vector<double> wt_samples(const FouSystem& sys, int n_paths, std::uint64_t seed) {
  return wt_from_zeta(sys, fou_paths(sys, n_paths, seed).zeta);
}

std::array<double, 3> quadratic_form_cumulants(const Eigen::MatrixXd& sigma,
                                               const Eigen::VectorXd& w, double T) {
  const Eigen::Index n = sigma.rows();
  const Eigen::VectorXd root = w.cwiseSqrt();
  const Eigen::MatrixXd B = root.asDiagonal() * sigma * root.asDiagonal();
  Eigen::MatrixXd B2(n, n);
  const Eigen::Index chunk = 256;
  const std::size_t chunks = static_cast<std::size_t>((n + chunk - 1) / chunk);
  parallel_for(chunks, [&](std::size_t c) {
    const Eigen::Index first = static_cast<Eigen::Index>(c) * chunk;
    const Eigen::Index width = std::min(chunk, n - first);
    B2.middleCols(first, width).noalias() = B * B.middleCols(first, width);
  });
  const double k2 = 2.0 * B.squaredNorm() / T;
  const double k3 = 8.0 * B2.cwiseProduct(B).sum() / std::pow(T, 1.5);
  const double k4 = 48.0 * B2.squaredNorm() / (T * T);
  return {k2, k3, k4};
}

CumulantReport cumulants(const FouSystem& sys) {
  CumulantReport rep;
  rep.T = sys.grid.T();
  rep.n = sys.grid.n();
  rep.family = std::string(family_name(sys.model.family()));
  rep.H = sys.model.effective_hurst();
  rep.theta = sys.theta;
  const Eigen::VectorXd w = sys.grid.weights();
  const auto k = quadratic_form_cumulants(sys.sigma_zeta, w, rep.T);
  rep.kappa2 = k[0];
  rep.kappa3 = k[1];
  rep.kappa4 = k[2];
  rep.kappa2_direct =
      2.0 / rep.T * (w.asDiagonal() * sys.sigma_zeta.cwiseAbs2() * w.asDiagonal()).sum();
  if (rep.H < 0.5) {
    rep.sigma_B2_target = sigma_B2(rep.H, rep.theta);
    rep.gap2 = std::fabs(rep.kappa2 - rep.sigma_B2_target);
  } else {
    rep.sigma_B2_target = std::numeric_limits<double>::quiet_NaN();
    rep.gap2 = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("rate_fit: size mismatch");
  if (x.size() < 3) throw DomainError("rate_fit needs at least 3 points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0))
      throw DomainError("rate_fit needs positive values on both axes");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw DomainError("rate_fit needs distinct x values");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi > lo) || n < 2) throw DomainError("bad log grid");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

namespace {

// Mass of e^{-theta (s-r)} beyond this many e-foldings is below 1e-26.
constexpr double kDecayCut = 60.0;

// Local log-slope of a bound ratio above which it counts as unbounded.
constexpr double kGrowthToleranceBounds = 0.05;

BoundCheck finish(std::vector<double> grid, std::vector<double> values,
                  const std::function<double(double)>& shape, const char* what) {
  BoundCheck bc;
  bc.grid = std::move(grid);
  bc.values = std::move(values);
  std::size_t bad = 0;
  for (std::size_t i = 0; i < bc.grid.size(); ++i) {
    const double r = bc.values[i] / shape(bc.grid[i]);
    bc.ratios.push_back(r);
    if (!std::isfinite(r) || r < 0) {
      ++bad;
      continue;
    }
    bc.fitted_C = std::max(bc.fitted_C, r);
  }
  if (bad) {
    std::ostringstream os;
    os << what << ": " << bad << " non-finite or negative evaluations";
    bc.violations.push_back(os.str());
  }
  // A bounded ratio flattens out at both ends of the grid; a ratio still
  // rising toward an end has no finite constant.
  const std::size_t n = bc.ratios.size();
  if (n >= 2 && !bad) {
    auto slope = [&](std::size_t i, std::size_t j) {
      if (bc.ratios[i] <= 0 || bc.ratios[j] <= 0) return 0.0;
      return std::log(bc.ratios[j] / bc.ratios[i]) / std::log(bc.grid[j] / bc.grid[i]);
    };
    if (slope(n - 2, n - 1) > kGrowthToleranceBounds) {
      bc.violations.push_back(std::string(what) + ": ratio still growing at the upper end");
    }
    if (-slope(0, 1) > kGrowthToleranceBounds) {
      bc.violations.push_back(std::string(what) + ": ratio still growing at the lower end");
    }
  }
  return bc;
}

}  // namespace

double exp_power_integral(double theta, double beta, double s) {
  if (!(theta > 0) || !(beta > 0)) throw DomainError("exp_power_integral needs theta, beta > 0");
  if (s < 0) throw DomainError("negative time");
  if (s == 0) return 0.0;
  auto f = [&](double r) { return std::exp(-theta * (s - r)) * std::pow(r, beta - 1); };
  const double cut = s - kDecayCut / theta;
  std::vector<double> cuts;
  if (cut > 0) cuts.push_back(cut);
  return integrate_de_split(f, 0.0, s, cuts);
}

BoundCheck exp_power_check(double theta, double beta, const std::vector<double>& s_grid) {
  std::vector<double> values;
  for (double s : s_grid) values.push_back(exp_power_integral(theta, beta, s));
  return finish(s_grid, values,
                [&](double s) { return std::min(std::pow(s, beta), std::pow(s, beta - 1)); },
                "exp_power_integral");
}

double exp_double_integral(double H, double t) {
  if (!(H > 0 && H < 1)) throw DomainError("exp_double_integral needs H in (0,1)");
  if (!(t > 0)) throw DomainError("exp_double_integral needs t > 0");
  // inner(y) = int_0^inf e^{-x} (x+y)^{2H-2} dx = e^y int_y^inf e^{-u} u^{2H-2} du,
  // taken in v = log u so that small y causes no spike.
  auto inner = [&](double y) {
    const double lo = std::log(y);
    const double hi = std::log(std::max(y, 1.0) + kDecayCut);
    return integrate_de(
        [&](double v) { return std::exp((2 * H - 1) * v - (std::exp(v) - y)); }, lo, hi);
  };
  const double cut = t - kDecayCut;
  std::vector<double> cuts;
  if (cut > 0) cuts.push_back(cut);
  return integrate_de_split([&](double y) { return std::exp(y - t) * inner(y); }, 0.0, t,
                            cuts);
}

BoundCheck exp_double_check(double H, const std::vector<double>& t_grid) {
  std::vector<double> values;
  for (double t : t_grid) values.push_back(exp_double_integral(H, t));
  return finish(t_grid, values,
                [&](double t) { return std::min(1.0, std::pow(t, 2 * H - 2)); },
                "exp_double_integral");
}

}  // namespace fgp
