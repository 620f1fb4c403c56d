#include "fgp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fgp/errors.hpp"

namespace fgp {

double integrate_de(const Integrand& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  // Building the abscissa tables is costly; one integrator per thread.
  thread_local boost::math::quadrature::tanh_sinh<double> rule;
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  double value;
  try {
    // Map to [-1, 1] and rebuild t from the exact endpoint distance xc, so
    // abscissae next to a or b stay distinct even on narrow panels.
    const double half = 0.5 * (b - a);
    auto mapped = [&](double x, double xc) {
      const double t = x < 0 ? a - half * xc : b - half * xc;
      const double y = f(t);
      // Samples overflowing next to a singular endpoint carry no weight.
      if (!std::isfinite(y) && std::fabs(xc) < 1e-12) return 0.0;
      return y;
    };
    value = half * rule.integrate(mapped, -1.0, 1.0, tol, &err, &l1, &levels);
    err *= half;
    l1 *= half;
  } catch (const fgp::Error&) {
    throw;
  } catch (const std::exception& e) {
    std::ostringstream os;
    os << "quadrature on [" << a << ", " << b << "] failed: " << e.what();
    throw QuadratureError(os.str());
  }
  const bool narrow =
      b - a <= kNarrowPanel * std::max({1.0, std::fabs(a), std::fabs(b)});
  if (!std::isfinite(value) ||
      (!narrow && err > std::max(1e-7 * l1, kQuadAbsFloor))) {
    std::ostringstream os;
    os << "quadrature on [" << a << ", " << b << "] did not converge: value "
       << value << ", error estimate " << err << ", L1 " << l1 << ", levels "
       << levels;
    throw QuadratureError(os.str());
  }
  return value;
}

double integrate_de_split(const Integrand& f, double a, double b,
                          std::vector<double> cuts, double tol) {
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i] < a || cuts[i + 1] > b) continue;
    total += integrate_de(f, cuts[i], cuts[i + 1], tol);
  }
  return total;
}

double power_moment(const std::array<double, 4>& p, double c, double alpha,
                    bool odd, double u, double v) {
  if (!(alpha > -1.0)) throw DomainError("power_moment needs alpha > -1");
  if (!(v > u)) return 0.0;
  // Re-expand p around c: p(t) = sum_k e_k (t - c)^k.
  static constexpr double binom[4][4] = {
      {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  std::array<double, 4> e{};
  for (int k = 0; k < 4; ++k)
    for (int j = k; j < 4; ++j) e[k] += binom[j][k] * p[j] * std::pow(c, j - k);

  auto antiderivative = [&](double x) {
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
      if (e[k] == 0.0) continue;
      const double m = k + alpha + 1.0;
      double term = std::pow(std::fabs(x), m) / m;
      if (x < 0) {
        // x^k w(x) = (-1)^k |x|^{k+alpha} (times -1 when odd)
        const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
        term *= -sign_k * (odd ? -1.0 : 1.0);
      }
      total += e[k] * term;
    }
    return total;
  };
  return antiderivative(v - c) - antiderivative(u - c);
}

}  // namespace fgp
