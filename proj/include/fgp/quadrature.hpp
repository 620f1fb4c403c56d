#pragma once

#include <array>
#include <functional>
#include <vector>

namespace fgp {

using Integrand = std::function<double(double)>;

/// Default relative termination tolerance of the adaptive rules.
inline constexpr double kQuadTolerance = 1e-10;

/// Error estimates below this absolute level are always accepted. Panels
/// cut next to a singular point are tiny, and there the endpoint rounding
/// limits the attainable relative accuracy.
inline constexpr double kQuadAbsFloor = 1e-10;
/// Panels narrower than this (relative to the coordinates) have too few
/// distinct abscissae for a meaningful error estimate; only finiteness is
/// checked there.
inline constexpr double kNarrowPanel = 1e-9;

/// Double-exponential (tanh-sinh) quadrature on [a, b]. Integrable
/// algebraic endpoint singularities are fine; interior ones must be split
/// off by the caller. Throws QuadratureError when the error estimate stays
/// above 1e-7 of the L1 norm and above kQuadAbsFloor (narrow panels
/// excepted).
double integrate_de(const Integrand& f, double a, double b,
                    double tol = kQuadTolerance);

/// integrate_de over the sub-intervals of [a, b] cut at `cuts` (values
/// outside (a, b) are ignored).
double integrate_de_split(const Integrand& f, double a, double b,
                          std::vector<double> cuts, double tol = kQuadTolerance);

/// Closed form of int_u^v p(t) w(t - c) dt for a cubic p (coefficients in
/// powers of t), with w(x) = |x|^alpha or, when `odd`, sgn(x)|x|^alpha.
/// Needs alpha > -1.
double power_moment(const std::array<double, 4>& p, double c, double alpha,
                    bool odd, double u, double v);

}  // namespace fgp
