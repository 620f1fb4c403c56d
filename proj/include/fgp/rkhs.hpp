#pragma once

#include "fgp/bv.hpp"
#include "fgp/covariance.hpp"

namespace fgp {

/// <f, g> in the reproducing kernel Hilbert space of the model, for BV
/// functions on sub-intervals of [0, inf) (zero-extended elsewhere).
///
/// Evaluated as -int nu_g(ds) int f(t) dR(s,t)/dt dt. Against each cubic
/// segment of f, the fBm-type power kernels are integrated in closed form;
/// the remaining smooth parts use double-exponential quadrature.
double inner_product(const CovarianceModel& m, const BVFunction& f,
                     const BVFunction& g);

/// <f, g> minus the same inner product for the fBm with the model's
/// effective Hurst exponent, computed from the difference kernel alone.
///
/// MaxKernel: -H int f g t^{2H-1} dt, refused when f and g share a
/// discontinuity. Absolutely continuous differences: the measure form with
/// the difference kernel dcov_dt_diff in place of dR/dt. Other families
/// throw UnsupportedHypothesisError.
double inner_product_diff(const CovarianceModel& m, const BVFunction& f,
                          const BVFunction& g);

/// int f(t) dR(s,t)/dt dt over f's interval.
double partial_integral(const CovarianceModel& m, const BVFunction& f, double s);

}  // namespace fgp
