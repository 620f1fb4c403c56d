#pragma once

#include <string>
#include <vector>

#include "fgp/covariance.hpp"

namespace fgp {

/// Closed rectangle [s_lo, s_hi] x [t_lo, t_hi] in time.
struct Rectangle {
  double s_lo = 0.0, s_hi = 1.0, t_lo = 0.0, t_hi = 1.0;
  static Rectangle square(double T) { return {0.0, T, 0.0, T}; }
};

/// Result of a grid sweep of |kernel| / bound over an off-diagonal grid.
///
/// `constant` is the grid supremum of the ratio, i.e. the smallest constant
/// that makes the bound hold on the swept points. `growth` is the log-slope
/// of that supremum under two grid doublings; a bounded ratio gives a slope
/// close to zero. Non-finite evaluations and unbounded growth are recorded
/// in `violations`.
struct SweepReport {
  double constant = 0.0;
  double growth = 0.0;
  std::vector<std::string> violations;
};

struct H3PrimeReport {
  double C1 = 0.0;
  double C2 = 0.0;
  /// The bound carries no (t+s) term, or no bi-fractional term.
  bool sum_term_degenerate = false;
  bool bifractional_term_degenerate = false;
  std::vector<std::string> violations;
};

/// Grid points are excluded within this fraction of the horizon from the
/// diagonal and from both axes.
inline constexpr double kSweepExclusion = 1e-6;

/// Log-slope of the grid supremum above which a ratio is called unbounded.
inline constexpr double kGrowthTolerance = 0.05;

/// |d/ds(dR/dt - dR^B/dt)| <= C (ts)^{H-1}. Requires an absolutely
/// continuous difference (throws UnsupportedHypothesisError otherwise).
SweepReport check_h3(const CovarianceModel& m, const Rectangle& domain,
                     int grid_density);

/// Two-term bound C1 (t+s)^{2H-2} + C2 (s^{2H'}+t^{2H'})^{K-2}(st)^{2H'-1},
/// with each constant fitted against its own component of the kernel.
H3PrimeReport check_h3prime(const CovarianceModel& m, const Rectangle& domain,
                            int grid_density);

/// |d^2R/dsdt| <= C (ts)^{H-1} for the families not tied to an fBm.
SweepReport check_h5(const CovarianceModel& m, const Rectangle& domain,
                     int grid_density);

/// Canonical metric bound sqrt(E[(G_s - G_t)^2]) <= C |s - t|^H.
SweepReport canonical_metric_bound(const CovarianceModel& m, double T,
                                   int grid_density);

}  // namespace fgp
