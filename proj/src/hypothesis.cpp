#include "fgp/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "fgp/errors.hpp"

namespace fgp {
namespace {

using RatioFn = std::function<double(double s, double t)>;

struct SweepPoint {
  double sup = 0.0;
  std::size_t non_finite = 0;
};

SweepPoint sweep_once(const RatioFn& ratio, const Rectangle& d, int n) {
  const double horizon = std::max({std::fabs(d.s_hi), std::fabs(d.t_hi), 1e-300});
  const double band = kSweepExclusion * horizon;
  SweepPoint out;
  for (int i = 1; i <= n; ++i) {
    const double s = d.s_lo + (d.s_hi - d.s_lo) * i / n;
    if (s < band) continue;
    for (int j = 1; j <= n; ++j) {
      const double t = d.t_lo + (d.t_hi - d.t_lo) * j / n;
      if (t < band || std::fabs(s - t) < band) continue;
      const double r = ratio(s, t);
      if (!std::isfinite(r)) {
        ++out.non_finite;
        continue;
      }
      out.sup = std::max(out.sup, r);
    }
  }
  return out;
}

SweepReport sweep(const RatioFn& ratio, const Rectangle& d, int n,
                  const char* what) {
  if (n < 2) throw DomainError("grid density must be at least 2");
  if (!(d.s_hi > d.s_lo) || !(d.t_hi > d.t_lo) || d.s_lo < 0 || d.t_lo < 0)
    throw DomainError("sweep rectangle must be a nondegenerate subset of [0,inf)^2");
  const auto base = sweep_once(ratio, d, n);
  const auto fine = sweep_once(ratio, d, 4 * n);
  SweepReport rep;
  rep.constant = base.sup;
  if (base.sup > 0.0 && fine.sup > 0.0)
    rep.growth = std::log(fine.sup / base.sup) / std::log(4.0);
  if (base.non_finite + fine.non_finite > 0) {
    std::ostringstream os;
    os << what << ": " << (base.non_finite + fine.non_finite)
       << " non-finite evaluations";
    rep.violations.push_back(os.str());
  }
  if (rep.growth > kGrowthTolerance) {
    std::ostringstream os;
    os << what << ": ratio grows under grid refinement (log-slope "
       << rep.growth << "), no finite constant";
    rep.violations.push_back(os.str());
  }
  return rep;
}

void require_h2prime(const CovarianceModel& m) {
  if (!m.satisfies_h2prime())
    throw UnsupportedHypothesisError("family does not satisfy (H2')");
}

}  // namespace

SweepReport check_h3(const CovarianceModel& m, const Rectangle& domain,
                     int grid_density) {
  require_h2prime(m);
  const double H = m.H();
  return sweep(
      [&](double s, double t) {
        return std::fabs(mixed_partial_diff(m, s, t)) / std::pow(s * t, H - 1);
      },
      domain, grid_density, "(H3)");
}

H3PrimeReport check_h3prime(const CovarianceModel& m, const Rectangle& domain,
                            int grid_density) {
  require_h2prime(m);
  const double H = m.H();
  const bool has_bifractional =
      m.family() == Family::BiFbm || m.family() == Family::GenSubFbm;
  const double Hp = m.Hprime(), K = m.K();

  auto phi1 = [&](double s, double t) { return std::pow(s + t, 2 * H - 2); };
  auto phi2 = [&](double s, double t) {
    return std::pow(std::pow(s, 2 * Hp) + std::pow(t, 2 * Hp), K - 2) *
           std::pow(s * t, 2 * Hp - 1);
  };

  H3PrimeReport rep;
  const auto sum_sweep = sweep(
      [&](double s, double t) {
        return std::fabs(mixed_partial_diff_components(m, s, t).sum_part) /
               phi1(s, t);
      },
      domain, grid_density, "(H3') sum term");
  rep.C1 = sum_sweep.constant;
  rep.violations = sum_sweep.violations;
  if (has_bifractional) {
    const auto bi_sweep = sweep(
        [&](double s, double t) {
          return std::fabs(
                     mixed_partial_diff_components(m, s, t).bifractional_part) /
                 phi2(s, t);
        },
        domain, grid_density, "(H3') bi-fractional term");
    rep.C2 = bi_sweep.constant;
    rep.violations.insert(rep.violations.end(), bi_sweep.violations.begin(),
                          bi_sweep.violations.end());
  }
  rep.sum_term_degenerate = rep.C1 == 0.0;
  rep.bifractional_term_degenerate = rep.C2 == 0.0;
  if (m.family() == Family::MixedFbmPlusZ)
    rep.violations.push_back(
        "(H3'): the difference kernel H^2 (ts)^{H-1} has no (t+s) or "
        "bi-fractional form");

  // Pointwise check of the combined two-term bound on the base grid.
  if (rep.violations.empty()) {
    const Rectangle& d = domain;
    const double band =
        kSweepExclusion * std::max(std::fabs(d.s_hi), std::fabs(d.t_hi));
    std::size_t bad = 0;
    for (int i = 1; i <= grid_density; ++i) {
      const double s = d.s_lo + (d.s_hi - d.s_lo) * i / grid_density;
      for (int j = 1; j <= grid_density; ++j) {
        const double t = d.t_lo + (d.t_hi - d.t_lo) * j / grid_density;
        if (s < band || t < band || std::fabs(s - t) < band) continue;
        const double lhs = std::fabs(mixed_partial_diff(m, s, t));
        double rhs = rep.C1 * phi1(s, t);
        if (has_bifractional) rhs += rep.C2 * phi2(s, t);
        if (lhs > rhs * (1 + 1e-12) + 1e-300) ++bad;
      }
    }
    if (bad > 0)
      rep.violations.push_back("(H3'): " + std::to_string(bad) +
                               " grid points exceed the fitted bound");
  }
  return rep;
}

SweepReport check_h5(const CovarianceModel& m, const Rectangle& domain,
                     int grid_density) {
  if (m.has_fbm_link())
    throw UnsupportedHypothesisError(
        "(H5) sweeps apply to families not tied to an fBm");
  if (m.family() == Family::TalarczykSecond)
    throw UnsupportedHypothesisError(
        "TalarczykSecond: first partial is not absolutely continuous");
  const double H = m.H();
  return sweep(
      [&](double s, double t) {
        return std::fabs(mixed_partial(m, s, t)) / std::pow(s * t, H - 1);
      },
      domain, grid_density, "(H5)");
}

SweepReport canonical_metric_bound(const CovarianceModel& m, double T,
                                   int grid_density) {
  if (!(T > 0)) throw DomainError("horizon must be positive");
  const double H = m.H();
  return sweep(
      [&](double s, double t) {
        const double var = cov(m, s, s) + cov(m, t, t) - 2 * cov(m, s, t);
        return std::sqrt(std::max(var, 0.0)) / std::pow(std::fabs(s - t), H);
      },
      Rectangle::square(T), grid_density, "canonical metric");
}

}  // namespace fgp
