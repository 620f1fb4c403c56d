#include "fgp/rkhs.hpp"

#include <algorithm>
#include <cmath>

#include "fgp/errors.hpp"
#include "fgp/quadrature.hpp"

namespace fgp {
namespace {

void check_support(const BVFunction& f, const BVFunction& g) {
  if (f.a() < 0.0 || g.a() < 0.0)
    throw DomainError("inner products need functions on subsets of [0, inf)");
}

// int f(t) (H t^{2H-1} - H sgn(t-s)|t-s|^{2H-1}) dt: the fBm's dR/dt.
double fbm_part(double H, const std::vector<Piece>& segs, double s) {
  double v = 0.0;
  for (const auto& p : segs)
    v += H * (power_moment(p.coeffs, 0.0, 2 * H - 1, false, p.lo, p.hi) -
              power_moment(p.coeffs, s, 2 * H - 1, true, p.lo, p.hi));
  return v;
}

double quad_against(const std::vector<Piece>& segs, double s,
                    const std::function<double(double)>& kernel) {
  double v = 0.0;
  for (const auto& p : segs) {
    // The kernels only kink at t = s; a cut hugging an end leaves a panel
    // too narrow to integrate reliably and buys nothing.
    const double margin = 1e-6 * (p.hi - p.lo);
    std::vector<double> cuts;
    if (s > p.lo + margin && s < p.hi - margin) cuts.push_back(s);
    v += integrate_de_split([&](double t) { return p(t) * kernel(t); }, p.lo,
                            p.hi, cuts);
  }
  return v;
}

double partial_integral_segs(const CovarianceModel& m,
                             const std::vector<Piece>& segs, double s) {
  const double H = m.H();
  switch (m.family()) {
    case Family::Fbm:
      return fbm_part(H, segs, s);
    case Family::MaxKernel: {
      // difference kernel is -H t^{2H-1} on t < s
      double d = 0.0;
      for (const auto& p : segs)
        d -= H * power_moment(p.coeffs, 0.0, 2 * H - 1, false, p.lo,
                              std::min(p.hi, s));
      return fbm_part(H, segs, s) + d;
    }
    case Family::TalarczykSecond: {
      double v = 0.0;
      for (const auto& p : segs)
        v += H * (power_moment(p.coeffs, -s, 2 * H - 1, false, p.lo, p.hi) -
                  power_moment(p.coeffs, 0.0, 2 * H - 1, false,
                               std::max(p.lo, s), p.hi));
      return v;
    }
    case Family::BardinaX: {
      const double sign = H < 0.5 ? 1.0 : -1.0;
      double v = 0.0;
      for (const auto& p : segs)
        v += sign * H *
             (power_moment(p.coeffs, 0.0, 2 * H - 1, false, p.lo, p.hi) -
              power_moment(p.coeffs, -s, 2 * H - 1, false, p.lo, p.hi));
      return v;
    }
    case Family::Trifractional:
    case Family::WeightedFbm:
      return quad_against(segs, s, [&](double t) {
        return dcov_dt(m, s, t, Branch::Right);
      });
    default:
      return fbm_part(H, segs, s) + quad_against(segs, s, [&](double t) {
               return dcov_dt_diff(m, s, t, Branch::Right);
             });
  }
}

// Segments of the product f g on the common refinement, as degree-6
// coefficient arrays.
struct ProductSeg {
  double lo, hi;
  std::array<double, 7> q{};
};

std::vector<ProductSeg> product_segments(const BVFunction& f,
                                         const BVFunction& g) {
  std::vector<ProductSeg> out;
  for (const auto& p : f.smooth_segments())
    for (const auto& r : g.smooth_segments()) {
      const double lo = std::max(p.lo, r.lo), hi = std::min(p.hi, r.hi);
      if (!(hi > lo)) continue;
      ProductSeg ps{lo, hi, {}};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) ps.q[i + j] += p.coeffs[i] * r.coeffs[j];
      out.push_back(ps);
    }
  return out;
}

// int F dnu for F(s) = int f(t) K(s, t) dt, which kinks at f's breakpoints.
double against_measure(const std::function<double(double)>& F,
                       const BVFunction& f, const SignedMeasure& nu) {
  double total = 0.0;
  for (const auto& atom : nu.atoms)
    if (atom.mass != 0.0) total += atom.mass * F(atom.x);

  std::vector<double> cuts = f.breakpoints();
  cuts.push_back(f.a());
  cuts.push_back(f.b());
  for (const auto& d : nu.density) {
    if (d.coeffs[0] == 0 && d.coeffs[1] == 0 && d.coeffs[2] == 0 &&
        d.coeffs[3] == 0)
      continue;
    total += integrate_de_split([&](double s) { return d(s) * F(s); }, d.lo,
                                d.hi, cuts);
  }
  return total;
}

}  // namespace

double partial_integral(const CovarianceModel& m, const BVFunction& f,
                        double s) {
  if (f.a() < 0.0 || s < 0.0) throw DomainError("negative time");
  return partial_integral_segs(m, f.smooth_segments(), s);
}

double inner_product(const CovarianceModel& m, const BVFunction& f,
                     const BVFunction& g) {
  check_support(f, g);
  const auto fsegs = f.smooth_segments();
  const auto F = [&](double s) { return partial_integral_segs(m, fsegs, s); };
  return -against_measure(F, f, ls_measure(g));
}

double inner_product_diff(const CovarianceModel& m, const BVFunction& f,
                          const BVFunction& g) {
  check_support(f, g);
  const double H = m.H();
  if (m.family() == Family::Fbm) return 0.0;
  if (m.family() == Family::MaxKernel) {
    for (const auto& d : f.discontinuities())
      if (g.jumps_at(d.x))
        throw CommonJumpError(
            "f and g are both discontinuous at a point; the step-function "
            "difference kernel needs g's value there");
    double v = 0.0;
    for (const auto& ps : product_segments(f, g))
      for (int k = 0; k < 7; ++k)
        if (ps.q[k] != 0.0)
          v += ps.q[k] *
               (std::pow(ps.hi, k + 2 * H) - std::pow(ps.lo, k + 2 * H)) /
               (k + 2 * H);
    return -H * v;
  }
  if (!m.satisfies_h2prime())
    throw UnsupportedHypothesisError(std::string(family_name(m.family())) +
                                     ": no fBm difference kernel");
  const auto fsegs = f.smooth_segments();
  const auto D = [&](double s) {
    return quad_against(fsegs, s, [&](double t) {
      return dcov_dt_diff(m, s, t, Branch::Right);
    });
  };
  return -against_measure(D, f, ls_measure(g));
}

}  // namespace fgp
