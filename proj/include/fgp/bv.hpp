#pragma once

#include <array>
#include <vector>

namespace fgp {

/// Cubic polynomial c0 + c1 x + c2 x^2 + c3 x^3 on [lo, hi), in absolute x.
struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  std::array<double, 4> coeffs{};

  double operator()(double x) const {
    return coeffs[0] + x * (coeffs[1] + x * (coeffs[2] + x * coeffs[3]));
  }
  double derivative(double x) const {
    return coeffs[1] + x * (2 * coeffs[2] + x * 3 * coeffs[3]);
  }
};

/// A point mass: location and signed size (a jump of a function, or an atom
/// of a measure).
struct Atom {
  double x = 0.0;
  double mass = 0.0;
};

/// Right-continuous function of bounded variation on [a, b]: piecewise cubic
/// plus step jumps.
///
/// Value at x is p_k(x) + sum of jumps at locations <= x, where p_k is the
/// piece with lo <= x < hi (the last piece is closed at b). Pieces may also
/// disagree at their joins; such joins count as jumps too. Jump atoms must
/// lie strictly inside (a, b).
class BVFunction {
 public:
  BVFunction(double a, double b, std::vector<Piece> pieces,
             std::vector<Atom> jumps = {});

  static BVFunction constant(double a, double b, double c);
  static BVFunction polynomial(double a, double b, std::array<double, 4> coeffs);
  /// 1_{[lo, hi)} on [0, T]; lo == 0 and hi == T give boundary values
  /// instead of jumps.
  static BVFunction indicator(double T, double lo, double hi);

  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  const std::vector<Atom>& jumps() const { return jumps_; }

  double operator()(double x) const;
  double left_limit(double x) const;
  /// Smooth part derivative at x (right-hand piece).
  double derivative(double x) const;

  /// Interior discontinuities (location, jump size), sorted. Locations are
  /// exact join or atom coordinates.
  std::vector<Atom> discontinuities() const;
  bool is_continuous() const { return discontinuities().empty(); }
  bool jumps_at(double x) const;

  /// Piece joins and jump locations strictly inside (a, b), sorted.
  std::vector<double> breakpoints() const;

  /// The function as cubic pieces between consecutive breakpoints, with
  /// accumulated jumps folded into the constant coefficient.
  std::vector<Piece> smooth_segments() const;

  double total_variation() const;

  BVFunction scaled(double c) const;

 private:
  const Piece& piece_at(double x) const;
  const Piece& piece_left_of(double x) const;

  double a_, b_;
  std::vector<Piece> pieces_;
  std::vector<Atom> jumps_;
};

/// Signed measure on [lo, hi]: piecewise-polynomial density plus atoms.
struct SignedMeasure {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<Piece> density;
  std::vector<Atom> atoms;

  double total_mass() const;
};

/// Measure of the zero extension of g restricted to [lo, hi] (defaults to
/// g's interval): density g', interior jumps, plus the boundary atoms
/// +g(lo+) at lo and -g(hi-) at hi.
SignedMeasure ls_measure(const BVFunction& g);
SignedMeasure ls_measure(const BVFunction& g, double lo, double hi);

/// Plain Lebesgue-Stieltjes measure of f on its interval: density f' and
/// its interior jumps, no boundary atoms.
SignedMeasure stieltjes_measure(const BVFunction& f);

/// How to evaluate an integrand at an atom that coincides with one of its
/// own jumps.
enum class JumpPolicy { Reject, RightLimit, LeftLimit };

/// int f dmu. Exact for the polynomial density part (Gauss-Legendre on every
/// smooth sub-piece).
double integrate(const BVFunction& f, const SignedMeasure& mu,
                 JumpPolicy policy = JumpPolicy::Reject);

/// int_lo^hi f(x) g(x) dx for piecewise polynomials (jumps ignored: null set).
double integrate_product(const BVFunction& f, const BVFunction& g, double lo,
                         double hi);

struct IbpResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// -int g f' dt  versus  int f dnu_g, for absolutely continuous f.
IbpResult int_by_parts_check(const BVFunction& f, const BVFunction& g);

/// -int g dmu_f  versus  int f dnu_g, for f, g without common jumps.
IbpResult int_by_parts_check_bv(const BVFunction& f, const BVFunction& g);

}  // namespace fgp
