#include "fgp/bv.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "fgp/errors.hpp"

namespace fgp {
namespace {

// 7 nodes: exact through degree 13, which covers any product of two
// cubic pieces and a quadratic density.
template <class F>
double gauss(F&& f, double lo, double hi) {
  return boost::math::quadrature::gauss<double, 7>::integrate(f, lo, hi);
}

void sorted_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Integrates fn over [lo, hi], split at every cut so that fn is smooth on
// each sub-interval.
template <class F>
double integrate_split(F&& fn, double lo, double hi, std::vector<double> cuts) {
  cuts.push_back(lo);
  cuts.push_back(hi);
  sorted_unique(cuts);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double u = cuts[i], v = cuts[i + 1];
    if (u < lo || v > hi || !(v > u)) continue;
    total += gauss(fn, u, v);
  }
  return total;
}

Piece derivative_piece(const Piece& p, double lo, double hi) {
  return {lo, hi, {p.coeffs[1], 2 * p.coeffs[2], 3 * p.coeffs[3], 0.0}};
}

double density_at(const std::vector<Piece>& density, double x) {
  for (const auto& p : density)
    if (x >= p.lo && x < p.hi) return p(x);
  if (!density.empty() && x == density.back().hi) return density.back()(x);
  return 0.0;
}

}  // namespace

BVFunction::BVFunction(double a, double b, std::vector<Piece> pieces,
                       std::vector<Atom> jumps)
    : a_(a), b_(b), pieces_(std::move(pieces)), jumps_(std::move(jumps)) {
  if (!(b_ > a_)) throw DomainError("BV function needs an interval with a < b");
  if (pieces_.empty()) throw DomainError("BV function needs at least one piece");
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& l, const Piece& r) { return l.lo < r.lo; });
  if (pieces_.front().lo != a_ || pieces_.back().hi != b_)
    throw DomainError("pieces must tile the interval [a, b]");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].hi > pieces_[i].lo))
      throw DomainError("every piece must have positive length");
    if (i > 0 && pieces_[i].lo != pieces_[i - 1].hi)
      throw DomainError("pieces must tile [a, b] without gaps or overlap");
    for (double c : pieces_[i].coeffs)
      if (!std::isfinite(c)) throw DomainError("non-finite piece coefficient");
  }
  std::sort(jumps_.begin(), jumps_.end(),
            [](const Atom& l, const Atom& r) { return l.x < r.x; });
  std::vector<Atom> merged;
  for (const auto& j : jumps_) {
    if (!(j.x > a_ && j.x < b_))
      throw DomainError("jump locations must lie strictly inside (a, b)");
    if (!std::isfinite(j.mass)) throw DomainError("non-finite jump size");
    if (!merged.empty() && merged.back().x == j.x)
      merged.back().mass += j.mass;
    else
      merged.push_back(j);
  }
  jumps_ = std::move(merged);
}

BVFunction BVFunction::constant(double a, double b, double c) {
  return BVFunction(a, b, {Piece{a, b, {c, 0, 0, 0}}});
}

BVFunction BVFunction::polynomial(double a, double b,
                                  std::array<double, 4> coeffs) {
  return BVFunction(a, b, {Piece{a, b, coeffs}});
}

BVFunction BVFunction::indicator(double T, double lo, double hi) {
  if (!(T > 0) || lo < 0 || hi > T || !(hi > lo))
    throw DomainError("indicator needs 0 <= lo < hi <= T");
  const double start = lo > 0 ? 0.0 : 1.0;
  std::vector<Atom> jumps;
  if (lo > 0) jumps.push_back({lo, 1.0});
  if (hi < T) jumps.push_back({hi, -1.0});
  return BVFunction(0.0, T, {Piece{0.0, T, {start, 0, 0, 0}}}, jumps);
}

const Piece& BVFunction::piece_at(double x) const {
  if (x < a_ || x > b_) throw DomainError("evaluation outside [a, b]");
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const Piece& p) { return v < p.lo; });
  return *std::prev(it);
}

const Piece& BVFunction::piece_left_of(double x) const {
  if (x <= a_) return pieces_.front();
  if (x > b_) throw DomainError("evaluation outside [a, b]");
  auto it = std::lower_bound(pieces_.begin(), pieces_.end(), x,
                             [](const Piece& p, double v) { return p.lo < v; });
  return *std::prev(it);
}

double BVFunction::operator()(double x) const {
  double v = piece_at(x)(x);
  for (const auto& j : jumps_) {
    if (j.x > x) break;
    v += j.mass;
  }
  return v;
}

double BVFunction::left_limit(double x) const {
  if (x <= a_) return (*this)(a_);
  double v = piece_left_of(x)(x);
  for (const auto& j : jumps_) {
    if (j.x >= x) break;
    v += j.mass;
  }
  return v;
}

double BVFunction::derivative(double x) const { return piece_at(x).derivative(x); }

std::vector<Atom> BVFunction::discontinuities() const {
  std::vector<double> where;
  for (std::size_t i = 1; i < pieces_.size(); ++i) where.push_back(pieces_[i].lo);
  for (const auto& j : jumps_) where.push_back(j.x);
  sorted_unique(where);
  std::vector<Atom> out;
  for (double x : where) {
    const double right = (*this)(x), left = left_limit(x);
    const double jump = right - left;
    if (std::fabs(jump) > 1e-12 * (1.0 + std::fabs(left) + std::fabs(right)))
      out.push_back({x, jump});
  }
  return out;
}

bool BVFunction::jumps_at(double x) const {
  for (const auto& d : discontinuities())
    if (d.x == x) return true;
  return false;
}

std::vector<double> BVFunction::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < pieces_.size(); ++i) out.push_back(pieces_[i].lo);
  for (const auto& j : jumps_) out.push_back(j.x);
  sorted_unique(out);
  return out;
}

std::vector<Piece> BVFunction::smooth_segments() const {
  std::vector<Piece> out;
  std::size_t next_jump = 0;
  double offset = 0.0;
  for (const auto& p : pieces_) {
    double lo = p.lo;
    while (true) {
      while (next_jump < jumps_.size() && jumps_[next_jump].x <= lo) {
        offset += jumps_[next_jump].mass;
        ++next_jump;
      }
      const double hi = next_jump < jumps_.size() && jumps_[next_jump].x < p.hi
                            ? jumps_[next_jump].x
                            : p.hi;
      Piece seg = p;
      seg.lo = lo;
      seg.hi = hi;
      seg.coeffs[0] += offset;
      out.push_back(seg);
      if (hi == p.hi) break;
      lo = hi;
    }
  }
  return out;
}

double BVFunction::total_variation() const {
  double tv = 0.0;
  for (const auto& p : pieces_) {
    std::vector<double> z{p.lo, p.hi};
    // critical points of the cubic: 3 c3 x^2 + 2 c2 x + c1 = 0
    const double A = 3 * p.coeffs[3], B = 2 * p.coeffs[2], C = p.coeffs[1];
    if (A != 0.0) {
      const double disc = B * B - 4 * A * C;
      if (disc >= 0) {
        const double r = std::sqrt(disc);
        z.push_back((-B - r) / (2 * A));
        z.push_back((-B + r) / (2 * A));
      }
    } else if (B != 0.0) {
      z.push_back(-C / B);
    }
    std::vector<double> inside;
    for (double x : z)
      if (x >= p.lo && x <= p.hi) inside.push_back(x);
    sorted_unique(inside);
    for (std::size_t i = 0; i + 1 < inside.size(); ++i)
      tv += std::fabs(p(inside[i + 1]) - p(inside[i]));
  }
  for (const auto& d : discontinuities()) tv += std::fabs(d.mass);
  return tv;
}

BVFunction BVFunction::scaled(double c) const {
  auto pieces = pieces_;
  for (auto& p : pieces)
    for (auto& k : p.coeffs) k *= c;
  auto jumps = jumps_;
  for (auto& j : jumps) j.mass *= c;
  return BVFunction(a_, b_, std::move(pieces), std::move(jumps));
}

double SignedMeasure::total_mass() const {
  double m = 0.0;
  for (const auto& p : density)
    m += gauss([&](double x) { return p(x); }, p.lo, p.hi);
  for (const auto& a : atoms) m += a.mass;
  return m;
}

SignedMeasure ls_measure(const BVFunction& g) {
  return ls_measure(g, g.a(), g.b());
}

SignedMeasure ls_measure(const BVFunction& g, double lo, double hi) {
  if (lo < g.a() || hi > g.b() || !(hi > lo))
    throw DomainError("restriction interval must lie inside the function's");
  SignedMeasure mu{lo, hi, {}, {}};
  for (const auto& p : g.pieces()) {
    const double u = std::max(p.lo, lo), v = std::min(p.hi, hi);
    if (v > u) mu.density.push_back(derivative_piece(p, u, v));
  }
  mu.atoms.push_back({lo, g(lo)});
  for (const auto& d : g.discontinuities())
    if (d.x > lo && d.x < hi) mu.atoms.push_back(d);
  mu.atoms.push_back({hi, -g.left_limit(hi)});
  return mu;
}

SignedMeasure stieltjes_measure(const BVFunction& f) {
  SignedMeasure mu{f.a(), f.b(), {}, {}};
  for (const auto& p : f.pieces())
    mu.density.push_back(derivative_piece(p, p.lo, p.hi));
  mu.atoms = f.discontinuities();
  return mu;
}

double integrate(const BVFunction& f, const SignedMeasure& mu,
                 JumpPolicy policy) {
  if (mu.lo < f.a() || mu.hi > f.b())
    throw DomainError("integrand is not defined on the measure's interval");
  std::vector<double> cuts = f.breakpoints();
  for (const auto& p : mu.density) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  double total = integrate_split(
      [&](double x) { return f(x) * density_at(mu.density, x); }, mu.lo, mu.hi,
      cuts);
  for (const auto& atom : mu.atoms) {
    if (atom.mass == 0.0) continue;
    double fx;
    if (f.jumps_at(atom.x)) {
      switch (policy) {
        case JumpPolicy::RightLimit:
          fx = f(atom.x);
          break;
        case JumpPolicy::LeftLimit:
          fx = f.left_limit(atom.x);
          break;
        case JumpPolicy::Reject:
        default:
          throw CommonJumpError(
              "integrand and measure share a discontinuity; choose a policy");
      }
    } else {
      fx = f(atom.x);
    }
    total += fx * atom.mass;
  }
  return total;
}

double integrate_product(const BVFunction& f, const BVFunction& g, double lo,
                         double hi) {
  if (lo < std::max(f.a(), g.a()) || hi > std::min(f.b(), g.b()))
    throw DomainError("product integral outside the common domain");
  auto cuts = f.breakpoints();
  const auto more = g.breakpoints();
  cuts.insert(cuts.end(), more.begin(), more.end());
  return integrate_split([&](double x) { return f(x) * g(x); }, lo, hi, cuts);
}

IbpResult int_by_parts_check(const BVFunction& f, const BVFunction& g) {
  if (!f.is_continuous())
    throw DomainError("f must be absolutely continuous (no jumps)");
  if (f.a() > g.a() || f.b() < g.b())
    throw DomainError("f must be defined on g's interval");
  auto cuts = f.breakpoints();
  const auto more = g.breakpoints();
  cuts.insert(cuts.end(), more.begin(), more.end());
  IbpResult r;
  r.lhs = -integrate_split([&](double x) { return g(x) * f.derivative(x); },
                           g.a(), g.b(), cuts);
  r.rhs = integrate(f, ls_measure(g));
  r.residual = std::fabs(r.lhs - r.rhs);
  return r;
}

IbpResult int_by_parts_check_bv(const BVFunction& f, const BVFunction& g) {
  if (f.a() != g.a() || f.b() != g.b())
    throw DomainError("f and g must share the interval");
  for (const auto& d : f.discontinuities())
    if (g.jumps_at(d.x))
      throw CommonJumpError("f and g are both discontinuous at a point");
  IbpResult r;
  r.lhs = -integrate(g, stieltjes_measure(f));
  r.rhs = integrate(f, ls_measure(g));
  r.residual = std::fabs(r.lhs - r.rhs);
  return r;
}

}  // namespace fgp
