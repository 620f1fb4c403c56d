#include <cmath>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "fgp/covariance.hpp"
#include "fgp/errors.hpp"
#include "fgp/rkhs.hpp"
#include "test_support.hpp"

using namespace fgp;

namespace {

CovarianceModel model(Family f, CovarianceModel::Params p) { return {f, std::move(p)}; }

double ts_integrate(const std::function<double(double)>& f, double a, double b) {
  static boost::math::quadrature::tanh_sinh<double> ts(10);
  if (!(b > a)) return 0.0;
  return ts.integrate(f, a, b, 1e-9);
}

double density(const SignedMeasure& mu, double x) {
  for (const auto& p : mu.density)
    if (x >= p.lo && x <= p.hi) return p(x);
  return 0.0;
}

std::vector<double> cuts_of(const SignedMeasure& mu) {
  std::vector<double> c{mu.lo, mu.hi};
  for (const auto& p : mu.density) {
    c.push_back(p.lo);
    c.push_back(p.hi);
  }
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  return c;
}

double split_integrate(const std::function<double(double)>& f, std::vector<double> cuts,
                       double extra = -1.0) {
  if (extra > cuts.front() && extra < cuts.back()) cuts.push_back(extra);
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) s += ts_integrate(f, cuts[i], cuts[i + 1]);
  return s;
}

// Double integral of the covariance against the zero-extension measures of
// f and g: an expression of <f, g> that never differentiates R.
double double_measure_oracle(const CovarianceModel& m, const BVFunction& f,
                             const BVFunction& g) {
  const auto nf = ls_measure(f), ng = ls_measure(g);
  const auto cf = cuts_of(nf), cg = cuts_of(ng);
  double total = 0.0;
  for (const auto& a : nf.atoms)
    for (const auto& b : ng.atoms) total += a.mass * b.mass * cov(m, a.x, b.x);
  for (const auto& a : nf.atoms)
    total += a.mass * split_integrate([&](double t) { return cov(m, a.x, t) * density(ng, t); }, cg, a.x);
  for (const auto& b : ng.atoms)
    total += b.mass * split_integrate([&](double s) { return cov(m, s, b.x) * density(nf, s); }, cf, b.x);
  total += split_integrate(
      [&](double s) {
        const double ds = density(nf, s);
        if (ds == 0.0) return 0.0;
        return ds * split_integrate([&](double t) { return cov(m, s, t) * density(ng, t); }, cg, s);
      },
      cf);
  return total;
}

// Double integral of f(t) g(s) against the mixed partial of R.
double mixed_partial_oracle(const CovarianceModel& m, const BVFunction& f,
                            const BVFunction& g) {
  return ts_integrate(
      [&](double t) {
        if (t <= 0) return 0.0;
        auto inner = [&](double s) {
          if (s <= 0 || s == t) return 0.0;
          const double v = g(s) * mixed_partial(m, s, t);
          return std::isfinite(v) ? v : 0.0;  // rounding onto the singular point
        };
        return f(t) * (ts_integrate(inner, g.a(), std::min(t, g.b())) +
                       ts_integrate(inner, std::max(t, g.a()), g.b()));
      },
      f.a(), f.b());
}

}  // namespace

TEST(InnerProduct, BrownianIndicator) {
  auto one = BVFunction::indicator(1, 0, 1);
  EXPECT_NEAR(inner_product(CovarianceModel::fbm(0.5), one, one), 1.0, 1e-10);
}

TEST(InnerProduct, MaxKernelVariance) {
  auto m = model(Family::MaxKernel, {{"H", 0.25}});
  auto one = BVFunction::indicator(4, 0, 4);
  EXPECT_NEAR(inner_product(m, one, one), 1.0, 1e-10);
  EXPECT_NEAR(inner_product(m, one, one), cov(m, 4, 4), 1e-10);
}

TEST(InnerProduct, MaxKernelDifferenceIdentity) {
  auto m = model(Family::MaxKernel, {{"H", 0.25}});
  auto t = BVFunction::polynomial(0, 1, {0, 1, 0, 0});
  EXPECT_NEAR(inner_product_diff(m, t, t), -0.1, 1e-12);
  const double sub = inner_product(m, t, t) - inner_product(CovarianceModel::fbm(0.25), t, t);
  EXPECT_NEAR(sub, -0.1, 1e-8);
}

TEST(InnerProduct, FbmDifferenceIsZero) {
  std::mt19937_64 rng(21);
  auto m = CovarianceModel::fbm(0.35);
  for (int k = 0; k < 5; ++k) {
    auto f = test::random_bv(0, 1, 2, false, 1, rng);
    auto g = test::random_bv(0.5, 2, 2, false, 1, rng);
    EXPECT_EQ(inner_product_diff(m, f, g), 0.0);
  }
}

TEST(InnerProduct, DisjointSupportsMaxKernel) {
  auto m = model(Family::MaxKernel, {{"H", 0.3}});
  auto f = BVFunction::constant(0, 1, 1.0);
  auto g = BVFunction::constant(2, 3, 1.0);
  EXPECT_EQ(inner_product_diff(m, f, g), 0.0);
  const double fbm_part = fbm_cov(0.3, 1, 3) - fbm_cov(0.3, 1, 2);
  EXPECT_NEAR(inner_product(m, f, g), fbm_part, 1e-10);
}

TEST(InnerProduct, MaxKernelRejectsSharedJump) {
  auto m = model(Family::MaxKernel, {{"H", 0.3}});
  auto f = BVFunction::indicator(2, 0.5, 2);
  auto g = BVFunction::indicator(2, 0.5, 1.5);
  EXPECT_THROW(inner_product_diff(m, f, g), CommonJumpError);
  auto smooth = BVFunction::polynomial(0, 2, {1, 1, 0, 0});
  EXPECT_NO_THROW(inner_product_diff(m, smooth, g));
}

TEST(InnerProduct, DiffUnsupportedWithoutFbmLink) {
  auto m = model(Family::Trifractional, {{"Hprime", 0.5}, {"K", 0.5}});
  auto f = BVFunction::constant(0, 1, 1.0);
  EXPECT_THROW(inner_product_diff(m, f, f), UnsupportedHypothesisError);
}

TEST(InnerProduct, ItoIsometryAllFamilies) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (Family fam : all_families()) {
    auto m = test::random_model(fam, rng);
    for (int k = 0; k < 5; ++k) {
      const double s = u(rng), t = u(rng);
      auto f = BVFunction::indicator(s, 0, s);
      auto g = BVFunction::indicator(t, 0, t);
      EXPECT_NEAR(inner_product(m, f, g), cov(m, s, t), 1e-6) << family_name(fam);
    }
  }
}

TEST(InnerProduct, AgreesWithDoubleMeasureForm) {
  std::mt19937_64 rng(23);
  for (Family fam : all_families()) {
    auto m = test::random_model(fam, rng);
    for (int k = 0; k < 2; ++k) {
      auto f = test::random_bv(0.0, 1.5, 2, false, 1, rng);
      auto g = test::random_bv(0.3, 2.0, 2, false, 1, rng);
      const double ip = inner_product(m, f, g);
      EXPECT_NEAR(ip, double_measure_oracle(m, f, g), 1e-7 * std::max(1.0, std::fabs(ip)))
          << family_name(fam) << " " << m.effective_hurst();
    }
  }
}

TEST(InnerProduct, SymmetryAndBilinearity) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> c(-2, 2);
  for (Family fam : all_families()) {
    auto m = test::random_model(fam, rng);
    auto f = test::random_bv(0.0, 1.0, 2, false, 1, rng);
    auto g = test::random_bv(0.2, 1.6, 2, false, 2, rng);
    const double fg = inner_product(m, f, g), gf = inner_product(m, g, f);
    EXPECT_NEAR(fg, gf, 1e-9 * std::max(1.0, std::fabs(fg))) << family_name(fam);
    const double a = c(rng);
    const double scaled = inner_product(m, f.scaled(a), g);
    EXPECT_NEAR(scaled, a * fg, 1e-9 * std::max(1.0, std::fabs(scaled))) << family_name(fam);
    // additivity: 1_[0,1] = 1_[0,0.4) + 1_[0.4,1]
    const double whole = inner_product(m, BVFunction::constant(0, 1, 1.0), g);
    const double parts = inner_product(m, BVFunction::constant(0, 0.4, 1.0), g) +
                         inner_product(m, BVFunction::constant(0.4, 1, 1.0), g);
    EXPECT_NEAR(whole, parts, 1e-9 * std::max(1.0, std::fabs(whole))) << family_name(fam);
  }
}

TEST(InnerProduct, DisjointIndicatorsMatchMixedPartial) {
  std::mt19937_64 rng(25);
  for (Family fam : all_families()) {
    auto m = test::random_model(fam, rng);
    if (!m.satisfies_h2prime() && m.has_fbm_link()) continue;
    auto f = BVFunction::constant(0.2, 0.9, 1.0);
    auto g = BVFunction::constant(1.3, 2.0, 1.0);
    const double ip = inner_product(m, f, g);
    const double rect = cov(m, 0.9, 2.0) - cov(m, 0.9, 1.3) - cov(m, 0.2, 2.0) + cov(m, 0.2, 1.3);
    EXPECT_NEAR(ip, rect, 1e-9) << family_name(fam);
    EXPECT_NEAR(ip, mixed_partial_oracle(m, f, g), 1e-6) << family_name(fam);
  }
}

TEST(InnerProduct, UnlinkedFamiliesMatchMixedPartialForm) {
  std::mt19937_64 rng(26);
  const std::vector<CovarianceModel> models = {
      model(Family::WeightedFbm, {{"a", 0.3}, {"b", 0.4}}),
      model(Family::Trifractional, {{"Hprime", 0.6}, {"K", 0.7}}),
      model(Family::BardinaX, {{"H", 0.3}}),
      model(Family::BardinaX, {{"H", 0.7}}),
  };
  for (const auto& m : models) {
    auto f = test::random_bv(0.0, 1.5, 2, true, 0, rng);
    auto g = test::random_bv(0.0, 1.5, 3, true, 0, rng);
    const double ip = inner_product(m, f, g);
    EXPECT_NEAR(ip, mixed_partial_oracle(m, f, g), 1e-6 * std::max(1.0, std::fabs(ip)))
        << family_name(m.family());
  }
}

TEST(InnerProduct, H2PrimeDifferenceMatchesSubtraction) {
  std::mt19937_64 rng(27);
  for (Family fam : all_families()) {
    auto m = test::random_model(fam, rng);
    if (!m.satisfies_h2prime() || fam == Family::Fbm) continue;
    auto f = test::random_bv(0.0, 1.0, 2, true, 0, rng);
    auto g = test::random_bv(0.0, 1.5, 2, true, 0, rng);
    const double direct = inner_product_diff(m, f, g);
    const double sub = inner_product(m, f, g) -
                       inner_product(CovarianceModel::fbm(m.effective_hurst()), f, g);
    EXPECT_NEAR(direct, sub, 1e-6 * std::max(1.0, std::fabs(sub))) << family_name(fam);
  }
}
