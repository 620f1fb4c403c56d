#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fgp/covariance.hpp"
#include "fgp/errors.hpp"
#include "fgp/hypothesis.hpp"
#include "test_support.hpp"

using namespace fgp;

namespace {

CovarianceModel model(Family f, CovarianceModel::Params p) { return {f, std::move(p)}; }

double fd_dt(const CovarianceModel& m, double s, double t, double h) {
  return (cov(m, s, t + h) - cov(m, s, t - h)) / (2 * h);
}

double fd_dsdt(const CovarianceModel& m, double s, double t, double h) {
  return (cov(m, s + h, t + h) - cov(m, s + h, t - h) - cov(m, s - h, t + h) +
          cov(m, s - h, t - h)) /
         (4 * h * h);
}

}  // namespace

TEST(Covariance, BrownianMin) {
  EXPECT_NEAR(cov(CovarianceModel::fbm(0.5), 1, 2), 1.0, 1e-15);
}

TEST(Covariance, MaxKernelValue) {
  auto m = model(Family::MaxKernel, {{"H", 0.25}});
  const double expected = 0.5 * (std::pow(2.0, 0.5) - 1.0);
  EXPECT_NEAR(cov(m, 1, 2), expected, 1e-15);
  EXPECT_NEAR(cov(m, 1, 2), 0.2071068, 1e-7);
}

TEST(Covariance, SubFbmDiagonal) {
  auto m = model(Family::SubFbm, {{"H", 0.75}});
  EXPECT_NEAR(cov(m, 1, 1), 2.0 - std::sqrt(2.0), 1e-15);
}

TEST(Covariance, NegativeTimeRejected) {
  EXPECT_THROW(cov(CovarianceModel::fbm(0.3), -1, 1), DomainError);
}

TEST(Covariance, ParameterValidation) {
  EXPECT_THROW(model(Family::Fbm, {{"H", 1.0}}), DomainError);
  EXPECT_THROW(model(Family::MaxKernel, {{"H", 0.5}}), DomainError);
  EXPECT_THROW(model(Family::SelfSimilarSHK, {{"H", 0.3}, {"K", 1.0}}), DomainError);
  EXPECT_THROW(model(Family::BiFbm, {{"Hprime", 0.9}, {"K", 1.5}}), DomainError);
  EXPECT_THROW(model(Family::GenSubFbm, {{"Hprime", 1.2}, {"K", 0.5}}), DomainError);
  EXPECT_THROW(model(Family::WeightedFbm, {{"a", -0.5}, {"b", 0.6}}), DomainError);
  EXPECT_THROW(model(Family::BardinaX, {{"H", 0.5}}), DomainError);
  EXPECT_THROW(model(Family::GenFbm, {{"H", 0.3}, {"a", 0}, {"b", 0}}), DomainError);
  EXPECT_THROW(model(Family::Fbm, {{"H", 0.3}, {"K", 0.5}}), DomainError);
  EXPECT_THROW(model(Family::Fbm, {}), DomainError);
}

TEST(Covariance, EffectiveHurst) {
  EXPECT_DOUBLE_EQ(model(Family::BiFbm, {{"Hprime", 0.6}, {"K", 0.5}}).effective_hurst(), 0.3);
  EXPECT_DOUBLE_EQ(model(Family::WeightedFbm, {{"a", 0.2}, {"b", 0.4}}).effective_hurst(), 0.8);
  std::mt19937_64 rng(11);
  for (Family f : all_families())
    for (int i = 0; i < 20; ++i) {
      const double h = test::random_model(f, rng).effective_hurst();
      EXPECT_GT(h, 0.0);
      EXPECT_LT(h, 1.0);
    }
}

TEST(Covariance, MaxKernelDifferenceStep) {
  auto m = model(Family::MaxKernel, {{"H", 0.25}});
  EXPECT_NEAR(dcov_dt_diff(m, 1.5, 1.0), -0.25, 1e-15);
  EXPECT_EQ(dcov_dt_diff(m, 0.5, 1.0), 0.0);
  EXPECT_THROW(dcov_dt_diff(m, 1.0, 1.0), DiagonalAmbiguityError);
  EXPECT_NEAR(dcov_dt_diff(m, 1.0, 1.0, Branch::Right), -0.25, 1e-15);
  EXPECT_EQ(dcov_dt_diff(m, 1.0, 1.0, Branch::Left), 0.0);
}

TEST(Covariance, FbmSelfDifferenceIsZero) {
  auto m = CovarianceModel::fbm(0.3);
  for (double s : {0.2, 1.0, 3.0})
    for (double t : {0.5, 2.0}) EXPECT_EQ(dcov_dt_diff(m, s, t), 0.0);
}

TEST(Covariance, MixedPartialExamples) {
  EXPECT_NEAR(mixed_partial(CovarianceModel::fbm(0.3), 1, 2), -0.12, 1e-14);
  EXPECT_THROW(mixed_partial(CovarianceModel::fbm(0.3), 1, 1), SingularityError);

  auto sub = model(Family::SubFbm, {{"H", 0.3}});
  const double expected = 0.12 * std::pow(2.0001, -1.4);
  EXPECT_NEAR(mixed_partial_diff(sub, 1, 1.0001), expected, 1e-12);
  EXPECT_NEAR(mixed_partial_diff(sub, 1, 1.0001), 0.0454732, 1e-5);
}

// a = 0 makes the weighted process an fBm with H = (b + 1) / 2, whose mixed
// partial at (1, 2) is H (2H - 1) = 0.375 for b = 1/2.
TEST(Covariance, WeightedFbmMixedPartial) {
  auto m = model(Family::WeightedFbm, {{"a", 0.0}, {"b", 0.5}});
  EXPECT_NEAR(mixed_partial(m, 1, 2), 0.375, 1e-12);
  EXPECT_NEAR(mixed_partial(m, 1, 2), fd_dsdt(m, 1, 2, 1e-4), 1e-6);
  for (double s : {0.3, 1.1, 2.5})
    for (double t : {0.7, 1.9})
      EXPECT_NEAR(cov(m, s, t), fbm_cov(0.75, s, t), 1e-12);
}

TEST(Covariance, StructureDiff) {
  auto m = model(Family::MaxKernel, {{"H", 0.25}});
  EXPECT_NEAR(structure_diff(m, 1, 2), -0.5 * (std::sqrt(2.0) - 1.0), 1e-14);
  EXPECT_EQ(structure_diff(m, 1.3, 1.3), 0.0);
  auto f = CovarianceModel::fbm(0.4);
  for (double s : {0.1, 0.7})
    for (double t : {0.3, 2.0}) EXPECT_NEAR(structure_diff(f, s, t), 0.0, 1e-14);
}

TEST(Covariance, SymmetryAndZeroBoundary) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (Family f : all_families()) {
    for (int rep = 0; rep < 5; ++rep) {
      auto m = test::random_model(f, rng);
      for (int k = 0; k < 20; ++k) {
        const double s = u(rng), t = u(rng);
        const double a = cov(m, s, t), b = cov(m, t, s);
        EXPECT_NEAR(a, b, 1e-14 * (1 + std::fabs(a))) << family_name(f);
        EXPECT_EQ(cov(m, 0.0, t), 0.0) << family_name(f);
      }
    }
  }
}

TEST(Covariance, PositiveSemidefinite) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (Family f : all_families()) {
    for (int rep = 0; rep < 5; ++rep) {
      auto m = test::random_model(f, rng);
      const int n = 64;
      std::vector<double> pts(n);
      for (double& x : pts) x = u(rng);
      Eigen::MatrixXd R(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R(i, j) = cov(m, pts[i], pts[j]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R, Eigen::EigenvaluesOnly);
      const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
      EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8 * norm) << family_name(f);
    }
  }
}

TEST(Covariance, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (Family f : all_families()) {
    for (int rep = 0; rep < 4; ++rep) {
      auto m = test::random_model(f, rng);
      for (int k = 0; k < 10; ++k) {
        double s = u(rng), t = u(rng);
        if (std::fabs(s - t) < 0.1) t = s + 0.3;
        const double d = dcov_dt(m, s, t);
        EXPECT_NEAR(d, fd_dt(m, s, t, 1e-5), 1e-5 * std::max(1.0, std::fabs(d)))
            << family_name(f) << " s=" << s << " t=" << t;
        const double mp = mixed_partial(m, s, t);
        EXPECT_NEAR(mp, fd_dsdt(m, s, t, 1e-4), 1e-5 * std::max(1.0, std::fabs(mp)))
            << family_name(f) << " s=" << s << " t=" << t;
      }
    }
  }
}

TEST(Covariance, DifferenceDerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (Family f : all_families()) {
    for (int rep = 0; rep < 3; ++rep) {
      auto m = test::random_model(f, rng);
      if (!m.has_fbm_link()) continue;
      const double H = m.effective_hurst();
      for (int k = 0; k < 10; ++k) {
        double s = u(rng), t = u(rng);
        if (std::fabs(s - t) < 0.1) t = s + 0.3;
        const double h = 1e-5;
        const double fd = (cov(m, s, t + h) - fbm_cov(H, s, t + h) -
                           cov(m, s, t - h) + fbm_cov(H, s, t - h)) /
                          (2 * h);
        EXPECT_NEAR(dcov_dt_diff(m, s, t), fd, 1e-6) << family_name(f);
        if (!m.satisfies_h2prime()) continue;
        const double mpd = mixed_partial_diff(m, s, t);
        EXPECT_NEAR(mpd, mixed_partial(m, s, t) - mixed_partial(CovarianceModel::fbm(H), s, t),
                    1e-10 * std::max(1.0, std::fabs(mpd)))
            << family_name(f);
        auto parts = mixed_partial_diff_components(m, s, t);
        EXPECT_NEAR(parts.sum_part + parts.bifractional_part, mpd, 1e-12 * std::max(1.0, std::fabs(mpd)));
      }
    }
  }
}

TEST(Hypothesis, H3SubFbm) {
  auto rep = check_h3(model(Family::SubFbm, {{"H", 0.3}}), Rectangle::square(1.0), 200);
  EXPECT_TRUE(rep.violations.empty());
  const double bound = 0.3 * 0.4 * std::pow(2.0, 0.6 - 2.0);
  EXPECT_LE(rep.constant, bound + 1e-12);
  EXPECT_NEAR(bound, 0.04547, 1e-5);
  EXPECT_GT(rep.constant, 0.9 * bound);
}

TEST(Hypothesis, H3FbmIsZero) {
  auto rep = check_h3(CovarianceModel::fbm(0.3), Rectangle::square(1.0), 50);
  EXPECT_EQ(rep.constant, 0.0);
  EXPECT_TRUE(rep.violations.empty());
}

TEST(Hypothesis, H3MixedFbmPlusZ) {
  auto rep = check_h3(model(Family::MixedFbmPlusZ, {{"H", 0.3}}), Rectangle::square(1.0), 200);
  EXPECT_NEAR(rep.constant, 0.09, 1e-12);
  EXPECT_TRUE(rep.violations.empty());
}

TEST(Hypothesis, H3RejectsFamiliesWithoutAcDifference) {
  EXPECT_THROW(check_h3(model(Family::MaxKernel, {{"H", 0.3}}), Rectangle::square(1), 20),
               UnsupportedHypothesisError);
  EXPECT_THROW(check_h3prime(model(Family::TalarczykSecond, {{"H", 0.3}}), Rectangle::square(1), 20),
               UnsupportedHypothesisError);
}

TEST(Hypothesis, H3PrimeDegeneracies) {
  auto gen = check_h3prime(model(Family::GenFbm, {{"H", 0.3}, {"a", 1}, {"b", 1}}),
                           Rectangle::square(1.0), 100);
  EXPECT_EQ(gen.C2, 0.0);
  EXPECT_GT(gen.C1, 0.0);
  EXPECT_TRUE(std::isfinite(gen.C1));
  EXPECT_TRUE(gen.violations.empty());
  EXPECT_TRUE(gen.bifractional_term_degenerate);

  auto bi = check_h3prime(model(Family::BiFbm, {{"Hprime", 0.6}, {"K", 0.5}}),
                          Rectangle::square(1.0), 100);
  EXPECT_EQ(bi.C1, 0.0);
  EXPECT_GT(bi.C2, 0.0);
  EXPECT_TRUE(std::isfinite(bi.C2));
  EXPECT_TRUE(bi.violations.empty());
  EXPECT_TRUE(bi.sum_term_degenerate);

  auto fbm = check_h3prime(CovarianceModel::fbm(0.4), Rectangle::square(1.0), 50);
  EXPECT_EQ(fbm.C1, 0.0);
  EXPECT_EQ(fbm.C2, 0.0);
}

TEST(Hypothesis, H3FollowsFromH3Prime) {
  const std::vector<CovarianceModel> models = {
      model(Family::SubFbm, {{"H", 0.3}}),
      model(Family::BiFbm, {{"Hprime", 0.6}, {"K", 0.5}}),
      model(Family::GenSubFbm, {{"Hprime", 0.5}, {"K", 0.8}}),
      model(Family::GenFbm, {{"H", 0.3}, {"a", 1}, {"b", 0.5}}),
      model(Family::NegSubFbmDeriv, {{"H", 0.35}}),
  };
  for (const auto& m : models) {
    auto p = check_h3prime(m, Rectangle::square(1.0), 100);
    auto h = check_h3(m, Rectangle::square(1.0), 100);
    ASSERT_TRUE(p.violations.empty()) << family_name(m.family());
    const double K = m.K() > 0 ? m.K() : 1.0;
    const double chained = std::pow(2.0, 2 * m.H() - 2) * p.C1 + std::pow(2.0, K - 2) * p.C2;
    EXPECT_LE(h.constant, chained * (1 + 1e-9)) << family_name(m.family());
  }
}

TEST(Hypothesis, H5ForUnlinkedFamilies) {
  auto rep = check_h5(model(Family::Trifractional, {{"Hprime", 0.5}, {"K", 0.6}}),
                      Rectangle::square(1.0), 100);
  EXPECT_TRUE(rep.violations.empty());
  EXPECT_TRUE(std::isfinite(rep.constant));
}

TEST(Hypothesis, CanonicalMetricBound) {
  std::mt19937_64 rng(5);
  for (Family f : all_families()) {
    auto m = test::random_model(f, rng);
    auto rep = canonical_metric_bound(m, 1.0, 60);
    EXPECT_TRUE(std::isfinite(rep.constant)) << family_name(f);
    EXPECT_GT(rep.constant, 0.0) << family_name(f);
  }
  auto rep = canonical_metric_bound(CovarianceModel::fbm(0.3), 1.0, 60);
  EXPECT_NEAR(rep.constant, 1.0, 1e-9);
  EXPECT_LT(std::fabs(rep.growth), kGrowthTolerance);
}
