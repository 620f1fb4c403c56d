#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fgp {

enum class Family {
  Fbm,
  MaxKernel,
  SubFbm,
  BiFbm,
  GenSubFbm,
  SelfSimilarSHK,
  GenFbm,
  NegSubFbmDeriv,
  MixedFbmPlusZ,
  Trifractional,
  WeightedFbm,
  BardinaX,
  TalarczykSecond,
};

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);
const std::vector<Family>& all_families();

/// Which one-sided limit to take when a first partial derivative is
/// evaluated exactly on its jump locus s == t. `Strict` refuses.
enum class Branch { Strict, Left, Right };

/// A covariance family from the catalog together with validated parameters.
///
/// Parameter names: "H", "Hprime", "K", "a", "b". Which ones are required
/// depends on the family; construction rejects missing, extra or
/// out-of-range values.
class CovarianceModel {
 public:
  using Params = std::map<std::string, double, std::less<>>;

  CovarianceModel(Family family, Params params);

  static CovarianceModel fbm(double H) { return {Family::Fbm, {{"H", H}}}; }

  Family family() const { return family_; }
  const Params& params() const { return params_; }
  double param(std::string_view name) const;

  /// Exponent shared with the comparison fBm: H, H'K, or (a+b+1)/2.
  double effective_hurst() const { return h_; }

  /// The covariance differs from the fBm covariance by a term whose
  /// t-partial is a normalized BV function of s (every family outside the
  /// variant family of processes not tied to fBm).
  bool has_fbm_link() const;
  /// Same, with an absolutely continuous difference.
  bool satisfies_h2prime() const;
  /// First t-partial jumps in s across the diagonal.
  bool has_jump_locus() const;

  // Cached parameters; zero where a family does not use them.
  double H() const { return h_; }
  double Hprime() const { return hp_; }
  double K() const { return k_; }
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  Family family_;
  Params params_;
  double h_ = 0, hp_ = 0, k_ = 0, a_ = 0, b_ = 0;
};

double fbm_cov(double H, double s, double t);

/// R(s, t). Throws DomainError for negative times.
double cov(const CovarianceModel& m, double s, double t);

/// dR(s, t)/dt with s held fixed. On s == t the fBm-type term
/// |t-s|^{2H-1} is singular for H < 1/2 (SingularityError), a jump for
/// H = 1/2, and zero for H > 1/2; jumps need a non-strict branch, where
/// Left/Right refer to the limit in s.
double dcov_dt(const CovarianceModel& m, double s, double t,
               Branch branch = Branch::Strict);

/// dR/dt - dR^B/dt against the fBm with the effective Hurst exponent.
/// Only for families with an fBm link.
double dcov_dt_diff(const CovarianceModel& m, double s, double t,
                    Branch branch = Branch::Strict);

/// d^2 R / ds dt off the diagonal. Throws SingularityError on s == t.
double mixed_partial(const CovarianceModel& m, double s, double t);

/// d/ds (dR/dt - dR^B/dt) off the diagonal, for families with an
/// absolutely continuous difference.
double mixed_partial_diff(const CovarianceModel& m, double s, double t);

/// Split of mixed_partial_diff into its (t+s)^{2H-2} part and its
/// bi-fractional (s^{2H'}+t^{2H'})^{K-2}(st)^{2H'-1} part.
struct DiffComponents {
  double sum_part = 0.0;
  double bifractional_part = 0.0;
};
DiffComponents mixed_partial_diff_components(const CovarianceModel& m,
                                             double s, double t);

/// b(s,t) = E[(G_s - G_t)^2] - |t - s|^{2H}.
double structure_diff(const CovarianceModel& m, double s, double t);

}  // namespace fgp
