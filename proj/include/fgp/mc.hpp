#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fgp/covariance.hpp"

namespace fgp {

/// Standard normal CDF.
double normal_cdf(double x);

/// sup_z |F_m(z) - Phi(z)| for the empirical CDF F_m of the samples,
/// evaluated on both sides of every jump.
double ks_to_normal(std::vector<double> samples);

/// Rate claims need at least this many paths per horizon.
inline constexpr int kMinPathsForRates = 200;

/// Statistic names in reports: "wt_sigmaB" (W_T / sigma_B), "wt_kappa2"
/// (W_T / sqrt(kappa2)), "moment" and "lse" (normalized estimators), and
/// "lse_identity" (the least-squares statistic via lse_identity, emitted
/// together with "lse").
struct ExperimentConfig {
  CovarianceModel model = CovarianceModel::fbm(0.25);
  double theta = 1.0;
  std::vector<double> T_list;
  /// Grid step; n = round(T / dt) per horizon.
  double dt = 0.05;
  int n_paths = 2000;
  std::uint64_t master_seed = 0;
  /// Any of "wt", "moment", "lse".
  std::vector<std::string> estimators{"wt", "moment", "lse"};
  bool dump_samples = false;

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct HorizonResult {
  double T = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
  double kappa2 = 0.0;
  std::optional<double> sigma_B2;
  std::map<std::string, double> ks;
  std::map<std::string, std::vector<double>> samples;  // only when dumped
  std::optional<std::string> failure;
};

struct MCReport {
  ExperimentConfig config;
  std::vector<HorizonResult> horizons;
  /// Log-log slope of the KS distance against T, per statistic.
  std::map<std::string, double> slopes;
  std::vector<std::string> flags;

  bool failed() const;
  nlohmann::json to_json() const;
  /// Header: T,statistic,ks,n_paths,seed.
  std::string distances_csv() const;
};

MCReport run_experiment(const ExperimentConfig& config);

}  // namespace fgp
