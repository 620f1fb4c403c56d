#include "fgp/mc.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fgp/chaos.hpp"
#include "fgp/errors.hpp"
#include "fgp/estimators.hpp"
#include "fgp/model_io.hpp"
#include "fgp/parallel.hpp"
#include "fgp/simulate.hpp"

namespace fgp {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_to_normal(std::vector<double> samples) {
  if (samples.empty()) throw DomainError("ks_to_normal needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double phi = normal_cdf(samples[i]);
    d = std::max({d, (i + 1) / m - phi, phi - i / m});
  }
  return d;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("experiment config must be a JSON object");
  ExperimentConfig c;
  try {
    if (!j.contains("model")) throw DomainError("experiment config needs \"model\"");
    c.model = model_from_json(j.at("model"));
    if (j.contains("theta")) c.theta = j.at("theta").get<double>();
    if (!j.contains("T_list")) throw DomainError("experiment config needs \"T_list\"");
    c.T_list = j.at("T_list").get<std::vector<double>>();
    if (j.contains("dt")) c.dt = j.at("dt").get<double>();
    if (j.contains("n_paths")) c.n_paths = j.at("n_paths").get<int>();
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("estimators"))
      c.estimators = j.at("estimators").get<std::vector<std::string>>();
    if (j.contains("dump_samples")) c.dump_samples = j.at("dump_samples").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed experiment config: ") + e.what());
  }
  if (!(c.theta > 0)) throw DomainError("theta must be positive");
  if (!(c.dt > 0)) throw DomainError("dt must be positive");
  if (c.n_paths < 2) throw DomainError("n_paths must be at least 2");
  if (c.T_list.empty()) throw DomainError("T_list must not be empty");
  for (std::size_t i = 0; i < c.T_list.size(); ++i) {
    if (!(c.T_list[i] > 0)) throw DomainError("T_list entries must be positive");
    if (i > 0 && !(c.T_list[i] > c.T_list[i - 1]))
      throw DomainError("T_list must be strictly increasing");
  }
  for (const auto& e : c.estimators)
    if (e != "wt" && e != "moment" && e != "lse")
      throw DomainError("unknown estimator '" + e + "' (expected wt, moment, lse)");
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  return {{"model", model_to_json(model)}, {"theta", theta},
          {"T_list", T_list},              {"dt", dt},
          {"n_paths", n_paths},            {"master_seed", master_seed},
          {"estimators", estimators},      {"dump_samples", dump_samples}};
}

bool MCReport::failed() const {
  return std::any_of(horizons.begin(), horizons.end(),
                     [](const HorizonResult& h) { return h.failure.has_value(); });
}

nlohmann::json MCReport::to_json() const {
  nlohmann::json hs = nlohmann::json::array();
  for (const auto& h : horizons) {
    nlohmann::json e = {{"T", h.T}, {"n", h.n}, {"seed", h.seed}};
    if (h.failure) {
      e["failure"] = *h.failure;
    } else {
      e["kappa2"] = h.kappa2;
      e["sigma_B2"] = h.sigma_B2 ? nlohmann::json(*h.sigma_B2) : nlohmann::json(nullptr);
      e["ks"] = h.ks;
    }
    hs.push_back(e);
  }
  return {{"config", config.to_json()},
          {"horizons", hs},
          {"slopes", slopes},
          {"flags", flags},
          {"status", failed() ? "partial" : "ok"}};
}

std::string MCReport::distances_csv() const {
  std::ostringstream os;
  os << "T,statistic,ks,n_paths,seed\n";
  os << std::setprecision(17);
  for (const auto& h : horizons) {
    if (h.failure) continue;
    for (const auto& [name, ks] : h.ks)
      os << h.T << ',' << name << ',' << ks << ',' << config.n_paths << ',' << h.seed
         << '\n';
  }
  return os.str();
}

MCReport run_experiment(const ExperimentConfig& config) {
  MCReport rep;
  rep.config = config;
  const double H = config.model.effective_hurst();
  const bool normalizable = H < 0.5;
  auto wants = [&](const char* e) {
    return std::find(config.estimators.begin(), config.estimators.end(), e) !=
           config.estimators.end();
  };
  if (!normalizable && (wants("moment") || wants("lse")))
    rep.flags.push_back("no-normalization: effective H >= 1/2");

  for (std::size_t i = 0; i < config.T_list.size(); ++i) {
    HorizonResult h;
    h.T = config.T_list[i];
    h.n = std::max(2, static_cast<int>(std::lround(h.T / config.dt)));
    h.seed = derive_seed(config.master_seed, i);
    try {
      const auto sys = fou_system(config.model, Grid(h.T, h.n), config.theta);
      const auto draw = fou_paths(sys, config.n_paths, h.seed);
      const auto cr = cumulants(sys);
      h.kappa2 = cr.kappa2;
      if (normalizable) h.sigma_B2 = cr.sigma_B2_target;
      std::map<std::string, std::vector<double>> stats;
      if (wants("wt")) {
        const auto w = wt_from_zeta(sys, draw.zeta);
        auto& a = stats["wt_kappa2"];
        for (double x : w) a.push_back(x / std::sqrt(cr.kappa2));
        if (normalizable) {
          auto& b = stats["wt_sigmaB"];
          for (double x : w) b.push_back(x / std::sqrt(cr.sigma_B2_target));
        }
      }
      if (normalizable && (wants("moment") || wants("lse"))) {
        std::vector<double> mom(config.n_paths), lse(config.n_paths), lse_id(config.n_paths);
        parallel_for(static_cast<std::size_t>(config.n_paths), [&](std::size_t p) {
          const Eigen::VectorXd z = draw.zeta.col(p);
          if (wants("moment"))
            mom[p] = normalized_moment_stat(moment_estimator(z, sys.grid, H),
                                            config.theta, H, h.T);
          if (wants("lse")) {
            lse[p] = normalized_lse_stat(lse_informal(z, draw.dG.col(p), sys),
                                         config.theta, H, h.T);
            lse_id[p] = normalized_lse_stat(lse_identity(z, sys), config.theta, H, h.T);
          }
        });
        if (wants("moment")) stats["moment"] = std::move(mom);
        if (wants("lse")) {
          stats["lse"] = std::move(lse);
          stats["lse_identity"] = std::move(lse_id);
        }
      }
      for (auto& [name, v] : stats) {
        h.ks[name] = ks_to_normal(v);
        if (config.dump_samples) h.samples[name] = std::move(v);
      }
    } catch (const NumericError& e) {
      h.failure = e.what();
    }
    rep.horizons.push_back(std::move(h));
  }

  if (config.n_paths < kMinPathsForRates) {
    rep.flags.push_back("insufficient-paths");
  } else if (config.T_list.size() < 3) {
    rep.flags.push_back("too-few-horizons");
  } else if (!rep.failed()) {
    std::map<std::string, std::vector<double>> ys;
    for (const auto& h : rep.horizons)
      for (const auto& [name, ks] : h.ks) ys[name].push_back(ks);
    for (const auto& [name, y] : ys)
      if (std::all_of(y.begin(), y.end(), [](double v) { return v > 0; }))
        rep.slopes[name] = rate_fit(config.T_list, y).slope;
  }
  return rep;
}

}  // namespace fgp
