// fgp: command-line front end to the fractional Gaussian process lab.
//
// Every subcommand resolves its settings into one JSON object (defaults,
// then --config, then explicit flags), runs from that object only, and
// writes it to <out>/manifest.json. Feeding a manifest back as --config
// therefore replays the run.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fgp/chaos.hpp"
#include "fgp/covariance.hpp"
#include "fgp/errors.hpp"
#include "fgp/estimators.hpp"
#include "fgp/hypothesis.hpp"
#include "fgp/mc.hpp"
#include "fgp/model_io.hpp"
#include "fgp/parallel.hpp"
#include "fgp/rkhs.hpp"
#include "fgp/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum class Kind { Json, Number, Integer, String, Flag };

struct Key {
  std::string name;
  Kind kind;
  std::string help;
  json fallback;  // null: required
};

struct Subcommand {
  CLI::App* app = nullptr;
  std::vector<Key> keys;
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
};

std::string flag_name(const std::string& key) {
  std::string s = "--" + key;
  for (auto& c : s)
    if (c == '_') c = '-';
  return s;
}

json convert(const Key& k, const std::string& text) {
  try {
    switch (k.kind) {
      case Kind::Json:
        return fgp::parse_json(text, k.name.c_str());
      case Kind::Number:
        return std::stod(text);
      case Kind::Integer:
        return std::stoull(text);
      case Kind::String:
        return text;
      case Kind::Flag:
        return true;
    }
  } catch (const std::logic_error&) {
    throw fgp::DomainError("option " + flag_name(k.name) + ": cannot parse '" + text + "'");
  }
  return nullptr;
}

// Plain config object, or a manifest whose "config" member holds one.
json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw fgp::DomainError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j = fgp::parse_json(ss.str(), "config file");
  if (j.is_object() && j.contains("config") && j.contains("subcommand")) j = j["config"];
  if (!j.is_object()) throw fgp::DomainError("config file must hold a JSON object");
  return j;
}

json resolve(const Subcommand& sc, const json& file_config) {
  json out = json::object();
  for (const auto& k : sc.keys) {
    const auto* opt = sc.opts.at(k.name);
    if (opt->count() > 0) {
      out[k.name] = k.kind == Kind::Flag ? json(true) : convert(k, sc.raw.at(k.name));
    } else if (file_config.contains(k.name)) {
      out[k.name] = file_config[k.name];
    } else if (!k.fallback.is_null()) {
      out[k.name] = k.fallback;
    } else {
      throw fgp::DomainError("missing required setting " + flag_name(k.name));
    }
  }
  return out;
}

double num(const json& c, const char* key) {
  if (!c.at(key).is_number()) throw fgp::DomainError(std::string(key) + " must be a number");
  return c.at(key).get<double>();
}

int integer(const json& c, const char* key) {
  const double v = num(c, key);
  if (v != std::floor(v) || std::fabs(v) > 2e9)
    throw fgp::DomainError(std::string(key) + " must be an integer");
  return static_cast<int>(v);
}

std::uint64_t seed_of(const json& c, const char* key) {
  const auto& v = c.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
  throw fgp::DomainError(std::string(key) + " must be a nonnegative integer");
}

std::string fmt9(double v) {
  std::ostringstream os;
  os << std::setprecision(9) << v;
  return os.str();
}

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& p) : out_(p) {
    if (!out_) throw fgp::DomainError("cannot write " + p.string());
    out_ << std::setprecision(17);
  }
  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cells, first = false), ...);
    out_ << '\n';
  }
  std::ofstream& stream() { return out_; }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw fgp::DomainError("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

fgp::Branch branch_of(const std::string& s) {
  if (s == "strict") return fgp::Branch::Strict;
  if (s == "left") return fgp::Branch::Left;
  if (s == "right") return fgp::Branch::Right;
  throw fgp::DomainError("branch must be strict, left or right");
}

// ---- subcommand bodies: config in, files out, summary line(s) on stdout ----

json run_cov(const json& c, const fs::path&) {
  const auto m = fgp::model_from_json(c["model"]);
  const double s = num(c, "s"), t = num(c, "t");
  const std::string what = c["what"];
  const auto br = branch_of(c["branch"]);
  double v;
  if (what == "cov") v = fgp::cov(m, s, t);
  else if (what == "dcov_dt") v = fgp::dcov_dt(m, s, t, br);
  else if (what == "dcov_dt_diff") v = fgp::dcov_dt_diff(m, s, t, br);
  else if (what == "mixed_partial") v = fgp::mixed_partial(m, s, t);
  else if (what == "mixed_partial_diff") v = fgp::mixed_partial_diff(m, s, t);
  else if (what == "structure_diff") v = fgp::structure_diff(m, s, t);
  else throw fgp::DomainError("unknown --what '" + what + "'");
  std::cout << fmt9(v) << '\n';
  return {{"value", v}};
}

json run_hypcheck(const json& c, const fs::path& out) {
  const auto m = fgp::model_from_json(c["model"]);
  const std::string check = c["check"];
  const double T = num(c, "T");
  const int grid = integer(c, "grid");
  const auto dom = fgp::Rectangle::square(T);
  json r;
  if (check == "h3prime") {
    const auto rep = fgp::check_h3prime(m, dom, grid);
    r = {{"C1", rep.C1},
         {"C2", rep.C2},
         {"sum_term_degenerate", rep.sum_term_degenerate},
         {"bifractional_term_degenerate", rep.bifractional_term_degenerate},
         {"violations", rep.violations}};
    std::cout << "C1 " << fmt9(rep.C1) << "\nC2 " << fmt9(rep.C2) << '\n';
  } else {
    fgp::SweepReport rep;
    if (check == "h3") rep = fgp::check_h3(m, dom, grid);
    else if (check == "h5") rep = fgp::check_h5(m, dom, grid);
    else if (check == "metric") rep = fgp::canonical_metric_bound(m, T, grid);
    else throw fgp::DomainError("unknown --check '" + check + "'");
    r = {{"min_valid_C", rep.constant}, {"growth", rep.growth}, {"violations", rep.violations}};
    std::cout << "min_valid_C " << fmt9(rep.constant) << '\n';
  }
  for (const auto& v : r["violations"]) std::cout << "violation: " << v.get<std::string>() << '\n';
  write_json(out / "hypcheck.json", r);
  return r;
}

json run_rkhs(const json& c, const fs::path& out) {
  const auto m = fgp::model_from_json(c["model"]);
  const auto f = fgp::bv_from_json(c["f"]);
  const auto g = fgp::bv_from_json(c["g"]);
  const bool diff = c["diff"].get<bool>();
  const double v = diff ? fgp::inner_product_diff(m, f, g) : fgp::inner_product(m, f, g);
  std::cout << fmt9(v) << '\n';
  json r = {{"value", v}, {"kind", diff ? "inner_product_diff" : "inner_product"}};
  write_json(out / "rkhs.json", r);
  return r;
}

json run_simulate(const json& c, const fs::path& out) {
  const auto m = fgp::model_from_json(c["model"]);
  const fgp::Grid grid(num(c, "T"), integer(c, "n"));
  const int paths = integer(c, "paths");
  const auto seed = seed_of(c, "seed");
  const double theta = num(c, "theta");

  Eigen::MatrixXd G, zeta;
  if (theta > 0) {
    const auto sys = fgp::fou_system(m, grid, theta);
    auto draw = fgp::fou_paths(sys, paths, seed);
    G = fgp::cumulative_paths(draw.dG);
    zeta = std::move(draw.zeta);
  } else {
    G = fgp::sample_paths(fgp::increment_cov_matrix(m, grid), paths, seed);
  }
  auto dump = [&](const fs::path& p, const Eigen::MatrixXd& X) {
    CsvWriter w(p);
    w.stream() << "t";
    for (int j = 0; j < X.cols(); ++j) w.stream() << ",path_" << j;
    w.stream() << '\n';
    for (int k = 0; k < X.rows(); ++k) {
      w.stream() << grid.node(k);
      for (int j = 0; j < X.cols(); ++j) w.stream() << ',' << X(k, j);
      w.stream() << '\n';
    }
  };
  dump(out / "paths.csv", G);
  if (theta > 0) dump(out / "zeta.csv", zeta);
  std::cout << "wrote " << paths << " paths on " << grid.n() + 1 << " nodes\n";
  return {{"paths", paths}, {"nodes", grid.n() + 1}};
}

json run_estimate(const json& c, const fs::path& out) {
  const auto m = fgp::model_from_json(c["model"]);
  const double theta = num(c, "theta"), T = num(c, "T"), dt = num(c, "dt");
  const int paths = integer(c, "paths");
  const auto seed = seed_of(c, "seed");
  const int n = std::max(2, static_cast<int>(std::lround(T / dt)));
  const auto sys = fgp::fou_system(m, fgp::Grid(T, n), theta);
  const auto draw = fgp::fou_paths(sys, paths, seed);
  const double H = m.effective_hurst();
  const bool normalizable = H < 0.5;

  CsvWriter w(out / "estimates.csv");
  w.row("estimator", "model", "H", "theta_true", "T", "n", "seed", "value", "normalized_stat");
  const std::string name(fgp::family_name(m.family()));
  double mean_moment = 0, mean_lse = 0;
  for (int p = 0; p < paths; ++p) {
    const Eigen::VectorXd z = draw.zeta.col(p);
    const double mom = fgp::moment_estimator(z, sys.grid, H);
    const double lse = fgp::lse_informal(z, draw.dG.col(p), sys);
    std::ostringstream mom_s, lse_s, nm_s, nl_s;
    mom_s << std::setprecision(17) << mom;
    lse_s << std::setprecision(17) << lse;
    if (normalizable) {
      nm_s << std::setprecision(17) << fgp::normalized_moment_stat(mom, theta, H, T);
      nl_s << std::setprecision(17) << fgp::normalized_lse_stat(lse, theta, H, T);
    }
    w.row("moment", name, H, theta, T, n, seed, mom_s.str(), nm_s.str());
    w.row("lse", name, H, theta, T, n, seed, lse_s.str(), nl_s.str());
    mean_moment += mom / paths;
    mean_lse += lse / paths;
  }
  std::cout << "moment mean " << fmt9(mean_moment) << "\nlse mean " << fmt9(mean_lse) << '\n';
  return {{"moment_mean", mean_moment}, {"lse_mean", mean_lse}};
}

json run_cumulants(const json& c, const fs::path& out) {
  const auto m = fgp::model_from_json(c["model"]);
  const double theta = num(c, "theta"), dt = num(c, "dt");
  const auto Ts = c["T_list"].get<std::vector<double>>();
  CsvWriter w(out / "cumulants.csv");
  w.row("T", "n", "kappa2", "gap2", "kappa3", "kappa4");
  json reports = json::array();
  std::vector<double> gaps, k3s;
  for (double T : Ts) {
    const int n = std::max(2, static_cast<int>(std::lround(T / dt)));
    const auto r = fgp::cumulants(fgp::fou_system(m, fgp::Grid(T, n), theta));
    w.row(T, n, r.kappa2, r.gap2, r.kappa3, r.kappa4);
    reports.push_back(fgp::to_json(r));
    gaps.push_back(r.gap2);
    k3s.push_back(r.kappa3);
    std::cout << "T " << fmt9(T) << " kappa2 " << fmt9(r.kappa2) << " gap2 " << fmt9(r.gap2)
              << " kappa3 " << fmt9(r.kappa3) << " kappa4 " << fmt9(r.kappa4) << '\n';
  }
  json fits = json::object();
  if (Ts.size() >= 3) {
    auto fit = [&](const std::vector<double>& y) -> json {
      for (double v : y)
        if (!(v > 0)) return nullptr;
      const auto f = fgp::rate_fit(Ts, y);
      return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
    };
    fits["gap2"] = fit(gaps);
    fits["kappa3"] = fit(k3s);
  }
  json r = {{"reports", reports}, {"rate_fits", fits}};
  write_json(out / "cumulants.json", r);
  return r;
}

json run_gladyshev(const json& c, const fs::path& out) {
  const auto m = fgp::model_from_json(c["model"]);
  const double T = num(c, "T");
  const int level = integer(c, "level"), min_level = integer(c, "min_level");
  const int paths = integer(c, "paths");
  const auto seed = seed_of(c, "seed");
  if (level < 1 || level > 16) throw fgp::DomainError("level must be in 1..16");
  if (min_level < 1 || min_level > level) throw fgp::DomainError("min_level must be in 1..level");
  const double H = m.effective_hurst();
  const auto G = fgp::sample_paths(
      fgp::increment_cov_matrix(m, fgp::Grid(T, 1 << level)), paths, seed);
  CsvWriter w(out / "gladyshev.csv");
  w.row("path", "level", "V_n", "hurst_estimate");
  std::vector<double> finest;
  for (int p = 0; p < paths; ++p) {
    const Eigen::VectorXd path = G.col(p);
    for (int k = min_level; k <= level; ++k) {
      const auto sub = fgp::dyadic_subsample(path, level, k);
      const double V = fgp::gladyshev_qv(sub, k, T, H);
      const double h = fgp::hurst_estimate(sub, k, T);
      w.row(p, k, V, h);
      if (k == level) finest.push_back(h);
    }
  }
  std::sort(finest.begin(), finest.end());
  const double median = finest.size() % 2 ? finest[finest.size() / 2]
                                          : 0.5 * (finest[finest.size() / 2 - 1] +
                                                   finest[finest.size() / 2]);
  std::cout << "median hurst estimate at level " << level << ": " << fmt9(median) << '\n';
  return {{"median_hurst", median}};
}

json run_mc(const json& c, const fs::path& out) {
  const auto cfg = fgp::ExperimentConfig::from_json(c);
  const auto rep = fgp::run_experiment(cfg);
  write_json(out / "report.json", rep.to_json());
  {
    std::ofstream d(out / "distances.csv");
    if (!d) throw fgp::DomainError("cannot write distances.csv");
    d << rep.distances_csv();
  }
  if (cfg.dump_samples) {
    for (std::size_t i = 0; i < rep.horizons.size(); ++i) {
      const auto& h = rep.horizons[i];
      if (h.samples.empty()) continue;
      CsvWriter w(out / ("samples_T" + std::to_string(i) + ".csv"));
      bool first = true;
      for (const auto& [name, v] : h.samples) {
        w.stream() << (first ? "" : ",") << name;
        first = false;
      }
      w.stream() << '\n';
      for (int p = 0; p < cfg.n_paths; ++p) {
        first = true;
        for (const auto& [name, v] : h.samples) {
          w.stream() << (first ? "" : ",") << v[p];
          first = false;
        }
        w.stream() << '\n';
      }
    }
  }
  for (const auto& h : rep.horizons) {
    std::cout << "T " << fmt9(h.T);
    if (h.failure) std::cout << " failed: " << *h.failure;
    for (const auto& [name, ks] : h.ks) std::cout << ' ' << name << ' ' << fmt9(ks);
    std::cout << '\n';
  }
  for (const auto& [name, s] : rep.slopes) std::cout << "slope " << name << ' ' << fmt9(s) << '\n';
  for (const auto& f : rep.flags) std::cout << "flag " << f << '\n';
  if (rep.failed()) throw fgp::NumericError("one or more horizons failed; see report.json");
  return {{"flags", rep.flags}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fgp: fractional Gaussian process lab"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  app.set_version_flag("--version", kVersion);

  std::string out_dir = ".";
  std::string config_path;
  std::string seed_override;
  int threads = 0;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--config", config_path, "JSON config (plain or a previous manifest.json)");
  app.add_option("--seed", seed_override, "Override the configured seed");
  app.add_option("--threads", threads, "Worker cap (0 = all cores)")->capture_default_str();

  std::map<std::string, Subcommand> subs;
  using Body = json (*)(const json&, const fs::path&);
  std::map<std::string, Body> bodies{
      {"cov", run_cov},         {"hypcheck", run_hypcheck}, {"rkhs", run_rkhs},
      {"simulate", run_simulate}, {"estimate", run_estimate}, {"cumulants", run_cumulants},
      {"gladyshev", run_gladyshev}, {"mc", run_mc}};

  auto add = [&](const std::string& name, const std::string& desc, std::vector<Key> keys) {
    Subcommand sc;
    sc.app = app.add_subcommand(name, desc);
    sc.keys = std::move(keys);
    subs[name] = std::move(sc);
    auto& ref = subs[name];
    for (const auto& k : ref.keys) {
      std::string help = k.help;
      if (!k.fallback.is_null()) help += " [default: " + k.fallback.dump() + "]";
      if (k.kind == Kind::Flag)
        ref.opts[k.name] = ref.app->add_flag(flag_name(k.name), help);
      else
        ref.opts[k.name] = ref.app->add_option(flag_name(k.name), ref.raw[k.name], help);
    }
  };
  const Key model{"model", Kind::Json, "Model JSON {\"family\":..,\"params\":{..}}", nullptr};
  add("cov", "Evaluate a covariance kernel or one of its derivatives",
      {model,
       {"s", Kind::Number, "First time argument", nullptr},
       {"t", Kind::Number, "Second time argument", nullptr},
       {"what", Kind::String,
        "cov|dcov_dt|dcov_dt_diff|mixed_partial|mixed_partial_diff|structure_diff", "cov"},
       {"branch", Kind::String, "strict|left|right on a jump locus", "strict"}});
  add("hypcheck", "Grid sweep of a kernel bound",
      {model,
       {"check", Kind::String, "h3|h3prime|h5|metric", "h3"},
       {"T", Kind::Number, "Square domain (0,T]^2", 1.0},
       {"grid", Kind::Integer, "Grid points per axis", 200}});
  add("rkhs", "RKHS inner product of two BV functions",
      {model,
       {"f", Kind::Json, "BV function JSON", nullptr},
       {"g", Kind::Json, "BV function JSON", nullptr},
       {"diff", Kind::Flag, "Difference to the fBm inner product", false}});
  add("simulate", "Sample paths of G (and of the fOU process when --theta > 0)",
      {model,
       {"T", Kind::Number, "Horizon", 1.0},
       {"n", Kind::Integer, "Grid steps", 256},
       {"paths", Kind::Integer, "Number of paths", 1},
       {"seed", Kind::Integer, "Seed", 1},
       {"theta", Kind::Number, "fOU drift (0: paths of G only)", 0.0}});
  add("estimate", "Moment and least-squares statistics on simulated fOU paths",
      {model,
       {"theta", Kind::Number, "True drift", 1.0},
       {"T", Kind::Number, "Horizon", 100.0},
       {"dt", Kind::Number, "Grid step", 0.05},
       {"paths", Kind::Integer, "Number of paths", 100},
       {"seed", Kind::Integer, "Seed", 1}});
  add("cumulants", "Exact discrete cumulants of W_T",
      {model,
       {"theta", Kind::Number, "Drift", 1.0},
       {"T_list", Kind::Json, "JSON array of horizons", json::array({25, 50, 100, 200})},
       {"dt", Kind::Number, "Grid step", 0.05}});
  add("gladyshev", "Dyadic quadratic variation and Hurst estimates",
      {model,
       {"T", Kind::Number, "Horizon", 1.0},
       {"level", Kind::Integer, "Finest dyadic level n (2^n steps)", 14},
       {"min_level", Kind::Integer, "Coarsest level reported", 8},
       {"paths", Kind::Integer, "Number of paths", 1},
       {"seed", Kind::Integer, "Seed", 1}});
  add("mc", "Monte Carlo normal-approximation experiment",
      {model,
       {"theta", Kind::Number, "Drift", 1.0},
       {"T_list", Kind::Json, "JSON array of horizons", nullptr},
       {"dt", Kind::Number, "Grid step", 0.05},
       {"n_paths", Kind::Integer, "Paths per horizon", 2000},
       {"master_seed", Kind::Integer, "Master seed", 0},
       {"estimators", Kind::Json, "JSON array from wt, moment, lse",
        json::array({"wt", "moment", "lse"})},
       {"dump_samples", Kind::Flag, "Write samples_T<k>.csv", false}});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    fgp::set_max_threads(threads);
    std::string name;
    for (const auto& [n, sc] : subs)
      if (sc.app->parsed()) name = n;
    const auto& sc = subs.at(name);

    const json file_config = config_path.empty() ? json::object() : load_config(config_path);
    json config = resolve(sc, file_config);
    const char* seed_key = name == "mc" ? "master_seed" : "seed";
    if (!seed_override.empty()) {
      if (!config.contains(seed_key))
        throw fgp::DomainError("--seed is not used by '" + name + "'");
      config[seed_key] = convert({seed_key, Kind::Integer, "", nullptr}, seed_override);
    }
    if (name == "mc") config = fgp::ExperimentConfig::from_json(config).to_json();

    const fs::path out(out_dir);
    fs::create_directories(out);
    json manifest = {{"subcommand", name},
                     {"config", config},
                     {"version", {{"fgp", kVersion}, {"cxx", __cplusplus}}},
                     {"threads", fgp::max_threads()}};
    if (config.contains(seed_key)) manifest["seeds"] = {{seed_key, config[seed_key]}};
    auto finish = [&](const json& summary) {
      manifest["elapsed_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      manifest["summary"] = summary;
      write_json(out / "manifest.json", manifest);
    };
    try {
      finish(bodies.at(name)(config, out));
    } catch (const fgp::Error& e) {
      finish({{"error", e.what()}});
      throw;
    }
    return 0;
  } catch (const fgp::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON setting: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
