#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run fgp(const std::string& args) {
  const std::string cmd = std::string(FGP_CLI) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t k = std::fread(buf, 1, sizeof buf, p)) out.append(buf, k);
  const int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto d = fs::temp_directory_path() / ("fgp_cli_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, BrownianCovariance) {
  const auto d = scratch("cov");
  const auto r = fgp("cov --model '{\"family\":\"Fbm\",\"params\":{\"H\":0.5}}' --s 1 --t 2 --out " +
                     d.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out, "1\n");
  const auto m = nlohmann::json::parse(slurp(d / "manifest.json"));
  EXPECT_EQ(m["subcommand"], "cov");
  EXPECT_EQ(m["config"]["s"], 1.0);
}

TEST(Cli, ExitCodes) {
  const auto d = scratch("codes");
  auto r = fgp("hypcheck --model '{\"family\":\"MaxKernel\",\"params\":{\"H\":0.3}}' --out " +
               d.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("family does not satisfy (H2')"), std::string::npos) << r.out;
  EXPECT_EQ(fgp("frobnicate").code, 2);
  EXPECT_EQ(fgp("cov --no-such-flag 1").code, 2);
  EXPECT_EQ(fgp("cov --model '{\"family\":\"Fbm\",\"params\":{\"H\":1.5}}' --s 1 --t 2 --out " +
                d.string())
                .code,
            2);
  EXPECT_EQ(fgp("cov --model '{\"family\":\"Fbm\"' --s 1 --t 2 --out " + d.string()).code, 2);
  EXPECT_EQ(fgp("--help").code, 0);
}

TEST(Cli, McWritesArtifactsAndReplaysFromManifest) {
  const auto cfg = scratch("mc_cfg") / "cfg.json";
  std::ofstream(cfg) << R"({"model":{"family":"SubFbm","params":{"H":0.3}},
    "T_list":[5,10,20],"dt":0.1,"n_paths":250,"master_seed":3,"dump_samples":true})";
  const auto a = scratch("mc_a"), b = scratch("mc_b"), c = scratch("mc_c");
  auto r = fgp("mc --config " + cfg.string() + " --out " + a.string());
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* f : {"manifest.json", "report.json", "distances.csv", "samples_T0.csv"})
    EXPECT_TRUE(fs::exists(a / f)) << f;
  ASSERT_EQ(fgp("mc --config " + cfg.string() + " --out " + b.string()).code, 0);
  EXPECT_EQ(slurp(a / "distances.csv"), slurp(b / "distances.csv"));
  ASSERT_EQ(fgp("mc --config " + (a / "manifest.json").string() + " --out " + c.string()).code, 0);
  EXPECT_EQ(slurp(a / "distances.csv"), slurp(c / "distances.csv"));
  EXPECT_EQ(slurp(a / "report.json"), slurp(c / "report.json"));
  const auto rep = nlohmann::json::parse(slurp(a / "report.json"));
  EXPECT_EQ(rep["status"], "ok");

  const auto s = scratch("mc_seed");
  ASSERT_EQ(fgp("mc --config " + cfg.string() + " --seed 4 --out " + s.string()).code, 0);
  EXPECT_NE(slurp(a / "distances.csv"), slurp(s / "distances.csv"));
  EXPECT_EQ(nlohmann::json::parse(slurp(s / "manifest.json"))["config"]["master_seed"], 4);
}

TEST(Cli, OtherSubcommands) {
  const std::string model = "--model '{\"family\":\"SubFbm\",\"params\":{\"H\":0.3}}'";
  auto check = [&](const std::string& name, const std::string& args, const char* file) {
    const auto d = scratch(name);
    const auto r = fgp(name + " " + model + " " + args + " --out " + d.string());
    EXPECT_EQ(r.code, 0) << name << ": " << r.out;
    EXPECT_TRUE(fs::exists(d / file)) << name;
    EXPECT_TRUE(fs::exists(d / "manifest.json")) << name;
  };
  check("hypcheck", "--check h3 --grid 40", "hypcheck.json");
  check("rkhs", "--f '{\"interval\":[0,1],\"atoms\":[{\"x\":0.5,\"jump\":1}]}' --g '{\"interval\":[0,1],\"pieces\":[{\"sub\":[0,1],\"coeffs\":[1]}]}'",
        "rkhs.json");
  check("simulate", "--T 1 --n 64 --paths 3 --theta 1", "zeta.csv");
  check("estimate", "--T 10 --dt 0.1 --paths 20", "estimates.csv");
  check("cumulants", "--T-list '[5,10,20]' --dt 0.1", "cumulants.csv");
  check("gladyshev", "--level 8 --min-level 4 --paths 2", "gladyshev.csv");
}
