#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("hardyop_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

/// Runs the CLI with `args` (already shell-quoted); stdout captured, stderr dropped.
CliResult cli(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd = std::string("\"") + HARDYOP_CLI + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

}  // namespace

TEST(Cli, NormPlateau) {
  const CliResult r = cli("norm '(z^2+z^3)/2' --restricted -N 4,16,64");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "norm");
  for (const auto& v : j["values"]) EXPECT_NEAR(v.get<double>(), 0.7071068, 1e-7);
  EXPECT_EQ(j["pass"], true);
  EXPECT_TRUE(j["runtime_ms"].is_null());
}

TEST(Cli, SchemaKeyOrder) {
  const CliResult r = cli("norm z -N 8");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::ordered_json::parse(r.out);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> head{"command", "params", "dims", "values", "target", "gaps", "pass", "runtime_ms"};
  ASSERT_GE(keys.size(), head.size());
  EXPECT_TRUE(std::equal(head.begin(), head.end(), keys.begin()));
  EXPECT_EQ(j["values"][0].get<double>(), 1.0);
}

TEST(Cli, AlphaNormIncreasesTowardTarget) {
  const CliResult r = cli("norm 'alpha(0.5)' -N 64,256,1024");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["target"].get<double>(), 1.7320508, 1e-7);
  const auto& v = j["values"];
  EXPECT_LT(v[0].get<double>(), v[1].get<double>());
  EXPECT_LT(v[1].get<double>(), v[2].get<double>());
  EXPECT_GT(j["gaps"][2].get<double>(), 0.0);
}

TEST(Cli, DistanceTargets) {
  CliResult r = cli("distance 'z^2' 'const(0.5)'");
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["target"].get<double>(), 1.1547005, 1e-7);
  r = cli("distance 'z^3' 'z^3' -N 8");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["values"][0].get<double>(), 0.0);
}

TEST(Cli, GoldenFiles) {
  EXPECT_EQ(cli("distance 'i*z' 'z' -N 3,8").out, slurp(fs::path(HARDYOP_GOLDEN) / "distance_iz.json"));
  EXPECT_EQ(cli("norm 'z^3' --restricted -N 4,8").out, slurp(fs::path(HARDYOP_GOLDEN) / "norm_z3_restricted.json"));
}

TEST(Cli, NumericalRange) {
  const fs::path csv = scratch() / "boundary.csv";
  CliResult r = cli("nrange 'const(0.5)' -N 64 --csv '" + csv.string() + "'");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_LE(j["hausdorff"].get<double>(), 1e-6);
  EXPECT_EQ(j["contained"], true);
  const std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("theta,support,re,im\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 721);

  r = cli("nrange 'alpha(0)' -N 32");
  ASSERT_EQ(r.code, 0);
  j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["ellipse"]["degenerate"], true);
  EXPECT_NEAR(j["radius"].get<double>(), 1.0, 1e-12);
  EXPECT_LE(j["hausdorff"].get<double>(), 1e-10);
}

TEST(Cli, PSolve) {
  CliResult r = cli("psolve '(z^2+z^3)/2'");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["outcome"], "finite");
  EXPECT_NEAR(j["p"].get<double>(), 2.0, 1e-6);
  r = cli("psolve '0.7*z^3'");
  ASSERT_EQ(r.code, 0);
  j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["outcome"], "inner-multiple");
  EXPECT_TRUE(j["p"].is_null());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli("norm 'z+' -N 4").code, 2);           // parse error
  EXPECT_EQ(cli("norm '2*z' -N 4").code, 2);          // not a selfmap
  EXPECT_EQ(cli("norm '1/(1-2*z)' -N 4").code, 2);    // pole in the disk
  EXPECT_EQ(cli("norm z -N 8,4").code, 2);            // schedule not increasing
  EXPECT_EQ(cli("psolve 'const(0.2)'").code, 2);      // precondition
  EXPECT_EQ(cli("verify nonsense").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("psolve '(z+z^2)/2' --strict-plateau").code, 3);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, VerificationFailureExitsOne) {
  // The thm7 suite asks for a restricted-norm plateau for (z+z^2)/2 that the
  // compressions do not reach (they converge like 1/N), so exactly one check fails.
  const CliResult r = cli("verify thm7");
  EXPECT_EQ(r.code, 1);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["pass"], false);
  int failed = 0;
  for (const auto& c : j["checks"]) failed += c["pass"] == false;
  EXPECT_EQ(failed, 1);
}

TEST(Cli, DeterministicOutput) {
  const fs::path a = scratch() / "a.json", b = scratch() / "b.json";
  for (const fs::path& p : {a, b})
    ASSERT_EQ(cli("nrange 'alpha(0.5)' -N 24 --grid 90 --samples 40 --seed 7 --json '" + p.string() + "'").code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(fs::exists(fs::path(a.string() + ".tmp")));
  ASSERT_EQ(cli("verify formulas --json '" + a.string() + "'").code, 0);
  ASSERT_EQ(cli("verify formulas --json '" + b.string() + "'").code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
}
