#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "polydecay/harness.hpp"
#include "polydecay/parallel.hpp"
#include "test_support.hpp"

using namespace polydecay;
using namespace polydecay::harness;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("polydecay_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(POLYDECAY_CLI) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string config_error_message(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "config accepted: " << doc.dump();
  return {};
}

const json kRates = {{"kind", "rates"}, {"seed", 1}, {"params", {{"beta", 1.0}, {"p", 2.0}, {"rho", 0.0}}}};
const json kSweep = {{"kind", "sweep"}, {"seed", 1}, {"model", {{"family", "diagonal"}, {"eigs", {{-1, 0}, {-2, 0}}}}}};

}  // namespace

TEST(Config, MissingSeedNamesPointer) {
  json doc = kRates;
  doc.erase("seed");
  EXPECT_NE(config_error_message(doc).find("/seed"), std::string::npos);
}

TEST(Config, FieldErrorsCarryPointers) {
  json doc = kRates;
  doc["params"]["p"] = "two";
  EXPECT_NE(config_error_message(doc).find("/params/p"), std::string::npos);
  doc = kRates;
  doc["bogus"] = 1;
  EXPECT_NE(config_error_message(doc).find("/bogus"), std::string::npos);
  doc = kSweep;
  doc["model"].erase("eigs");
  EXPECT_NE(config_error_message(doc).find("/model/eigs"), std::string::npos);
  doc = kRates;
  doc["kind"] = "nope";
  EXPECT_NE(config_error_message(doc).find("/kind"), std::string::npos);
  doc = kRates;
  doc["seed"] = -3;
  EXPECT_NE(config_error_message(doc).find("/seed"), std::string::npos);
}

TEST(Config, LadderKindsNeedDims) {
  json doc = {{"kind", "decay"}, {"seed", 1}, {"model", {{"family", "borichev_tomilov"}, {"params", {{"alpha", 1.0}}}}}};
  EXPECT_NE(config_error_message(doc).find("/model/dims"), std::string::npos);
  doc["model"]["dims"] = {16, 32};
  EXPECT_NO_THROW(parse_config(doc));
}

TEST(Config, EchoOmitsOutputDir) {
  json doc = kRates;
  doc["output_dir"] = "/tmp/somewhere";
  const auto cfg = parse_config(doc);
  EXPECT_EQ(cfg.output_dir, "/tmp/somewhere");
  EXPECT_FALSE(cfg.raw.contains("output_dir"));
}

TEST(Run, RatesReport) {
  const auto dir = scratch("rates");
  const auto rep = run(parse_config(kRates), dir);
  ASSERT_FALSE(rep.checks.empty());
  EXPECT_EQ(rep.checks[0].measured["tau_main"], 1.0);
  EXPECT_TRUE(rep.all_pass());
  EXPECT_EQ(exit_status(rep), 0);
  EXPECT_EQ(slurp(dir / "report.json"), rep.dump());
  const json j = json::parse(rep.dump());
  EXPECT_EQ(j["environment"]["precision"], "binary64");
  for (const auto& c : j["checks"]) {
    EXPECT_FALSE(c["anchor"].get<std::string>().empty());
    EXPECT_TRUE(c.contains("measured") && c.contains("threshold") && c.contains("verdict"));
  }
}

TEST(Run, DiagonalSweep) {
  const auto dir = scratch("sweep");
  const auto rep = run(parse_config(kSweep), dir);
  ASSERT_FALSE(rep.checks.empty());
  EXPECT_EQ(rep.checks[0].measured["beta_hat"], 0.0);
  EXPECT_TRUE(rep.all_pass()) << rep.dump();
  EXPECT_TRUE(fs::exists(dir / "resolvent_2.csv"));
  EXPECT_NE(slurp(dir / "resolvent_2.svg").find("<svg"), std::string::npos);
}

TEST(Run, FailingVerdictGivesExitOne) {
  Report r;
  r.checks.push_back({"x", kPlumbing, 1.0, 0.0, "fail"});
  EXPECT_EQ(exit_status(r), 1);
  r.checks.back().verdict = "error";
  EXPECT_EQ(exit_status(r), 1);
  r.checks.back().verdict = "pass";
  EXPECT_EQ(exit_status(r), 0);
}

TEST(Run, DeterministicBytes) {
  const json doc = {{"kind", "sharpness"},
                    {"seed", 5},
                    {"model",
                     {{"family", "jordan_growth"},
                      {"params", {{"mu_spacing", 1.0}, {"a_decay", 0.5}, {"c_gain", 2.0}}},
                      {"dims", {8, 16}}}},
                    {"params", {{"samples", 12}}}};
  const auto cfg = parse_config(doc);
  set_thread_count(1);
  const auto a = run(cfg, scratch("det_a")).dump();
  set_thread_count(4);
  const auto b = run(cfg, scratch("det_b")).dump();
  set_thread_count(0);
  EXPECT_EQ(a, b);
}

TEST(Zoo, CatalogAnnotations) {
  const std::string z = list_zoo();
  EXPECT_NE(z.find("borichev_tomilov"), std::string::npos);
  EXPECT_NE(z.find("jordan_growth"), std::string::npos);
  EXPECT_NE(z.find("damped_wave"), std::string::npos);
  for (const auto& e : zoo_catalog()) {
    if (e.family == "jordan_growth") {
      EXPECT_NE(e.anchor.find("Wrobel"), std::string::npos);
    } else if (e.family == "damped_wave") {
      EXPECT_EQ(e.anchor, "damped wave equation");
    }
  }
}

TEST(Svg, LogAxesAndSeries) {
  const std::string s = svg_plot("t", {{"a", {1, 10, 100}, {1, 0.1, 0.01}, false}, {"b", {1, 100}, {1, 0.01}, true}}, true,
                                 true, "x", "y");
  EXPECT_NE(s.find("<polyline"), std::string::npos);
  EXPECT_NE(s.find("stroke-dasharray"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  std::ofstream(dir / "ok.json") << kRates.dump();
  json bad = kRates;
  bad.erase("seed");
  std::ofstream(dir / "bad.json") << bad.dump();
  std::ofstream(dir / "junk.json") << "{not json";
  json failing = kRates;
  failing["params"]["p"] = 3.0;
  std::ofstream(dir / "fail.json") << failing.dump();
  const std::string out = "--out " + (dir / "out").string();
  EXPECT_EQ(cli(out + " run " + (dir / "ok.json").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "report.json"));
  EXPECT_EQ(cli(out + " run " + (dir / "bad.json").string()), 2);
  EXPECT_EQ(cli(out + " run " + (dir / "junk.json").string()), 2);
  EXPECT_EQ(cli(out + " run " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(cli(out + " run " + (dir / "fail.json").string()), 1);
  EXPECT_EQ(cli("zoo"), 0);
  EXPECT_EQ(cli(out + " rates --beta 1 --p 2 --rho 0"), 0);
  EXPECT_EQ(cli(out + " rates --beta 1 --p 3 --rho 0"), 1);
}
