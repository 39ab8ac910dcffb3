#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polydecay/harness.hpp"
#include "polydecay/parallel.hpp"

namespace {

using nlohmann::json;
namespace h = polydecay::harness;

json model_json(const std::string& family, const std::vector<std::string>& kv, const std::vector<int>& dims) {
  json m{{"family", family}, {"params", json::object()}};
  for (const auto& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--param", "expected key=value, got " + item);
    try {
      m["params"][item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--param", "value is not a number: " + item);
    }
  }
  if (!dims.empty()) m["dims"] = dims;
  return m;
}

int execute(const json& doc, const std::string& out) {
  try {
    const auto cfg = h::parse_config(doc);
    const auto rep = h::run(cfg, out);
    for (const auto& c : rep.checks) std::cout << (c.verdict == "pass" ? "PASS  " : "FAIL  ") << c.name << "  [" << c.anchor << "]\n";
    std::cout << "report: " << out << "/report.json\n";
    return h::exit_status(rep);
  } catch (const polydecay::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == polydecay::ErrorKind::ConfigError ? 2 : 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial decay laboratory for finite-section semigroup generators"};
  app.require_subcommand(1);
  std::string out = "polydecay-out";
  int threads = 0;
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads (overrides POLYDECAY_THREADS)");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  run->add_option("config", config_path, "Config file")->required();

  auto* zoo = app.add_subcommand("zoo", "List model families");

  double beta = 1.0, p = 2.0, rho = 0.0, q = 2.0;
  std::uint64_t seed = 1;
  auto* rates = app.add_subcommand("rates", "Decay exponents for given beta, p, rho");
  rates->add_option("--beta", beta)->required();
  rates->add_option("--p", p)->capture_default_str();
  rates->add_option("--rho", rho)->capture_default_str();

  std::string family;
  std::vector<std::string> params;
  std::vector<int> dims;
  int samples = 250, half_plane = 1000;
  std::string norm = "interp";
  std::vector<double> fractions{0.5, 1.0};
  bool extended = false;

  auto* sweep = app.add_subcommand("sweep", "Resolvent sweep and half-plane check");
  sweep->add_option("--family", family)->required();
  sweep->add_option("--param", params, "key=value, repeatable");
  sweep->add_option("--dim", dims, "Truncation size, repeatable");
  sweep->add_option("--half-plane-samples", half_plane)->capture_default_str();
  sweep->add_option("--seed", seed)->capture_default_str();

  auto* decay = app.add_subcommand("decay", "Orbit decay ladder");
  decay->add_option("--family", family)->required();
  decay->add_option("--param", params, "key=value, repeatable");
  decay->add_option("--dims", dims, "Ladder sizes")->required();
  decay->add_option("--rho", rho)->capture_default_str();
  decay->add_option("--p", p)->capture_default_str();
  decay->add_option("--norm", norm)->check(CLI::IsMember({"interp", "fractional"}))->capture_default_str();
  decay->add_option("--q", q)->capture_default_str();
  decay->add_option("--samples", samples)->capture_default_str();
  decay->add_option("--seed", seed)->capture_default_str();
  decay->add_flag("--extended", extended, "Also run resolvent-power, sandwich and sectoriality checks");

  auto* sharp = app.add_subcommand("sharpness", "Sharpness probe along a ladder");
  sharp->add_option("--family", family)->required();
  sharp->add_option("--param", params, "key=value, repeatable");
  sharp->add_option("--dims", dims, "Ladder sizes")->required();
  sharp->add_option("--fractions", fractions)->capture_default_str();
  sharp->add_option("--samples", samples)->capture_default_str();
  sharp->add_option("--seed", seed)->capture_default_str();

  auto* fspace = app.add_subcommand("funcspace", "Function-space checks");
  fspace->add_option("--family", family);
  fspace->add_option("--param", params, "key=value, repeatable");
  fspace->add_option("--dims", dims);
  fspace->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (threads > 0) polydecay::set_thread_count(static_cast<std::size_t>(threads));

  try {
    if (*zoo) {
      std::cout << h::list_zoo();
      return 0;
    }
    if (*run) {
      try {
        const auto cfg = h::load_config(config_path);
        return execute(cfg.raw, cfg.output_dir.empty() || app.get_option("--out")->count() ? out : cfg.output_dir);
      } catch (const polydecay::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
      }
    }
    if (*rates) return execute({{"kind", "rates"}, {"seed", 0}, {"params", {{"beta", beta}, {"p", p}, {"rho", rho}}}}, out);
    if (*sweep) {
      return execute({{"kind", "sweep"}, {"seed", seed}, {"model", model_json(family, params, dims)},
                      {"params", {{"half_plane_samples", half_plane}}}},
                     out);
    }
    if (*decay) {
      return execute({{"kind", "decay"},
                      {"seed", seed},
                      {"model", model_json(family, params, dims)},
                      {"params", {{"rho", rho}, {"p", p}, {"norm", norm}, {"q", q}, {"samples", samples}, {"extended", extended}}}},
                     out);
    }
    if (*sharp) {
      return execute({{"kind", "sharpness"}, {"seed", seed}, {"model", model_json(family, params, dims)},
                      {"params", {{"fractions", fractions}, {"samples", samples}}}},
                     out);
    }
    if (*fspace) {
      json doc{{"kind", "funcspace"}, {"seed", seed}};
      if (!family.empty()) doc["model"] = model_json(family, params, dims);
      return execute(doc, out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
