#include <cmath>
#include <fstream>
#include <set>

#include "polydecay/harness.hpp"

namespace polydecay::harness {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& pointer, const std::string& what) {
  fail(ErrorKind::ConfigError, "config " + pointer + ": " + what);
}

std::string child(const std::string& base, const std::string& key) { return base + "/" + key; }

const std::set<std::string>& kinds() {
  static const std::set<std::string> k{"sweep", "decay", "sharpness", "funcspace", "rates", "full-suite"};
  return k;
}

const std::set<std::string>& families() {
  static const std::set<std::string> f{"diagonal", "borichev_tomilov", "jordan_growth", "damped_wave"};
  return f;
}

bool is_number_or_inf(const json& v) { return v.is_number() || (v.is_string() && v.get<std::string>() == "inf"); }

void check_number(const json& v, const std::string& ptr, bool allow_inf = false) {
  if (!(v.is_number() || (allow_inf && is_number_or_inf(v)))) {
    config_error(ptr, allow_inf ? "expected a number or \"inf\"" : "expected a number");
  }
  if (v.is_number() && !std::isfinite(v.get<double>())) config_error(ptr, "expected a finite number");
}

void check_positive_int(const json& v, const std::string& ptr) {
  if (!v.is_number_integer() || v.get<long long>() <= 0) config_error(ptr, "expected a positive integer");
}

// Parameter keys and their types: n = number, i = positive integer,
// q = number or "inf", N = array of numbers, Q = array of numbers or "inf",
// I = array of positive integers, z = non-negative integer, s = string,
// b = boolean.
const std::map<std::string, char>& param_types() {
  static const std::map<std::string, char> t{
      {"rho", 'n'},        {"p", 'n'},           {"q", 'q'},          {"beta", 'n'},
      {"tau", 'n'},        {"s", 'n'},           {"omega", 'n'},      {"t_min", 'n'},
      {"t_max", 'n'},      {"t_points", 'i'},    {"samples", 'i'},    {"half_plane_samples", 'i'},
      {"n", 'z'},          {"hl_trials", 'i'},   {"p_type", 'n'},     {"q_cotype", 'n'},
      {"fractions", 'N'},  {"q_values", 'Q'},   {"resolutions", 'I'}, {"norm", 's'},
      {"extended", 'b'},   {"multiplier_samples", 'i'}};
  return t;
}

void validate_params(const json& params, const std::string& ptr) {
  if (!params.is_object()) config_error(ptr, "expected an object");
  for (const auto& [key, v] : params.items()) {
    const std::string p = child(ptr, key);
    const auto it = param_types().find(key);
    if (it == param_types().end()) config_error(p, "unknown parameter");
    switch (it->second) {
      case 'n': check_number(v, p); break;
      case 'q': check_number(v, p, true); break;
      case 'i': check_positive_int(v, p); break;
      case 'z':
        if (!v.is_number_integer() || v.get<long long>() < 0) config_error(p, "expected a non-negative integer");
        break;
      case 's':
        if (!v.is_string()) config_error(p, "expected a string");
        break;
      case 'b':
        if (!v.is_boolean()) config_error(p, "expected a boolean");
        break;
      default: {
        if (!v.is_array() || v.empty()) config_error(p, "expected a nonempty array");
        for (std::size_t i = 0; i < v.size(); ++i) {
          const std::string pi = child(p, std::to_string(i));
          if (it->second == 'N') check_number(v[i], pi);
          if (it->second == 'Q') check_number(v[i], pi, true);
          if (it->second == 'I') check_positive_int(v[i], pi);
        }
      }
    }
  }
  if (params.contains("norm")) {
    const auto n = params["norm"].get<std::string>();
    if (n != "interp" && n != "fractional") config_error(child(ptr, "norm"), "expected \"interp\" or \"fractional\"");
  }
  if (params.contains("p") && params["p"].get<double>() < 1.0) config_error(child(ptr, "p"), "p must be >= 1");
  if (params.contains("rho") && params["rho"].get<double>() < 0.0) config_error(child(ptr, "rho"), "rho must be >= 0");
}

void validate_model(const json& model, const std::string& ptr) {
  if (!model.is_object()) config_error(ptr, "expected an object");
  for (const auto& [key, v] : model.items()) {
    (void)v;
    if (key != "family" && key != "params" && key != "dims" && key != "eigs" && key != "space_p") {
      config_error(child(ptr, key), "unknown field");
    }
  }
  if (!model.contains("family")) config_error(child(ptr, "family"), "required field missing");
  if (!model["family"].is_string() || !families().count(model["family"].get<std::string>())) {
    config_error(child(ptr, "family"), "unknown family");
  }
  if (model.contains("params")) {
    const auto& p = model["params"];
    if (!p.is_object()) config_error(child(ptr, "params"), "expected an object");
    for (const auto& [k, v] : p.items()) check_number(v, child(child(ptr, "params"), k));
  }
  if (model.contains("dims")) {
    const auto& d = model["dims"];
    if (!d.is_array()) config_error(child(ptr, "dims"), "expected an array");
    for (std::size_t i = 0; i < d.size(); ++i) check_positive_int(d[i], child(child(ptr, "dims"), std::to_string(i)));
  }
  if (model.contains("eigs")) {
    const auto& e = model["eigs"];
    if (!e.is_array() || e.empty()) config_error(child(ptr, "eigs"), "expected a nonempty array");
    for (std::size_t i = 0; i < e.size(); ++i) {
      const std::string pi = child(child(ptr, "eigs"), std::to_string(i));
      if (!e[i].is_array() || e[i].size() != 2) config_error(pi, "expected [re, im]");
      check_number(e[i][0], child(pi, "0"));
      check_number(e[i][1], child(pi, "1"));
    }
  }
  if (model.contains("space_p")) {
    check_number(model["space_p"], child(ptr, "space_p"), true);
    if (model["space_p"].is_number() && model["space_p"].get<double>() < 1.0) config_error(child(ptr, "space_p"), "must be >= 1");
  }
  const auto fam = model["family"].get<std::string>();
  if (fam == "diagonal" && !model.contains("eigs")) config_error(child(ptr, "eigs"), "required for the diagonal family");
}

ExperimentConfig parse_at(const json& doc, const std::string& base, bool nested, std::uint64_t inherited_seed) {
  if (!doc.is_object()) config_error(base.empty() ? "/" : base, "expected an object");
  for (const auto& [key, v] : doc.items()) {
    (void)v;
    static const std::set<std::string> allowed{"schema_version", "kind", "seed", "output_dir", "model", "params", "experiments"};
    if (!allowed.count(key)) config_error(child(base, key), "unknown field");
  }
  if (doc.contains("schema_version") && doc["schema_version"] != kSchemaVersion) {
    config_error(child(base, "schema_version"), "unsupported schema version");
  }
  if (!doc.contains("kind")) config_error(child(base, "kind"), "required field missing");
  if (!doc["kind"].is_string() || !kinds().count(doc["kind"].get<std::string>())) {
    config_error(child(base, "kind"), "expected one of sweep, decay, sharpness, funcspace, rates, full-suite");
  }
  ExperimentConfig cfg;
  cfg.kind = doc["kind"].get<std::string>();
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0) config_error(child(base, "seed"), "expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  } else if (nested) {
    cfg.seed = inherited_seed;
  } else {
    config_error(child(base, "seed"), "required field missing");
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) config_error(child(base, "output_dir"), "expected a string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  cfg.params = doc.value("params", json::object());
  validate_params(cfg.params, child(base, "params"));
  if (doc.contains("model")) {
    validate_model(doc["model"], child(base, "model"));
    cfg.model = doc["model"];
  }
  const bool needs_model = cfg.kind == "sweep" || cfg.kind == "decay" || cfg.kind == "sharpness";
  if (needs_model && cfg.model.is_null()) config_error(child(base, "model"), "required for kind " + cfg.kind);
  const bool ladder = cfg.kind == "decay" || cfg.kind == "sharpness";
  if (ladder && cfg.model["family"] != "diagonal" && (!cfg.model.contains("dims") || cfg.model["dims"].empty())) {
    config_error(child(child(base, "model"), "dims"), "dims must be nonempty for ladder experiments");
  }
  if (cfg.kind == "sweep" && cfg.model["family"] != "diagonal" && (!cfg.model.contains("dims") || cfg.model["dims"].empty())) {
    config_error(child(child(base, "model"), "dims"), "dims must be nonempty");
  }
  if (cfg.kind == "rates" && !cfg.params.contains("beta")) config_error(child(child(base, "params"), "beta"), "required for kind rates");
  if (doc.contains("experiments")) {
    if (cfg.kind != "full-suite") config_error(child(base, "experiments"), "only allowed for kind full-suite");
    const auto& ex = doc["experiments"];
    if (!ex.is_array() || ex.empty()) config_error(child(base, "experiments"), "expected a nonempty array");
    for (std::size_t i = 0; i < ex.size(); ++i) {
      const auto sub = parse_at(ex[i], child(child(base, "experiments"), std::to_string(i)), true, cfg.seed);
      if (sub.kind == "full-suite") config_error(child(child(child(base, "experiments"), std::to_string(i)), "kind"), "suites cannot nest");
    }
  }
  cfg.raw = doc;
  cfg.raw.erase("output_dir");
  cfg.raw["schema_version"] = kSchemaVersion;
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) { return parse_at(doc, "", false, 0); }

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigError, "config: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace polydecay::harness
