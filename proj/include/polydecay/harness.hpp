#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "polydecay/common.hpp"

namespace polydecay::harness {

inline constexpr const char* kPlumbing = "plumbing";
inline constexpr int kSchemaVersion = 1;

/// Validated experiment description. `raw` is the normalized document echoed
/// into the report (without the output directory, so reports written to
/// different places stay byte-identical).
struct ExperimentConfig {
  std::string kind;  // sweep | decay | sharpness | funcspace | rates | full-suite
  std::uint64_t seed = 0;
  nlohmann::json model;   // {family, params, dims, eigs?}; may be null
  nlohmann::json params;  // kind-specific numeric parameters
  std::string output_dir;
  nlohmann::json raw;
};

/// Throws ConfigError with the JSON pointer of the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

struct CheckRecord {
  std::string name;
  std::string anchor;  // descriptive anchor or "plumbing"
  nlohmann::json measured;
  nlohmann::json threshold;
  std::string verdict;  // pass | fail | error
  nlohmann::json to_json() const;
};

struct Report {
  nlohmann::json config;
  std::vector<CheckRecord> checks;
  nlohmann::json environment;
  bool all_pass() const;
  nlohmann::json to_json() const;
  std::string dump() const;  // the bytes written to report.json
};

/// Runs the experiment, writing report.json, CSVs and SVGs under `out_dir`
/// (created if needed). Module errors inside a check become verdict "error".
Report run(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Exit status contract: 0 all pass, 1 some check did not pass, 2 config error.
int exit_status(const Report& report);

nlohmann::json environment_stamp();

/// Anchors a full-suite run must cover.
const std::vector<std::string>& required_anchors();

struct ZooEntry {
  std::string family;
  nlohmann::json parameters;  // name -> description
  std::string anchor;
};
const std::vector<ZooEntry>& zoo_catalog();
std::string list_zoo();

/// Minimal SVG line plot; `logx`/`logy` select log10 axes.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};
std::string svg_plot(const std::string& title, const std::vector<PlotSeries>& series, bool logx, bool logy,
                     const std::string& xlabel, const std::string& ylabel);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace polydecay::harness
