#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srtfd/pipeline.hpp"

namespace srtfd {
namespace config {

/// Shape of a generated blob dataset ("synthN" data specs). Empty
/// per_class_counts derive from the prior rule 0.9, 0.09, 0.009, ... and
/// empty separations default to 6 per fault class.
struct SynthSpec {
  int class_count = 3;
  int dim = 8;
  int64_t total = 5000;
  std::vector<int64_t> per_class_counts;
  std::vector<double> separations;
};

/// Everything a run needs besides the command-line plumbing. The JSON
/// overlay file may set any subset of fields; unset fields keep defaults.
struct RunConfig {
  uint64_t seed = 7;
  pipeline::AgentConfig agent;
  pipeline::ScenarioConfig scenario;
  SynthSpec synth;
};

RunConfig default_run_config();

/// Applies a partial JSON document on top of `cfg`. Unknown keys are an
/// error so typos do not silently fall back to defaults.
void apply_overrides(RunConfig& cfg, const std::string& json_text);
void apply_overrides_file(RunConfig& cfg, const std::string& path);

/// Full echo of the effective configuration, for output file headers.
std::string config_to_json(const RunConfig& cfg);

/// Sets a numeric field by dot path (e.g. "rcs.coreset_ratio"); the sweep
/// operation drives this. Throws ConfigError for unknown or non-numeric
/// fields.
void set_numeric_field(RunConfig& cfg, const std::string& name, double value);

std::vector<int64_t> derive_synth_counts(int class_count, int64_t total);

}  // namespace config
}  // namespace srtfd
