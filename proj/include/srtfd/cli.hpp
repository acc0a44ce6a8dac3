#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srtfd/config.hpp"
#include "srtfd/metrics.hpp"
#include "srtfd/pipeline.hpp"

namespace srtfd {
namespace cli {

/// Run plumbing that arrives on the command line rather than in the config
/// file.
struct RunInvocation {
  std::string data;          // "synthN" or a manifest path
  std::string cl_type = "nc";  // nc = class-incremental, vc = variable condition
  std::string agent = "SRTFD";
  int num_tasks = 1;
  int num_runs = 1;
  std::string out_dir = "out";
  bool audit = false;
};

struct RunOutcome {
  pipeline::RunSummary summary;
  uint64_t run_seed = 0;
};

/// Builds the dataset + stream plan + agent for one seed and drives it.
RunOutcome execute_run(const RunInvocation& inv, const config::RunConfig& cfg, uint64_t run_seed);

struct SweepRow {
  double value = 0.0;
  metrics::RunMetrics run_metrics;
  std::size_t distinct_unlabeled_trained = 0;
  std::size_t total_unlabeled = 0;
  double training_time_seconds = 0.0;
};

/// One run per value with a shared seed; rows back the sensitivity plots.
std::vector<SweepRow> sweep(const std::string& param, const std::vector<double>& values,
                            const RunInvocation& inv, const config::RunConfig& base);

/// Entry point behind the executable: parses flags, runs, writes the output
/// files (RunMetrics JSON, StepReport JSONL, plot CSV), returns the process
/// exit status.
int cli_main(const std::vector<std::string>& args);

}  // namespace cli
}  // namespace srtfd
