#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "srtfd/buffer.hpp"
#include "srtfd/common.hpp"
#include "srtfd/cupl.hpp"
#include "srtfd/data.hpp"
#include "srtfd/gbt.hpp"
#include "srtfd/metrics.hpp"
#include "srtfd/model.hpp"
#include "srtfd/rcs.hpp"

namespace srtfd {
namespace pipeline {

struct LabeledSample {
  uint64_t id = 0;
  FeatureVec features;
  int label = 0;
};

struct UnlabeledSample {
  uint64_t id = 0;
  FeatureVec features;
};

/// What the learning agent is allowed to see of a stream batch.
struct AgentBatchView {
  int64_t step = 0;
  int condition_id = 0;
  const std::vector<LabeledSample>& labeled;
  const std::vector<UnlabeledSample>& unlabeled;
};

/// One arriving batch. `hidden_labels` parallels `unlabeled` and exists only
/// for the evaluation driver; agents receive the view above.
struct StreamBatch {
  int64_t step = 0;
  int task = 0;
  int condition_id = 0;
  std::vector<LabeledSample> labeled;
  std::vector<UnlabeledSample> unlabeled;
  std::vector<int> hidden_labels;

  AgentBatchView agent_view() const { return {step, condition_id, labeled, unlabeled}; }
};

enum class ScenarioMode { ClassIncremental, VariableCondition };

struct NoiseRange {
  int64_t start_step = 0;  // applies from this step until the next range starts
  double sigma = 0.0;
};

struct ScenarioConfig {
  ScenarioMode mode = ScenarioMode::ClassIncremental;
  int num_tasks = 1;
  int batch_size = 100;
  double labeled_fraction = 0.05;
  int64_t init_normal_count = 1000;
  std::vector<NoiseRange> noise_schedule;  // empty => one sigma step of noise_step per task
  double noise_step = 0.1;
};

struct StreamPlan {
  std::vector<StreamBatch> batches;
  std::vector<FeatureVec> init_normals;
  int class_count = 0;
  int feature_dim = 0;
  int num_tasks = 0;
};

/// Task k introduces fault class k (classes recycled in turn when tasks
/// outnumber classes); normal samples are split equally across tasks.
/// init_normal_count normals are reserved for initialization.
StreamPlan make_class_incremental(const data::Dataset& dataset, const ScenarioConfig& cfg,
                                  Rng& rng);

/// Stationary class mix with scheduled condition shifts: additive Gaussian
/// feature noise per schedule range, or partition switches for datasets with
/// multiple recorded conditions.
StreamPlan make_variable_condition(const data::Dataset& dataset, const ScenarioConfig& cfg,
                                   Rng& rng);

struct StepReport {
  int64_t step = 0;
  int task = 0;
  int condition_id = 0;
  int n_labeled = 0;
  int n_unlabeled = 0;
  int n_accepted_positive = 0;
  int n_accepted_negative = 0;
  int n_clusters = 0;
  int n_clusters_dropped = 0;
  int n_candidates = 0;  // samples surviving the redundancy filter
  int coreset_size = 0;
  int replay_size = 0;
  int head_size = 0;
  bool trained = false;
  double loss = 0.0;
  uint64_t model_hash_after = 0;
  double cum_macro_f1 = 0.0;  // running prequential metrics, filled by the driver
  double cum_gmean = 0.0;
  int64_t predict_ns = 0;  // wall clock, excluded from determinism comparisons
  int64_t update_ns = 0;
  std::optional<gbt::BalanceState> balance;                   // audit
  std::optional<std::vector<std::vector<double>>> kl_matrix;  // audit
  std::optional<std::vector<int>> candidate_classes;          // audit: post-filter pool
  std::optional<std::vector<int>> buffer_counts;              // audit: pre-update buffer
};

struct StepResult {
  std::vector<PredictionOutput> predictions;  // one per unlabeled sample
  StepReport report;
};

using Clock = std::function<int64_t()>;  // nanoseconds

struct AgentConfig {
  bool use_rcs = true;
  bool use_gbt = true;
  bool use_cupl = true;
  bool accept_all_pseudo = false;  // ER-with-all-pseudo-labels variant
  bool uniform_replay = false;     // class-blind replay draws (ER baseline)
  int epochs_per_step = 1;
  std::size_t replay_size = 100;
  bool audit = false;
  uint64_t seed = 0;                  // drives the predict/replay streams
  std::vector<int> hidden_dims{64, 32};
  int initial_class_count = 1;        // normal only; the head grows with labels
  ModelConfig model;                  // layer_dims are derived, not read
  BufferConfig buffer;                // feature_dim is derived, not read
  rcs::RcsConfig rcs;
  gbt::FocalLossConfig loss;
  cupl::CuplConfig cupl;
};

/// The per-batch learning loop: predict (prequentially), pseudo-label, filter
/// redundant clusters, select a balanced coreset, update, remember. The
/// RCS/GBT/CUPL stages can be toggled off — that is how the ER baseline and
/// the ablation variants run through the same code path.
class OnlineLearner {
 public:
  OnlineLearner(AgentConfig cfg, int feature_dim, Clock clock = nullptr);

  /// Pre-trains on normal samples, seeds the replay buffer with them.
  void initialize(const std::vector<FeatureVec>& normal_samples);

  StepResult run_step(const AgentBatchView& view);

  const Model& model() const { return model_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const AgentConfig& config() const { return cfg_; }
  const std::vector<uint64_t>& coreset_ledger() const { return ledger_; }
  std::size_t distinct_unlabeled_trained() const { return trained_unlabeled_ids_.size(); }

 private:
  void grow_head_if_needed(const std::vector<LabeledSample>& labeled);
  void maybe_update(const AgentBatchView& view,
                    const std::vector<cupl::PseudoLabeledSample>& coreset,
                    const std::vector<cupl::PseudoLabeledSample>& negatives, StepReport& report);

  AgentConfig cfg_;
  Model model_;
  ReplayBuffer buffer_;
  Rng predict_rng_;
  Rng replay_rng_;
  Clock clock_;
  std::vector<uint64_t> ledger_;  // accepted coreset ids, in order
  std::unordered_set<uint64_t> ledger_set_;
  std::unordered_set<uint64_t> trained_unlabeled_ids_;
  uint64_t next_internal_id_ = 1;  // ids for initialization entries
  bool initialized_ = false;
};

/// Maps an agent name to the component toggles: "SRTFD" enables everything;
/// "ER" is the replay baseline (ground-truth only, uniform reservoir, plain
/// cross-entropy); "ER_ALL" additionally trains on every pseudo-label with no
/// gating or selection.
AgentConfig make_agent_config(const std::string& agent_name, AgentConfig base);

struct RunSummary {
  metrics::RunMetrics run_metrics;           // per-task Avg-End evaluation
  metrics::MetricsSummary prequential;       // cumulative test-then-train metrics
  metrics::ConfusionMatrix prequential_confusion;
  std::vector<StepReport> reports;
  std::size_t total_unlabeled = 0;
  std::size_t distinct_unlabeled_trained = 0;
  double training_time_seconds = 0.0;
  uint64_t final_model_hash = 0;
};

/// Drives a full stream: fits the standardizer on the initialization pool,
/// initializes the agent, replays every batch prequentially, then evaluates
/// each task once more with the final model.
RunSummary run_stream(OnlineLearner& learner, const StreamPlan& plan);

}  // namespace pipeline
}  // namespace srtfd
