#pragma once

#include <cstdint>
#include <vector>

#include "srtfd/common.hpp"

namespace srtfd {
namespace metrics {

struct ConfusionMatrix {
  int classes = 0;
  std::vector<int64_t> counts;  // counts[true * classes + predicted]

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(int c) : classes(c), counts(static_cast<std::size_t>(c) * c, 0) {}

  void add(int true_label, int predicted, int64_t n = 1) {
    counts[static_cast<std::size_t>(true_label) * classes + predicted] += n;
  }
  int64_t at(int true_label, int predicted) const {
    return counts[static_cast<std::size_t>(true_label) * classes + predicted];
  }
  int64_t total() const;
};

struct ClassMetrics {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  bool has_support = false;  // class appears as a true label
  bool predicted = false;    // class appears as a prediction
};

/// Macro one-vs-rest metrics of a single confusion matrix. Zero-support
/// classes are excluded from every macro average; classes never predicted are
/// excluded from macro precision (their recall still counts, so their F1 is 0
/// and the G-mean picks up the zero recall factor).
struct MetricsSummary {
  double macro_recall = 0.0;
  double macro_precision = 0.0;
  double macro_f1 = 0.0;
  double gmean = 0.0;  // geometric mean of per-class recalls over supported classes
  std::vector<ClassMetrics> per_class;
  std::vector<int> zero_support_classes;
  std::vector<int> never_predicted_classes;
};

MetricsSummary compute_summary(const ConfusionMatrix& m);

struct RunMetrics {
  std::vector<ConfusionMatrix> per_task;
  std::vector<MetricsSummary> per_task_summary;
  double avg_end_recall = 0.0;
  double avg_end_precision = 0.0;
  double avg_end_f1 = 0.0;
  double avg_end_gmean = 0.0;
  double training_time_seconds = 0.0;  // update-phase wall time only
};

/// Aggregates per-task matrices evaluated with the final model into the
/// Avg-End metrics (mean of each per-task macro metric over tasks).
RunMetrics compute_metrics(const std::vector<ConfusionMatrix>& per_task);

}  // namespace metrics
}  // namespace srtfd
