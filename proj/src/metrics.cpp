#include "srtfd/metrics.hpp"

#include <cmath>

namespace srtfd {
namespace metrics {

int64_t ConfusionMatrix::total() const {
  int64_t t = 0;
  for (int64_t v : counts) t += v;
  return t;
}

MetricsSummary compute_summary(const ConfusionMatrix& m) {
  if (m.classes <= 0 || m.total() == 0)
    throw UndefinedMetricError("metrics: confusion matrix holds no samples");

  const int c = m.classes;
  MetricsSummary s;
  s.per_class.resize(static_cast<std::size_t>(c));

  double recall_sum = 0.0, precision_sum = 0.0, f1_sum = 0.0, log_recall_sum = 0.0;
  int supported = 0, precision_classes = 0;
  bool zero_recall = false;

  for (int k = 0; k < c; ++k) {
    int64_t support = 0, predicted = 0;
    for (int j = 0; j < c; ++j) {
      support += m.at(k, j);
      predicted += m.at(j, k);
    }
    const int64_t tp = m.at(k, k);
    ClassMetrics& cm = s.per_class[static_cast<std::size_t>(k)];
    cm.has_support = support > 0;
    cm.predicted = predicted > 0;
    if (!cm.has_support) {
      s.zero_support_classes.push_back(k);
      continue;
    }
    ++supported;
    cm.recall = static_cast<double>(tp) / static_cast<double>(support);
    recall_sum += cm.recall;
    if (cm.recall > 0.0)
      log_recall_sum += std::log(cm.recall);
    else
      zero_recall = true;
    if (cm.predicted) {
      cm.precision = static_cast<double>(tp) / static_cast<double>(predicted);
      precision_sum += cm.precision;
      ++precision_classes;
    } else {
      s.never_predicted_classes.push_back(k);
    }
    const double pr = cm.precision + cm.recall;
    cm.f1 = pr > 0.0 ? 2.0 * cm.precision * cm.recall / pr : 0.0;
    f1_sum += cm.f1;
  }

  if (supported == 0) throw UndefinedMetricError("metrics: no class has support");
  s.macro_recall = recall_sum / supported;
  s.macro_precision = precision_classes > 0 ? precision_sum / precision_classes : 0.0;
  s.macro_f1 = f1_sum / supported;
  s.gmean = zero_recall ? 0.0 : std::exp(log_recall_sum / supported);
  return s;
}

RunMetrics compute_metrics(const std::vector<ConfusionMatrix>& per_task) {
  if (per_task.empty()) throw UndefinedMetricError("metrics: no task matrices");
  RunMetrics rm;
  rm.per_task = per_task;
  rm.per_task_summary.reserve(per_task.size());
  for (const ConfusionMatrix& m : per_task) rm.per_task_summary.push_back(compute_summary(m));
  for (const MetricsSummary& s : rm.per_task_summary) {
    rm.avg_end_recall += s.macro_recall;
    rm.avg_end_precision += s.macro_precision;
    rm.avg_end_f1 += s.macro_f1;
    rm.avg_end_gmean += s.gmean;
  }
  const auto n = static_cast<double>(per_task.size());
  rm.avg_end_recall /= n;
  rm.avg_end_precision /= n;
  rm.avg_end_f1 /= n;
  rm.avg_end_gmean /= n;
  return rm;
}

}  // namespace metrics
}  // namespace srtfd
