#include "srtfd/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "srtfd/rcs.hpp"

namespace srtfd {
namespace gbt {

LossGrad focal_loss(const std::vector<double>& probabilities, int label, double gamma,
                    double weight) {
  if (label < 0 || label >= static_cast<int>(probabilities.size()))
    throw std::invalid_argument("focal_loss: label outside the probability vector");
  if (gamma < 0.0) throw std::invalid_argument("focal_loss: gamma must be nonnegative");

  const double py = std::max(probabilities[static_cast<std::size_t>(label)], 1e-12);
  const double t = 1.0 - py;
  const double mod = std::pow(t, gamma);  // (1-p_y)^gamma; pow(0,0)=1 gives the CE limit

  LossGrad out;
  out.loss = weight * mod * (-std::log(py));

  // dL/dz_j = w * (delta_yj - p_j) * [gamma p_y (1-p_y)^(gamma-1) ln p_y - (1-p_y)^gamma]
  double factor = -mod;
  if (gamma > 0.0 && t > 0.0) factor += gamma * py * std::pow(t, gamma - 1.0) * std::log(py);
  out.dlogits.resize(probabilities.size());
  for (std::size_t j = 0; j < probabilities.size(); ++j) {
    const double delta = (static_cast<int>(j) == label) ? 1.0 : 0.0;
    out.dlogits[j] = weight * (delta - probabilities[j]) * factor;
  }
  return out;
}

double imbalance_objective(const std::vector<double>& ps, const std::vector<double>& pb, int c,
                           int s, int bc, int bn, ObjectiveMode mode, double lambda) {
  double coreset_term = 0.0;
  if (c > 0) {
    const double target =
        (mode == ObjectiveMode::Verbatim) ? static_cast<double>(c) / std::max(s, 1) : 1.0 / c;
    for (double p : ps) coreset_term += std::abs(p - target);
    coreset_term /= c;
    if (mode == ObjectiveMode::Verbatim) coreset_term *= lambda;
  }
  double buffer_term = 0.0;
  if (bc > 0 && bn > 0) {
    const double target =
        (mode == ObjectiveMode::Verbatim) ? static_cast<double>(bc) / bn : 1.0 / bc;
    for (double p : pb) buffer_term += std::abs(p - target);
    buffer_term /= bc;
  }
  return coreset_term + buffer_term;
}

BalancedSelection balanced_select(const std::vector<FeatureVec>& candidates,
                                  const std::vector<int>& predicted_classes,
                                  const std::vector<int>& buffer_counts,
                                  std::size_t target_size) {
  if (target_size < 1) throw std::invalid_argument("balanced_select: target size must be >= 1");
  if (candidates.size() != predicted_classes.size())
    throw ShapeError("balanced_select: candidates and predicted classes differ in length");

  int c = static_cast<int>(buffer_counts.size());
  for (int cls : predicted_classes) {
    if (cls < 0) throw std::invalid_argument("balanced_select: negative class id");
    c = std::max(c, cls + 1);
  }
  if (c == 0) c = 1;

  // Per-class candidate queues in farthest-point traversal order.
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    by_class[predicted_classes[i]].push_back(i);
  std::map<int, std::vector<std::size_t>> queues;
  for (auto& [cls, idxs] : by_class) {
    std::vector<FeatureVec> pts;
    pts.reserve(idxs.size());
    for (std::size_t i : idxs) pts.push_back(candidates[i]);
    std::vector<std::size_t> order = rcs::farthest_point_order(pts);
    std::vector<std::size_t>& q = queues[cls];
    q.reserve(order.size());
    for (std::size_t local : order) q.push_back(idxs[local]);
  }
  std::map<int, std::size_t> cursor;

  int64_t buffer_total = 0;
  for (int n : buffer_counts) buffer_total += n;

  std::vector<int64_t> selected_counts(static_cast<std::size_t>(c), 0);
  std::vector<std::size_t> selection;
  selection.reserve(std::min<std::size_t>(target_size, candidates.size()));

  while (selection.size() < target_size) {
    // Joint deficit: uniform target minus the combined buffer+selection
    // proportion; picking the most deficient class is the "global" part.
    const double denom = static_cast<double>(buffer_total) + selection.size();
    int best_class = -1;
    double best_deficit = 0.0;
    for (const auto& [cls, q] : queues) {
      if (cursor[cls] >= q.size()) continue;
      const int64_t in_buffer =
          (cls < static_cast<int>(buffer_counts.size())) ? buffer_counts[cls] : 0;
      const double combined =
          denom > 0.0 ? (in_buffer + selected_counts[static_cast<std::size_t>(cls)]) / denom : 0.0;
      const double deficit = 1.0 / c - combined;
      if (best_class < 0 || deficit > best_deficit) {
        best_class = cls;
        best_deficit = deficit;
      }
    }
    if (best_class < 0) break;  // candidates exhausted
    std::vector<std::size_t>& q = queues[best_class];
    selection.push_back(q[cursor[best_class]++]);
    ++selected_counts[static_cast<std::size_t>(best_class)];
  }

  BalancedSelection out;
  out.selected = std::move(selection);
  out.state.target_proportion = 1.0 / c;
  out.state.coreset_proportions.assign(static_cast<std::size_t>(c), 0.0);
  if (!out.selected.empty())
    for (std::size_t k = 0; k < static_cast<std::size_t>(c); ++k)
      out.state.coreset_proportions[k] =
          static_cast<double>(selected_counts[k]) / static_cast<double>(out.selected.size());
  out.state.buffer_proportions.assign(static_cast<std::size_t>(c), 0.0);
  if (buffer_total > 0)
    for (std::size_t k = 0; k < buffer_counts.size(); ++k)
      out.state.buffer_proportions[k] =
          static_cast<double>(buffer_counts[k]) / static_cast<double>(buffer_total);

  out.state.global_proportions.assign(static_cast<std::size_t>(c), 0.0);
  const double pool = static_cast<double>(buffer_total) + static_cast<double>(out.selected.size());
  if (pool > 0.0)
    for (int k = 0; k < c; ++k) {
      const int64_t in_buffer =
          (k < static_cast<int>(buffer_counts.size())) ? buffer_counts[static_cast<std::size_t>(k)]
                                                       : 0;
      out.state.global_proportions[static_cast<std::size_t>(k)] =
          (static_cast<double>(in_buffer) + selected_counts[static_cast<std::size_t>(k)]) / pool;
    }

  std::vector<double> pb_nonempty;
  for (std::size_t k = 0; k < buffer_counts.size(); ++k)
    if (buffer_counts[k] > 0) pb_nonempty.push_back(out.state.buffer_proportions[k]);
  out.state.imbalance_score = imbalance_objective(
      out.state.global_proportions, pb_nonempty, c, static_cast<int>(out.selected.size()),
      static_cast<int>(pb_nonempty.size()), static_cast<int>(buffer_total),
      ObjectiveMode::Normalized);
  return out;
}

}  // namespace gbt
}  // namespace srtfd
