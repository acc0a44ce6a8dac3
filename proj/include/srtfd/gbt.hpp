#pragma once

#include <cstddef>
#include <vector>

#include "srtfd/common.hpp"

namespace srtfd {
namespace gbt {

/// Focal-style imbalance loss settings shared by training and pseudo-label
/// handling. `alpha` weights pseudo-labeled (coreset) samples; ground-truth
/// and buffer samples keep weight 1.
struct FocalLossConfig {
  enum class NegativeMode { Ignore, Complement };

  double gamma = 2.0;
  double alpha = 0.7;
  NegativeMode negative_mode = NegativeMode::Complement;
};

/// Class-proportion snapshot of a finished selection, for audit streams.
/// The imbalance_score evaluates the normalized objective with the coreset
/// term taken over the post-selection training pool (buffer plus selection):
/// that union is what the global greedy balances, and what the buffer becomes
/// once the coreset is remembered.
struct BalanceState {
  std::vector<double> coreset_proportions;  // one per class, sums to 1 when nonempty
  std::vector<double> buffer_proportions;   // one per class, sums to 1 when buffer nonempty
  std::vector<double> global_proportions;   // buffer + selection combined
  double target_proportion = 0.0;           // 1/c
  double imbalance_score = 0.0;
};

struct BalancedSelection {
  std::vector<std::size_t> selected;  // indices into the candidate pool
  BalanceState state;
};

struct LossGrad {
  double loss = 0.0;
  std::vector<double> dlogits;  // gradient wrt the pre-softmax logits
};

/// Per-sample focal term: weight * (1-p_y)^gamma * (-ln p_y), with its exact
/// gradient through softmax. p_y is clamped at 1e-12.
LossGrad focal_loss(const std::vector<double>& probabilities, int label, double gamma,
                    double weight);

enum class ObjectiveMode {
  Normalized,  // per-class target 1/c (and 1/bc for the buffer term)
  Verbatim,    // targets c/s and bc/bn, kept for auditing
};

/// Joint coreset/buffer imbalance objective. `ps` has one entry per class
/// (length c), `pb` one entry per nonempty buffer class (length bc).
/// `lambda` scales the coreset term in verbatim mode only.
double imbalance_objective(const std::vector<double>& ps, const std::vector<double>& pb, int c,
                           int s, int bc, int bn, ObjectiveMode mode, double lambda = 1.0);

/// Greedy globally-balanced selection: repeatedly takes a sample from the
/// class whose combined buffer+selection proportion is furthest below the
/// uniform target, consuming each class's candidates in farthest-point order.
/// Stops at `target_size` or when candidates run out.
BalancedSelection balanced_select(const std::vector<FeatureVec>& candidates,
                                  const std::vector<int>& predicted_classes,
                                  const std::vector<int>& buffer_counts, std::size_t target_size);

}  // namespace gbt
}  // namespace srtfd
