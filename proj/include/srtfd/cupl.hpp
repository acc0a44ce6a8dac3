#pragma once

#include <cstdint>
#include <vector>

#include "srtfd/common.hpp"
#include "srtfd/gbt.hpp"
#include "srtfd/model.hpp"

namespace srtfd {
namespace cupl {

struct CuplConfig {
  double tau_p = 0.95;  // positive confidence threshold, in (0,1]
  double tau_n = 0.45;  // negative confidence threshold, in [0,1), < tau_p
  double kappa = 0.02;  // MC-dropout variance threshold (raw probability scale)
  int mc_passes = 10;
  // When set, every class whose probability clears the negative gate yields a
  // negative label, not just the argmax class.
  bool negative_any_class = false;
};

enum class Polarity { Positive, Negative };

struct PseudoLabeledSample {
  FeatureVec features;
  int pseudo_label = 0;  // argmax class; with Negative polarity read as "not this class"
  Polarity polarity = Polarity::Positive;
  double confidence = 0.0;   // max of the MC-mean probabilities
  double uncertainty = 0.0;  // reduced MC variance
  bool accepted = false;
  uint64_t id = 0;  // caller-assigned sample identity
};

struct GateDecision {
  bool accepted = false;
  Polarity polarity = Polarity::Positive;
  int label = 0;
  double confidence = 0.0;
  double uncertainty = 0.0;
};

/// Pure threshold logic of the selection function: accept positively when
/// confidence >= tau_p and variance <= kappa, negatively when
/// confidence <= tau_n and variance <= kappa.
GateDecision gate(const PredictionOutput& prediction, const CuplConfig& cfg);

/// Gates precomputed per-sample predictions (the pipeline reuses the
/// prequential MC passes here instead of predicting twice). When `ids` is
/// nonempty it must parallel `batch`; emitted samples carry their source id.
std::vector<PseudoLabeledSample> gate_batch(const std::vector<FeatureVec>& batch,
                                            const std::vector<PredictionOutput>& predictions,
                                            const CuplConfig& cfg,
                                            const std::vector<uint64_t>& ids = {});

/// Runs mc_predict on every sample, then gates.
std::vector<PseudoLabeledSample> pseudo_label(const std::vector<FeatureVec>& batch,
                                              const Model& model, const CuplConfig& cfg, Rng& rng);

/// Training term for a negative pseudo-label ("not class k"). Complement mode
/// returns weight * (p_k)^gamma * (-ln(1-p_k)) with its gradient through
/// softmax; ignore mode contributes exactly zero.
gbt::LossGrad negative_loss_term(const std::vector<double>& probabilities, int negated_class,
                                 double gamma, double weight,
                                 gbt::FocalLossConfig::NegativeMode mode);

}  // namespace cupl
}  // namespace srtfd
