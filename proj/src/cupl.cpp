#include "srtfd/cupl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace srtfd {
namespace cupl {

GateDecision gate(const PredictionOutput& prediction, const CuplConfig& cfg) {
  GateDecision d;
  d.label = prediction.predicted_class;
  d.confidence = prediction.mc_mean[static_cast<std::size_t>(prediction.predicted_class)];
  d.uncertainty = prediction.mc_variance;
  const bool low_uncertainty = d.uncertainty <= cfg.kappa;
  if (low_uncertainty && d.confidence >= cfg.tau_p) {
    d.accepted = true;
    d.polarity = Polarity::Positive;
  } else if (low_uncertainty && d.confidence <= cfg.tau_n) {
    d.accepted = true;
    d.polarity = Polarity::Negative;
  } else {
    d.accepted = false;
    d.polarity = d.confidence <= cfg.tau_n ? Polarity::Negative : Polarity::Positive;
  }
  return d;
}

std::vector<PseudoLabeledSample> gate_batch(const std::vector<FeatureVec>& batch,
                                            const std::vector<PredictionOutput>& predictions,
                                            const CuplConfig& cfg,
                                            const std::vector<uint64_t>& ids) {
  if (batch.size() != predictions.size())
    throw ShapeError("gate_batch: batch and prediction counts differ");
  if (!ids.empty() && ids.size() != batch.size())
    throw ShapeError("gate_batch: ids and batch counts differ");
  if (cfg.tau_n >= cfg.tau_p)
    throw std::invalid_argument("gate_batch: tau_n must be below tau_p");

  std::vector<PseudoLabeledSample> out;
  out.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const GateDecision d = gate(predictions[i], cfg);
    PseudoLabeledSample s;
    s.features = batch[i];
    s.pseudo_label = d.label;
    s.polarity = d.polarity;
    s.confidence = d.confidence;
    s.uncertainty = d.uncertainty;
    s.accepted = d.accepted;
    if (!ids.empty()) s.id = ids[i];
    out.push_back(std::move(s));

    if (cfg.negative_any_class && d.uncertainty <= cfg.kappa) {
      // Optional sweep: every non-argmax class under the negative threshold
      // contributes its own negative label.
      const auto& mean = predictions[i].mc_mean;
      for (std::size_t k = 0; k < mean.size(); ++k) {
        if (static_cast<int>(k) == d.label) continue;
        if (mean[k] <= cfg.tau_n) {
          PseudoLabeledSample neg;
          neg.features = batch[i];
          neg.pseudo_label = static_cast<int>(k);
          neg.polarity = Polarity::Negative;
          neg.confidence = mean[k];
          neg.uncertainty = d.uncertainty;
          neg.accepted = true;
          if (!ids.empty()) neg.id = ids[i];
          out.push_back(std::move(neg));
        }
      }
    }
  }
  return out;
}

std::vector<PseudoLabeledSample> pseudo_label(const std::vector<FeatureVec>& batch,
                                              const Model& model, const CuplConfig& cfg,
                                              Rng& rng) {
  if (model.class_count() < 2)
    throw std::invalid_argument("pseudo_label: model must output at least two classes");
  std::vector<PredictionOutput> predictions;
  predictions.reserve(batch.size());
  for (const FeatureVec& x : batch) predictions.push_back(model.mc_predict(x, cfg.mc_passes, rng));
  return gate_batch(batch, predictions, cfg);
}

gbt::LossGrad negative_loss_term(const std::vector<double>& probabilities, int negated_class,
                                 double gamma, double weight,
                                 gbt::FocalLossConfig::NegativeMode mode) {
  if (negated_class < 0 || negated_class >= static_cast<int>(probabilities.size()))
    throw std::invalid_argument("negative_loss_term: class outside the probability vector");

  gbt::LossGrad out;
  out.dlogits.assign(probabilities.size(), 0.0);
  if (mode == gbt::FocalLossConfig::NegativeMode::Ignore) return out;

  const double pk = std::min(probabilities[static_cast<std::size_t>(negated_class)], 1.0 - 1e-12);
  const double mod = std::pow(pk, gamma);
  out.loss = weight * mod * (-std::log(1.0 - pk));

  // dL/dz_j = w * (delta_kj - p_j) * [p_k^(gamma+1)/(1-p_k) - gamma p_k^gamma ln(1-p_k)]
  double factor = mod * pk / (1.0 - pk);
  if (gamma > 0.0 && pk > 0.0) factor -= gamma * mod * std::log(1.0 - pk);
  for (std::size_t j = 0; j < probabilities.size(); ++j) {
    const double delta = (static_cast<int>(j) == negated_class) ? 1.0 : 0.0;
    out.dlogits[j] = weight * (delta - probabilities[j]) * factor;
  }
  return out;
}

}  // namespace cupl
}  // namespace srtfd
