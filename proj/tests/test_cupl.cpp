#include <cmath>

#include "doctest.h"
#include "srtfd/cupl.hpp"

using namespace srtfd;
using namespace srtfd::cupl;

namespace {

PredictionOutput prediction(std::vector<double> mean, double variance) {
  PredictionOutput p;
  p.mc_mean = std::move(mean);
  p.probabilities = p.mc_mean;
  p.predicted_class = static_cast<int>(
      std::max_element(p.mc_mean.begin(), p.mc_mean.end()) - p.mc_mean.begin());
  p.mc_variance = variance;
  return p;
}

CuplConfig config(double tau_p, double tau_n, double kappa) {
  CuplConfig cfg;
  cfg.tau_p = tau_p;
  cfg.tau_n = tau_n;
  cfg.kappa = kappa;
  return cfg;
}

PredictionOutput random_prediction(Rng& rng, int classes = 4) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> p(static_cast<std::size_t>(classes));
  double sum = 0.0;
  for (double& v : p) {
    v = u(rng);
    sum += v;
  }
  for (double& v : p) v /= sum;
  std::uniform_real_distribution<double> var(0.0, 0.05);
  return prediction(std::move(p), var(rng));
}

}  // namespace

TEST_SUITE_BEGIN("cupl");

TEST_CASE("confident low-uncertainty samples pass the positive gate") {
  const auto d = gate(prediction({0.03, 0.97}, 0.001), config(0.95, 0.45, 0.01));
  CHECK(d.accepted);
  CHECK(d.polarity == Polarity::Positive);
  CHECK(d.label == 1);
  CHECK(d.confidence == doctest::Approx(0.97));
}

TEST_CASE("high uncertainty vetoes an otherwise confident sample") {
  const auto d = gate(prediction({0.03, 0.97}, 0.5), config(0.95, 0.45, 0.01));
  CHECK_FALSE(d.accepted);
}

TEST_CASE("a uniform 3-class output becomes a negative label") {
  const auto d = gate(prediction({1.0 / 3, 1.0 / 3, 1.0 / 3}, 1e-4), config(0.95, 0.45, 0.01));
  CHECK(d.accepted);
  CHECK(d.polarity == Polarity::Negative);
  CHECK(d.label == 0);  // argmax tie resolves to the lowest class
  CHECK(d.confidence == doctest::Approx(1.0 / 3));
}

TEST_CASE("mid-confidence samples are rejected but reported") {
  const auto d = gate(prediction({0.3, 0.7}, 1e-4), config(0.95, 0.45, 0.01));
  CHECK_FALSE(d.accepted);
  const auto samples = gate_batch({{1.0, 2.0}}, {prediction({0.3, 0.7}, 1e-4)},
                                  config(0.95, 0.45, 0.01), {42});
  REQUIRE(samples.size() == 1);
  CHECK_FALSE(samples[0].accepted);
  CHECK(samples[0].id == 42);
  CHECK(samples[0].confidence == doctest::Approx(0.7));
}

TEST_CASE("raising tau_p never accepts a previously rejected positive") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_prediction(rng);
    const auto lo = gate(p, config(0.6, 0.2, 0.02));
    const auto hi = gate(p, config(0.9, 0.2, 0.02));
    const bool lo_pos = lo.accepted && lo.polarity == Polarity::Positive;
    const bool hi_pos = hi.accepted && hi.polarity == Polarity::Positive;
    if (hi_pos) CHECK(lo_pos);
  }
}

TEST_CASE("raising kappa never rejects a previously accepted sample") {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_prediction(rng);
    const auto tight = gate(p, config(0.6, 0.2, 0.01));
    const auto loose = gate(p, config(0.6, 0.2, 0.04));
    if (tight.accepted) CHECK(loose.accepted);
  }
}

TEST_CASE("accepted samples always satisfy the gate invariant") {
  Rng rng(7);
  const auto cfg = config(0.7, 0.3, 0.02);
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_prediction(rng);
    const auto d = gate(p, cfg);
    if (!d.accepted) continue;
    if (d.polarity == Polarity::Positive) {
      CHECK(d.confidence >= cfg.tau_p);
      CHECK(d.uncertainty <= cfg.kappa);
    } else {
      CHECK(d.confidence <= cfg.tau_n);
      CHECK(d.uncertainty <= cfg.kappa);
    }
  }
}

TEST_CASE("with dropout 0 acceptance reduces to pure confidence thresholds") {
  ModelConfig mc;
  mc.layer_dims = {3, 6, 3};
  mc.dropout_rate = 0.0;
  mc.rng_seed = 9;
  mc.learning_rate = 0.1;
  const Model model(mc);
  CuplConfig cfg = config(0.5, 0.34, 0.0);  // kappa 0: only zero variance passes
  cfg.mc_passes = 7;

  Rng rng(11);
  std::normal_distribution<double> g(0.0, 2.0);
  std::vector<FeatureVec> batch;
  for (int i = 0; i < 200; ++i) batch.push_back({g(rng), g(rng), g(rng)});

  Rng mc_rng(13);
  const auto samples = pseudo_label(batch, model, cfg, mc_rng);
  REQUIRE(samples.size() == batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto probs = model.forward(batch[i]);
    const double conf = *std::max_element(probs.begin(), probs.end());
    CHECK(samples[i].uncertainty == 0.0);
    const bool expected = conf >= cfg.tau_p || conf <= cfg.tau_n;
    CHECK(samples[i].accepted == expected);
  }
}

TEST_CASE("pseudo_label rejects single-class models") {
  ModelConfig mc;
  mc.layer_dims = {2, 1};
  mc.rng_seed = 1;
  const Model model(mc);
  Rng rng(3);
  CHECK_THROWS_AS(pseudo_label({{0.0, 0.0}}, model, CuplConfig{}, rng), std::invalid_argument);
}

TEST_CASE("negative term vanishes when no mass sits on the negated class") {
  const auto lg = negative_loss_term({0.0, 1.0}, 0, 2.0, 1.0,
                                     gbt::FocalLossConfig::NegativeMode::Complement);
  CHECK(lg.loss == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ignore mode contributes exactly zero") {
  const auto lg = negative_loss_term({0.4, 0.6}, 1, 2.0, 0.7,
                                     gbt::FocalLossConfig::NegativeMode::Ignore);
  CHECK(lg.loss == 0.0);
  for (double g : lg.dlogits) CHECK(g == 0.0);
}

TEST_CASE("complement loss at p=0.5 with gamma 0 is ln 2") {
  const auto lg = negative_loss_term({0.5, 0.5}, 0, 0.0, 1.0,
                                     gbt::FocalLossConfig::NegativeMode::Complement);
  CHECK(lg.loss == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("negative-term gradient matches finite differences") {
  Rng rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  for (double gamma : {0.0, 1.0, 2.0}) {
    for (int inst = 0; inst < 25; ++inst) {
      std::vector<double> logits(4);
      for (double& z : logits) z = g(rng);
      std::uniform_int_distribution<int> pick(0, 3);
      const int k = pick(rng);
      const auto analytic =
          negative_loss_term(softmax(logits), k, gamma, 0.7,
                             gbt::FocalLossConfig::NegativeMode::Complement)
              .dlogits;
      for (std::size_t j = 0; j < 4; ++j) {
        auto eval = [&](double delta) {
          std::vector<double> z = logits;
          z[j] += delta;
          return negative_loss_term(softmax(z), k, gamma, 0.7,
                                    gbt::FocalLossConfig::NegativeMode::Complement)
              .loss;
        };
        const double h = 1e-6;
        const double fd = (eval(h) - eval(-h)) / (2.0 * h);
        const double scale = std::max({1.0, std::abs(analytic[j]), std::abs(fd)});
        CHECK(std::abs(analytic[j] - fd) / scale < 1e-4);
      }
    }
  }
}

TEST_CASE("any-class negative sweep emits one sample per qualifying class") {
  CuplConfig cfg = config(0.95, 0.25, 0.05);
  cfg.negative_any_class = true;
  // argmax class 0 at 0.5 (rejected both ways), classes 2 and 3 under tau_n.
  const auto samples =
      gate_batch({{1.0}}, {prediction({0.5, 0.3, 0.15, 0.05}, 0.001)}, cfg, {9});
  REQUIRE(samples.size() == 3);  // the primary rejected sample + two negatives
  CHECK_FALSE(samples[0].accepted);
  CHECK(samples[1].accepted);
  CHECK(samples[1].polarity == Polarity::Negative);
  CHECK(samples[1].pseudo_label == 2);
  CHECK(samples[2].pseudo_label == 3);
  CHECK(samples[2].id == 9);
}

TEST_SUITE_END();
