#include "srtfd/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "srtfd/cupl.hpp"

namespace srtfd {

namespace {

constexpr uint64_t kInitTag = 0x696e6974;  // initial layer fill
constexpr uint64_t kGrowTag = 0x67726f77;  // per-row streams for grown heads

double relu(double z) { return z > 0.0 ? z : 0.0; }
double relu_grad(double z) { return z > 0.0 ? 1.0 : 0.0; }

void validate_config(const ModelConfig& cfg) {
  if (cfg.layer_dims.size() < 2) throw std::invalid_argument("model: need input and output dims");
  for (int d : cfg.layer_dims)
    if (d <= 0) throw std::invalid_argument("model: layer dims must be positive");
  if (cfg.dropout_rate < 0.0 || cfg.dropout_rate >= 1.0)
    throw std::invalid_argument("model: dropout_rate must be in [0,1)");
  if (cfg.learning_rate <= 0.0) throw std::invalid_argument("model: learning_rate must be positive");
}

}  // namespace

std::vector<double> softmax(const std::vector<double>& logits) {
  double m = logits[0];
  for (double z : logits) m = std::max(m, z);
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

Model::Model(ModelConfig cfg) : cfg_(std::move(cfg)) {
  validate_config(cfg_);
  const std::size_t layers = cfg_.layer_dims.size() - 1;
  weights_.reserve(layers);
  biases_.reserve(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    const auto rows = static_cast<std::size_t>(cfg_.layer_dims[l + 1]);
    const auto cols = static_cast<std::size_t>(cfg_.layer_dims[l]);
    weights_.emplace_back(rows, cols);
    biases_.emplace_back(rows, 0.0);
    init_layer(l, 0, rows, kInitTag);
  }
}

void Model::init_layer(std::size_t layer, std::size_t first_row, std::size_t last_row,
                       uint64_t tag) {
  Mat& w = weights_[layer];
  const double bound = cfg_.init_scale / std::sqrt(static_cast<double>(w.cols));
  if (tag == kInitTag) {
    Rng rng(mix_seed(cfg_.rng_seed, mix_seed(tag, layer)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (std::size_t r = first_row; r < last_row; ++r)
      for (std::size_t c = 0; c < w.cols; ++c) w(r, c) = dist(rng);
    return;
  }
  // Grown rows draw from one stream per absolute row index, so the result of
  // growing 2->4 matches growing 2->3 then 3->4.
  for (std::size_t r = first_row; r < last_row; ++r) {
    Rng rng(mix_seed(cfg_.rng_seed, mix_seed(tag, r)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (std::size_t c = 0; c < w.cols; ++c) w(r, c) = dist(rng);
  }
}

ForwardTrace Model::forward_trace(const FeatureVec& x, bool dropout_on, Rng& rng) const {
  if (x.size() != static_cast<std::size_t>(input_dim()))
    throw ShapeError("forward: input dimension mismatch");
  ForwardTrace trace;
  const std::size_t layers = weights_.size();
  trace.activations.reserve(layers + 1);
  trace.pre_activations.reserve(layers);
  trace.activations.push_back(x);

  const double p = cfg_.dropout_rate;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> a = x;
  for (std::size_t l = 0; l < layers; ++l) {
    std::vector<double> z = matvec(weights_[l], a);
    for (std::size_t r = 0; r < z.size(); ++r) z[r] += biases_[l][r];
    trace.pre_activations.push_back(z);
    if (l + 1 == layers) {
      a = softmax(z);
    } else {
      a.resize(z.size());
      for (std::size_t r = 0; r < z.size(); ++r) a[r] = relu(z[r]);
      if (dropout_on && p > 0.0) {
        const double scale = 1.0 / (1.0 - p);
        for (double& v : a) v = (unit(rng) < p) ? 0.0 : v * scale;
      }
    }
    trace.activations.push_back(a);
  }
  return trace;
}

std::vector<double> Model::forward(const FeatureVec& x, bool dropout_on, Rng& rng) const {
  return forward_trace(x, dropout_on, rng).activations.back();
}

std::vector<double> Model::forward(const FeatureVec& x) const {
  Rng unused(0);
  return forward(x, false, unused);
}

PredictionOutput Model::predict(const FeatureVec& x) const {
  PredictionOutput out;
  out.probabilities = forward(x);
  out.mc_mean = out.probabilities;
  out.predicted_class = static_cast<int>(
      std::max_element(out.mc_mean.begin(), out.mc_mean.end()) - out.mc_mean.begin());
  out.mc_variance = 0.0;
  return out;
}

PredictionOutput Model::mc_predict(const FeatureVec& x, int passes, Rng& rng) const {
  if (passes < 1) throw std::invalid_argument("mc_predict: passes must be >= 1");
  // Without dropout every pass is identical, so the mean is one pass and the
  // variance is exactly zero; no accumulation rounding.
  if (cfg_.dropout_rate == 0.0) return predict(x);
  const auto c = static_cast<std::size_t>(class_count());
  std::vector<std::vector<double>> runs;
  runs.reserve(passes);
  for (int t = 0; t < passes; ++t) runs.push_back(forward(x, true, rng));

  PredictionOutput out;
  out.mc_mean.assign(c, 0.0);
  for (const auto& r : runs)
    for (std::size_t k = 0; k < c; ++k) out.mc_mean[k] += r[k];
  for (double& v : out.mc_mean) v /= passes;

  out.predicted_class = static_cast<int>(
      std::max_element(out.mc_mean.begin(), out.mc_mean.end()) - out.mc_mean.begin());

  std::vector<double> var(c, 0.0);
  for (const auto& r : runs)
    for (std::size_t k = 0; k < c; ++k) {
      const double d = r[k] - out.mc_mean[k];
      var[k] += d * d;
    }
  for (double& v : var) v /= passes;  // population variance

  switch (cfg_.variance_reduction) {
    case VarianceReduction::ArgmaxClass:
      out.mc_variance = var[static_cast<std::size_t>(out.predicted_class)];
      break;
    case VarianceReduction::MaxClass:
      out.mc_variance = *std::max_element(var.begin(), var.end());
      break;
    case VarianceReduction::MeanClass: {
      double sum = 0.0;
      for (double v : var) sum += v;
      out.mc_variance = sum / static_cast<double>(c);
      break;
    }
  }
  out.probabilities = out.mc_mean;
  return out;
}

SgdResult Model::sgd_step(std::span<const TrainItem> labeled, std::span<const TrainItem> pseudo,
                          const gbt::FocalLossConfig& loss_cfg) {
  if (labeled.empty() && pseudo.empty())
    throw std::invalid_argument("sgd_step: both sample sets are empty");

  const std::size_t layers = weights_.size();
  std::vector<Mat> gw;
  std::vector<std::vector<double>> gb;
  gw.reserve(layers);
  gb.reserve(layers);
  for (std::size_t l = 0; l < layers; ++l) {
    gw.emplace_back(weights_[l].rows, weights_[l].cols);
    gb.emplace_back(biases_[l].size(), 0.0);
  }

  double loss_sum = 0.0;
  Rng unused(0);

  auto accumulate = [&](const TrainItem& item, double inv_count, std::size_t global_index) {
    if (item.label < 0 || item.label >= class_count())
      throw std::invalid_argument("sgd_step: label outside the current class universe");
    ForwardTrace trace = forward_trace(item.features, false, unused);
    const std::vector<double>& probs = trace.activations.back();
    gbt::LossGrad lg =
        item.negative
            ? cupl::negative_loss_term(probs, item.label, loss_cfg.gamma, item.weight,
                                       loss_cfg.negative_mode)
            : gbt::focal_loss(probs, item.label, loss_cfg.gamma, item.weight);
    for (double g : lg.dlogits)
      if (!std::isfinite(g))
        throw DivergenceError("sgd_step: non-finite loss gradient", global_index);
    loss_sum += lg.loss;

    std::vector<double> delta = std::move(lg.dlogits);
    for (std::size_t li = layers; li-- > 0;) {
      const std::vector<double>& input = trace.activations[li];
      Mat& gwl = gw[li];
      for (std::size_t r = 0; r < gwl.rows; ++r) {
        const double dr = delta[r] * inv_count;
        gb[li][r] += dr;
        double* grow_ptr = gwl.data.data() + r * gwl.cols;
        for (std::size_t ci = 0; ci < gwl.cols; ++ci) grow_ptr[ci] += dr * input[ci];
      }
      if (li == 0) break;
      const Mat& w = weights_[li];
      std::vector<double> prev(w.cols, 0.0);
      for (std::size_t r = 0; r < w.rows; ++r) {
        const double dr = delta[r];
        if (dr == 0.0) continue;
        const double* wrow = w.data.data() + r * w.cols;
        for (std::size_t ci = 0; ci < w.cols; ++ci) prev[ci] += wrow[ci] * dr;
      }
      const std::vector<double>& pre = trace.pre_activations[li - 1];
      for (std::size_t ci = 0; ci < prev.size(); ++ci) prev[ci] *= relu_grad(pre[ci]);
      delta = std::move(prev);
    }
  };

  const double inv_labeled = labeled.empty() ? 0.0 : 1.0 / static_cast<double>(labeled.size());
  const double inv_pseudo = pseudo.empty() ? 0.0 : 1.0 / static_cast<double>(pseudo.size());
  for (std::size_t i = 0; i < labeled.size(); ++i) accumulate(labeled[i], inv_labeled, i);
  for (std::size_t j = 0; j < pseudo.size(); ++j)
    accumulate(pseudo[j], inv_pseudo, labeled.size() + j);

  SgdResult result;
  const double eta = cfg_.learning_rate;
  for (std::size_t l = 0; l < layers; ++l) {
    for (std::size_t i = 0; i < weights_[l].data.size(); ++i) {
      const double g = gw[l].data[i];
      result.max_abs_gradient = std::max(result.max_abs_gradient, std::abs(g));
      const double du = eta * g;
      result.max_abs_update = std::max(result.max_abs_update, std::abs(du));
      weights_[l].data[i] -= du;
      if (!std::isfinite(weights_[l].data[i]))
        throw DivergenceError("sgd_step: non-finite weight after update",
                              static_cast<std::size_t>(-1));
    }
    for (std::size_t i = 0; i < biases_[l].size(); ++i) {
      const double g = gb[l][i];
      result.max_abs_gradient = std::max(result.max_abs_gradient, std::abs(g));
      const double du = eta * g;
      result.max_abs_update = std::max(result.max_abs_update, std::abs(du));
      biases_[l][i] -= du;
      if (!std::isfinite(biases_[l][i]))
        throw DivergenceError("sgd_step: non-finite bias after update",
                              static_cast<std::size_t>(-1));
    }
  }
  result.loss = loss_sum / static_cast<double>(labeled.size() + pseudo.size());
  return result;
}

void Model::grow_head(int new_class_count) {
  if (new_class_count <= class_count())
    throw std::invalid_argument("grow_head: new class count must exceed the current one");
  Mat& head = weights_.back();
  const std::size_t old_rows = head.rows;
  const auto new_rows = static_cast<std::size_t>(new_class_count);
  Mat grown(new_rows, head.cols);
  std::copy(head.data.begin(), head.data.end(), grown.data.begin());
  head = std::move(grown);
  biases_.back().resize(new_rows, 0.0);
  cfg_.layer_dims.back() = new_class_count;
  init_layer(weights_.size() - 1, old_rows, new_rows, kGrowTag);
}

uint64_t Model::state_hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (int d : cfg_.layer_dims) h = hash_bytes(&d, sizeof(d), h);
  for (const Mat& w : weights_) h = hash_doubles(w.data, h);
  for (const auto& b : biases_) h = hash_doubles(b, h);
  return h;
}

namespace {

const char* reduction_name(VarianceReduction r) {
  switch (r) {
    case VarianceReduction::ArgmaxClass: return "argmax";
    case VarianceReduction::MaxClass: return "max";
    case VarianceReduction::MeanClass: return "mean";
  }
  return "argmax";
}

VarianceReduction reduction_from_name(const std::string& name) {
  if (name == "argmax") return VarianceReduction::ArgmaxClass;
  if (name == "max") return VarianceReduction::MaxClass;
  if (name == "mean") return VarianceReduction::MeanClass;
  throw ValidationError("model checkpoint: unknown variance reduction '" + name + "'");
}

}  // namespace

std::string Model::to_json() const {
  nlohmann::json j;
  j["schema"] = "srtfd-model-v1";
  j["layer_dims"] = cfg_.layer_dims;
  j["dropout_rate"] = cfg_.dropout_rate;
  j["learning_rate"] = cfg_.learning_rate;
  j["init_scale"] = cfg_.init_scale;
  j["rng_seed"] = cfg_.rng_seed;
  j["variance_reduction"] = reduction_name(cfg_.variance_reduction);
  nlohmann::json weights = nlohmann::json::array();
  for (const Mat& w : weights_) weights.push_back(w.data);  // row-major
  j["weights"] = std::move(weights);
  nlohmann::json biases = nlohmann::json::array();
  for (const auto& b : biases_) biases.push_back(b);
  j["biases"] = std::move(biases);
  return j.dump();
}

Model Model::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("schema", "") != "srtfd-model-v1")
    throw ValidationError("model checkpoint: unsupported schema");
  ModelConfig cfg;
  cfg.layer_dims = j.at("layer_dims").get<std::vector<int>>();
  cfg.dropout_rate = j.at("dropout_rate").get<double>();
  cfg.learning_rate = j.at("learning_rate").get<double>();
  cfg.init_scale = j.at("init_scale").get<double>();
  cfg.rng_seed = j.at("rng_seed").get<uint64_t>();
  cfg.variance_reduction = reduction_from_name(j.at("variance_reduction").get<std::string>());
  Model m(cfg);
  const auto& jw = j.at("weights");
  const auto& jb = j.at("biases");
  if (jw.size() != m.weights_.size() || jb.size() != m.biases_.size())
    throw ValidationError("model checkpoint: layer count mismatch");
  for (std::size_t l = 0; l < m.weights_.size(); ++l) {
    auto flat = jw[l].get<std::vector<double>>();
    if (flat.size() != m.weights_[l].data.size())
      throw ValidationError("model checkpoint: weight shape mismatch");
    m.weights_[l].data = std::move(flat);
    auto b = jb[l].get<std::vector<double>>();
    if (b.size() != m.biases_[l].size())
      throw ValidationError("model checkpoint: bias shape mismatch");
    m.biases_[l] = std::move(b);
  }
  return m;
}

void Model::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("model checkpoint: cannot open '" + path + "' for writing");
  out << to_json() << '\n';
}

Model Model::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("model checkpoint: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace srtfd
