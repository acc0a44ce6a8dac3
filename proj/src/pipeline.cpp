#include "srtfd/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace srtfd {
namespace pipeline {

namespace {

int64_t steady_nanos() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(idx[i - 1], idx[pick(rng)]);
  }
}

std::vector<std::vector<std::size_t>> split_evenly(const std::vector<std::size_t>& idx,
                                                   std::size_t parts) {
  std::vector<std::vector<std::size_t>> out(parts);
  const std::size_t base = idx.size() / parts;
  const std::size_t extra = idx.size() % parts;
  std::size_t pos = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    const std::size_t take = base + (p < extra ? 1 : 0);
    out[p].assign(idx.begin() + static_cast<std::ptrdiff_t>(pos),
                  idx.begin() + static_cast<std::ptrdiff_t>(pos + take));
    pos += take;
  }
  return out;
}

// Chunks one task's sample pool into batches, splitting each batch into the
// labeled fraction and the unlabeled remainder.
void emit_batches(const data::Dataset& dataset, const std::vector<std::size_t>& pool, int task,
                  int condition_id, const ScenarioConfig& cfg, int64_t& step, uint64_t& next_id,
                  std::vector<StreamBatch>& out) {
  const auto bs = static_cast<std::size_t>(cfg.batch_size);
  for (std::size_t start = 0; start < pool.size(); start += bs) {
    const std::size_t end = std::min(pool.size(), start + bs);
    const std::size_t n = end - start;
    const auto n_labeled =
        static_cast<std::size_t>(std::floor(cfg.labeled_fraction * static_cast<double>(n) + 0.5));
    StreamBatch batch;
    batch.step = step++;
    batch.task = task;
    batch.condition_id = condition_id;
    for (std::size_t i = start; i < end; ++i) {
      const std::size_t src = pool[i];
      if (i - start < n_labeled) {
        batch.labeled.push_back({next_id++, dataset.features[src], dataset.labels[src]});
      } else {
        batch.unlabeled.push_back({next_id++, dataset.features[src]});
        batch.hidden_labels.push_back(dataset.labels[src]);
      }
    }
    out.push_back(std::move(batch));
  }
}

}  // namespace

StreamPlan make_class_incremental(const data::Dataset& dataset, const ScenarioConfig& cfg,
                                  Rng& rng) {
  if (dataset.features.empty()) throw std::invalid_argument("scenario: empty dataset");
  if (cfg.num_tasks < 1) throw std::invalid_argument("scenario: num_tasks must be >= 1");
  const int class_count = dataset.manifest.class_count;
  const auto tasks = static_cast<std::size_t>(cfg.num_tasks);

  std::vector<std::size_t> normal_idx;
  std::vector<std::vector<std::size_t>> fault_idx(static_cast<std::size_t>(class_count));
  for (std::size_t i = 0; i < dataset.features.size(); ++i) {
    if (dataset.labels[i] == 0)
      normal_idx.push_back(i);
    else
      fault_idx[static_cast<std::size_t>(dataset.labels[i])].push_back(i);
  }
  if (static_cast<int64_t>(normal_idx.size()) < cfg.init_normal_count)
    throw std::invalid_argument("scenario: not enough normal samples for initialization");

  shuffle_indices(normal_idx, rng);
  StreamPlan plan;
  plan.class_count = class_count;
  plan.feature_dim = dataset.manifest.feature_dim;
  plan.num_tasks = cfg.num_tasks;
  plan.init_normals.reserve(static_cast<std::size_t>(cfg.init_normal_count));
  for (int64_t i = 0; i < cfg.init_normal_count; ++i)
    plan.init_normals.push_back(dataset.features[normal_idx[static_cast<std::size_t>(i)]]);
  normal_idx.erase(normal_idx.begin(),
                   normal_idx.begin() + static_cast<std::ptrdiff_t>(cfg.init_normal_count));

  auto normal_chunks = split_evenly(normal_idx, tasks);

  // Fault class f goes to task (f-1) mod T; with more tasks than fault
  // classes the classes recycle in turn and split across their tasks.
  std::vector<std::vector<std::size_t>> task_pools(tasks);
  const int fault_classes = class_count - 1;
  if (fault_classes > 0) {
    std::vector<std::vector<std::size_t>> class_tasks(static_cast<std::size_t>(class_count));
    if (fault_classes >= cfg.num_tasks) {
      for (int f = 1; f <= fault_classes; ++f)
        class_tasks[static_cast<std::size_t>(f)].push_back(
            static_cast<std::size_t>((f - 1) % cfg.num_tasks));
    } else {
      for (int t = 0; t < cfg.num_tasks; ++t)
        class_tasks[static_cast<std::size_t>(t % fault_classes + 1)].push_back(
            static_cast<std::size_t>(t));
    }
    for (int f = 1; f <= fault_classes; ++f) {
      auto& idx = fault_idx[static_cast<std::size_t>(f)];
      if (idx.empty()) continue;
      shuffle_indices(idx, rng);
      const auto& assigned = class_tasks[static_cast<std::size_t>(f)];
      auto parts = split_evenly(idx, assigned.size());
      for (std::size_t p = 0; p < assigned.size(); ++p)
        task_pools[assigned[p]].insert(task_pools[assigned[p]].end(), parts[p].begin(),
                                       parts[p].end());
    }
  }

  int64_t step = 0;
  uint64_t next_id = static_cast<uint64_t>(cfg.init_normal_count) + 1;
  for (std::size_t t = 0; t < tasks; ++t) {
    std::vector<std::size_t> pool = normal_chunks[t];
    pool.insert(pool.end(), task_pools[t].begin(), task_pools[t].end());
    shuffle_indices(pool, rng);
    emit_batches(dataset, pool, static_cast<int>(t), 0, cfg, step, next_id, plan.batches);
  }
  return plan;
}

StreamPlan make_variable_condition(const data::Dataset& dataset, const ScenarioConfig& cfg,
                                   Rng& rng) {
  if (dataset.features.empty()) throw std::invalid_argument("scenario: empty dataset");
  if (cfg.num_tasks < 1) throw std::invalid_argument("scenario: num_tasks must be >= 1");
  const int cond_count = std::max(1, dataset.manifest.condition_count);

  // Partition by recorded condition; single-condition data lands in one pool.
  std::vector<std::vector<std::size_t>> pools(static_cast<std::size_t>(cond_count));
  for (std::size_t i = 0; i < dataset.features.size(); ++i)
    pools[static_cast<std::size_t>(std::min(dataset.conditions[i], cond_count - 1))].push_back(i);

  // Initialization uses normals from the first condition.
  std::vector<std::size_t>& first_pool = pools[0];
  shuffle_indices(first_pool, rng);
  StreamPlan plan;
  plan.class_count = dataset.manifest.class_count;
  plan.feature_dim = dataset.manifest.feature_dim;
  plan.num_tasks = cfg.num_tasks;
  std::vector<std::size_t> keep;
  for (std::size_t i : first_pool) {
    if (static_cast<int64_t>(plan.init_normals.size()) < cfg.init_normal_count &&
        dataset.labels[i] == 0)
      plan.init_normals.push_back(dataset.features[i]);
    else
      keep.push_back(i);
  }
  if (static_cast<int64_t>(plan.init_normals.size()) < cfg.init_normal_count)
    throw std::invalid_argument("scenario: not enough normal samples for initialization");
  first_pool = std::move(keep);

  std::size_t stream_total = 0;
  for (auto& p : pools) {
    shuffle_indices(p, rng);
    stream_total += p.size();
  }
  const auto bs = static_cast<std::size_t>(cfg.batch_size);
  const auto steps_total = static_cast<int64_t>((stream_total + bs - 1) / bs);

  std::vector<NoiseRange> schedule = cfg.noise_schedule;
  if (schedule.empty()) {
    // One range per task; sigma ramps by noise_step unless the dataset has
    // real conditions to walk through instead.
    const int64_t per = std::max<int64_t>(1, steps_total / cfg.num_tasks);
    for (int t = 0; t < cfg.num_tasks; ++t)
      schedule.push_back({t * per, cond_count > 1 ? 0.0 : cfg.noise_step * t});
  }

  auto range_at = [&](int64_t step) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < schedule.size(); ++i)
      if (schedule[i].start_step <= step) r = i;
    return r;
  };

  std::vector<std::size_t> cursor(pools.size(), 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  uint64_t next_id = static_cast<uint64_t>(cfg.init_normal_count) + 1;

  for (int64_t step = 0; step < steps_total; ++step) {
    const std::size_t r = range_at(step);
    const std::size_t pool_id =
        cond_count > 1 ? r % static_cast<std::size_t>(cond_count) : 0;
    std::vector<std::size_t>& pool = pools[pool_id];
    std::size_t& cur = cursor[pool_id];
    if (cur >= pool.size()) continue;  // this condition ran dry
    const std::size_t end = std::min(pool.size(), cur + bs);

    StreamBatch batch;
    batch.step = step;
    // Proportional mapping keeps every task populated whenever there are at
    // least num_tasks steps.
    batch.task = static_cast<int>(step * cfg.num_tasks / steps_total);
    batch.condition_id = cond_count > 1 ? static_cast<int>(pool_id) : static_cast<int>(r);
    const std::size_t n = end - cur;
    const auto n_labeled =
        static_cast<std::size_t>(std::floor(cfg.labeled_fraction * static_cast<double>(n) + 0.5));
    const double sigma = schedule[r].sigma;
    for (std::size_t i = cur; i < end; ++i) {
      const std::size_t src = pool[i];
      FeatureVec x = dataset.features[src];
      if (sigma > 0.0)
        for (double& v : x) v += sigma * gauss(rng);
      if (i - cur < n_labeled) {
        batch.labeled.push_back({next_id++, std::move(x), dataset.labels[src]});
      } else {
        batch.unlabeled.push_back({next_id++, std::move(x)});
        batch.hidden_labels.push_back(dataset.labels[src]);
      }
    }
    cur = end;
    plan.batches.push_back(std::move(batch));
  }
  return plan;
}

namespace {

ModelConfig derive_model_config(const AgentConfig& cfg, int feature_dim) {
  ModelConfig mc = cfg.model;
  mc.layer_dims.clear();
  mc.layer_dims.push_back(feature_dim);
  for (int h : cfg.hidden_dims) mc.layer_dims.push_back(h);
  mc.layer_dims.push_back(std::max(1, cfg.initial_class_count));
  return mc;
}

BufferConfig derive_buffer_config(const AgentConfig& cfg, int feature_dim) {
  BufferConfig bc = cfg.buffer;
  bc.feature_dim = feature_dim;
  return bc;
}

}  // namespace

OnlineLearner::OnlineLearner(AgentConfig cfg, int feature_dim, Clock clock)
    : cfg_(std::move(cfg)),
      model_(derive_model_config(cfg_, feature_dim)),
      buffer_(derive_buffer_config(cfg_, feature_dim)),
      predict_rng_(mix_seed(cfg_.seed, 0x70726564)),
      replay_rng_(mix_seed(cfg_.seed, 0x7265706c)),
      clock_(clock ? std::move(clock) : steady_nanos) {}

void OnlineLearner::initialize(const std::vector<FeatureVec>& normal_samples) {
  if (!normal_samples.empty()) {
    std::vector<TrainItem> items;
    items.reserve(normal_samples.size());
    std::vector<BufferEntry> entries;
    entries.reserve(normal_samples.size());
    for (const FeatureVec& x : normal_samples) {
      items.push_back({x, 0, false, 1.0});
      entries.push_back({next_internal_id_++, x, 0, SampleSource::GroundTruth, -1});
    }
    for (int e = 0; e < cfg_.epochs_per_step; ++e)
      model_.sgd_step(items, std::span<const TrainItem>{}, cfg_.loss);
    buffer_.insert(std::move(entries));
  }
  initialized_ = true;
}

void OnlineLearner::grow_head_if_needed(const std::vector<LabeledSample>& labeled) {
  int max_label = -1;
  for (const LabeledSample& s : labeled) max_label = std::max(max_label, s.label);
  if (max_label >= model_.class_count()) model_.grow_head(max_label + 1);
}

StepResult OnlineLearner::run_step(const AgentBatchView& view) {
  if (!initialized_) throw std::logic_error("run_step: initialize() must run first");

  StepResult result;
  StepReport& report = result.report;
  report.step = view.step;
  report.condition_id = view.condition_id;
  report.n_labeled = static_cast<int>(view.labeled.size());
  report.n_unlabeled = static_cast<int>(view.unlabeled.size());

  // Prequential prediction: everything below sees theta_{t-1} only.
  const uint64_t hash_before = model_.state_hash();
  const int predict_classes = model_.class_count();
  const int64_t t0 = clock_();
  const int passes = cfg_.use_cupl ? cfg_.cupl.mc_passes : 1;
  result.predictions.reserve(view.unlabeled.size());
  for (const UnlabeledSample& u : view.unlabeled)
    result.predictions.push_back(model_.mc_predict(u.features, passes, predict_rng_));
  const int64_t t1 = clock_();
  report.predict_ns = t1 - t0;
  if (model_.state_hash() != hash_before)
    throw std::logic_error("run_step: prediction mutated the model state");

  grow_head_if_needed(view.labeled);

  // Pseudo-labeling reuses the prediction passes; nothing is predicted twice.
  // A single-class head has nothing to pseudo-label (its output is constant),
  // so gated selection waits until the predicting model knew at least two
  // classes; the accept-everything baseline has no gate to protect.
  std::vector<cupl::PseudoLabeledSample> accepted_pos;
  std::vector<cupl::PseudoLabeledSample> accepted_neg;
  const bool pseudo_ready = cfg_.accept_all_pseudo || predict_classes >= 2;
  if (cfg_.use_cupl && pseudo_ready && !view.unlabeled.empty()) {
    std::vector<FeatureVec> feats;
    std::vector<uint64_t> ids;
    feats.reserve(view.unlabeled.size());
    ids.reserve(view.unlabeled.size());
    for (const UnlabeledSample& u : view.unlabeled) {
      feats.push_back(u.features);
      ids.push_back(u.id);
    }
    if (cfg_.accept_all_pseudo) {
      for (std::size_t i = 0; i < feats.size(); ++i) {
        cupl::PseudoLabeledSample s;
        s.features = feats[i];
        s.pseudo_label = result.predictions[i].predicted_class;
        s.polarity = cupl::Polarity::Positive;
        s.confidence =
            result.predictions[i].mc_mean[static_cast<std::size_t>(s.pseudo_label)];
        s.uncertainty = result.predictions[i].mc_variance;
        s.accepted = true;
        s.id = ids[i];
        accepted_pos.push_back(std::move(s));
      }
    } else {
      for (auto& s : cupl::gate_batch(feats, result.predictions, cfg_.cupl, ids)) {
        if (!s.accepted) continue;
        (s.polarity == cupl::Polarity::Positive ? accepted_pos : accepted_neg)
            .push_back(std::move(s));
      }
    }
  }
  report.n_accepted_positive = static_cast<int>(accepted_pos.size());
  report.n_accepted_negative = static_cast<int>(accepted_neg.size());

  // Redundancy filter over the accepted positives.
  std::vector<std::size_t> candidates(accepted_pos.size());
  std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  if (cfg_.use_rcs && !accepted_pos.empty()) {
    std::vector<FeatureVec> feats;
    feats.reserve(accepted_pos.size());
    for (const auto& s : accepted_pos) feats.push_back(s.features);
    const auto clusters = rcs::cluster_batch(feats, cfg_.rcs);
    const auto filtered = rcs::filter_redundant(clusters, buffer_.class_summaries(), cfg_.rcs);
    report.n_clusters = static_cast<int>(clusters.size());
    report.n_clusters_dropped = static_cast<int>(filtered.dropped.size());
    candidates = filtered.surviving_samples;
    if (cfg_.audit) report.kl_matrix = filtered.kl_matrix;
  }
  report.n_candidates = static_cast<int>(candidates.size());

  // Coreset selection to the ratio budget.
  std::vector<cupl::PseudoLabeledSample> coreset;
  if (!candidates.empty()) {
    const std::size_t target = rcs::coreset_size(cfg_.rcs.coreset_ratio, candidates.size());
    std::vector<FeatureVec> feats;
    feats.reserve(candidates.size());
    std::vector<int> labels;
    labels.reserve(candidates.size());
    for (std::size_t i : candidates) {
      feats.push_back(accepted_pos[i].features);
      labels.push_back(accepted_pos[i].pseudo_label);
    }
    if (cfg_.audit) {
      report.candidate_classes = labels;
      report.buffer_counts = buffer_.class_counts();
    }
    std::vector<std::size_t> chosen;
    if (cfg_.use_gbt) {
      auto sel = gbt::balanced_select(feats, labels, buffer_.class_counts(), target);
      chosen = std::move(sel.selected);
      if (cfg_.audit) report.balance = std::move(sel.state);
    } else {
      const auto order = rcs::farthest_point_order(feats);
      chosen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(target));
    }
    coreset.reserve(chosen.size());
    for (std::size_t c : chosen) coreset.push_back(accepted_pos[candidates[c]]);
  }
  report.coreset_size = static_cast<int>(coreset.size());

  maybe_update(view, coreset, accepted_neg, report);

  report.head_size = model_.class_count();
  report.model_hash_after = model_.state_hash();
  return result;
}

void OnlineLearner::maybe_update(const AgentBatchView& view,
                                 const std::vector<cupl::PseudoLabeledSample>& coreset,
                                 const std::vector<cupl::PseudoLabeledSample>& negatives,
                                 StepReport& report) {
  const int64_t t_start = clock_();
  // A step with no labels and no accepted coreset performs no update.
  if (view.labeled.empty() && coreset.empty()) {
    report.trained = false;
    report.update_ns = clock_() - t_start;
    return;
  }

  std::vector<TrainItem> pseudo_items;
  pseudo_items.reserve(coreset.size() + negatives.size());
  const double alpha = cfg_.loss.alpha;
  for (const auto& s : coreset) pseudo_items.push_back({s.features, s.pseudo_label, false, alpha});
  for (const auto& s : negatives)
    pseudo_items.push_back({s.features, s.pseudo_label, true, alpha});

  double loss = 0.0;
  for (int epoch = 0; epoch < cfg_.epochs_per_step; ++epoch) {
    std::vector<TrainItem> labeled_items;
    const auto replay = cfg_.uniform_replay
                            ? buffer_.uniform_batch(cfg_.replay_size, replay_rng_)
                            : buffer_.replay_batch(cfg_.replay_size, replay_rng_);
    labeled_items.reserve(view.labeled.size() + replay.size());
    for (const LabeledSample& s : view.labeled)
      labeled_items.push_back({s.features, s.label, false, 1.0});
    for (const BufferEntry& e : replay) labeled_items.push_back({e.features, e.label, false, 1.0});
    if (epoch == 0) report.replay_size = static_cast<int>(replay.size());
    loss = model_.sgd_step(labeled_items, pseudo_items, cfg_.loss).loss;
  }
  report.trained = true;
  report.loss = loss;

  // Remember: ground-truth labels plus the accepted coreset.
  std::vector<BufferEntry> entries;
  entries.reserve(view.labeled.size() + coreset.size());
  for (const LabeledSample& s : view.labeled)
    entries.push_back({s.id, s.features, s.label, SampleSource::GroundTruth, view.step});
  for (const auto& s : coreset) {
    entries.push_back({s.id, s.features, s.pseudo_label, SampleSource::Pseudo, view.step});
    if (!ledger_set_.insert(s.id).second)
      throw std::logic_error("run_step: duplicate coreset sample identity");
    ledger_.push_back(s.id);
    trained_unlabeled_ids_.insert(s.id);
  }
  for (const auto& s : negatives) trained_unlabeled_ids_.insert(s.id);
  buffer_.insert(std::move(entries));
  report.update_ns = clock_() - t_start;
}

AgentConfig make_agent_config(const std::string& agent_name, AgentConfig base) {
  if (agent_name == "SRTFD") return base;
  if (agent_name == "SRTFD_NO_RCS") {
    base.use_rcs = false;
    return base;
  }
  if (agent_name == "SRTFD_NO_GBT") {
    base.use_gbt = false;
    base.loss.gamma = 0.0;
    return base;
  }
  if (agent_name == "SRTFD_NO_CUPL") {
    base.use_cupl = false;
    return base;
  }
  if (agent_name == "ER" || agent_name == "ER_ALL") {
    base.use_rcs = false;
    base.use_gbt = false;
    base.use_cupl = agent_name == "ER_ALL";
    base.accept_all_pseudo = agent_name == "ER_ALL";
    base.loss.gamma = 0.0;
    base.loss.alpha = 1.0;
    base.uniform_replay = true;
    base.buffer.eviction = EvictionPolicy::UniformReservoir;
    base.model.dropout_rate = 0.0;
    base.cupl.mc_passes = 1;
    base.rcs.coreset_ratio = 1.0;  // ER_ALL trains on every accepted sample
    return base;
  }
  throw ConfigError("unknown agent '" + agent_name + "'");
}

RunSummary run_stream(OnlineLearner& learner, const StreamPlan& plan) {
  data::Standardizer standardizer;
  standardizer.fit(plan.init_normals);
  std::vector<FeatureVec> init;
  init.reserve(plan.init_normals.size());
  for (const FeatureVec& x : plan.init_normals) init.push_back(standardizer.apply(x));
  learner.initialize(init);

  RunSummary summary;
  summary.prequential_confusion = metrics::ConfusionMatrix(plan.class_count);
  std::vector<std::vector<FeatureVec>> eval_features(static_cast<std::size_t>(plan.num_tasks));
  std::vector<std::vector<int>> eval_labels(static_cast<std::size_t>(plan.num_tasks));

  int64_t training_ns = 0;
  for (const StreamBatch& batch : plan.batches) {
    std::vector<LabeledSample> labeled;
    labeled.reserve(batch.labeled.size());
    for (const LabeledSample& s : batch.labeled)
      labeled.push_back({s.id, standardizer.apply(s.features), s.label});
    std::vector<UnlabeledSample> unlabeled;
    unlabeled.reserve(batch.unlabeled.size());
    for (const UnlabeledSample& s : batch.unlabeled)
      unlabeled.push_back({s.id, standardizer.apply(s.features)});

    AgentBatchView view{batch.step, batch.condition_id, labeled, unlabeled};
    StepResult step = learner.run_step(view);
    step.report.task = batch.task;

    auto& task_features = eval_features[static_cast<std::size_t>(batch.task)];
    auto& task_labels = eval_labels[static_cast<std::size_t>(batch.task)];
    for (std::size_t i = 0; i < unlabeled.size(); ++i) {
      summary.prequential_confusion.add(batch.hidden_labels[i],
                                        step.predictions[i].predicted_class);
      task_features.push_back(std::move(unlabeled[i].features));
      task_labels.push_back(batch.hidden_labels[i]);
    }
    summary.total_unlabeled += unlabeled.size();
    training_ns += step.report.update_ns;
    if (summary.prequential_confusion.total() > 0) {
      const auto running = metrics::compute_summary(summary.prequential_confusion);
      step.report.cum_macro_f1 = running.macro_f1;
      step.report.cum_gmean = running.gmean;
    }
    summary.reports.push_back(std::move(step.report));
  }

  // Avg-End evaluation: every task once more, with the final model.
  std::vector<metrics::ConfusionMatrix> per_task;
  for (std::size_t t = 0; t < eval_features.size(); ++t) {
    metrics::ConfusionMatrix m(plan.class_count);
    for (std::size_t i = 0; i < eval_features[t].size(); ++i)
      m.add(eval_labels[t][i], learner.model().predict(eval_features[t][i]).predicted_class);
    per_task.push_back(std::move(m));
  }
  summary.run_metrics = metrics::compute_metrics(per_task);
  summary.run_metrics.training_time_seconds = static_cast<double>(training_ns) * 1e-9;
  summary.training_time_seconds = summary.run_metrics.training_time_seconds;
  if (summary.prequential_confusion.total() > 0)
    summary.prequential = metrics::compute_summary(summary.prequential_confusion);
  summary.distinct_unlabeled_trained = learner.distinct_unlabeled_trained();
  summary.final_model_hash = learner.model().state_hash();
  return summary;
}

}  // namespace pipeline
}  // namespace srtfd
