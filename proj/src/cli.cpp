#include "srtfd/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "srtfd/data.hpp"

namespace srtfd {
namespace cli {

using nlohmann::json;

namespace {

constexpr uint64_t kDatasetTag = 0xda7a;
constexpr uint64_t kScenarioTag = 0x5ce9;
constexpr uint64_t kAgentTag = 0xa6e9;
constexpr uint64_t kModelTag = 0x30de1;
constexpr uint64_t kBufferTag = 0xb0ff;
constexpr uint64_t kKMeansTag = 0x43a5;

bool is_synth_spec(const std::string& data) { return data.rfind("synth", 0) == 0; }

data::Dataset build_dataset(const RunInvocation& inv, const config::RunConfig& cfg,
                            uint64_t run_seed) {
  if (is_synth_spec(inv.data)) {
    config::SynthSpec spec = cfg.synth;
    const std::string suffix = inv.data.substr(5);
    if (!suffix.empty()) {
      char* end = nullptr;
      const long k = std::strtol(suffix.c_str(), &end, 10);
      if (end != suffix.c_str() + suffix.size() || k < 2)
        throw ConfigError("--data: bad synth spec '" + inv.data + "' (use synth<K>, K >= 2)");
      spec.class_count = static_cast<int>(k);
    }
    if (spec.per_class_counts.empty())
      spec.per_class_counts = config::derive_synth_counts(spec.class_count, spec.total);
    if (static_cast<int>(spec.per_class_counts.size()) != spec.class_count)
      throw ConfigError("synth: per_class_counts length must equal class_count");
    std::vector<double> separations = spec.separations;
    if (separations.empty())
      separations.assign(static_cast<std::size_t>(spec.class_count - 1), 6.0);
    Rng rng(mix_seed(run_seed, kDatasetTag));
    return data::synth_blobs(spec.class_count, spec.dim, spec.per_class_counts, separations, rng);
  }
  return data::load_csv(data::DatasetManifest::from_json_file(inv.data));
}

pipeline::StreamPlan build_plan(const data::Dataset& dataset, const RunInvocation& inv,
                                const config::RunConfig& cfg, uint64_t run_seed) {
  pipeline::ScenarioConfig scen = cfg.scenario;
  scen.num_tasks = inv.num_tasks;
  Rng rng(mix_seed(run_seed, kScenarioTag));
  if (inv.cl_type == "nc") {
    scen.mode = pipeline::ScenarioMode::ClassIncremental;
    return pipeline::make_class_incremental(dataset, scen, rng);
  }
  scen.mode = pipeline::ScenarioMode::VariableCondition;
  return pipeline::make_variable_condition(dataset, scen, rng);
}

pipeline::AgentConfig build_agent_config(const RunInvocation& inv, const config::RunConfig& cfg,
                                         uint64_t run_seed) {
  pipeline::AgentConfig agent = cfg.agent;
  agent.audit = inv.audit;
  agent.seed = mix_seed(run_seed, kAgentTag);
  agent.model.rng_seed = mix_seed(run_seed, kModelTag);
  agent.buffer.rng_seed = mix_seed(run_seed, kBufferTag);
  agent.rcs.kmeans.seed = mix_seed(run_seed, kKMeansTag);
  return pipeline::make_agent_config(inv.agent, std::move(agent));
}

json metrics_json(const metrics::MetricsSummary& s) {
  return {{"recall", s.macro_recall},
          {"precision", s.macro_precision},
          {"f1", s.macro_f1},
          {"gmean", s.gmean}};
}

json run_metrics_json(const RunInvocation& inv, const config::RunConfig& cfg,
                      const RunOutcome& outcome) {
  const pipeline::RunSummary& s = outcome.summary;
  json j;
  j["schema"] = "srtfd-run-v1";
  j["seed"] = outcome.run_seed;
  j["data"] = inv.data;
  j["cl_type"] = inv.cl_type;
  j["agent"] = inv.agent;
  j["num_tasks"] = inv.num_tasks;
  j["config"] = json::parse(config::config_to_json(cfg));
  j["avg_end"] = {{"recall", s.run_metrics.avg_end_recall},
                  {"precision", s.run_metrics.avg_end_precision},
                  {"f1", s.run_metrics.avg_end_f1},
                  {"gmean", s.run_metrics.avg_end_gmean}};
  j["prequential"] = metrics_json(s.prequential);
  json tasks = json::array();
  for (std::size_t t = 0; t < s.run_metrics.per_task.size(); ++t) {
    const metrics::ConfusionMatrix& m = s.run_metrics.per_task[t];
    json rows = json::array();
    for (int r = 0; r < m.classes; ++r) {
      json row = json::array();
      for (int c = 0; c < m.classes; ++c) row.push_back(m.at(r, c));
      rows.push_back(std::move(row));
    }
    json tj = metrics_json(s.run_metrics.per_task_summary[t]);
    tj["task"] = t;
    tj["confusion"] = std::move(rows);
    tasks.push_back(std::move(tj));
  }
  j["per_task"] = std::move(tasks);

  // Class-level breakdown of the pooled final-model evaluation.
  metrics::ConfusionMatrix pooled = s.run_metrics.per_task.front();
  for (std::size_t t = 1; t < s.run_metrics.per_task.size(); ++t)
    for (std::size_t i = 0; i < pooled.counts.size(); ++i)
      pooled.counts[i] += s.run_metrics.per_task[t].counts[i];
  const metrics::MetricsSummary pooled_summary = metrics::compute_summary(pooled);
  json per_class = json::array();
  for (std::size_t k = 0; k < pooled_summary.per_class.size(); ++k) {
    const metrics::ClassMetrics& cm = pooled_summary.per_class[k];
    per_class.push_back({{"class", k},
                         {"recall", cm.recall},
                         {"precision", cm.precision},
                         {"f1", cm.f1},
                         {"has_support", cm.has_support},
                         {"predicted", cm.predicted}});
  }
  j["per_class"] = std::move(per_class);
  j["total_unlabeled"] = s.total_unlabeled;
  j["distinct_unlabeled_trained"] = s.distinct_unlabeled_trained;
  j["final_model_hash"] = s.final_model_hash;
  return j;
}

json step_json(const pipeline::StepReport& r) {
  json j;
  j["step"] = r.step;
  j["task"] = r.task;
  j["condition"] = r.condition_id;
  j["n_labeled"] = r.n_labeled;
  j["n_unlabeled"] = r.n_unlabeled;
  j["accepted_positive"] = r.n_accepted_positive;
  j["accepted_negative"] = r.n_accepted_negative;
  j["clusters"] = r.n_clusters;
  j["clusters_dropped"] = r.n_clusters_dropped;
  j["candidates"] = r.n_candidates;
  j["coreset_size"] = r.coreset_size;
  j["replay_size"] = r.replay_size;
  j["head_size"] = r.head_size;
  j["trained"] = r.trained;
  j["loss"] = r.loss;
  j["cum_macro_f1"] = r.cum_macro_f1;
  j["cum_gmean"] = r.cum_gmean;
  j["model_hash"] = r.model_hash_after;
  if (r.balance) {
    j["balance"] = {{"coreset_proportions", r.balance->coreset_proportions},
                    {"buffer_proportions", r.balance->buffer_proportions},
                    {"target", r.balance->target_proportion},
                    {"imbalance", r.balance->imbalance_score}};
  }
  if (r.kl_matrix) j["kl_matrix"] = *r.kl_matrix;
  if (r.candidate_classes) j["candidate_classes"] = *r.candidate_classes;
  if (r.buffer_counts) j["buffer_counts"] = *r.buffer_counts;
  // Wall clock stays under one key so determinism checks can strip it.
  j["timing"] = {{"predict_ns", r.predict_ns}, {"update_ns", r.update_ns}};
  return j;
}

void write_steps_jsonl(const std::string& path, const RunInvocation& inv,
                       const config::RunConfig& cfg, const RunOutcome& outcome) {
  std::ofstream out(path);
  json header;
  header["schema"] = "srtfd-steps-v1";
  header["seed"] = outcome.run_seed;
  header["data"] = inv.data;
  header["agent"] = inv.agent;
  header["config"] = json::parse(config::config_to_json(cfg));
  out << header.dump() << '\n';
  for (const pipeline::StepReport& r : outcome.summary.reports) out << step_json(r).dump() << '\n';
}

void write_curve_csv(const std::string& path, const RunInvocation& inv,
                     const config::RunConfig& cfg, const RunOutcome& outcome) {
  std::ofstream out(path);
  json header;
  header["schema"] = "srtfd-curve-v1";
  header["seed"] = outcome.run_seed;
  header["data"] = inv.data;
  header["agent"] = inv.agent;
  header["config"] = json::parse(config::config_to_json(cfg));
  out << "# " << header.dump() << '\n';
  out << "step,task,seen_unlabeled,cum_macro_f1,cum_gmean,coreset_size,cum_trained_unlabeled\n";
  std::size_t seen = 0, trained = 0;
  char buf[64];
  for (const pipeline::StepReport& r : outcome.summary.reports) {
    seen += static_cast<std::size_t>(r.n_unlabeled);
    if (r.trained) trained += static_cast<std::size_t>(r.coreset_size + r.n_accepted_negative);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g", r.cum_macro_f1, r.cum_gmean);
    out << r.step << ',' << r.task << ',' << seen << ',' << buf << ',' << r.coreset_size << ','
        << trained << '\n';
  }
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

RunOutcome execute_run(const RunInvocation& inv, const config::RunConfig& cfg,
                       uint64_t run_seed) {
  const data::Dataset dataset = build_dataset(inv, cfg, run_seed);
  const pipeline::StreamPlan plan = build_plan(dataset, inv, cfg, run_seed);
  pipeline::OnlineLearner learner(build_agent_config(inv, cfg, run_seed), plan.feature_dim);
  RunOutcome outcome;
  outcome.run_seed = run_seed;
  outcome.summary = pipeline::run_stream(learner, plan);
  return outcome;
}

std::vector<SweepRow> sweep(const std::string& param, const std::vector<double>& values,
                            const RunInvocation& inv, const config::RunConfig& base) {
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    config::RunConfig cfg = base;
    config::set_numeric_field(cfg, param, v);
    const RunOutcome outcome = execute_run(inv, cfg, cfg.seed);
    SweepRow row;
    row.value = v;
    row.run_metrics = outcome.summary.run_metrics;
    row.distinct_unlabeled_trained = outcome.summary.distinct_unlabeled_trained;
    row.total_unlabeled = outcome.summary.total_unlabeled;
    row.training_time_seconds = outcome.summary.training_time_seconds;
    rows.push_back(std::move(row));
  }
  return rows;
}

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"Online continual-learning fault diagnosis runner"};
  RunInvocation inv;
  uint64_t seed = 7;
  int64_t init_normals = 1000;
  std::string config_path;
  std::string sweep_param;
  std::string sweep_values;

  app.add_option("--data", inv.data, "Dataset: synth<K> or a manifest JSON path")->required();
  app.add_option("--num_tasks", inv.num_tasks, "Number of tasks in the stream")
      ->check(CLI::PositiveNumber);
  app.add_option("--cl_type", inv.cl_type, "nc (class-incremental) or vc (variable condition)")
      ->check(CLI::IsMember({"nc", "vc"}));
  app.add_option("--agent", inv.agent, "SRTFD or ER")->check(CLI::IsMember({"SRTFD", "ER"}));
  app.add_option("--num_runs", inv.num_runs, "Seeded repetitions")->check(CLI::PositiveNumber);
  app.add_option("--N", init_normals, "Normal samples used for initialization")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--config", config_path, "JSON overrides for all module configs");
  app.add_flag("--audit", inv.audit, "Attach selection audit artifacts to step reports");
  app.add_option("--out", inv.out_dir, "Output directory (env OCLFD_OUT overrides)");
  app.add_option("--sweep", sweep_param, "Config field to sweep (dot path)");
  app.add_option("--values", sweep_values, "Comma-separated sweep values");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    config::RunConfig cfg = config::default_run_config();
    if (!config_path.empty()) config::apply_overrides_file(cfg, config_path);
    cfg.seed = seed;
    cfg.scenario.init_normal_count = init_normals;
    if (const char* env_out = std::getenv("OCLFD_OUT"); env_out && *env_out)
      inv.out_dir = env_out;
    std::filesystem::create_directories(inv.out_dir);
    const auto out_path = [&](const std::string& name) {
      return (std::filesystem::path(inv.out_dir) / name).string();
    };

    if (!sweep_param.empty()) {
      std::vector<double> values;
      std::stringstream ss(sweep_values);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end != cell.c_str() + cell.size())
          throw ConfigError("--values: bad number '" + cell + "'");
        values.push_back(v);
      }
      if (values.empty()) throw ConfigError("--sweep needs --values");
      const auto rows = sweep(sweep_param, values, inv, cfg);
      std::ofstream out(out_path("sweep.csv"));
      json header;
      header["schema"] = "srtfd-sweep-v1";
      header["seed"] = cfg.seed;
      header["param"] = sweep_param;
      header["data"] = inv.data;
      header["agent"] = inv.agent;
      header["config"] = json::parse(config::config_to_json(cfg));
      out << "# " << header.dump() << '\n';
      out << "param,value,avg_end_recall,avg_end_precision,avg_end_f1,avg_end_gmean,"
             "training_time_seconds,distinct_unlabeled_trained,total_unlabeled\n";
      char buf[256];
      for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%zu,%zu",
                      sweep_param.c_str(), r.value, r.run_metrics.avg_end_recall,
                      r.run_metrics.avg_end_precision, r.run_metrics.avg_end_f1,
                      r.run_metrics.avg_end_gmean, r.training_time_seconds,
                      r.distinct_unlabeled_trained, r.total_unlabeled);
        out << buf << '\n';
      }
      std::cout << "sweep over " << sweep_param << " finished: " << rows.size()
                << " runs -> " << out_path("sweep.csv") << '\n';
      return 0;
    }

    std::vector<double> recalls, precisions, f1s, gmeans, times;
    json timing;
    timing["schema"] = "srtfd-timing-v1";
    timing["runs"] = json::array();
    for (int r = 0; r < inv.num_runs; ++r) {
      const uint64_t run_seed = cfg.seed + static_cast<uint64_t>(r);
      const RunOutcome outcome = execute_run(inv, cfg, run_seed);
      const std::string tag = "run" + std::to_string(r);
      {
        std::ofstream mout(out_path("run_metrics_" + tag + ".json"));
        mout << run_metrics_json(inv, cfg, outcome).dump(2) << '\n';
      }
      write_steps_jsonl(out_path("steps_" + tag + ".jsonl"), inv, cfg, outcome);
      write_curve_csv(out_path("curve_" + tag + ".csv"), inv, cfg, outcome);
      timing["runs"].push_back({{"run", r},
                                {"seed", run_seed},
                                {"training_time_seconds", outcome.summary.training_time_seconds}});
      const auto& m = outcome.summary.run_metrics;
      recalls.push_back(m.avg_end_recall);
      precisions.push_back(m.avg_end_precision);
      f1s.push_back(m.avg_end_f1);
      gmeans.push_back(m.avg_end_gmean);
      times.push_back(outcome.summary.training_time_seconds);
      std::cout << tag << " seed=" << run_seed << " avg_end_f1=" << m.avg_end_f1
                << " avg_end_gmean=" << m.avg_end_gmean
                << " training_time_s=" << outcome.summary.training_time_seconds << '\n';
    }
    {
      std::ofstream tout(out_path("timing.json"));
      tout << timing.dump(2) << '\n';
    }
    json summary;
    summary["schema"] = "srtfd-summary-v1";
    summary["seed"] = cfg.seed;
    summary["num_runs"] = inv.num_runs;
    summary["data"] = inv.data;
    summary["agent"] = inv.agent;
    summary["cl_type"] = inv.cl_type;
    summary["config"] = json::parse(config::config_to_json(cfg));
    summary["mean"] = {{"recall", mean_of(recalls)},
                       {"precision", mean_of(precisions)},
                       {"f1", mean_of(f1s)},
                       {"gmean", mean_of(gmeans)}};
    summary["std"] = {{"recall", sample_std(recalls)},
                      {"precision", sample_std(precisions)},
                      {"f1", sample_std(f1s)},
                      {"gmean", sample_std(gmeans)}};
    summary["per_run"] = {{"recall", recalls},
                          {"precision", precisions},
                          {"f1", f1s},
                          {"gmean", gmeans}};
    std::ofstream sout(out_path("summary.json"));
    sout << summary.dump(2) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace cli
}  // namespace srtfd
