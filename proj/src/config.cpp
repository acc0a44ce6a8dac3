#include "srtfd/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace srtfd {
namespace config {

using nlohmann::json;

RunConfig default_run_config() { return RunConfig{}; }

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& section) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("config: unknown key '" + section + "." + it.key() + "'");
  }
}

void apply_model(ModelConfig& m, const json& j) {
  check_keys(j, {"dropout_rate", "learning_rate", "init_scale", "variance_reduction"}, "model");
  m.dropout_rate = j.value("dropout_rate", m.dropout_rate);
  m.learning_rate = j.value("learning_rate", m.learning_rate);
  m.init_scale = j.value("init_scale", m.init_scale);
  if (j.contains("variance_reduction")) {
    const std::string v = j["variance_reduction"].get<std::string>();
    if (v == "argmax")
      m.variance_reduction = VarianceReduction::ArgmaxClass;
    else if (v == "max")
      m.variance_reduction = VarianceReduction::MaxClass;
    else if (v == "mean")
      m.variance_reduction = VarianceReduction::MeanClass;
    else
      throw ConfigError("config: bad variance_reduction '" + v + "'");
  }
}

void apply_buffer(BufferConfig& b, const json& j) {
  check_keys(j, {"capacity", "eviction"}, "buffer");
  b.capacity = j.value("capacity", b.capacity);
  if (j.contains("eviction")) {
    const std::string v = j["eviction"].get<std::string>();
    if (v == "class_balanced")
      b.eviction = EvictionPolicy::ClassBalanced;
    else if (v == "uniform")
      b.eviction = EvictionPolicy::UniformReservoir;
    else
      throw ConfigError("config: bad eviction policy '" + v + "'");
  }
}

void apply_rcs(rcs::RcsConfig& r, const json& j) {
  check_keys(j, {"cluster_count", "kl_threshold", "coreset_ratio", "symmetrized_kl", "kmeans"},
             "rcs");
  r.cluster_count = j.value("cluster_count", r.cluster_count);
  r.kl_threshold = j.value("kl_threshold", r.kl_threshold);
  r.coreset_ratio = j.value("coreset_ratio", r.coreset_ratio);
  r.symmetrized_kl = j.value("symmetrized_kl", r.symmetrized_kl);
  if (j.contains("kmeans")) {
    const json& k = j["kmeans"];
    check_keys(k, {"minibatch_size", "max_iters"}, "rcs.kmeans");
    r.kmeans.minibatch_size = k.value("minibatch_size", r.kmeans.minibatch_size);
    r.kmeans.max_iters = k.value("max_iters", r.kmeans.max_iters);
  }
}

void apply_loss(gbt::FocalLossConfig& l, const json& j) {
  check_keys(j, {"gamma", "alpha", "negative_mode"}, "loss");
  l.gamma = j.value("gamma", l.gamma);
  l.alpha = j.value("alpha", l.alpha);
  if (j.contains("negative_mode")) {
    const std::string v = j["negative_mode"].get<std::string>();
    if (v == "ignore")
      l.negative_mode = gbt::FocalLossConfig::NegativeMode::Ignore;
    else if (v == "complement")
      l.negative_mode = gbt::FocalLossConfig::NegativeMode::Complement;
    else
      throw ConfigError("config: bad negative_mode '" + v + "'");
  }
}

void apply_cupl(cupl::CuplConfig& c, const json& j) {
  check_keys(j, {"tau_p", "tau_n", "kappa", "mc_passes", "negative_any_class"}, "cupl");
  c.tau_p = j.value("tau_p", c.tau_p);
  c.tau_n = j.value("tau_n", c.tau_n);
  c.kappa = j.value("kappa", c.kappa);
  c.mc_passes = j.value("mc_passes", c.mc_passes);
  c.negative_any_class = j.value("negative_any_class", c.negative_any_class);
}

void apply_agent(pipeline::AgentConfig& a, const json& j) {
  check_keys(j,
             {"use_rcs", "use_gbt", "use_cupl", "accept_all_pseudo", "uniform_replay",
              "epochs_per_step", "replay_size", "hidden_dims", "initial_class_count"},
             "agent");
  a.use_rcs = j.value("use_rcs", a.use_rcs);
  a.use_gbt = j.value("use_gbt", a.use_gbt);
  a.use_cupl = j.value("use_cupl", a.use_cupl);
  a.accept_all_pseudo = j.value("accept_all_pseudo", a.accept_all_pseudo);
  a.uniform_replay = j.value("uniform_replay", a.uniform_replay);
  a.epochs_per_step = j.value("epochs_per_step", a.epochs_per_step);
  a.replay_size = j.value("replay_size", a.replay_size);
  if (j.contains("hidden_dims")) a.hidden_dims = j["hidden_dims"].get<std::vector<int>>();
  a.initial_class_count = j.value("initial_class_count", a.initial_class_count);
}

void apply_scenario(pipeline::ScenarioConfig& s, const json& j) {
  check_keys(j,
             {"batch_size", "labeled_fraction", "init_normal_count", "noise_step",
              "noise_schedule"},
             "scenario");
  s.batch_size = j.value("batch_size", s.batch_size);
  s.labeled_fraction = j.value("labeled_fraction", s.labeled_fraction);
  s.init_normal_count = j.value("init_normal_count", s.init_normal_count);
  s.noise_step = j.value("noise_step", s.noise_step);
  if (j.contains("noise_schedule")) {
    s.noise_schedule.clear();
    for (const auto& r : j["noise_schedule"]) {
      check_keys(r, {"start_step", "sigma"}, "scenario.noise_schedule");
      s.noise_schedule.push_back({r.at("start_step").get<int64_t>(), r.at("sigma").get<double>()});
    }
  }
}

void apply_synth(SynthSpec& s, const json& j) {
  check_keys(j, {"class_count", "dim", "total", "per_class_counts", "separations"}, "synth");
  s.class_count = j.value("class_count", s.class_count);
  s.dim = j.value("dim", s.dim);
  s.total = j.value("total", s.total);
  if (j.contains("per_class_counts"))
    s.per_class_counts = j["per_class_counts"].get<std::vector<int64_t>>();
  if (j.contains("separations")) s.separations = j["separations"].get<std::vector<double>>();
}

}  // namespace

void apply_overrides(RunConfig& cfg, const std::string& json_text) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config: not valid JSON");
  check_keys(j, {"seed", "agent", "model", "buffer", "rcs", "loss", "cupl", "scenario", "synth"},
             "");
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("agent")) apply_agent(cfg.agent, j["agent"]);
  if (j.contains("model")) apply_model(cfg.agent.model, j["model"]);
  if (j.contains("buffer")) apply_buffer(cfg.agent.buffer, j["buffer"]);
  if (j.contains("rcs")) apply_rcs(cfg.agent.rcs, j["rcs"]);
  if (j.contains("loss")) apply_loss(cfg.agent.loss, j["loss"]);
  if (j.contains("cupl")) apply_cupl(cfg.agent.cupl, j["cupl"]);
  if (j.contains("scenario")) apply_scenario(cfg.scenario, j["scenario"]);
  if (j.contains("synth")) apply_synth(cfg.synth, j["synth"]);
}

void apply_overrides_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  apply_overrides(cfg, ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  const pipeline::AgentConfig& a = cfg.agent;
  j["agent"] = {{"use_rcs", a.use_rcs},
                {"use_gbt", a.use_gbt},
                {"use_cupl", a.use_cupl},
                {"accept_all_pseudo", a.accept_all_pseudo},
                {"uniform_replay", a.uniform_replay},
                {"epochs_per_step", a.epochs_per_step},
                {"replay_size", a.replay_size},
                {"hidden_dims", a.hidden_dims},
                {"initial_class_count", a.initial_class_count}};
  const char* vr = a.model.variance_reduction == VarianceReduction::ArgmaxClass ? "argmax"
                   : a.model.variance_reduction == VarianceReduction::MaxClass  ? "max"
                                                                                : "mean";
  j["model"] = {{"dropout_rate", a.model.dropout_rate},
                {"learning_rate", a.model.learning_rate},
                {"init_scale", a.model.init_scale},
                {"variance_reduction", vr}};
  j["buffer"] = {
      {"capacity", a.buffer.capacity},
      {"eviction", a.buffer.eviction == EvictionPolicy::ClassBalanced ? "class_balanced"
                                                                      : "uniform"}};
  j["rcs"] = {{"cluster_count", a.rcs.cluster_count},
              {"kl_threshold", a.rcs.kl_threshold},
              {"coreset_ratio", a.rcs.coreset_ratio},
              {"symmetrized_kl", a.rcs.symmetrized_kl},
              {"kmeans",
               {{"minibatch_size", a.rcs.kmeans.minibatch_size},
                {"max_iters", a.rcs.kmeans.max_iters}}}};
  j["loss"] = {{"gamma", a.loss.gamma},
               {"alpha", a.loss.alpha},
               {"negative_mode",
                a.loss.negative_mode == gbt::FocalLossConfig::NegativeMode::Complement
                    ? "complement"
                    : "ignore"}};
  j["cupl"] = {{"tau_p", a.cupl.tau_p},
               {"tau_n", a.cupl.tau_n},
               {"kappa", a.cupl.kappa},
               {"mc_passes", a.cupl.mc_passes},
               {"negative_any_class", a.cupl.negative_any_class}};
  json schedule = json::array();
  for (const auto& r : cfg.scenario.noise_schedule)
    schedule.push_back({{"start_step", r.start_step}, {"sigma", r.sigma}});
  j["scenario"] = {{"batch_size", cfg.scenario.batch_size},
                   {"labeled_fraction", cfg.scenario.labeled_fraction},
                   {"init_normal_count", cfg.scenario.init_normal_count},
                   {"noise_step", cfg.scenario.noise_step},
                   {"noise_schedule", std::move(schedule)}};
  j["synth"] = {{"class_count", cfg.synth.class_count},
                {"dim", cfg.synth.dim},
                {"total", cfg.synth.total},
                {"per_class_counts", cfg.synth.per_class_counts},
                {"separations", cfg.synth.separations}};
  return j.dump();
}

void set_numeric_field(RunConfig& cfg, const std::string& name, double value) {
  auto as_int = [&](const char* field) {
    if (value != std::floor(value))
      throw ConfigError(std::string("sweep: field '") + field + "' takes an integer");
    return static_cast<int>(value);
  };
  if (name == "rcs.coreset_ratio")
    cfg.agent.rcs.coreset_ratio = value;
  else if (name == "rcs.cluster_count")
    cfg.agent.rcs.cluster_count = as_int("rcs.cluster_count");
  else if (name == "rcs.kl_threshold")
    cfg.agent.rcs.kl_threshold = value;
  else if (name == "cupl.tau_p")
    cfg.agent.cupl.tau_p = value;
  else if (name == "cupl.tau_n")
    cfg.agent.cupl.tau_n = value;
  else if (name == "cupl.kappa")
    cfg.agent.cupl.kappa = value;
  else if (name == "cupl.mc_passes")
    cfg.agent.cupl.mc_passes = as_int("cupl.mc_passes");
  else if (name == "loss.gamma")
    cfg.agent.loss.gamma = value;
  else if (name == "loss.alpha")
    cfg.agent.loss.alpha = value;
  else if (name == "model.learning_rate")
    cfg.agent.model.learning_rate = value;
  else if (name == "model.dropout_rate")
    cfg.agent.model.dropout_rate = value;
  else if (name == "buffer.capacity")
    cfg.agent.buffer.capacity = static_cast<std::size_t>(as_int("buffer.capacity"));
  else if (name == "agent.replay_size")
    cfg.agent.replay_size = static_cast<std::size_t>(as_int("agent.replay_size"));
  else if (name == "agent.epochs_per_step")
    cfg.agent.epochs_per_step = as_int("agent.epochs_per_step");
  else if (name == "scenario.labeled_fraction")
    cfg.scenario.labeled_fraction = value;
  else if (name == "scenario.batch_size")
    cfg.scenario.batch_size = as_int("scenario.batch_size");
  else
    throw ConfigError("sweep: unknown or non-numeric field '" + name + "'");
}

std::vector<int64_t> derive_synth_counts(int class_count, int64_t total) {
  // Priors 0.9, then 0.09, 0.009, ... with the last fault class absorbing
  // the remainder, so a 3-class set comes out 0.90/0.09/0.01.
  std::vector<double> priors(static_cast<std::size_t>(class_count), 0.0);
  priors[0] = 0.9;
  double remaining = 0.1;
  for (int k = 1; k < class_count; ++k) {
    if (k == class_count - 1)
      priors[static_cast<std::size_t>(k)] = remaining;
    else {
      priors[static_cast<std::size_t>(k)] = remaining * 0.9;
      remaining *= 0.1;
    }
  }
  std::vector<int64_t> counts(static_cast<std::size_t>(class_count), 0);
  int64_t assigned = 0;
  for (int k = class_count - 1; k >= 1; --k) {
    counts[static_cast<std::size_t>(k)] = std::max<int64_t>(
        1, static_cast<int64_t>(std::llround(priors[static_cast<std::size_t>(k)] *
                                             static_cast<double>(total))));
    assigned += counts[static_cast<std::size_t>(k)];
  }
  counts[0] = total - assigned;
  if (counts[0] <= 0) throw ConfigError("synth: total too small for the class count");
  return counts;
}

}  // namespace config
}  // namespace srtfd
