#include "modelswitch/experiments.hpp"

#include <chrono>
#include <stdexcept>

namespace modelswitch {
namespace {

nlohmann::json spec_to_json(const DatasetSpec& s) {
  nlohmann::json j{{"n_samples", s.n_samples},
                   {"n_features", s.n_features},
                   {"n_informative", s.n_informative},
                   {"n_redundant", s.n_redundant},
                   {"n_clusters_per_class", s.n_clusters_per_class},
                   {"class_sep", s.class_sep},
                   {"seed", s.seed}};
  j["layout_seed"] = s.layout_seed ? nlohmann::json(*s.layout_seed) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json noise_to_json(const std::optional<NoiseSpec>& n) {
  if (!n) return nullptr;
  return {{"level", n->level}, {"flip_labels", n->flip_labels},
          {"jitter_features", n->jitter_features}};
}

DatasetSpec experiment_shape(std::size_t n_samples) {
  DatasetSpec s;
  s.n_samples = n_samples;
  s.n_features = 20;
  s.n_informative = 10;
  s.n_clusters_per_class = 1;
  return s;
}

ClassifierPtr fit_simple(const SimpleModelConfig& cfg, const Dataset& train) {
  if (cfg.kind == SimpleModelKind::Forest) return fit_forest(train, cfg.forest);
  return fit_linear_svm(train, cfg.svm);
}

using Clock = std::chrono::steady_clock;

// Incumbent fit at initial_spec size, then one switching stage per grown size.
std::vector<ExperimentReport> run_chain(const ExperimentConfig& config,
                                        const std::vector<std::size_t>& grown_sizes) {
  config.validate();
  const auto start = Clock::now();
  const SeededRng root = rng_from_seed(config.seed);

  DatasetSpec initial_spec = config.initial_spec;
  initial_spec.seed = root.split("data/initial").next_u64();
  initial_spec.layout_seed = config.seed;
  Dataset initial = generate(initial_spec);
  if (config.initial_noise) {
    initial = add_noise(initial, *config.initial_noise, root.split("initial_noise"));
  }
  const Split initial_split =
      train_val_split(initial, config.val_fraction, root.split("split/initial"));
  ClassifierPtr incumbent = fit_simple(config.simple_model, initial_split.train);
  const EvalResult initial_eval = evaluate(*incumbent, initial_split.val);

  const BoostParams boost = config.complex_model;
  CandidateTrainer trainer = [boost](const Dataset& d) -> ClassifierPtr {
    return fit_boosted(d, boost);
  };

  std::vector<SwitchStage> stages;
  std::vector<StageRecord> records;
  std::size_t previous_size = config.initial_spec.n_samples;
  for (std::size_t i = 0; i < grown_sizes.size(); ++i) {
    DatasetSpec spec = config.grown_spec;
    spec.n_samples = grown_sizes[i];
    spec.seed = root.split("data/grown/" + std::to_string(i + 1)).next_u64();
    spec.layout_seed = config.seed;
    const Dataset grown = generate(spec);
    Split split = train_val_split(grown, config.val_fraction,
                                  root.split("split/grown/" + std::to_string(i + 1)));
    StageRecord rec;
    rec.initial_size = previous_size;
    rec.grown_size = grown_sizes[i];
    rec.train_rows = split.train.size();
    rec.val_rows = split.val.size();
    rec.initial_eval = initial_eval;
    records.push_back(rec);
    stages.push_back(SwitchStage{std::move(split.train), std::move(split.val), config.policy,
                                 trainer, config.candidate_noise});
    previous_size = grown_sizes[i];
  }

  const ChainResult chain = switch_chain(stages, incumbent, root.split("switch"));
  const double elapsed = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  // Reinterpret incumbency per stage for the per-step reports.
  std::vector<ExperimentReport> reports;
  std::string kind = incumbent->kind();
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].switch_report = chain.reports[i];
    if (chain.reports[i].decision.action == SwitchAction::SwitchToCandidate) {
      kind = chain.reports[i].candidate_kind;
    }
    ExperimentReport r;
    r.config = config;
    r.config.grown_spec.n_samples = records[i].grown_size;
    r.stages.push_back(records[i]);
    r.final_model_kind = kind;
    r.total_elapsed_ms = elapsed;
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace

void ExperimentConfig::validate() const {
  initial_spec.validate();
  grown_spec.validate();
  if (grown_spec.n_samples < initial_spec.n_samples) {
    throw std::invalid_argument("experiment: grown_spec.n_samples must be >= initial_spec.n_samples");
  }
  if (grown_spec.n_features != initial_spec.n_features ||
      grown_spec.n_informative != initial_spec.n_informative ||
      grown_spec.n_redundant != initial_spec.n_redundant ||
      grown_spec.n_clusters_per_class != initial_spec.n_clusters_per_class ||
      grown_spec.class_sep != initial_spec.class_sep) {
    throw std::invalid_argument("experiment: grown_spec must share the initial distribution shape");
  }
  if (initial_noise) initial_noise->validate();
  if (candidate_noise) candidate_noise->validate();
  complex_model.validate();
  policy.validate();
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("experiment: val_fraction must lie in (0, 1)");
  }
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json simple;
  if (simple_model.kind == SimpleModelKind::Forest) {
    simple = {{"model_kind", "random_forest"}, {"params", simple_model.forest.to_json()}};
  } else {
    simple = {{"model_kind", "linear_svm"}, {"params", simple_model.svm.to_json()}};
  }
  return {{"name", name},
          {"seed", seed},
          {"initial_spec", spec_to_json(initial_spec)},
          {"grown_spec", spec_to_json(grown_spec)},
          {"initial_noise", noise_to_json(initial_noise)},
          {"candidate_noise", noise_to_json(candidate_noise)},
          {"simple_model", simple},
          {"complex_model", {{"model_kind", "boosted_trees"}, {"params", complex_model.to_json()}}},
          {"policy", policy.to_json()},
          {"val_fraction", val_fraction}};
}

nlohmann::json ExperimentReport::to_json(bool include_timings) const {
  nlohmann::json stages_json = nlohmann::json::array();
  for (const StageRecord& s : stages) {
    stages_json.push_back({{"initial_size", s.initial_size},
                           {"grown_size", s.grown_size},
                           {"train_rows", s.train_rows},
                           {"val_rows", s.val_rows},
                           {"initial_eval", s.initial_eval.to_json()},
                           {"switch_report", s.switch_report.to_json(include_timings)}});
  }
  nlohmann::json j{{"report_version", 1},
                   {"config", config.to_json()},
                   {"stages", std::move(stages_json)},
                   {"final_model_kind", final_model_kind},
                   {"notes", config.notes},
                   {"log", log_lines()}};
  if (include_timings) j["total_elapsed_ms"] = total_elapsed_ms;
  return j;
}

std::vector<std::string> ExperimentReport::log_lines() const {
  std::vector<std::string> lines;
  for (const StageRecord& s : stages) {
    for (auto& l : s.switch_report.log_lines()) lines.push_back(std::move(l));
  }
  return lines;
}

ExperimentConfig experiment_1_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.name = "exp1";
  c.seed = seed;
  c.initial_spec = experiment_shape(5000);
  c.grown_spec = experiment_shape(25000);
  c.candidate_noise = NoiseSpec{0.2, true, true};
  c.simple_model.kind = SimpleModelKind::Forest;
  c.simple_model.forest.n_estimators = 100;
  c.simple_model.forest.seed = seed;
  c.simple_model.svm.seed = seed;
  c.complex_model.max_depth = 10;
  c.complex_model.seed = seed;
  c.notes = {
      "incumbent is a random forest; a linear-SVM incumbent is selectable via "
      "simple_model=linear_svm",
      "candidate is trained on a noise-augmented copy of the grown training split"};
  return c;
}

ExperimentConfig experiment_2_config(std::uint64_t seed) {
  ExperimentConfig c;
  c.name = "exp2";
  c.seed = seed;
  c.initial_spec = experiment_shape(1000);
  c.grown_spec = experiment_shape(25000);
  c.initial_noise = NoiseSpec{0.2, true, true};
  c.simple_model.kind = SimpleModelKind::Forest;
  c.simple_model.forest.n_estimators = 100;
  c.simple_model.forest.seed = seed;
  c.simple_model.svm.seed = seed;
  c.complex_model.max_depth = 5;
  c.complex_model.seed = seed;
  c.notes = {
      "incumbent is a random forest; a linear-SVM incumbent is selectable via "
      "simple_model=linear_svm",
      "initial noise level 0.2 is an assumed value"};
  return c;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  return run_chain(config, {config.grown_spec.n_samples}).front();
}

ExperimentReport run_experiment_1(std::uint64_t seed) {
  return run_experiment(experiment_1_config(seed));
}

ExperimentReport run_experiment_2(std::uint64_t seed) {
  return run_experiment(experiment_2_config(seed));
}

std::vector<ExperimentReport> run_size_sweep(const std::vector<std::size_t>& sizes,
                                             std::uint64_t seed) {
  if (sizes.size() < 2) throw std::invalid_argument("size sweep: need at least two sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) {
      throw std::invalid_argument("size sweep: sizes must be strictly increasing");
    }
  }
  ExperimentConfig config = experiment_2_config(seed);
  config.name = "sweep";
  config.initial_spec.n_samples = sizes.front();
  config.grown_spec.n_samples = sizes.back();
  return run_chain(config, std::vector<std::size_t>(sizes.begin() + 1, sizes.end()));
}

}  // namespace modelswitch
