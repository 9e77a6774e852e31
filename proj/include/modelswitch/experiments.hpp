#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modelswitch/boosted.hpp"
#include "modelswitch/dataset.hpp"
#include "modelswitch/forest.hpp"
#include "modelswitch/linear_svm.hpp"
#include "modelswitch/switching.hpp"

namespace modelswitch {

enum class SimpleModelKind { Forest, LinearSvm };

struct SimpleModelConfig {
  SimpleModelKind kind = SimpleModelKind::Forest;
  ForestParams forest;
  LinearSvmParams svm;
};

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 42;
  // n_samples and shape; the sample seed and layout seed are derived from
  // `seed` when the experiment runs.
  DatasetSpec initial_spec;
  DatasetSpec grown_spec;
  std::optional<NoiseSpec> initial_noise;
  std::optional<NoiseSpec> candidate_noise;
  SimpleModelConfig simple_model;
  BoostParams complex_model;
  SwitchPolicy policy;
  double val_fraction = 0.2;
  std::vector<std::string> notes;

  void validate() const;
  nlohmann::json to_json() const;
};

struct StageRecord {
  std::size_t initial_size = 0;
  std::size_t grown_size = 0;
  std::size_t train_rows = 0;
  std::size_t val_rows = 0;
  // Simple model on its own held-out split, before growth.
  EvalResult initial_eval;
  SwitchReport switch_report;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<StageRecord> stages;
  std::string final_model_kind;
  double total_elapsed_ms = 0.0;

  nlohmann::json to_json(bool include_timings = false) const;
  std::vector<std::string> log_lines() const;
};

// Random-forest incumbent on 5000 clean rows; boosted candidate (depth 10)
// trained on a level-0.2 noisy copy of the 25000-row set.
ExperimentConfig experiment_1_config(std::uint64_t seed);
// Random-forest incumbent on 1000 noisy rows; boosted candidate (depth 5)
// trained on the clean 25000-row set, gated at 0.8.
ExperimentConfig experiment_2_config(std::uint64_t seed);

ExperimentReport run_experiment(const ExperimentConfig& config);
ExperimentReport run_experiment_1(std::uint64_t seed);
ExperimentReport run_experiment_2(std::uint64_t seed);

// Experiment-2 settings chained over increasing sizes; one report per growth
// step. Throws std::invalid_argument unless sizes has >= 2 strictly
// increasing entries.
std::vector<ExperimentReport> run_size_sweep(const std::vector<std::size_t>& sizes,
                                             std::uint64_t seed);

}  // namespace modelswitch
