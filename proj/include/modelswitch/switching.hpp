#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modelswitch/classifier.hpp"
#include "modelswitch/dataset.hpp"
#include "modelswitch/metrics.hpp"
#include "modelswitch/rng.hpp"

namespace modelswitch {

struct SwitchPolicy {
  double accuracy_threshold = 0.8;
  // When false the threshold is recorded but never consulted.
  bool require_threshold = true;
  // Minimum improvement over the incumbent.
  double margin = 0.0;

  void validate() const;
  nlohmann::json to_json() const;
  bool operator==(const SwitchPolicy&) const = default;
};

enum class SwitchAction { KeepCurrent, SwitchToCandidate };
enum class SwitchReason { CandidateNotBetter, CandidateBelowThreshold, CandidateBetter };

struct SwitchDecision {
  SwitchAction action = SwitchAction::KeepCurrent;
  SwitchReason reason = SwitchReason::CandidateNotBetter;
  bool operator==(const SwitchDecision&) const = default;
};

std::string to_string(SwitchAction a);
std::string to_string(SwitchReason r);

// Switch iff candidate > current + margin and, with the gate on,
// candidate >= threshold. Improvement is checked before the threshold.
SwitchDecision decide(double current_acc, double candidate_acc, const SwitchPolicy& policy);

struct SwitchReport {
  double current_accuracy = 0.0;
  double candidate_accuracy = 0.0;
  EvalResult current_eval;
  EvalResult candidate_eval;
  SwitchDecision decision;
  SwitchPolicy policy;
  bool candidate_trained_on_noisy = false;
  double noise_level = 0.0;
  std::string current_kind;
  std::string candidate_kind;
  double elapsed_train_ms = 0.0;
  double elapsed_eval_ms = 0.0;

  // Timings are wall-clock and therefore excluded unless requested.
  nlohmann::json to_json(bool include_timings = false) const;
  // "Previous model accuracy: ..", "New model accuracy: ..", keep/switch line.
  std::vector<std::string> log_lines() const;
};

// Error raised inside a switching stage, prefixed with the stage context.
class StageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using CandidateTrainer = std::function<ClassifierPtr(const Dataset&)>;

struct SwitchResult {
  ClassifierPtr model;
  SwitchReport report;
};

// Scores `current` on val, trains a candidate on train (noise-augmented first
// when candidate_noise is set), scores it on the same val and keeps whichever
// model decide() selects. The trainer never sees validation rows.
SwitchResult switch_models(const ClassifierPtr& current, const Dataset& train,
                           const Dataset& val, const SwitchPolicy& policy,
                           const CandidateTrainer& candidate_trainer,
                           const std::optional<NoiseSpec>& candidate_noise, SeededRng rng);

struct SwitchStage {
  Dataset train;
  Dataset val;
  SwitchPolicy policy;
  CandidateTrainer trainer;
  std::optional<NoiseSpec> noise;
};

struct ChainResult {
  ClassifierPtr model;
  std::vector<SwitchReport> reports;
};

// Folds switch_models over the stages; stage i uses stream "stage/i".
ChainResult switch_chain(const std::vector<SwitchStage>& stages, ClassifierPtr initial,
                         SeededRng rng);

}  // namespace modelswitch
