#include "modelswitch/switching.hpp"

#include <chrono>
#include <cmath>

namespace modelswitch {

void SwitchPolicy::validate() const {
  if (!(accuracy_threshold >= 0.0 && accuracy_threshold <= 1.0)) {
    throw std::invalid_argument("switch policy: accuracy_threshold must lie in [0, 1]");
  }
  if (!(margin >= 0.0) || !std::isfinite(margin)) {
    throw std::invalid_argument("switch policy: margin must be nonnegative");
  }
}

nlohmann::json SwitchPolicy::to_json() const {
  return {{"accuracy_threshold", accuracy_threshold},
          {"require_threshold", require_threshold},
          {"margin", margin}};
}

std::string to_string(SwitchAction a) {
  return a == SwitchAction::KeepCurrent ? "KeepCurrent" : "SwitchToCandidate";
}

std::string to_string(SwitchReason r) {
  switch (r) {
    case SwitchReason::CandidateNotBetter: return "candidate_not_better";
    case SwitchReason::CandidateBelowThreshold: return "candidate_below_threshold";
    case SwitchReason::CandidateBetter: return "candidate_better";
  }
  return "unknown";
}

SwitchDecision decide(double current_acc, double candidate_acc, const SwitchPolicy& policy) {
  policy.validate();
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(current_acc) || !in_unit(candidate_acc)) {
    throw std::invalid_argument("decide: accuracies must lie in [0, 1]");
  }
  if (!(candidate_acc > current_acc + policy.margin)) {
    return {SwitchAction::KeepCurrent, SwitchReason::CandidateNotBetter};
  }
  if (policy.require_threshold && candidate_acc < policy.accuracy_threshold) {
    return {SwitchAction::KeepCurrent, SwitchReason::CandidateBelowThreshold};
  }
  return {SwitchAction::SwitchToCandidate, SwitchReason::CandidateBetter};
}

nlohmann::json SwitchReport::to_json(bool include_timings) const {
  nlohmann::json j{
      {"current_accuracy", current_accuracy},
      {"candidate_accuracy", candidate_accuracy},
      {"current_accuracy_display", format_accuracy(current_accuracy)},
      {"candidate_accuracy_display", format_accuracy(candidate_accuracy)},
      {"current_eval", current_eval.to_json()},
      {"candidate_eval", candidate_eval.to_json()},
      {"decision", to_string(decision.action)},
      {"reason", to_string(decision.reason)},
      {"policy", policy.to_json()},
      {"candidate_trained_on_noisy", candidate_trained_on_noisy},
      {"noise_level", noise_level},
      {"current_kind", current_kind},
      {"candidate_kind", candidate_kind},
      {"log", log_lines()},
  };
  if (include_timings) {
    j["elapsed_train_ms"] = elapsed_train_ms;
    j["elapsed_eval_ms"] = elapsed_eval_ms;
  }
  return j;
}

std::vector<std::string> SwitchReport::log_lines() const {
  std::vector<std::string> lines{
      "Previous model accuracy: " + format_accuracy(current_accuracy),
      "New model accuracy: " + format_accuracy(candidate_accuracy),
  };
  if (decision.action == SwitchAction::SwitchToCandidate) {
    lines.push_back("Switching to a new model with accuracy: " +
                    format_accuracy(candidate_accuracy));
  } else {
    lines.push_back("Keeping the current model with accuracy: " +
                    format_accuracy(current_accuracy));
  }
  return lines;
}

namespace {
using Clock = std::chrono::steady_clock;
double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}
}  // namespace

SwitchResult switch_models(const ClassifierPtr& current, const Dataset& train,
                           const Dataset& val, const SwitchPolicy& policy,
                           const CandidateTrainer& candidate_trainer,
                           const std::optional<NoiseSpec>& candidate_noise, SeededRng rng) {
  if (!current) throw std::invalid_argument("switch_models: no current model");
  policy.validate();
  val.validate();
  if (val.size() == 0) throw std::invalid_argument("switch_models: empty validation set");
  if (train.n_features() != val.n_features() || current->n_features() != val.n_features()) {
    throw std::invalid_argument("switch_models: inconsistent feature widths");
  }

  SwitchReport report;
  report.policy = policy;
  report.current_kind = current->kind();

  auto eval_start = Clock::now();
  report.current_eval = evaluate(*current, val);
  double eval_ms = ms_since(eval_start);

  ClassifierPtr candidate;
  const auto train_start = Clock::now();
  try {
    if (candidate_noise) {
      report.candidate_trained_on_noisy = true;
      report.noise_level = candidate_noise->level;
      candidate = candidate_trainer(add_noise(train, *candidate_noise, rng.split("candidate_noise")));
    } else {
      candidate = candidate_trainer(train);
    }
  } catch (const std::exception& e) {
    throw StageError(std::string("candidate training: ") + e.what());
  }
  if (!candidate) throw StageError("candidate training: trainer returned no model");
  report.elapsed_train_ms = ms_since(train_start);
  report.candidate_kind = candidate->kind();

  eval_start = Clock::now();
  try {
    report.candidate_eval = evaluate(*candidate, val);
  } catch (const std::exception& e) {
    throw StageError(std::string("candidate evaluation: ") + e.what());
  }
  report.elapsed_eval_ms = eval_ms + ms_since(eval_start);

  report.current_accuracy = report.current_eval.accuracy;
  report.candidate_accuracy = report.candidate_eval.accuracy;
  report.decision = decide(report.current_accuracy, report.candidate_accuracy, policy);

  return SwitchResult{
      report.decision.action == SwitchAction::SwitchToCandidate ? candidate : current,
      std::move(report)};
}

ChainResult switch_chain(const std::vector<SwitchStage>& stages, ClassifierPtr initial,
                         SeededRng rng) {
  if (stages.empty()) throw std::invalid_argument("switch_chain: no stages");
  ChainResult out{std::move(initial), {}};
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const SwitchStage& s = stages[i];
    try {
      auto step = switch_models(out.model, s.train, s.val, s.policy, s.trainer, s.noise,
                                rng.split("stage/" + std::to_string(i)));
      out.model = std::move(step.model);
      out.reports.push_back(std::move(step.report));
    } catch (const std::exception& e) {
      throw StageError("stage " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace modelswitch
