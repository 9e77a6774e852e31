#include <doctest.h>

#include "modelswitch/experiments.hpp"

using namespace modelswitch;

namespace {

ExperimentConfig small_config(std::uint64_t seed) {
  ExperimentConfig c = experiment_2_config(seed);
  c.name = "small";
  c.initial_spec.n_samples = 300;
  c.grown_spec.n_samples = 1500;
  c.simple_model.forest.n_estimators = 10;
  c.complex_model.n_estimators = 20;
  return c;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("experiment configurations") {
  const auto e1 = experiment_1_config(42);
  CHECK(e1.initial_spec.n_samples == 5000);
  CHECK(e1.grown_spec.n_samples == 25000);
  CHECK(e1.initial_spec.n_features == 20);
  CHECK(e1.initial_spec.n_informative == 10);
  CHECK(e1.complex_model.max_depth == 10);
  CHECK(e1.complex_model.n_estimators == 200);
  CHECK(e1.complex_model.learning_rate == 0.05);
  CHECK(e1.complex_model.subsample == 0.8);
  CHECK(e1.complex_model.colsample_bytree == 0.8);
  REQUIRE(e1.candidate_noise);
  CHECK(e1.candidate_noise->level == 0.2);
  CHECK_FALSE(e1.initial_noise);
  CHECK(e1.simple_model.kind == SimpleModelKind::Forest);

  const auto e2 = experiment_2_config(42);
  CHECK(e2.initial_spec.n_samples == 1000);
  CHECK(e2.complex_model.max_depth == 5);
  CHECK(e2.simple_model.forest.n_estimators == 100);
  CHECK(e2.policy.accuracy_threshold == 0.8);
  REQUIRE(e2.initial_noise);
  CHECK_FALSE(e2.candidate_noise);
}

TEST_CASE("small experiment: one stage, deterministic, log matches report") {
  const auto a = run_experiment(small_config(7));
  const auto b = run_experiment(small_config(7));
  REQUIRE(a.stages.size() == 1);
  CHECK(a.to_json().dump() == b.to_json().dump());
  const auto& sr = a.stages[0].switch_report;
  CHECK(a.stages[0].grown_size == 1500);
  CHECK(a.stages[0].val_rows == 300);
  CHECK(a.stages[0].train_rows == 1200);
  const auto lines = a.log_lines();
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "Previous model accuracy: " + format_accuracy(sr.current_accuracy));
  CHECK(lines[1] == "New model accuracy: " + format_accuracy(sr.candidate_accuracy));
  const std::string expected_kind =
      sr.decision.action == SwitchAction::SwitchToCandidate ? "boosted_trees" : "random_forest";
  CHECK(a.final_model_kind == expected_kind);
  CHECK(a.to_json().at("notes").size() == 2);
  CHECK_FALSE(a.to_json().contains("total_elapsed_ms"));
}

TEST_CASE("linear svm incumbent is selectable") {
  ExperimentConfig c = small_config(3);
  c.simple_model.kind = SimpleModelKind::LinearSvm;
  const auto r = run_experiment(c);
  CHECK(r.stages[0].switch_report.current_kind == "linear_svm");
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_config(1);
  c.grown_spec.n_samples = 100;
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
  c = small_config(1);
  c.grown_spec.n_features = 21;
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
}

TEST_CASE("size sweep preconditions and shape") {
  CHECK_THROWS_AS(run_size_sweep({1000}, 42), std::invalid_argument);
  CHECK_THROWS_AS(run_size_sweep({1000, 1000}, 42), std::invalid_argument);
  CHECK_THROWS_AS(run_size_sweep({2000, 1000}, 42), std::invalid_argument);
  const auto reports = run_size_sweep({300, 600, 1200}, 5);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].stages[0].initial_size == 300);
  CHECK(reports[0].stages[0].grown_size == 600);
  CHECK(reports[1].stages[0].initial_size == 600);
  CHECK(reports[1].stages[0].grown_size == 1200);
}

TEST_CASE("two-point sweep reproduces experiment 2") {
  const auto sweep = run_size_sweep({1000, 25000}, 42);
  const auto exp2 = run_experiment_2(42);
  REQUIRE(sweep.size() == 1);
  CHECK(sweep[0].stages[0].switch_report.to_json() == exp2.stages[0].switch_report.to_json());
}

}
