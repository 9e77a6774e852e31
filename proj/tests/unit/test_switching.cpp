#include <doctest.h>

#include "modelswitch/boosted.hpp"
#include "modelswitch/forest.hpp"
#include "modelswitch/switching.hpp"
#include "oracles.hpp"

using namespace modelswitch;

namespace {

Dataset problem(std::size_t n, std::uint64_t seed, std::uint64_t layout = 5) {
  DatasetSpec s;
  s.n_samples = n;
  s.n_features = 8;
  s.n_informative = 4;
  s.seed = seed;
  s.layout_seed = layout;
  return generate(s);
}

ClassifierPtr stump_forest(const Dataset& d) {
  ForestParams p;
  p.n_estimators = 1;
  p.max_depth = 0;
  return fit_forest(d, p);
}

ClassifierPtr decent_boost(const Dataset& d) {
  BoostParams p;
  p.n_estimators = 30;
  p.max_depth = 3;
  return fit_boosted(d, p);
}

constexpr double kSentinel = 123456.789;

}  // namespace

TEST_SUITE("switching") {

TEST_CASE("decide on the reference keep and switch outcomes") {
  const SwitchPolicy def;
  CHECK(decide(0.95, 0.54, def) ==
        SwitchDecision{SwitchAction::KeepCurrent, SwitchReason::CandidateNotBetter});
  CHECK(decide(0.93, 0.96, def) ==
        SwitchDecision{SwitchAction::SwitchToCandidate, SwitchReason::CandidateBetter});
}

TEST_CASE("decide edge cases") {
  SwitchPolicy p;
  for (double a : {0.0, 0.3, 0.8, 1.0}) {
    CHECK(decide(a, a, p).action == SwitchAction::KeepCurrent);
  }
  CHECK(decide(0.60, 0.75, p) ==
        SwitchDecision{SwitchAction::KeepCurrent, SwitchReason::CandidateBelowThreshold});
  p.require_threshold = false;
  CHECK(decide(0.60, 0.75, p).action == SwitchAction::SwitchToCandidate);
  p.margin = 0.2;
  CHECK(decide(0.60, 0.75, p).reason == SwitchReason::CandidateNotBetter);
  SwitchPolicy strict;
  strict.accuracy_threshold = 1.0;
  CHECK(decide(0.9, 0.99, strict).action == SwitchAction::KeepCurrent);
  CHECK(decide(0.9, 1.0, strict).action == SwitchAction::SwitchToCandidate);
  CHECK_THROWS_AS(decide(1.2, 0.5, p), std::invalid_argument);
  CHECK_THROWS_AS(decide(0.5, -0.1, p), std::invalid_argument);
  SwitchPolicy bad;
  bad.accuracy_threshold = 1.5;
  CHECK_THROWS_AS(decide(0.5, 0.6, bad), std::invalid_argument);
}

TEST_CASE("decide matches the truth table and is monotone in the candidate") {
  SeededRng rng = rng_from_seed(31);
  for (int i = 0; i < 2000; ++i) {
    SwitchPolicy p;
    p.accuracy_threshold = rng.next_uniform();
    p.require_threshold = rng.next_below(2) == 0;
    p.margin = rng.next_below(3) == 0 ? 0.0 : 0.1 * rng.next_uniform();
    // Coarse grid makes exact ties and threshold hits common.
    const double cur = static_cast<double>(rng.next_below(21)) / 20.0;
    const double cand = static_cast<double>(rng.next_below(21)) / 20.0;
    REQUIRE(decide(cur, cand, p) == oracle::decide_truth_table(cur, cand, p));
    if (decide(cur, cand, p).action == SwitchAction::SwitchToCandidate) {
      const double higher = cand + (1.0 - cand) * rng.next_uniform();
      REQUIRE(decide(cur, higher, p).action == SwitchAction::SwitchToCandidate);
    }
  }
}

TEST_CASE("switch_models keeps a stronger incumbent against a crippled candidate") {
  const Dataset initial = problem(600, 1);
  const Split grown = train_val_split(problem(2000, 2), 0.2, rng_from_seed(3));
  const ClassifierPtr current = decent_boost(initial);
  const auto res = switch_models(current, grown.train, grown.val, SwitchPolicy{}, stump_forest,
                                 NoiseSpec{0.2, true, true}, rng_from_seed(4));
  CHECK(res.model == current);
  CHECK(res.report.decision.action == SwitchAction::KeepCurrent);
  CHECK(res.report.candidate_trained_on_noisy);
  CHECK(res.report.noise_level == 0.2);
  CHECK(res.report.current_accuracy > res.report.candidate_accuracy);
  CHECK(res.report.current_accuracy == evaluate(*current, grown.val).accuracy);
  const auto lines = res.report.log_lines();
  REQUIRE(lines.size() == 3);
  CHECK(lines[2].rfind("Keeping the current model with accuracy: ", 0) == 0);
}

TEST_CASE("switch_models adopts a stronger clean candidate") {
  const Dataset initial = problem(600, 1);
  const Split grown = train_val_split(problem(2000, 2), 0.2, rng_from_seed(3));
  const ClassifierPtr current = stump_forest(initial);
  const auto res = switch_models(current, grown.train, grown.val, SwitchPolicy{}, decent_boost,
                                 std::nullopt, rng_from_seed(4));
  CHECK(res.model != current);
  CHECK(res.model->kind() == "boosted_trees");
  CHECK(res.report.decision.action == SwitchAction::SwitchToCandidate);
  CHECK_FALSE(res.report.candidate_trained_on_noisy);
  CHECK(evaluate(*res.model, grown.val).accuracy == res.report.candidate_accuracy);
  CHECK(res.report.log_lines()[2] ==
        "Switching to a new model with accuracy: " +
            format_accuracy(res.report.candidate_accuracy));
}

TEST_CASE("a behaviorally identical candidate is a tie and keeps the incumbent") {
  const Split s = train_val_split(problem(800, 2), 0.2, rng_from_seed(3));
  const ClassifierPtr current = decent_boost(s.train);
  CandidateTrainer same = [](const Dataset& d) { return decent_boost(d); };
  const auto res = switch_models(current, s.train, s.val, SwitchPolicy{}, same, std::nullopt,
                                 rng_from_seed(1));
  CHECK(res.report.current_accuracy == res.report.candidate_accuracy);
  CHECK(res.model == current);
}

TEST_CASE("the candidate trainer never sees validation rows") {
  const Dataset base = problem(1000, 2);
  Split s = train_val_split(base, 0.3, rng_from_seed(3));
  // Mark every validation row; a trainer receiving one throws.
  std::vector<double> vals = s.val.x.values();
  for (std::size_t i = 0; i < s.val.size(); ++i) vals[i * s.val.n_features()] = kSentinel;
  const Dataset marked_val{Matrix(s.val.size(), s.val.n_features(), vals), s.val.y, std::nullopt};
  CandidateTrainer guarded = [](const Dataset& d) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d.x(i, 0) == kSentinel) throw std::runtime_error("validation row leaked");
    }
    return decent_boost(d);
  };
  const ClassifierPtr current = stump_forest(s.train);
  CHECK_NOTHROW(switch_models(current, s.train, marked_val, SwitchPolicy{}, guarded,
                              NoiseSpec{0.1, true, false}, rng_from_seed(1)));
  CHECK_THROWS_WITH_AS(switch_models(current, marked_val, marked_val, SwitchPolicy{}, guarded,
                                     std::nullopt, rng_from_seed(1)),
                       doctest::Contains("candidate training"), StageError);
}

TEST_CASE("switch_models rejects inconsistent inputs") {
  const Split s = train_val_split(problem(400, 2), 0.2, rng_from_seed(3));
  const ClassifierPtr current = stump_forest(s.train);
  const Dataset narrow{Matrix(2, 1, {0, 1}), {0, 1}, std::nullopt};
  CHECK_THROWS_AS(switch_models(current, s.train, narrow, SwitchPolicy{}, stump_forest,
                                std::nullopt, rng_from_seed(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(switch_models(nullptr, s.train, s.val, SwitchPolicy{}, stump_forest,
                                std::nullopt, rng_from_seed(1)),
                  std::invalid_argument);
}

TEST_CASE("report JSON carries full precision and display values") {
  const Split s = train_val_split(problem(400, 2), 0.2, rng_from_seed(3));
  const auto res = switch_models(stump_forest(s.train), s.train, s.val, SwitchPolicy{},
                                 decent_boost, std::nullopt, rng_from_seed(1));
  const auto j = res.report.to_json();
  CHECK(j.at("current_accuracy").get<double>() == res.report.current_accuracy);
  CHECK(j.at("candidate_accuracy_display") == format_accuracy(res.report.candidate_accuracy));
  CHECK(j.at("decision") == to_string(res.report.decision.action));
  CHECK_FALSE(j.contains("elapsed_train_ms"));
  CHECK(res.report.to_json(true).contains("elapsed_train_ms"));
  // The recorded decision is reproducible from the recorded numbers.
  const auto replay = decide(j.at("current_accuracy").get<double>(),
                             j.at("candidate_accuracy").get<double>(), res.report.policy);
  CHECK(to_string(replay.action) == j.at("decision").get<std::string>());
}

TEST_CASE("switch_chain folds stages") {
  const ClassifierPtr initial = stump_forest(problem(300, 1));
  std::vector<SwitchStage> stages;
  for (std::uint64_t i = 0; i < 2; ++i) {
    Split s = train_val_split(problem(800, 10 + i), 0.2, rng_from_seed(i));
    stages.push_back({s.train, s.val, SwitchPolicy{}, i == 0 ? CandidateTrainer(stump_forest)
                                                             : CandidateTrainer(decent_boost),
                      std::nullopt});
  }
  const auto chain = switch_chain(stages, initial, rng_from_seed(9));
  REQUIRE(chain.reports.size() == 2);
  CHECK(chain.reports[0].decision.action == SwitchAction::KeepCurrent);
  CHECK(chain.reports[1].decision.action == SwitchAction::SwitchToCandidate);
  CHECK(chain.model->kind() == "boosted_trees");

  // Single stage matches a direct call.
  const std::vector<SwitchStage> one{stages[1]};
  const auto direct = switch_models(initial, stages[1].train, stages[1].val, SwitchPolicy{},
                                    decent_boost, std::nullopt,
                                    rng_from_seed(9).split("stage/0"));
  const auto folded = switch_chain(one, initial, rng_from_seed(9));
  CHECK(folded.reports[0].to_json() == direct.report.to_json());

  // All-worse chain ends on the initial model.
  const ClassifierPtr strong = decent_boost(stages[0].train);
  std::vector<SwitchStage> worse{stages[0], stages[0]};
  const auto kept = switch_chain(worse, strong, rng_from_seed(2));
  CHECK(kept.model == strong);
  for (const auto& r : kept.reports) CHECK(r.decision.action == SwitchAction::KeepCurrent);

  CHECK_THROWS_AS(switch_chain({}, initial, rng_from_seed(1)), std::invalid_argument);
  std::vector<SwitchStage> failing{stages[0]};
  failing[0].trainer = [](const Dataset&) -> ClassifierPtr { throw std::runtime_error("x"); };
  CHECK_THROWS_WITH_AS(switch_chain(failing, initial, rng_from_seed(1)),
                       doctest::Contains("stage 0"), StageError);
}

}
