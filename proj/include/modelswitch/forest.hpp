#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "modelswitch/classifier.hpp"
#include "modelswitch/tree.hpp"

namespace modelswitch {

struct ForestParams {
  std::size_t n_estimators = 100;
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_leaf = 1;
  std::size_t min_samples_split = 2;
  // 0 resolves to floor(sqrt(n_features)) at fit time.
  std::size_t features_per_split = 0;
  bool bootstrap = true;
  std::uint64_t seed = 42;

  nlohmann::json to_json() const;
  static ForestParams from_json(const nlohmann::json& j);
};

// Bagged CART trees. predict is a hard majority vote (ties go to class 0);
// predict_score is the mean leaf class-1 fraction.
class RandomForest final : public Classifier {
 public:
  RandomForest(ForestParams params, std::size_t n_features, std::vector<Tree> trees);

  Labels predict(const Matrix& x) const override;
  std::vector<double> predict_score(const Matrix& x) const override;
  std::string kind() const override { return "random_forest"; }
  nlohmann::json describe() const override;
  nlohmann::json learned_state() const override;
  std::size_t n_features() const override { return n_features_; }

  // votes[t][r]: hard vote of tree t on row r.
  std::vector<Labels> tree_votes(const Matrix& x) const;
  const std::vector<Tree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }

 private:
  ForestParams params_;
  std::size_t n_features_;
  std::vector<Tree> trees_;
};

// Tree i uses streams "bootstrap/i" and "tree/i" under the params seed, so the
// result is independent of worker count.
std::shared_ptr<RandomForest> fit_forest(const Dataset& train, ForestParams params);

}  // namespace modelswitch
