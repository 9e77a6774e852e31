#pragma once

#include <cstdint>
#include <vector>

#include "modelswitch/classifier.hpp"
#include "modelswitch/tree.hpp"

namespace modelswitch {

struct BoostParams {
  std::size_t n_estimators = 200;
  double learning_rate = 0.05;
  std::size_t max_depth = 10;
  double subsample = 0.8;
  double colsample_bytree = 0.8;
  double reg_lambda = 1.0;
  double gamma = 0.0;
  // Prior probability; the initial raw score is its log-odds.
  double base_score = 0.5;
  std::uint64_t seed = 42;

  void validate() const;
  nlohmann::json to_json() const;
  static BoostParams from_json(const nlohmann::json& j);
};

// Per-round training record, filled when a trace is passed to fit_boosted.
struct BoostTrace {
  std::vector<std::vector<double>> gradients;
  std::vector<std::vector<double>> hessians;
  std::vector<std::vector<std::size_t>> sample_rows;
  // Mean training logistic loss before round 0 and after every round.
  std::vector<double> loss;
};

// Additive logistic model: raw = logit(base_score) + sum_t lr * w_t(x).
class BoostedTrees final : public Classifier {
 public:
  BoostedTrees(BoostParams params, std::size_t n_features, std::vector<Tree> trees);

  Labels predict(const Matrix& x) const override;
  // sigmoid(raw score), in (0,1).
  std::vector<double> predict_score(const Matrix& x) const override;
  std::vector<double> predict_raw(const Matrix& x) const;
  std::string kind() const override { return "boosted_trees"; }
  nlohmann::json describe() const override;
  nlohmann::json learned_state() const override;
  std::size_t n_features() const override { return n_features_; }

  const std::vector<Tree>& trees() const { return trees_; }
  const BoostParams& params() const { return params_; }
  double base_margin() const;

 private:
  BoostParams params_;
  std::size_t n_features_;
  std::vector<Tree> trees_;
};

// Newton boosting on logistic loss with exact greedy, level-wise tree growth.
// Round t draws its row and column subsamples from stream "boost/t".
std::shared_ptr<BoostedTrees> fit_boosted(const Dataset& train,
                                          const BoostParams& params,
                                          BoostTrace* trace = nullptr);

double sigmoid(double z);
// Mean logistic loss of raw scores against labels.
double logistic_loss(const std::vector<double>& raw, const Labels& y);

}  // namespace modelswitch
