#pragma once

#include <cstdint>
#include <vector>

#include "modelswitch/classifier.hpp"

namespace modelswitch {

struct LinearSvmParams {
  double reg_lambda = 1e-4;
  std::size_t epochs = 20;
  std::uint64_t seed = 42;

  nlohmann::json to_json() const;
  static LinearSvmParams from_json(const nlohmann::json& j);
};

// Primal linear SVM. weights() has n_features + 1 entries; the last one
// multiplies a constant 1 feature and acts as the bias.
class LinearSvm final : public Classifier {
 public:
  LinearSvm(LinearSvmParams params, std::vector<double> weights);

  Labels predict(const Matrix& x) const override;
  // Raw margin w . [x, 1].
  std::vector<double> predict_score(const Matrix& x) const override;
  std::string kind() const override { return "linear_svm"; }
  nlohmann::json describe() const override;
  nlohmann::json learned_state() const override;
  std::size_t n_features() const override { return weights_.size() - 1; }

  const std::vector<double>& weights() const { return weights_; }

 private:
  LinearSvmParams params_;
  std::vector<double> weights_;
};

// Pegasos stochastic subgradient descent on the regularized hinge loss;
// step 1/(lambda t) at update t, epoch e visits rows in the order drawn from
// stream "epoch/e".
std::shared_ptr<LinearSvm> fit_linear_svm(const Dataset& train,
                                          const LinearSvmParams& params);

}  // namespace modelswitch
