#include "modelswitch/linear_svm.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace modelswitch {

nlohmann::json LinearSvmParams::to_json() const {
  return {{"reg_lambda", reg_lambda}, {"epochs", epochs}, {"seed", seed}};
}

LinearSvmParams LinearSvmParams::from_json(const nlohmann::json& j) {
  LinearSvmParams p;
  p.reg_lambda = j.at("reg_lambda").get<double>();
  p.epochs = j.at("epochs").get<std::size_t>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

LinearSvm::LinearSvm(LinearSvmParams params, std::vector<double> weights)
    : params_(std::move(params)), weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("linear svm: empty weight vector");
}

std::vector<double> LinearSvm::predict_score(const Matrix& x) const {
  check_width(x);
  const std::size_t d = n_features();
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    double m = weights_[d];
    for (std::size_t j = 0; j < d; ++j) m += weights_[j] * row[j];
    out[r] = m;
  }
  return out;
}

Labels LinearSvm::predict(const Matrix& x) const {
  const auto margin = predict_score(x);
  Labels out(margin.size());
  for (std::size_t i = 0; i < margin.size(); ++i) out[i] = margin[i] >= 0.0 ? 1 : 0;
  return out;
}

nlohmann::json LinearSvm::describe() const {
  return {{"model_kind", kind()}, {"params", params_.to_json()}};
}

nlohmann::json LinearSvm::learned_state() const {
  return {{"n_features", n_features()}, {"weights", weights_}};
}

std::shared_ptr<LinearSvm> fit_linear_svm(const Dataset& train,
                                          const LinearSvmParams& params) {
  train.validate();
  if (params.epochs < 1) throw std::invalid_argument("linear svm: epochs must be >= 1");
  if (!(params.reg_lambda > 0.0)) {
    throw std::invalid_argument("linear svm: reg_lambda must be positive");
  }
  const std::size_t n = train.size();
  const std::size_t d = train.n_features();
  if (n == 0) throw std::invalid_argument("linear svm: empty training set");

  std::vector<double> w(d + 1, 0.0);
  const SeededRng root = rng_from_seed(params.seed);
  std::vector<std::size_t> order(n);
  std::size_t t = 0;
  for (std::size_t e = 0; e < params.epochs; ++e) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    SeededRng epoch_rng = root.split("epoch/" + std::to_string(e));
    shuffle_indices(order, epoch_rng);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (params.reg_lambda * static_cast<double>(t));
      const double label = train.y[i] == 1 ? 1.0 : -1.0;
      const auto row = train.x.row(i);
      double margin = w[d];
      for (std::size_t j = 0; j < d; ++j) margin += w[j] * row[j];
      const double shrink = 1.0 - eta * params.reg_lambda;
      for (double& wj : w) wj *= shrink;
      if (label * margin < 1.0) {
        for (std::size_t j = 0; j < d; ++j) w[j] += eta * label * row[j];
        w[d] += eta * label;
      }
    }
  }
  return std::make_shared<LinearSvm>(params, std::move(w));
}

}  // namespace modelswitch
