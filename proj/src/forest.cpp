#include "modelswitch/forest.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "modelswitch/parallel.hpp"

namespace modelswitch {

void Classifier::check_width(const Matrix& x) const {
  if (x.cols() != n_features()) {
    throw std::invalid_argument("predict: expected " + std::to_string(n_features()) +
                                " features, got " + std::to_string(x.cols()));
  }
}

nlohmann::json ForestParams::to_json() const {
  nlohmann::json j{{"n_estimators", n_estimators},
                   {"min_samples_leaf", min_samples_leaf},
                   {"min_samples_split", min_samples_split},
                   {"features_per_split", features_per_split},
                   {"bootstrap", bootstrap},
                   {"seed", seed}};
  j["max_depth"] = max_depth ? nlohmann::json(*max_depth) : nlohmann::json(nullptr);
  return j;
}

ForestParams ForestParams::from_json(const nlohmann::json& j) {
  ForestParams p;
  p.n_estimators = j.at("n_estimators").get<std::size_t>();
  if (!j.at("max_depth").is_null()) p.max_depth = j.at("max_depth").get<std::size_t>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
  p.min_samples_split = j.at("min_samples_split").get<std::size_t>();
  p.features_per_split = j.at("features_per_split").get<std::size_t>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

RandomForest::RandomForest(ForestParams params, std::size_t n_features,
                           std::vector<Tree> trees)
    : params_(std::move(params)), n_features_(n_features), trees_(std::move(trees)) {
  if (trees_.empty()) throw std::invalid_argument("random forest: no trees");
}

std::vector<Labels> RandomForest::tree_votes(const Matrix& x) const {
  check_width(x);
  std::vector<Labels> votes(trees_.size(), Labels(x.rows()));
  parallel_for(trees_.size(), [&](std::size_t t) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      votes[t][r] = trees_[t].predict_row(x.row(r)) >= 0.5 ? 1 : 0;
    }
  });
  return votes;
}

Labels RandomForest::predict(const Matrix& x) const {
  const auto votes = tree_votes(x);
  Labels out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::size_t ones = 0;
    for (const auto& v : votes) ones += static_cast<std::size_t>(v[r]);
    out[r] = 2 * ones > trees_.size() ? 1 : 0;
  }
  return out;
}

std::vector<double> RandomForest::predict_score(const Matrix& x) const {
  check_width(x);
  std::vector<double> out(x.rows());
  parallel_for(x.rows(), [&](std::size_t r) {
    double sum = 0.0;
    for (const Tree& t : trees_) sum += t.predict_row(x.row(r));
    out[r] = sum / static_cast<double>(trees_.size());
  });
  return out;
}

nlohmann::json RandomForest::describe() const {
  return {{"model_kind", kind()}, {"params", params_.to_json()}};
}

nlohmann::json RandomForest::learned_state() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& t : trees_) trees.push_back(t.to_json());
  return {{"n_features", n_features_}, {"trees", std::move(trees)}};
}

std::shared_ptr<RandomForest> fit_forest(const Dataset& train, ForestParams params) {
  train.validate();
  const std::size_t n = train.size();
  const std::size_t d = train.n_features();
  if (n == 0) throw std::invalid_argument("fit_forest: empty training set");
  if (params.n_estimators < 1) {
    throw std::invalid_argument("fit_forest: n_estimators must be >= 1");
  }
  if (params.features_per_split == 0) {
    params.features_per_split = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(d)))));
  }
  if (params.features_per_split > d) {
    throw std::invalid_argument("fit_forest: features_per_split must be in [1, n_features]");
  }

  TreeParams tree_params{params.max_depth, params.min_samples_leaf,
                         params.min_samples_split, params.features_per_split};
  const SeededRng root = rng_from_seed(params.seed);
  std::vector<Tree> trees(params.n_estimators);
  parallel_for(params.n_estimators, [&](std::size_t i) {
    std::vector<std::size_t> rows(n);
    if (params.bootstrap) {
      SeededRng boot = root.split("bootstrap/" + std::to_string(i));
      for (auto& r : rows) r = boot.next_below(n);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    SeededRng tree_rng = root.split("tree/" + std::to_string(i));
    trees[i] = fit_tree(train, rows, tree_params, tree_rng);
  });
  return std::make_shared<RandomForest>(params, d, std::move(trees));
}

}  // namespace modelswitch
