#include "modelswitch/boosted.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "modelswitch/parallel.hpp"

namespace modelswitch {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {
double softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}
}  // namespace

double logistic_loss(const std::vector<double>& raw, const Labels& y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    sum += y[i] == 1 ? softplus(-raw[i]) : softplus(raw[i]);
  }
  return sum / static_cast<double>(raw.size());
}

void BoostParams::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("boost params: " + what);
  };
  if (n_estimators < 1) fail("n_estimators must be >= 1");
  if (!(learning_rate > 0.0)) fail("learning_rate must be positive");
  if (!(subsample > 0.0 && subsample <= 1.0)) fail("subsample must lie in (0, 1]");
  if (!(colsample_bytree > 0.0 && colsample_bytree <= 1.0)) {
    fail("colsample_bytree must lie in (0, 1]");
  }
  if (!(reg_lambda >= 0.0)) fail("reg_lambda must be nonnegative");
  if (!(gamma >= 0.0)) fail("gamma must be nonnegative");
  if (!(base_score > 0.0 && base_score < 1.0)) fail("base_score must lie in (0, 1)");
}

nlohmann::json BoostParams::to_json() const {
  return {{"n_estimators", n_estimators}, {"learning_rate", learning_rate},
          {"max_depth", max_depth},       {"subsample", subsample},
          {"colsample_bytree", colsample_bytree},
          {"reg_lambda", reg_lambda},     {"gamma", gamma},
          {"base_score", base_score},     {"seed", seed}};
}

BoostParams BoostParams::from_json(const nlohmann::json& j) {
  BoostParams p;
  p.n_estimators = j.at("n_estimators").get<std::size_t>();
  p.learning_rate = j.at("learning_rate").get<double>();
  p.max_depth = j.at("max_depth").get<std::size_t>();
  p.subsample = j.at("subsample").get<double>();
  p.colsample_bytree = j.at("colsample_bytree").get<double>();
  p.reg_lambda = j.at("reg_lambda").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.base_score = j.at("base_score").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

BoostedTrees::BoostedTrees(BoostParams params, std::size_t n_features,
                           std::vector<Tree> trees)
    : params_(std::move(params)), n_features_(n_features), trees_(std::move(trees)) {}

double BoostedTrees::base_margin() const {
  return std::log(params_.base_score / (1.0 - params_.base_score));
}

std::vector<double> BoostedTrees::predict_raw(const Matrix& x) const {
  check_width(x);
  std::vector<double> raw(x.rows(), base_margin());
  parallel_for(x.rows(), [&](std::size_t r) {
    const auto row = x.row(r);
    for (const Tree& t : trees_) raw[r] += params_.learning_rate * t.predict_row(row);
  });
  return raw;
}

std::vector<double> BoostedTrees::predict_score(const Matrix& x) const {
  auto raw = predict_raw(x);
  for (double& v : raw) v = sigmoid(v);
  return raw;
}

Labels BoostedTrees::predict(const Matrix& x) const {
  const auto score = predict_score(x);
  Labels out(score.size());
  for (std::size_t i = 0; i < score.size(); ++i) out[i] = score[i] >= 0.5 ? 1 : 0;
  return out;
}

nlohmann::json BoostedTrees::describe() const {
  return {{"model_kind", kind()}, {"params", params_.to_json()}};
}

nlohmann::json BoostedTrees::learned_state() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& t : trees_) trees.push_back(t.to_json());
  return {{"n_features", n_features_}, {"trees", std::move(trees)}};
}

namespace {

struct NodeStats {
  double g = 0.0;
  double h = 0.0;
};

struct SplitChoice {
  double gain = 0.0;
  double threshold = 0.0;
  std::size_t feature = 0;
  bool valid = false;
};

// Feature columns sorted once by (value, row index).
struct SortedColumns {
  std::vector<std::vector<std::size_t>> order;
  std::vector<std::vector<double>> values;

  explicit SortedColumns(const Matrix& x) : order(x.cols()), values(x.cols()) {
    parallel_for(x.cols(), [&](std::size_t f) {
      auto& idx = order[f];
      idx.resize(x.rows());
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      std::stable_sort(idx.begin(), idx.end(),
                       [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
      values[f].resize(x.rows());
      for (std::size_t i = 0; i < idx.size(); ++i) values[f][i] = x(idx[i], f);
    });
  }
};

class RoundBuilder {
 public:
  RoundBuilder(const Matrix& x, const SortedColumns& cols, const BoostParams& params,
               const std::vector<double>& g, const std::vector<double>& h)
      : x_(x), cols_(cols), params_(params), g_(g), h_(h) {}

  Tree build(const std::vector<std::size_t>& sample, std::vector<std::size_t> features) {
    const std::size_t n = x_.rows();
    std::sort(features.begin(), features.end());
    pos_.assign(n, -1);
    for (std::size_t r : sample) pos_[r] = 0;

    // Sorted columns restricted to the sampled rows.
    sub_order_.assign(features.size(), {});
    sub_vals_.assign(features.size(), {});
    parallel_for(features.size(), [&](std::size_t fi) {
      const auto& order = cols_.order[features[fi]];
      const auto& vals = cols_.values[features[fi]];
      auto& o = sub_order_[fi];
      auto& v = sub_vals_[fi];
      o.reserve(sample.size());
      v.reserve(sample.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (pos_[order[i]] < 0) continue;
        o.push_back(static_cast<std::uint32_t>(order[i]));
        v.push_back(vals[i]);
      }
    });

    tree_.nodes.assign(1, TreeNode{});
    stats_.assign(1, NodeStats{});
    aggregate({0});

    std::vector<int> frontier{0};
    for (std::size_t depth = 0; depth < params_.max_depth && !frontier.empty(); ++depth) {
      frontier = grow_level(frontier, features);
    }
    for (std::size_t i = 0; i < tree_.nodes.size(); ++i) {
      if (tree_.nodes[i].is_leaf()) {
        tree_.nodes[i].value = -stats_[i].g / (stats_[i].h + params_.reg_lambda);
      }
    }
    return std::move(tree_);
  }

 private:
  // Sums g/h over member rows in ascending row order.
  void aggregate(const std::vector<int>& nodes) {
    for (int nd : nodes) stats_[static_cast<std::size_t>(nd)] = NodeStats{};
    std::vector<char> wanted(tree_.nodes.size(), 0);
    for (int nd : nodes) wanted[static_cast<std::size_t>(nd)] = 1;
    for (std::size_t r = 0; r < pos_.size(); ++r) {
      const int p = pos_[r];
      if (p < 0 || !wanted[static_cast<std::size_t>(p)]) continue;
      auto& s = stats_[static_cast<std::size_t>(p)];
      s.g += g_[r];
      s.h += h_[r];
      tree_.nodes[static_cast<std::size_t>(p)].n_rows += 1;
    }
  }

  double score(double g, double h) const { return g * g / (h + params_.reg_lambda); }

  std::vector<int> grow_level(const std::vector<int>& frontier,
                              const std::vector<std::size_t>& features) {
    const std::size_t slots = frontier.size();
    std::vector<int> slot_of(tree_.nodes.size(), -1);
    for (std::size_t s = 0; s < slots; ++s) {
      slot_of[static_cast<std::size_t>(frontier[s])] = static_cast<int>(s);
    }

    // Row -> frontier slot, -1 for rows outside the frontier.
    std::vector<int> slot_row(pos_.size(), -1);
    for (std::size_t r = 0; r < pos_.size(); ++r) {
      if (pos_[r] >= 0) slot_row[r] = slot_of[static_cast<std::size_t>(pos_[r])];
    }
    std::vector<NodeStats> totals(slots);
    std::vector<double> parent_score(slots);
    for (std::size_t s = 0; s < slots; ++s) {
      totals[s] = stats_[static_cast<std::size_t>(frontier[s])];
      parent_score[s] = score(totals[s].g, totals[s].h);
    }

    std::vector<std::vector<SplitChoice>> per_feature(features.size());
    parallel_for(features.size(), [&](std::size_t fi) {
      const std::size_t f = features[fi];
      const auto& order = sub_order_[fi];
      const auto& vals = sub_vals_[fi];
      std::vector<NodeStats> left(slots);
      std::vector<double> last(slots, 0.0);
      std::vector<char> seen(slots, 0);
      std::vector<SplitChoice> best(slots);
      for (std::size_t i = 0; i < order.size(); ++i) {
        const std::size_t r = order[i];
        const int s = slot_row[r];
        if (s < 0) continue;
        const auto su = static_cast<std::size_t>(s);
        const double v = vals[i];
        NodeStats& acc = left[su];
        if (seen[su] && v != last[su]) {
          const double gr = totals[su].g - acc.g, hr = totals[su].h - acc.h;
          const double gain =
              0.5 * (score(acc.g, acc.h) + score(gr, hr) - parent_score[su]) - params_.gamma;
          if (gain > 0.0 && (!best[su].valid || gain > best[su].gain)) {
            best[su] = SplitChoice{gain, split_threshold(last[su], v), f, true};
          }
        }
        acc.g += g_[r];
        acc.h += h_[r];
        last[su] = v;
        seen[su] = 1;
      }
      per_feature[fi] = std::move(best);
    });

    std::vector<int> next;
    std::vector<int> split_nodes;
    for (std::size_t s = 0; s < slots; ++s) {
      SplitChoice chosen;
      for (const auto& candidates : per_feature) {
        const SplitChoice& c = candidates[s];
        if (c.valid && (!chosen.valid || c.gain > chosen.gain)) chosen = c;
      }
      if (!chosen.valid) continue;
      const auto nd = static_cast<std::size_t>(frontier[s]);
      const int l = static_cast<int>(tree_.nodes.size());
      tree_.nodes.emplace_back();
      tree_.nodes.emplace_back();
      stats_.resize(tree_.nodes.size());
      TreeNode& node = tree_.nodes[nd];
      node.feature = static_cast<int>(chosen.feature);
      node.threshold = chosen.threshold;
      node.left = l;
      node.right = l + 1;
      split_nodes.push_back(frontier[s]);
      next.push_back(l);
      next.push_back(l + 1);
    }
    if (split_nodes.empty()) return {};

    for (std::size_t r = 0; r < pos_.size(); ++r) {
      const int p = pos_[r];
      if (p < 0) continue;
      const TreeNode& node = tree_.nodes[static_cast<std::size_t>(p)];
      if (node.is_leaf()) continue;
      pos_[r] = x_(r, static_cast<std::size_t>(node.feature)) <= node.threshold ? node.left
                                                                               : node.right;
    }
    aggregate(next);
    return next;
  }

  const Matrix& x_;
  const SortedColumns& cols_;
  const BoostParams& params_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
  std::vector<int> pos_;
  std::vector<std::vector<std::uint32_t>> sub_order_;
  std::vector<std::vector<double>> sub_vals_;
  Tree tree_;
  std::vector<NodeStats> stats_;
};

std::size_t fraction_count(double fraction, std::size_t n) {
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n);
}

}  // namespace

std::shared_ptr<BoostedTrees> fit_boosted(const Dataset& train, const BoostParams& params,
                                          BoostTrace* trace) {
  train.validate();
  params.validate();
  const std::size_t n = train.size();
  const std::size_t d = train.n_features();
  if (n == 0) throw std::invalid_argument("fit_boosted: empty training set");

  const SortedColumns cols(train.x);
  const SeededRng root = rng_from_seed(params.seed);
  const double base = std::log(params.base_score / (1.0 - params.base_score));
  std::vector<double> raw(n, base);
  std::vector<double> g(n), h(n);
  std::vector<Tree> trees;
  trees.reserve(params.n_estimators);
  if (trace) {
    *trace = BoostTrace{};
    trace->loss.push_back(logistic_loss(raw, train.y));
  }

  const std::size_t n_rows = fraction_count(params.subsample, n);
  const std::size_t n_cols = fraction_count(params.colsample_bytree, d);
  for (std::size_t t = 0; t < params.n_estimators; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(raw[i]);
      g[i] = p - static_cast<double>(train.y[i]);
      h[i] = p * (1.0 - p);
    }
    SeededRng round_rng = root.split("boost/" + std::to_string(t));
    auto sample = sample_without_replacement(n, n_rows, round_rng);
    auto features = sample_without_replacement(d, n_cols, round_rng);
    std::sort(sample.begin(), sample.end());

    RoundBuilder builder(train.x, cols, params, g, h);
    Tree tree = builder.build(sample, std::move(features));
    for (std::size_t i = 0; i < n; ++i) {
      raw[i] += params.learning_rate * tree.predict_row(train.x.row(i));
    }
    if (trace) {
      trace->gradients.push_back(g);
      trace->hessians.push_back(h);
      trace->sample_rows.push_back(std::move(sample));
      trace->loss.push_back(logistic_loss(raw, train.y));
    }
    trees.push_back(std::move(tree));
  }
  return std::make_shared<BoostedTrees>(params, d, std::move(trees));
}

}  // namespace modelswitch
