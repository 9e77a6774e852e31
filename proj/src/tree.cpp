#include "modelswitch/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace modelswitch {

std::size_t Tree::leaf_index(std::span<const double> row) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold
                                     ? n.left
                                     : n.right);
  }
  return i;
}

std::size_t Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

nlohmann::json Tree::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const TreeNode& n : nodes) {
    if (n.is_leaf()) {
      arr.push_back({{"leaf_value", n.value}});
    } else {
      arr.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left_index", n.left},
                     {"right_index", n.right}});
    }
  }
  return arr;
}

Tree Tree::from_json(const nlohmann::json& j, std::size_t n_features) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("tree: node array must be nonempty");
  }
  Tree t;
  const auto n = static_cast<int>(j.size());
  for (const auto& node : j) {
    TreeNode out;
    if (node.contains("leaf_value")) {
      out.value = node.at("leaf_value").get<double>();
    } else {
      out.feature = node.at("feature").get<int>();
      out.threshold = node.at("threshold").get<double>();
      out.left = node.at("left_index").get<int>();
      out.right = node.at("right_index").get<int>();
      const int self = static_cast<int>(t.nodes.size());
      if (out.feature < 0 || static_cast<std::size_t>(out.feature) >= n_features ||
          out.left <= self || out.right <= self || out.left >= n || out.right >= n) {
        throw std::invalid_argument("tree: malformed internal node " +
                                    std::to_string(self));
      }
    }
    t.nodes.push_back(out);
  }
  return t;
}

double gini_impurity(std::span<const std::size_t> counts) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) throw std::invalid_argument("gini_impurity: total count is zero");
  double sum_sq = 0.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

double split_threshold(double lo, double hi) {
  const double mid = std::midpoint(lo, hi);
  return mid < hi ? mid : lo;
}

namespace {

using i128 = __int128;

// Sum over children of (n0^2 + n1^2) / n_child, kept as a fraction. Larger is
// better: weighted child Gini = 1 - score / N.
struct Score {
  i128 num;
  i128 den;
};

Score split_score(i128 l0, i128 l1, i128 r0, i128 r1) {
  const i128 nl = l0 + l1;
  const i128 nr = r0 + r1;
  return {(l0 * l0 + l1 * l1) * nr + (r0 * r0 + r1 * r1) * nl, nl * nr};
}

bool better(const Score& a, const Score& b) { return a.num * b.den > b.num * a.den; }

double impurity_decrease(const Score& s, std::size_t n0, std::size_t n1) {
  const double n = static_cast<double>(n0 + n1);
  const double parent = (static_cast<double>(n0) * static_cast<double>(n0) +
                         static_cast<double>(n1) * static_cast<double>(n1)) /
                        n;
  const double children = static_cast<double>(s.num) / static_cast<double>(s.den);
  return (children - parent) / n;
}

}  // namespace

std::optional<SplitCandidate> best_split(const Matrix& x, const Labels& y,
                                         std::span<const std::size_t> rows,
                                         std::span<const std::size_t> candidate_features,
                                         std::size_t min_samples_leaf) {
  const std::size_t n = rows.size();
  if (n == 0) return std::nullopt;
  std::size_t total1 = 0;
  for (std::size_t r : rows) total1 += static_cast<std::size_t>(y[r]);
  const std::size_t total0 = n - total1;
  if (total0 == 0 || total1 == 0) return std::nullopt;
  const std::size_t min_leaf = std::max<std::size_t>(1, min_samples_leaf);
  if (n < 2 * min_leaf) return std::nullopt;

  std::vector<std::size_t> features(candidate_features.begin(), candidate_features.end());
  std::sort(features.begin(), features.end());

  // Parent as a one-sided split: (n0^2 + n1^2) / n.
  const Score parent{static_cast<i128>(total0) * total0 + static_cast<i128>(total1) * total1,
                     static_cast<i128>(n)};
  std::optional<Score> best_score;
  std::optional<SplitCandidate> best;

  std::vector<std::pair<double, int>> column(n);
  for (std::size_t f : features) {
    for (std::size_t i = 0; i < n; ++i) column[i] = {x(rows[i], f), y[rows[i]]};
    std::sort(column.begin(), column.end());
    std::size_t l0 = 0, l1 = 0;
    for (std::size_t i = 1; i < n; ++i) {
      (column[i - 1].second == 1 ? l1 : l0) += 1;
      if (column[i - 1].first == column[i].first) continue;
      if (i < min_leaf || n - i < min_leaf) continue;
      const Score s = split_score(static_cast<i128>(l0), static_cast<i128>(l1),
                                  static_cast<i128>(total0 - l0),
                                  static_cast<i128>(total1 - l1));
      if (!better(s, parent)) continue;
      if (best_score && !better(s, *best_score)) continue;
      best_score = s;
      best = SplitCandidate{f, split_threshold(column[i - 1].first, column[i].first),
                            impurity_decrease(s, total0, total1)};
    }
  }
  return best;
}

namespace {

struct CartBuilder {
  const Dataset& train;
  const TreeParams& params;
  SeededRng& rng;
  std::size_t n_candidates;
  Tree tree;

  int grow(std::vector<std::size_t> rows, std::size_t depth) {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    std::size_t ones = 0;
    for (std::size_t r : rows) ones += static_cast<std::size_t>(train.y[r]);
    const std::size_t n = rows.size();
    tree.nodes[index].n_rows = n;
    tree.nodes[index].value = static_cast<double>(ones) / static_cast<double>(n);

    const bool depth_reached = params.max_depth && depth >= *params.max_depth;
    const bool pure = ones == 0 || ones == n;
    if (depth_reached || pure || n < std::max<std::size_t>(2, params.min_samples_split)) {
      return index;
    }

    const auto candidates =
        sample_without_replacement(train.n_features(), n_candidates, rng);
    const auto split =
        best_split(train.x, train.y, rows, candidates, params.min_samples_leaf);
    if (!split) return index;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (train.x(r, split->feature) <= split->threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    TreeNode& node = tree.nodes[index];
    node.feature = static_cast<int>(split->feature);
    node.threshold = split->threshold;
    node.left = l;
    node.right = r;
    return index;
  }
};

}  // namespace

Tree fit_tree(const Dataset& train, std::span<const std::size_t> rows,
              const TreeParams& params, SeededRng& rng) {
  if (rows.empty()) throw std::invalid_argument("fit_tree: no training rows");
  const std::size_t d = train.n_features();
  std::size_t k = params.features_per_split == 0 ? d : params.features_per_split;
  if (k > d) {
    throw std::invalid_argument("fit_tree: features_per_split exceeds feature count");
  }
  CartBuilder builder{train, params, rng, k, {}};
  builder.grow(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
  return std::move(builder.tree);
}

}  // namespace modelswitch
