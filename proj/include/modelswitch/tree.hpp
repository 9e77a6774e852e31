#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "modelswitch/dataset.hpp"
#include "modelswitch/rng.hpp"
#include "modelswitch/vendor_json.hpp"

namespace modelswitch {

// Internal nodes send a row left iff x[feature] <= threshold. Leaves carry a
// value: the class-1 fraction for CART trees, an additive weight for boosting.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  // Training rows that reached the node. Not serialized.
  std::size_t n_rows = 0;

  bool is_leaf() const { return feature < 0; }
};

// Flat node array, root at index 0.
struct Tree {
  std::vector<TreeNode> nodes;

  std::size_t leaf_index(std::span<const double> row) const;
  double predict_row(std::span<const double> row) const {
    return nodes[leaf_index(row)].value;
  }
  std::size_t depth() const;

  nlohmann::json to_json() const;
  static Tree from_json(const nlohmann::json& j, std::size_t n_features);
};

// 1 - sum_c (count_c / total)^2. Throws std::invalid_argument on zero total.
double gini_impurity(std::span<const std::size_t> counts);

struct SplitCandidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

// Midpoint of two consecutive distinct values, guaranteed to satisfy
// lo <= t < hi so that `x <= t` separates them.
double split_threshold(double lo, double hi);

// Best Gini split over candidate features and midpoint thresholds. Candidates
// are compared in exact integer arithmetic; ties go to the lowest feature
// index, then the lowest threshold. Returns nullopt when no split honoring
// min_samples_leaf strictly lowers impurity.
std::optional<SplitCandidate> best_split(const Matrix& x, const Labels& y,
                                         std::span<const std::size_t> rows,
                                         std::span<const std::size_t> candidate_features,
                                         std::size_t min_samples_leaf);

struct TreeParams {
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_leaf = 1;
  std::size_t min_samples_split = 2;
  // 0 means all features.
  std::size_t features_per_split = 0;
};

// Recursive CART on `rows` (duplicates allowed, e.g. a bootstrap sample).
Tree fit_tree(const Dataset& train, std::span<const std::size_t> rows,
              const TreeParams& params, SeededRng& rng);

}  // namespace modelswitch
