#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "vendor_json.hpp"
#include "modelswitch/dataset.hpp"
#include "modelswitch/matrix.hpp"

namespace modelswitch {

// Uniform surface over every fitted learner. Fitted models are immutable and
// safe to share across threads.
class Classifier {
 public:
  virtual ~Classifier() = default;

  // Hard labels in {0,1}, one per row of x.
  virtual Labels predict(const Matrix& x) const = 0;
  // Margin or probability-like score, one per row of x.
  virtual std::vector<double> predict_score(const Matrix& x) const = 0;

  // "random_forest", "boosted_trees" or "linear_svm".
  virtual std::string kind() const = 0;
  // {"model_kind": ..., "params": {...}}
  virtual nlohmann::json describe() const = 0;
  virtual nlohmann::json learned_state() const = 0;
  virtual std::size_t n_features() const = 0;

 protected:
  // Throws std::invalid_argument naming expected vs actual width.
  void check_width(const Matrix& x) const;
};

using ClassifierPtr = std::shared_ptr<const Classifier>;

}  // namespace modelswitch
