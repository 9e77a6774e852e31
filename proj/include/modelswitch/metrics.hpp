#pragma once

#include <cstddef>

#include "modelswitch/classifier.hpp"
#include "modelswitch/dataset.hpp"

namespace modelswitch {

struct Confusion {
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tp = 0;
  bool operator==(const Confusion&) const = default;
};

struct EvalResult {
  double accuracy = 0.0;
  Confusion confusion;
  std::size_t n = 0;

  nlohmann::json to_json() const;
};

// Match count / n, one division. Throws std::invalid_argument on empty or
// mismatched inputs or non-binary labels.
double accuracy(const Labels& y_true, const Labels& y_pred);
EvalResult confusion_eval(const Labels& y_true, const Labels& y_pred);
EvalResult evaluate(const Classifier& model, const Dataset& data);

// Half-up rounding to two decimals, rendered as "0.95".
std::string format_accuracy(double value);

}  // namespace modelswitch
