#include "modelswitch/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace modelswitch {

nlohmann::json EvalResult::to_json() const {
  return {{"accuracy", accuracy},
          {"n", n},
          {"confusion",
           {{"tn", confusion.tn}, {"fp", confusion.fp}, {"fn", confusion.fn}, {"tp", confusion.tp}}}};
}

EvalResult confusion_eval(const Labels& y_true, const Labels& y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw std::invalid_argument("accuracy: length mismatch (" + std::to_string(y_true.size()) +
                                " vs " + std::to_string(y_pred.size()) + ")");
  }
  if (y_true.empty()) throw std::invalid_argument("accuracy: empty label vectors");
  EvalResult out;
  out.n = y_true.size();
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i], p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
      throw std::invalid_argument("accuracy: non-binary label at index " + std::to_string(i));
    }
    if (t == 0) {
      (p == 0 ? out.confusion.tn : out.confusion.fp) += 1;
    } else {
      (p == 0 ? out.confusion.fn : out.confusion.tp) += 1;
    }
  }
  out.accuracy = static_cast<double>(out.confusion.tn + out.confusion.tp) /
                 static_cast<double>(out.n);
  return out;
}

double accuracy(const Labels& y_true, const Labels& y_pred) {
  return confusion_eval(y_true, y_pred).accuracy;
}

EvalResult evaluate(const Classifier& model, const Dataset& data) {
  return confusion_eval(data.y, model.predict(data.x));
}

std::string format_accuracy(double value) {
  // Accuracies are ratios k/n; values within 1e-9 of a half-cent boundary are
  // treated as exactly on it and rounded up.
  const double scaled = value * 100.0;
  double hundredths = std::floor(scaled + 0.5);
  if (std::abs(scaled - std::floor(scaled) - 0.5) < 1e-9) hundredths = std::floor(scaled) + 1.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", hundredths / 100.0);
  return buf;
}

}  // namespace modelswitch
