#pragma once

// Test-only reference implementations. Nothing here calls into the code paths
// it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "modelswitch/dataset.hpp"
#include "modelswitch/switching.hpp"

namespace oracle {

// SplitMix64 written from the published reference (Vigna, public domain).
inline std::uint64_t splitmix64_reference(std::uint64_t* x) {
  std::uint64_t z = (*x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Exact nonnegative rational with normalized terms.
struct Rational {
  __int128 num = 0;
  __int128 den = 1;

  static __int128 gcd(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }
  Rational() = default;
  Rational(__int128 n, __int128 d) {
    const __int128 g = gcd(n, d);
    num = n / g;
    den = d / g;
  }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Gini of a node as an exact fraction: 1 - (a^2 + b^2) / n^2.
inline Rational gini(std::size_t a, std::size_t b) {
  const __int128 n = static_cast<__int128>(a + b);
  return Rational(n * n - static_cast<__int128>(a) * a - static_cast<__int128>(b) * b, n * n);
}

struct OracleSplit {
  std::size_t feature;
  double threshold;
  double decrease;
};

// Enumerates every (feature, midpoint) pair by recounting all rows for each
// candidate. Ties keep the first hit in (feature, threshold) ascending order.
inline std::optional<OracleSplit> brute_force_split(const modelswitch::Matrix& x,
                                                    const modelswitch::Labels& y,
                                                    const std::vector<std::size_t>& rows,
                                                    std::vector<std::size_t> features,
                                                    std::size_t min_leaf) {
  min_leaf = std::max<std::size_t>(1, min_leaf);
  std::size_t n1 = 0;
  for (auto r : rows) n1 += static_cast<std::size_t>(y[r]);
  const std::size_t n = rows.size(), n0 = n - n1;
  if (n == 0) return std::nullopt;
  const Rational parent = gini(n0, n1);
  std::sort(features.begin(), features.end());

  std::optional<OracleSplit> best;
  Rational best_impurity;
  for (auto f : features) {
    std::set<double> distinct;
    for (auto r : rows) distinct.insert(x(r, f));
    std::vector<double> v(distinct.begin(), distinct.end());
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      double t = (v[k] + v[k + 1]) / 2.0;
      if (!(t < v[k + 1])) t = v[k];
      std::size_t l0 = 0, l1 = 0, r0 = 0, r1 = 0;
      for (auto r : rows) {
        const bool left = x(r, f) <= t;
        if (left) (y[r] ? l1 : l0)++;
        else (y[r] ? r1 : r0)++;
      }
      const std::size_t nl = l0 + l1, nr = r0 + r1;
      if (nl < min_leaf || nr < min_leaf) continue;
      // Weighted child impurity (nl * G_l + nr * G_r) / n.
      Rational gl = gini(l0, l1), gr = gini(r0, r1);
      Rational weighted = Rational(gl.num * static_cast<__int128>(nl), gl.den * static_cast<__int128>(n)) +
                          Rational(gr.num * static_cast<__int128>(nr), gr.den * static_cast<__int128>(n));
      if (!(weighted < parent)) continue;
      if (best && !(weighted < best_impurity)) continue;
      best_impurity = weighted;
      best = OracleSplit{f, t, (parent - weighted).to_double()};
    }
  }
  return best;
}

// decide() written as an explicit truth table over the two gates.
inline modelswitch::SwitchDecision decide_truth_table(double current, double candidate,
                                                      const modelswitch::SwitchPolicy& p) {
  using modelswitch::SwitchAction;
  using modelswitch::SwitchReason;
  const bool improves = candidate > current + p.margin;
  const bool clears = candidate >= p.accuracy_threshold;
  if (!improves) return {SwitchAction::KeepCurrent, SwitchReason::CandidateNotBetter};
  if (p.require_threshold && !clears) {
    return {SwitchAction::KeepCurrent, SwitchReason::CandidateBelowThreshold};
  }
  return {SwitchAction::SwitchToCandidate, SwitchReason::CandidateBetter};
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
