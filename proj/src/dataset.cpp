#include "modelswitch/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace modelswitch {

namespace {
[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("dataset spec: " + what);
}
}  // namespace

void DatasetSpec::validate() const {
  if (n_informative < 1) fail("n_informative must be >= 1");
  if (n_informative + n_redundant > n_features) {
    fail("n_informative + n_redundant (" +
         std::to_string(n_informative + n_redundant) +
         ") must be <= n_features (" + std::to_string(n_features) + ")");
  }
  if (n_clusters_per_class < 1) fail("n_clusters_per_class must be >= 1");
  if (n_samples < 2 * n_clusters_per_class) {
    fail("n_samples must be >= 2 * n_clusters_per_class");
  }
  // 2 * clusters <= 2^informative; only binding for small n_informative.
  if (n_informative < 63 &&
      2 * n_clusters_per_class > (std::size_t{1} << n_informative)) {
    fail("2 * n_clusters_per_class must be <= 2^n_informative");
  }
  if (!(class_sep > 0.0) || !std::isfinite(class_sep)) {
    fail("class_sep must be positive");
  }
}

void Dataset::validate() const {
  if (x.rows() != y.size()) {
    throw std::invalid_argument("dataset: " + std::to_string(x.rows()) +
                                " rows but " + std::to_string(y.size()) +
                                " labels");
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 0 && y[i] != 1) {
      throw std::invalid_argument("dataset: non-binary label at row " +
                                  std::to_string(i));
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out{x.select_rows(rows), {}, spec};
  out.y.reserve(rows.size());
  for (std::size_t r : rows) out.y.push_back(y[r]);
  return out;
}

std::pair<std::size_t, std::size_t> Dataset::class_counts() const {
  const auto ones = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  return {y.size() - ones, ones};
}

void NoiseSpec::validate() const {
  if (!(level >= 0.0 && level <= 1.0)) {
    throw std::invalid_argument("noise level must lie in [0, 1]");
  }
}

Matrix cluster_centroids(const DatasetSpec& spec) {
  spec.validate();
  const std::size_t k = spec.n_informative;
  const std::size_t n_clusters = 2 * spec.n_clusters_per_class;
  SeededRng rng = rng_from_seed(spec.effective_layout_seed()).split("centroids");

  // Rejection-sample distinct sign patterns.
  std::set<std::vector<bool>> seen;
  std::vector<double> values;
  values.reserve(n_clusters * k);
  while (seen.size() < n_clusters) {
    std::vector<bool> bits(k);
    for (std::size_t j = 0; j < k; ++j) bits[j] = (rng.next_u64() >> 63) != 0;
    if (!seen.insert(bits).second) continue;
    for (std::size_t j = 0; j < k; ++j) {
      values.push_back(bits[j] ? spec.class_sep : -spec.class_sep);
    }
  }
  return Matrix(n_clusters, k, std::move(values));
}

Dataset generate(const DatasetSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_samples;
  const std::size_t d = spec.n_features;
  const std::size_t k = spec.n_informative;
  const std::size_t n_clusters = 2 * spec.n_clusters_per_class;

  const Matrix centroids = cluster_centroids(spec);

  SeededRng layout = rng_from_seed(spec.effective_layout_seed());
  SeededRng coef_rng = layout.split("redundant");
  std::vector<double> coef(spec.n_redundant * k);
  for (double& c : coef) c = 2.0 * coef_rng.next_uniform() - 1.0;

  SeededRng root = rng_from_seed(spec.seed);
  SeededRng sample_rng = root.split("samples");
  SeededRng fill_rng = root.split("noise_features");
  SeededRng shuffle_rng = root.split("shuffle");

  // Even allocation: the first n % n_clusters clusters get one extra sample.
  std::vector<double> values(n * d);
  Labels labels(n);
  std::size_t row = 0;
  for (std::size_t c = 0; c < n_clusters; ++c) {
    const std::size_t count = n / n_clusters + (c < n % n_clusters ? 1 : 0);
    for (std::size_t s = 0; s < count; ++s, ++row) {
      double* out = values.data() + row * d;
      for (std::size_t j = 0; j < k; ++j) {
        out[j] = centroids(c, j) + sample_rng.next_normal();
      }
      for (std::size_t r = 0; r < spec.n_redundant; ++r) {
        double acc = 0.0;
        for (std::size_t j = 0; j < k; ++j) acc += coef[r * k + j] * out[j];
        out[k + r] = acc;
      }
      for (std::size_t j = k + spec.n_redundant; j < d; ++j) {
        out[j] = fill_rng.next_normal();
      }
      labels[row] = static_cast<int>(c % 2);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle_indices(order, shuffle_rng);

  std::vector<double> shuffled(n * d);
  Labels shuffled_labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy_n(values.begin() + order[i] * d, d, shuffled.begin() + i * d);
    shuffled_labels[i] = labels[order[i]];
  }
  return Dataset{Matrix(n, d, std::move(shuffled)), std::move(shuffled_labels),
                 spec};
}

Dataset add_noise(const Dataset& data, const NoiseSpec& noise, SeededRng rng) {
  data.validate();
  noise.validate();
  if (noise.level == 0.0) return data;

  const std::size_t n = data.size();
  const std::size_t d = data.n_features();
  Labels y = data.y;
  if (noise.flip_labels) {
    SeededRng flip = rng.split("flip");
    for (int& label : y) {
      if (flip.next_uniform() < noise.level) label = 1 - label;
    }
  }

  std::vector<double> values = data.x.values();
  if (noise.jitter_features && n > 1) {
    SeededRng jitter = rng.split("jitter");
    std::vector<double> sd(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += data.x(i, j);
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dev = data.x(i, j) - mean;
        ss += dev * dev;
      }
      sd[j] = std::sqrt(ss / static_cast<double>(n - 1));
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        values[i * d + j] += noise.level * sd[j] * jitter.next_normal();
      }
    }
  }
  return Dataset{Matrix(n, d, std::move(values)), std::move(y), data.spec};
}

Split train_val_split(const Dataset& data, double val_fraction, SeededRng rng) {
  data.validate();
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("train_val_split: val_fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> train_rows, val_rows;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data.y[i] == cls) members.push_back(i);
    }
    SeededRng class_rng = rng.split("class/" + std::to_string(cls));
    shuffle_indices(members, class_rng);
    const auto n_val = static_cast<std::size_t>(
        std::llround(static_cast<double>(members.size()) * val_fraction));
    val_rows.insert(val_rows.end(), members.begin(), members.begin() + n_val);
    train_rows.insert(train_rows.end(), members.begin() + n_val, members.end());
  }
  if (train_rows.empty() || val_rows.empty()) {
    throw std::invalid_argument(
        "train_val_split: fraction leaves the train or validation part empty");
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(val_rows.begin(), val_rows.end());
  Split out{data.subset(train_rows), data.subset(val_rows), {}, {}};
  out.train_rows = std::move(train_rows);
  out.val_rows = std::move(val_rows);
  return out;
}

}  // namespace modelswitch
