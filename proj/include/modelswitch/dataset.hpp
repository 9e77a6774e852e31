#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "modelswitch/matrix.hpp"
#include "modelswitch/rng.hpp"

namespace modelswitch {

using Labels = std::vector<int>;

// Configuration of the synthetic binary-classification generator.
//
// Class centroids sit on vertices of the hypercube {-class_sep, +class_sep}^k
// where k = n_informative. The cluster layout (centroids and redundant-feature
// coefficients) is drawn from `layout_seed` when set, otherwise from `seed`;
// per-sample draws always come from `seed`. Two specs sharing a layout seed
// therefore describe the same distribution with independent samples.
struct DatasetSpec {
  std::size_t n_samples = 100;
  std::size_t n_features = 20;
  std::size_t n_informative = 2;
  std::size_t n_redundant = 0;
  std::size_t n_clusters_per_class = 1;
  double class_sep = 1.0;
  std::uint64_t seed = 42;
  std::optional<std::uint64_t> layout_seed;

  // Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
  std::uint64_t effective_layout_seed() const {
    return layout_seed.value_or(seed);
  }
  bool operator==(const DatasetSpec&) const = default;
};

struct Dataset {
  Matrix x;
  Labels y;
  std::optional<DatasetSpec> spec;

  std::size_t size() const { return y.size(); }
  std::size_t n_features() const { return x.cols(); }
  // Throws std::invalid_argument if x.rows != |y| or a label is not 0/1.
  void validate() const;
  Dataset subset(std::span<const std::size_t> rows) const;
  std::pair<std::size_t, std::size_t> class_counts() const;
};

struct NoiseSpec {
  double level = 0.2;
  bool flip_labels = true;
  bool jitter_features = true;

  void validate() const;
  bool operator==(const NoiseSpec&) const = default;
};

// Centroid coordinates chosen for `spec`, one row per cluster. Cluster c
// belongs to class c % 2.
Matrix cluster_centroids(const DatasetSpec& spec);

Dataset generate(const DatasetSpec& spec);

// Label flips with probability level and per-column Gaussian jitter with
// standard deviation level * column std. The input is not modified.
Dataset add_noise(const Dataset& data, const NoiseSpec& noise, SeededRng rng);

struct Split {
  Dataset train;
  Dataset val;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> val_rows;
};

// Stratified split: each class contributes round(count * val_fraction) rows
// to validation. Throws std::invalid_argument if the fraction is outside (0,1)
// or either side would be empty.
Split train_val_split(const Dataset& data, double val_fraction, SeededRng rng);

}  // namespace modelswitch
