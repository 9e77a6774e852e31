#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace modelswitch {

// SplitMix64 output function. Advances `state` by the golden-ratio increment
// and returns the mixed value.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Seeded xoshiro256** generator with labelled child streams.
//
// A stream is identified by (origin_seed, label path). Children are derived by
// hashing the full path, so a child never depends on how much output its
// parent has produced, and adding new streams never perturbs existing ones.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  // Child stream for `label` under this stream's path. Does not advance this
  // generator. Throws std::invalid_argument on an empty label.
  SeededRng split(std::string_view label) const;

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 bits of resolution.
  double next_uniform();
  // Standard normal via Box-Muller; the second value of each pair is cached.
  double next_normal();
  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

  std::uint64_t origin_seed() const { return origin_seed_; }
  const std::string& stream_label() const { return label_; }

 private:
  SeededRng(std::uint64_t origin_seed, std::string label);
  void seed_state(std::uint64_t mixed);

  std::array<std::uint64_t, 4> state_{};
  std::uint64_t origin_seed_ = 0;
  std::string label_;
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

inline SeededRng rng_from_seed(std::uint64_t seed) { return SeededRng(seed); }

// Fisher-Yates shuffle driven by rng.
void shuffle_indices(std::vector<std::size_t>& idx, SeededRng& rng);

// k distinct values from [0, n), in draw order. Requires k <= n.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                    SeededRng& rng);

}  // namespace modelswitch
