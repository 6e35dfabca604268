#pragma once

#include <cstdint>

namespace krylovlab {

// SplitMix64 used as a counter-based generator: output k of a stream is a
// fixed bijective mix of (key + k * golden gamma), so any draw can be
// computed without touching earlier ones.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  std::uint64_t at(std::uint64_t counter) const;
  std::uint64_t next() { return at(counter_++); }
  // Uniform on (0, 1); never returns 0 so it is safe under log().
  double uniform();
  // Box-Muller, consuming two draws per variate.
  double normal(double mu, double sigma);

  std::uint64_t key() const { return key_; }

  // Key of child stream `index`, derived from the parent key only.
  static std::uint64_t child_key(std::uint64_t master_seed, std::uint64_t index);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace krylovlab
