#pragma once
#include <cstdint>

namespace wdexp {

std::uint64_t mix64(std::uint64_t x);

// Counter-based generator: output i of stream (seed, stream) is a hash of the
// triple, so any sample can be regenerated independently of the others.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Poisson variate: inversion for mean <= 30, PTRS transformed rejection above.
std::uint64_t sample_poisson(CounterRng& rng, double mean);

}  // namespace wdexp
