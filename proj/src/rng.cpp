#include "wdexp/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace wdexp {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(mix64(seed) ^ (stream * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL))) {}

std::uint64_t CounterRng::next_u64() { return mix64(key_ ^ mix64(counter_++)); }

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

namespace {

std::uint64_t poisson_inversion(CounterRng& rng, double mean) {
  double p = std::exp(-mean), F = p, u = rng.uniform();
  std::uint64_t x = 0;
  while (u > F) {
    ++x;
    p *= mean / static_cast<double>(x);
    F += p;
    if (p == 0.0 && u > F) break;
  }
  return x;
}

// Hormann's PTRS algorithm.
std::uint64_t poisson_ptrs(CounterRng& rng, double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double U = rng.uniform() - 0.5;
    double V = rng.uniform();
    double us = 0.5 - std::abs(U);
    double k = std::floor((2.0 * a / us + b) * U + mean + 0.43);
    if (us >= 0.07 && V <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && V > us)) continue;
    if (std::log(V) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0))
      return static_cast<std::uint64_t>(k);
  }
}

}  // namespace

std::uint64_t sample_poisson(CounterRng& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::invalid_argument("Poisson mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  return mean <= 30.0 ? poisson_inversion(rng, mean) : poisson_ptrs(rng, mean);
}

}  // namespace wdexp
