#include "wdexp/lattice.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wdexp/errors.hpp"

namespace wdexp {

MomentumLattice::MomentumLattice(int d, double L, int K, std::size_t point_budget)
    : d_(d), L_(L), K_(K) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("lattice dimension must be 1, 2 or 3");
  if (!(L >= 1.0) || !std::isfinite(L)) throw std::invalid_argument("box side L must be >= 1");
  if (K < 1) throw std::invalid_argument("cutoff K must be >= 1");
  double count = std::pow(2.0 * K + 1.0, d);
  if (count > static_cast<double>(point_budget))
    throw BudgetError("lattice with " + std::to_string(static_cast<long long>(count)) +
                      " points exceeds budget " + std::to_string(point_budget));
  size_ = static_cast<std::size_t>(count);
  volume_ = std::pow(L, d);
  nu_.resize(size_);
  for (std::size_t i = 0; i < size_; ++i) nu_[i] = wdexp::nu(point(i), d_);
}

IVec MomentumLattice::coords(std::size_t i) const {
  IVec m{0, 0, 0};
  const std::size_t w = 2 * static_cast<std::size_t>(K_) + 1;
  for (int j = 0; j < d_; ++j) {
    m[j] = static_cast<int>(i % w) - K_;
    i /= w;
  }
  return m;
}

RVec MomentumLattice::point(std::size_t i) const { return point(coords(i)); }

RVec MomentumLattice::point(const IVec& m) const {
  RVec p{0.0, 0.0, 0.0};
  for (int j = 0; j < d_; ++j) p[j] = m[j] / L_;
  return p;
}

long MomentumLattice::index(const IVec& m) const {
  long idx = 0, stride = 1;
  const long w = 2L * K_ + 1;
  for (int j = 0; j < d_; ++j) {
    if (m[j] < -K_ || m[j] > K_) return -1;
    idx += (m[j] + K_) * stride;
    stride *= w;
  }
  return idx;
}

MomentumLattice build_lattice(int d, double L, int K, std::size_t point_budget) {
  return MomentumLattice(d, L, K, point_budget);
}

double nu(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) s += x * x;
  return 0.5 * s;
}

double discrete_integral(std::span<const double> f, const MomentumLattice& lattice) {
  if (f.size() != lattice.size()) throw std::invalid_argument("function size does not match lattice");
  CompensatedSum acc;
  for (double v : f) acc.add(v);
  return acc.value() / lattice.volume();
}

cplx discrete_integral(std::span<const cplx> f, const MomentumLattice& lattice) {
  if (f.size() != lattice.size()) throw std::invalid_argument("function size does not match lattice");
  CompensatedComplexSum acc;
  for (cplx v : f) acc.add(v);
  return acc.value() / lattice.volume();
}

SpectralParameter::SpectralParameter(double E_, double eta_, int sign_) : E(E_), eta(eta_), sign(sign_) {
  if (!(eta_ > 0.0) || !std::isfinite(eta_) || !std::isfinite(E_))
    throw std::invalid_argument("spectral parameter needs finite E and eta > 0");
  if (sign_ != 1 && sign_ != -1) throw std::invalid_argument("sign must be +1 or -1");
}

double SpectralParameter::dist_to_spectrum() const {
  return E >= 0.0 ? eta : std::abs(z());
}

}  // namespace wdexp
