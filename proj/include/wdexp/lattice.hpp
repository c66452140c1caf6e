#pragma once
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "wdexp/numerics.hpp"

namespace wdexp {

inline constexpr int kMaxDim = 3;
using IVec = std::array<int, kMaxDim>;
using RVec = std::array<double, kMaxDim>;

inline constexpr std::size_t kDefaultPointBudget = 40000;

// Truncated dual lattice (Z/L)^d with max_j |m_j| <= K. Points are indexed with
// the first coordinate running fastest.
class MomentumLattice {
 public:
  MomentumLattice(int d, double L, int K, std::size_t point_budget = kDefaultPointBudget);

  int dim() const { return d_; }
  double side() const { return L_; }
  int cutoff() const { return K_; }
  double volume() const { return volume_; }
  std::size_t size() const { return size_; }

  IVec coords(std::size_t i) const;
  RVec point(std::size_t i) const;
  RVec point(const IVec& m) const;
  // Index of integer coordinates m, or -1 when m lies outside the cutoff.
  long index(const IVec& m) const;
  double nu(std::size_t i) const { return nu_[i]; }
  const std::vector<double>& nu_table() const { return nu_; }

 private:
  int d_;
  double L_;
  int K_;
  double volume_;
  std::size_t size_;
  std::vector<double> nu_;
};

MomentumLattice build_lattice(int d, double L, int K,
                              std::size_t point_budget = kDefaultPointBudget);

// Kinetic energy |p|^2 / 2.
double nu(std::span<const double> p);
inline double nu(const RVec& p, int d) { return nu(std::span<const double>(p.data(), d)); }

double discrete_integral(std::span<const double> f, const MomentumLattice& lattice);
cplx discrete_integral(std::span<const cplx> f, const MomentumLattice& lattice);

// z = E + sign * i * eta with eta > 0.
struct SpectralParameter {
  SpectralParameter(double E, double eta, int sign = +1);
  double E;
  double eta;
  int sign;
  cplx z() const { return {E, sign * eta}; }
  SpectralParameter conj() const { return {E, eta, -sign}; }
  // Distance from z to [0, inf).
  double dist_to_spectrum() const;
};

}  // namespace wdexp
