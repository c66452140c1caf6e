#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "wdexp/lattice.hpp"
#include "wdexp/partitions.hpp"
#include "wdexp/profile.hpp"

namespace wdexp {

// Periodized profile transform on the difference lattice (cutoff 2K) plus the
// norms needed for truncation bounds.
class ProfileTable {
 public:
  ProfileTable(const Profile& profile, const MomentumLattice& lattice, double tol = 1e-13);

  const MomentumLattice& diff_lattice() const { return diff_; }
  // B_#^ at integer difference coordinates m (|m_j| <= 2K).
  double at(const IVec& m) const { return values_[static_cast<std::size_t>(diff_.index(m))]; }
  double at_index(std::size_t i) const { return values_[i]; }
  // Upper bound for ||B_#^||_{*,1} over the infinite lattice.
  double l1_full() const { return l1_full_; }
  // Upper bound for the same norm restricted to max_j |m_j| > R.
  double l1_outside(int R) const;
  // ||B||_1 over R^d.
  double profile_l1() const { return profile_l1_; }
  // sup |B_#^| <= integral of |B| over the box.
  double sup_bound() const { return sup_bound_; }

 private:
  MomentumLattice diff_;
  std::vector<double> values_;
  int d_;
  double amp_;
  std::vector<double> factor_in_;  // (1/L) sum_{|m|<=R} |g_#^(m/L)| for R = 0..Rmax
  double factor_all_;
  double l1_full_, profile_l1_, sup_bound_;
};

// Resolvent-chain sum for one partition A of {1..N}:
//   (1/L^d)^{|I_A|+1} sum_{u0} w(u0) g_1(u0) sum_paths prod_j B_#^(-[M_A v]_j) g_{j+1}(k_{j+1}),
// where all intermediate momenta must stay inside the cutoff.
struct ChainInput {
  const MomentumLattice* lattice = nullptr;
  const ProfileTable* table = nullptr;
  std::vector<std::vector<cplx>> props;  // N+1 lattice tables
  std::vector<cplx> endpoint;            // w(u0)
  int threads = 1;
  double term_limit = 1e10;
};

struct ChainTerm {
  cplx value = 0.0;
  std::uint64_t terms = 0;
};

// Unweighted sum (the moment weight is applied by the caller).
ChainTerm chain_partition_sum(const ChainInput& in, const SetPartition& A);

// Same sum for the empty partition (N = 0).
ChainTerm chain_empty_sum(const ChainInput& in);

// sum over max_j |m_j| > Kin of envelope(|p|^2) / L^d, where envelope(r2) must
// bound f(rho) for every rho >= r2 and decay at least like 16/r2^2 once r2 >= decay_from.
double shell_tail(const std::function<double(double)>& envelope, int Kin, double L, int d, double decay_from);

}  // namespace wdexp
