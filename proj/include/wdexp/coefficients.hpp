#pragma once
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "wdexp/chain_sum.hpp"
#include "wdexp/lattice.hpp"
#include "wdexp/partitions.hpp"
#include "wdexp/profile.hpp"
#include "wdexp/report.hpp"

namespace wdexp {

// Lattice, profile table and weight law shared by all coefficient evaluations.
class ExpansionModel {
 public:
  ExpansionModel(MomentumLattice lattice, Profile profile, WeightDistribution dist, double tol = 1e-13);

  const MomentumLattice& lattice() const { return lattice_; }
  const Profile& profile() const { return profile_; }
  const WeightDistribution& dist() const { return dist_; }
  const ProfileTable& table() const { return *table_; }

 private:
  MomentumLattice lattice_;
  Profile profile_;
  WeightDistribution dist_;
  std::shared_ptr<const ProfileTable> table_;
};

struct CoefficientOptions {
  bool record_per_partition = false;
  int threads = 0;  // 0: default_threads()
  double term_limit = 1e10;
};

struct CoefficientResult {
  cplx value = 0.0;
  int n = 0;
  std::size_t partition_count = 0;
  std::uint64_t term_count = 0;
  double truncation_tail_bound = 0.0;
  std::vector<std::pair<SetPartition, cplx>> per_partition;
};

// Lattice table of (nu(p) - z)^{-1}.
std::vector<cplx> resolvent_table(const MomentumLattice& lattice, cplx z);

// Single partition contribution C_{n,A} to the n-th coefficient.
cplx partition_term_C(const ExpansionModel& model, const SetPartition& A, const SpectralParameter& z,
                      const LatticeState& psi1, const LatticeState& psi2,
                      const CoefficientOptions& opts = {});

// n-th coefficient E <psi1, R (V R)^n psi2> over the truncated lattice.
CoefficientResult coefficient_T(const ExpansionModel& model, int n, const SpectralParameter& z,
                                const LatticeState& psi1, const LatticeState& psi2,
                                const CoefficientOptions& opts = {});

// Brute force over (k_1..k_{n+1}) with explicit block-sum deltas; n <= 3.
cplx coefficient_T_oracle(const ExpansionModel& model, int n, const SpectralParameter& z,
                          const LatticeState& psi1, const LatticeState& psi2, double term_limit = 1e8);

BoundReport conj_symmetry_check(const ExpansionModel& model, int n, const SpectralParameter& z,
                                const LatticeState& psi, const CoefficientOptions& opts = {});

struct ErrorFunctionalResult {
  double value = 0.0;  // real part
  double imag = 0.0;   // residual imaginary part of the computed sum
  std::uint64_t term_count = 0;
};

// E || (V R(conj z))^n psi ||^2 by the resolved partition sum over 2n factors.
ErrorFunctionalResult error_functional_E(const ExpansionModel& model, int n, const SpectralParameter& z,
                                         const LatticeState& psi, const CoefficientOptions& opts = {});

// |m_A| ||B||_1^{|J_A|} ||B_#^||_{*,1}^{|I_A|} ||psi1|| ||psi2|| dist(z)^{-(n+1)}.
double partition_term_bound(const ExpansionModel& model, const SetPartition& A, const SpectralParameter& z,
                            double psi1_norm, double psi2_norm);
// Sum of the per-partition bounds over all partitions of {1..n}.
double coefficient_bound(const ExpansionModel& model, int n, const SpectralParameter& z, double psi1_norm,
                         double psi2_norm);
BoundReport partition_term_bound_check(const ExpansionModel& model, const SetPartition& A,
                                       const SpectralParameter& z, const LatticeState& psi1,
                                       const LatticeState& psi2);

// Bound on the change of the chain sum when the lattice cutoff is removed.
double truncation_tail_bound(const ExpansionModel& model, int n, const SpectralParameter& z,
                             const LatticeState& psi1, const LatticeState& psi2);

struct ProbeRow {
  double parameter = 0.0;  // eta or L
  cplx value = 0.0;
  double delta = 0.0;      // |value - previous value|, 0 for the first row
  double bound = 0.0;      // coefficient_bound along the sequence
  double tail_bound = 0.0;
};

struct ProbeTable {
  std::vector<ProbeRow> rows;
  bool cauchy = false;  // successive deltas strictly decreasing
};

ProbeTable eta_limit_probe(const ExpansionModel& model, int n, double E, const std::vector<double>& etas,
                           const LatticeState& psi1, const LatticeState& psi2,
                           const CoefficientOptions& opts = {});

// Rebuilds the lattice for each L with K = round(cutoff_momentum * L).
ProbeTable volume_limit_probe(int n, cplx z, const std::vector<double>& Ls, double cutoff_momentum, int d,
                              const ProfileSpec& profile, const WeightDistribution& dist,
                              const Wavepacket& psi1, const Wavepacket& psi2,
                              const CoefficientOptions& opts = {});

}  // namespace wdexp
