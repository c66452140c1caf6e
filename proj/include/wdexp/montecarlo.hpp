#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "wdexp/coefficients.hpp"
#include "wdexp/rng.hpp"

namespace wdexp {

struct PoissonConfig {
  std::size_t M = 0;
  std::vector<RVec> positions;  // in [-L/2, L/2)^d
  std::vector<double> weights;
};

using HamiltonianMatrix = Eigen::MatrixXcd;

struct EstimatorResult {
  cplx mean = 0.0;
  double std_error = 0.0;  // sqrt(Var Re + Var Im) / sqrt(n)
  double std_error_re = 0.0;
  double std_error_im = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Mean and standard error of per-sample values, reduced in index order.
EstimatorResult summarize(const std::vector<cplx>& samples, std::uint64_t seed);

PoissonConfig sample_config(const MomentumLattice& lattice, const WeightDistribution& dist, CounterRng& rng);
// Configuration for sample index i of a run with the given seed.
PoissonConfig sample_config(const MomentumLattice& lattice, const WeightDistribution& dist, std::uint64_t seed,
                            std::uint64_t index);

cplx potential_fourier(const PoissonConfig& config, const ExpansionModel& model, const IVec& p);
// V_^(p) on the whole difference lattice (cutoff 2K), exactly conjugation symmetric.
std::vector<cplx> potential_fourier_table(const PoissonConfig& config, const ExpansionModel& model);
// Matrix of V in the plane-wave basis: V_^(p - q) / L^d.
HamiltonianMatrix potential_matrix(const PoissonConfig& config, const ExpansionModel& model);
HamiltonianMatrix assemble_hamiltonian(const PoissonConfig& config, double lambda, const ExpansionModel& model);

// Relative Hermiticity defect max |H - H^*| / max(1, max |H|).
double hermiticity_residual(const HamiltonianMatrix& H);

// <psi1, (H - z)^{-1} psi2> through one dense solve on lattice coefficients.
cplx resolvent_matrix_element(const HamiltonianMatrix& H, const MomentumLattice& lattice, cplx z,
                              const LatticeState& psi1, const LatticeState& psi2);

// (H - z)^{-1} = sum_{j<=n} R (-lambda V R)^j + (-R lambda V)^{n+1} (H - z)^{-1} applied to psi2.
BoundReport neumann_identity_check(const PoissonConfig& config, double lambda, const SpectralParameter& z, int n,
                                   const ExpansionModel& model, const LatticeState& psi2);
// Remainder norm against (lambda ||V|| / dist)^{n+1} ||psi2|| / dist.
BoundReport neumann_remainder_bound_check(const PoissonConfig& config, double lambda, const SpectralParameter& z,
                                          int n, const ExpansionModel& model, const LatticeState& psi2);

struct McOptions {
  std::size_t n_samples = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
};

EstimatorResult estimate_expectation(const ExpansionModel& model, double lambda, const SpectralParameter& z,
                                     const LatticeState& psi1, const LatticeState& psi2, const McOptions& opts);

// Monte Carlo estimate of E <psi1, R (V R)^n psi2>.
EstimatorResult estimate_partial_term(const ExpansionModel& model, int n, const SpectralParameter& z,
                                      const LatticeState& psi1, const LatticeState& psi2, const McOptions& opts);

// Monte Carlo estimate of E || (V R(conj z))^n psi ||^2.
EstimatorResult estimate_error_functional(const ExpansionModel& model, int n, const SpectralParameter& z,
                                          const LatticeState& psi, const McOptions& opts);

struct ResidualRow {
  double lambda = 0.0;
  cplx mc_mean = 0.0;         // plain estimate of E <psi1, (H - z)^{-1} psi2>
  double mc_std_error = 0.0;
  cplx partial_sum = 0.0;     // sum_{j <= kept} (-lambda)^j T_j
  cplx residual = 0.0;        // plain: mc_mean - partial_sum
  double residual_std_error = 0.0;
  cplx residual_cv = 0.0;     // control-variate estimate of the same residual
  double residual_cv_std_error = 0.0;
};

// Paired-sample sweep over lambda: the same configurations serve every lambda.
// The control variates are the per-sample operator strings R (V R)^j for
// j = 1..kept+1, whose means are the coefficients T_j.
std::vector<ResidualRow> residual_sweep(const ExpansionModel& model, const std::vector<double>& lambdas, int kept,
                                        const SpectralParameter& z, const LatticeState& psi1,
                                        const LatticeState& psi2, const McOptions& opts);

// C-infinity bump exp(1 - 1/(1 - t^2)), t = (E - center) / width.
struct Bump {
  double center = 1.0;
  double width = 0.5;
  double operator()(double E) const;
  double lo() const { return center - width; }
  double hi() const { return center + width; }
};
void validate_bump(const Bump& chi);

// (chi * gamma_eta)(mu) with the Cauchy density gamma_eta.
double smoothed_bump(const Bump& chi, double eta, double mu);

// (1/L^d) sum_k (chi * gamma_eta)(mu_k) over eigenvalues of H.
double smoothed_trace_sample(const PoissonConfig& config, double lambda, const Bump& chi, double eta,
                             const ExpansionModel& model);
// (1/L^d)(1/pi) int chi(E) Im tr (H - E - i eta)^{-1} dE by dense inverses on a
// composite Gauss-Legendre grid of `nodes` points (multiple of 20).
double smoothed_trace_stone(const PoissonConfig& config, double lambda, const Bump& chi, double eta,
                            const ExpansionModel& model, int nodes = 2000);

}  // namespace wdexp
