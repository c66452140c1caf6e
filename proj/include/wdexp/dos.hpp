#pragma once
#include <functional>
#include <string>
#include <vector>

#include "wdexp/montecarlo.hpp"

namespace wdexp {

struct DosCoefficient {
  int n = 0;
  double E = 0.0;
  double eta = 0.0;
  double value = 0.0;
  double imag_residual = 0.0;  // imaginary part left in the (1/2i)(S(z) - S(conj z)) combination
  double tail_bound = 0.0;
  std::uint64_t term_count = 0;
};

// Trace-mode coefficient: lattice average over p of Im T_n[E + i eta; phi_p, phi_p].
DosCoefficient dos_coefficient_D(const ExpansionModel& model, int n, double E, double eta,
                                 const CoefficientOptions& opts = {});
// (1/L^d) sum_p eta / ((nu(p) - E)^2 + eta^2).
double dos_D0_closed(const MomentumLattice& lattice, double E, double eta);

struct DosOrder {
  int n = 0;
  double integral = 0.0;      // (1/pi) int chi(E) D_n[E, eta] dE
  double contribution = 0.0;  // (-lambda)^n * integral
  double quad_error = 0.0;
  double tail_bound = 0.0;    // (1/pi) ||chi||_1 sup_E tail of D_n
};

struct DosExpansion {
  double lambda = 0.0;
  double eta = 0.0;
  int max_order = 0;
  std::vector<DosOrder> orders;
  double total = 0.0;
  std::string note;
};

// One order of the expansion without the lambda power.
DosOrder dos_order(const ExpansionModel& model, const Bump& chi, double eta, int n, const CoefficientOptions& opts = {});

// Smoothed density of states expanded to max_order in lambda at fixed eta.
DosExpansion dos_expansion(const ExpansionModel& model, const Bump& chi, double lambda, double eta, int max_order,
                           const CoefficientOptions& opts = {});
// eta = lambda^{2 - epsilon}.
double dos_eta(double lambda, double epsilon);
// Largest order evaluated by default: 3 for d = 1, 2 otherwise.
int dos_order_cap(int d);

EstimatorResult dos_mc(const ExpansionModel& model, const Bump& chi, double lambda, double eta,
                       const McOptions& opts);

// Maximum of |V| on a uniform grid of the box, with periodized profile images.
double potential_grid_sup(const PoissonConfig& config, const ExpansionModel& model, int points_per_dim = 0);

// sum_k |f(mu_k)| <= C_f (2 ||lambda V||^2 + 2) sum_p (nu(p)^2 + 1)^{-1}
// for |f(x)| <= C_f <x>^{-2}; ||lambda V|| is the larger of the grid sup and
// the operator norm of the truncated potential.
BoundReport trace_class_bound_check(const PoissonConfig& config, double lambda, const ExpansionModel& model,
                                    const std::function<double(double)>& f, double C_f);

// Checks D_0 eta / (eta^2 + 1) <= size / L^d over the eta grid.
BoundReport dos_eta_scaling_check(const MomentumLattice& lattice, double E, const std::vector<double>& etas);

}  // namespace wdexp
