#pragma once
#include <functional>
#include <vector>

#include "wdexp/chain_sum.hpp"
#include "wdexp/partitions.hpp"
#include "wdexp/profile.hpp"
#include "wdexp/report.hpp"

namespace wdexp {

// Surface area of the unit sphere in R^d: 2, 2 pi, 4 pi.
double sphere_area(int d);

// sqrt 2 (E^{-1/2} (E+1)^{(d-1)/2} + E^{(d-2)/2}) |S_{d-1}|.
double const_C1(double E, int d);

// Integral of |q^2 - E - i eta / sqrt 2|^{-1} over the cube max_j |q_j| <= sqrt(2E + 1).
double window_integral(double E, int d, double eta);

// sup and normalized l^1 norm of a lattice function, both including the
// part beyond the cutoff.
struct LatticeNorms {
  double sup = 0.0;
  double l1 = 0.0;
};
LatticeNorms lattice_norms(const ProfileTable& table);

double const_C0(double E, int d, double eta, const LatticeNorms& f);
double const_C(double E, int d, double eta, const LatticeNorms& f);

// (1/L^d) sum_q |f(q)| / |q^2 - E - i eta| <= const_C0 with f the periodized profile transform.
BoundReport check_C0_bound(double E, int d, double L, double eta, const ProfileSpec& f);
// |(1/L^d) sum_q f(q) / (q^2/2 - E +- i eta)| <= const_C.
BoundReport check_resolvent_sum_bound(double E, int d, double L, double eta, const ProfileSpec& f, int sign = +1);
// |int f(q) / (q^2 - E +- i eta) dq| <= C1(E,d) ||f||_inf ln(1/eta + 1) + sqrt 2 ||f||_1 for the
// Gaussian transform f of the profile.
BoundReport check_log_integral_bound(double E, int d, double eta, const ProfileSpec& f, int sign = +1);

// sup_x <x>^2 |f(x)| by grid search on [-window, window] with local refinement.
double bracket_weighted_sup(const std::function<double(double)>& f, double window);
// int_a^b |f| <= pi sup <x>^2 |f|.
BoundReport check_arctan_bound(const std::function<double(double)>& f, double a, double b, double window = 50.0,
                               const char* label = "");

// (1/L^d) sum_a <a>^tau / ((a^2 - E)^2 + eta^2) over the full lattice (upper estimate).
double weighted_resolvent_sum(double E, double tau, double eta, int d, double L);
// Shape check: the sum divided by (1 + eta^{-2}) varies by at most a factor 10
// over the eta grid and over the L grid.
BoundReport check_weighted_resolvent_sum(double E, double tau, int d, const std::vector<double>& etas,
                                         const std::vector<double>& Ls);

// sup over L in {1, 2, 4, 8} (admissible boxes only) of ||B_#^||_{*,1}.
double measured_cB(const ProfileSpec& profile, int d);

struct MainErrorBound {
  int n = 0;
  double K = 0.0;
  double C_tilde = 0.0;
  double c_B = 0.0;
  double rhs = 0.0;
};

// K (lambda^2/eta)^{n/2} (1 + ln(1/eta + 1))^n eta^{-3/2} ||psi1|| ||psi2||.
MainErrorBound main_error_bound_rhs(int n, int d, double E, double eta, double lambda, const ProfileSpec& profile,
                                    const WeightDistribution& dist, double psi1_norm, double psi2_norm);

// prod_j <v1_j>^{-1+eps} <v2_j>^{-1+eps} |nu(q+v1) - E + i eta|^{-1} |nu(q + s v1 + v2) - E + i eta|^{-1}.
double sup_weight_value(const RVec& q, const RVec& v1, const RVec& v2, double E, double eps, double eta, int sigma,
                        int d);
// Multi-start maximization of sup_weight_value over (v1, v2).
double sup_weight(const RVec& q, double E, double eps, double eta, int sigma, int d);
// Normalized sup * prod <q_j>^{1-eps} / (1 + eta^{-2}) over the grid; passes when
// the largest value is within a factor 10 of the value at the first grid point.
BoundReport check_sup_weight_grid(double E, double eps, double eta, int sigma, int d, const std::vector<RVec>& q_grid);

// Every verifier on its default grid.
std::vector<BoundReport> default_bound_grid(int threads = 0);

}  // namespace wdexp
