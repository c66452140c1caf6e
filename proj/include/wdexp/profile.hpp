#pragma once
#include <vector>

#include "wdexp/lattice.hpp"
#include "wdexp/report.hpp"

namespace wdexp {

enum class ProfileKind { gaussian, cosine_bump };

// Gaussian: B(x) = b0 prod_j exp(-pi x_j^2 / width^2).
// Cosine bump: B(x) = b0 prod_j cos^2(pi x_j / (2 radius)) for |x_j| < radius.
struct ProfileSpec {
  ProfileKind kind = ProfileKind::gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  double radius = 0.5;
};

class Profile {
 public:
  Profile(ProfileSpec spec, int d);

  const ProfileSpec& spec() const { return spec_; }
  int dim() const { return d_; }

  // One-dimensional factor and its first two derivatives (amplitude excluded).
  double factor(double t, int derivative = 0) const;
  double value(const RVec& x) const;
  double derivative(const RVec& x, const IVec& alpha) const;

  // Integral of |B| over R^d.
  double l1_norm() const;
  // Integral of |g| over [-L/2, L/2].
  double factor_box_l1(double L) const;
  double factor_fourier_full(double k) const;
  // Integral of g(t) e^{-2 pi i k t} over [-L/2, L/2]; *err receives the error estimate.
  double factor_fourier_periodized(double k, double L, double tol, double* err = nullptr) const;
  double fourier_full(const RVec& k) const;
  double fourier_periodized(const RVec& p, double L, double tol) const;
  // c with |g_#^(k)| <= c / k^2 for k != 0, from two integrations by parts.
  double factor_decay_constant(double L) const;

  // Throws unless the profile is admissible in a box of side L.
  void require_box(double L) const;

 private:
  ProfileSpec spec_;
  int d_;
};

cplx profile_fourier_periodized(const Profile& profile, const RVec& p, double L, double tol = 1e-13);

// psi(x) = c exp(-pi width |x - center|^2 + 2 pi i x.wavevector), unit L^2(R^d) norm.
struct Wavepacket {
  RVec center{0.0, 0.0, 0.0};
  RVec wavevector{0.0, 0.0, 0.0};
  double width = 1.0;
};

double wavepacket_normalization(const Wavepacket& psi, int d);
cplx wavepacket_value(const Wavepacket& psi, int d, const RVec& x);
cplx wavepacket_fourier_periodized(const Wavepacket& psi, int d, const RVec& p, double L,
                                   double tol = 1e-13);
// Integral of |psi|^2 over the box.
double wavepacket_box_norm2(const Wavepacket& psi, int d, double L);
// Upper bound for the lattice sum of |psi_#^|^2 / L^d outside the cutoff.
double wavepacket_parseval_tail_bound(const Wavepacket& psi, const MomentumLattice& lattice,
                                      double tol = 1e-13);

// Test function sampled on the lattice: hat[i] = f_#^(p_i).
struct LatticeState {
  std::vector<cplx> hat;
  double norm = 1.0;  // L^2 norm of the test function
  double tail = 0.0;  // l^2_* norm of the coefficients outside the cutoff
};

LatticeState wavepacket_state(const Wavepacket& psi, const MomentumLattice& lattice,
                              double tol = 1e-13);
// Normalized plane wave e^{2 pi i p.x} / L^{d/2} with p = m / L.
LatticeState plane_wave_state(const MomentumLattice& lattice, const IVec& m);

// Checks prod_j <p_j>^2 |B_#^(p)| <= C1^d sum_{alpha_j <= 2} sup |<x>^{2d} d^alpha B| on the lattice.
BoundReport fourier_decay_check(const Profile& profile, const MomentumLattice& lattice);
double fourier_decay_constant(int d);
// sup_x <x>^{2d} |d^alpha B(x)| by grid search plus local refinement.
double weighted_derivative_sup(const Profile& profile, const IVec& alpha);

}  // namespace wdexp
