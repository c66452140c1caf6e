#pragma once
#include "wdexp/coefficients.hpp"

namespace wdexp::testing {

// d=1, L=2, K=8, Gaussian profile of unit width, Rademacher weights.
inline ExpansionModel standard_model(double L = 2.0, int K = 8, double width = 1.0,
                                     WeightDistribution dist = WeightDistribution::rademacher()) {
  ProfileSpec spec;
  spec.width = width;
  return ExpansionModel(build_lattice(1, L, K), Profile(spec, 1), dist);
}

inline LatticeState centered_packet(const MomentumLattice& lattice, double width = 1.0) {
  Wavepacket psi;
  psi.width = width;
  return wavepacket_state(psi, lattice);
}

}  // namespace wdexp::testing
