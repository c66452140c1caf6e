#include <doctest.h>

#include <cmath>
#include <random>

#include "instance.hpp"
#include "wdexp/coefficients.hpp"
#include "wdexp/montecarlo.hpp"

using namespace wdexp;
using wdexp::testing::centered_packet;
using wdexp::testing::standard_model;

namespace {

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

cplx lattice_pairing(const ExpansionModel& m, const LatticeState& a, const LatticeState& b, cplx z) {
  const auto& lat = m.lattice();
  CompensatedComplexSum s;
  for (std::size_t i = 0; i < lat.size(); ++i) s.add(std::conj(a.hat[i]) * b.hat[i] / (lat.nu(i) - z));
  return s.value() / lat.volume();
}

// Second order in closed form: only the pair block survives when m1 = 0, and the
// position average forces the outer momenta to coincide.
cplx second_order_closed(const ExpansionModel& m, const LatticeState& a, const LatticeState& b, cplx z) {
  const auto& lat = m.lattice();
  double vol = lat.volume();
  CompensatedComplexSum s;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    cplx inner = 0.0;
    for (std::size_t j = 0; j < lat.size(); ++j) {
      IVec d{lat.coords(i)[0] - lat.coords(j)[0], 0, 0};
      double bh = m.table().at(d);
      inner += bh * bh / (lat.nu(j) - z);
    }
    cplx r = 1.0 / (lat.nu(i) - z);
    s.add(std::conj(a.hat[i]) * b.hat[i] * r * r * inner);
  }
  return m.dist().moment(2) * s.value() / (vol * vol);
}

}  // namespace

TEST_CASE("zeroth order is the free pairing") {
  auto m = standard_model();
  auto psi = centered_packet(m.lattice());
  SpectralParameter z(1.0, 0.3);
  auto t0 = coefficient_T(m, 0, z, psi, psi);
  CHECK(rel_err(t0.value, lattice_pairing(m, psi, psi, z.z())) < 1e-14);
  CHECK(coefficient_T_oracle(m, 0, z, psi, psi) == t0.value);
  auto pw = plane_wave_state(m.lattice(), IVec{2, 0, 0});
  auto tp = coefficient_T(m, 0, z, pw, pw);
  CHECK(rel_err(tp.value, 1.0 / (m.lattice().nu(m.lattice().index(IVec{2, 0, 0})) - z.z())) < 1e-14);
}

TEST_CASE("odd orders vanish for rademacher weights") {
  auto m = standard_model();
  auto psi = centered_packet(m.lattice());
  SpectralParameter z(1.0, 0.5);
  CHECK(coefficient_T(m, 1, z, psi, psi).value == cplx(0.0));
  CHECK(coefficient_T(m, 3, z, psi, psi).value == cplx(0.0));
  CHECK(coefficient_T_oracle(m, 3, z, psi, psi) == cplx(0.0));
  for (const auto& A : enumerate_partitions(3)) CHECK(partition_term_C(m, A, z, psi, psi) == cplx(0.0));
}

TEST_CASE("second order matches the closed pair formula") {
  for (double L : {1.0, 2.0}) {
    auto m = standard_model(L, 6);
    auto psi = centered_packet(m.lattice());
    SpectralParameter z(1.0, 0.5);
    cplx want = second_order_closed(m, psi, psi, z.z());
    CHECK(rel_err(coefficient_T(m, 2, z, psi, psi).value, want) < 1e-12);
    CHECK(rel_err(partition_term_C(m, SetPartition(2, {{1, 2}}), z, psi, psi), want) < 1e-12);
  }
}

TEST_CASE("resolved and unresolved sums agree on random instances") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double Ls[] = {1.0, 2.0, 4.0};
  for (int trial = 0; trial < 6; ++trial) {
    double L = Ls[trial % 3];
    int K = trial % 2 ? 4 : 6;
    double width = 0.6 + 0.8 * U(gen);
    auto dist = trial % 2 ? WeightDistribution::centered_uniform() : WeightDistribution::explicit_moments({0.3, 1.2, -0.4});
    auto m = standard_model(L, K, width, dist);
    Wavepacket p;
    p.center = {0.3 * U(gen), 0, 0};
    p.wavevector = {U(gen), 0, 0};
    auto psi1 = wavepacket_state(p, m.lattice());
    auto psi2 = centered_packet(m.lattice(), 0.8);
    SpectralParameter z(2.0 * U(gen), 0.2 + 0.8 * U(gen));
    for (int n = 0; n <= 3; ++n) {
      cplx a = coefficient_T(m, n, z, psi1, psi2).value;
      cplx b = coefficient_T_oracle(m, n, z, psi1, psi2);
      CHECK(rel_err(a, b) < 1e-10);
    }
  }
}

TEST_CASE("conjugation symmetry") {
  auto m = standard_model(2.0, 6);
  auto psi = centered_packet(m.lattice());
  CHECK(conj_symmetry_check(m, 0, SpectralParameter(1.0, 1.0), psi).pass);
  for (int n : {2, 4}) {
    auto r = conj_symmetry_check(m, n, SpectralParameter(1.0, 0.5), psi);
    CHECK(r.pass);
    CHECK(r.lhs <= 1e-12 * std::max(1.0, r.rhs));
  }
}

TEST_CASE("error functional") {
  auto m = standard_model(2.0, 6);
  auto psi = centered_packet(m.lattice());
  SpectralParameter z(1.0, 0.5);
  std::vector<double> sq(psi.hat.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = std::norm(psi.hat[i]);
  auto e0 = error_functional_E(m, 0, z, psi);
  CHECK(e0.value == doctest::Approx(discrete_integral(sq, m.lattice())).epsilon(1e-13));
  for (int n : {1, 2}) {
    auto e = error_functional_E(m, n, z, psi);
    CHECK(e.value > 0.0);
    CHECK(std::abs(e.imag) <= 1e-10 * e.value);
  }
  McOptions mo;
  mo.n_samples = 4000;
  mo.seed = 99;
  auto mc = estimate_error_functional(m, 1, z, psi, mo);
  CHECK(std::abs(mc.mean.real() - error_functional_E(m, 1, z, psi).value) <= 3.0 * mc.std_error);
}

TEST_CASE("per-partition and coefficient bounds") {
  auto m = standard_model();
  auto psi = centered_packet(m.lattice());
  SpectralParameter z(1.0, 0.3);
  for (int n = 0; n <= 4; ++n) {
    for (const auto& A : enumerate_partitions(std::max(n, 1))) {
      if (n == 0) break;
      CHECK(partition_term_bound_check(m, A, z, psi, psi).pass);
    }
    auto t = coefficient_T(m, n, z, psi, psi);
    CHECK(std::abs(t.value) <= coefficient_bound(m, n, z, psi.norm, psi.norm));
    CHECK(t.truncation_tail_bound >= 0.0);
  }
}

TEST_CASE("per-partition records add up") {
  auto m = standard_model();
  auto psi = centered_packet(m.lattice());
  CoefficientOptions o;
  o.record_per_partition = true;
  auto t = coefficient_T(m, 4, SpectralParameter(1.0, 0.3), psi, psi, o);
  CHECK(t.partition_count == 15);
  cplx s = 0.0;
  for (const auto& [A, v] : t.per_partition) s += v;
  CHECK(std::abs(s - t.value) <= 1e-14 * std::abs(t.value));
}

TEST_CASE("thread count does not change the sum") {
  auto m = standard_model();
  auto psi = centered_packet(m.lattice());
  CoefficientOptions a, b;
  a.threads = 1;
  b.threads = 3;
  SpectralParameter z(1.0, 0.3);
  CHECK(coefficient_T(m, 4, z, psi, psi, a).value == coefficient_T(m, 4, z, psi, psi, b).value);
}

TEST_CASE("limit probes") {
  auto m = standard_model();
  auto psi = centered_packet(m.lattice());
  auto off = eta_limit_probe(m, 0, -1.0, {0.4, 0.2, 0.1, 0.05}, psi, psi);
  REQUIRE(off.rows.size() == 4);
  for (std::size_t k = 1; k < off.rows.size(); ++k) CHECK(off.rows[k].delta <= off.rows[k - 1].parameter);
  Wavepacket w;
  auto vol = volume_limit_probe(0, cplx(1.0, 1.0), {2.0, 4.0, 8.0}, 4.0, 1, ProfileSpec{},
                                WeightDistribution::rademacher(), w, w);
  REQUIRE(vol.rows.size() == 3);
  CHECK(vol.rows[2].delta < vol.rows[1].delta);
  CHECK(vol.rows[2].delta < 1e-4 * std::abs(vol.rows[2].value));
  for (const auto& r : vol.rows) CHECK(std::abs(r.value) <= r.bound);
}
