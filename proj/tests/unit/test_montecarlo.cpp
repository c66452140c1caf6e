#include <doctest.h>

#include <cmath>

#include "instance.hpp"
#include "wdexp/montecarlo.hpp"

using namespace wdexp;
using wdexp::testing::centered_packet;
using wdexp::testing::standard_model;

namespace {

struct Moments {
  double mean = 0.0, se = 0.0;
};

template <class F>
Moments sample_mean(std::size_t n, F f) {
  double s = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = f(i);
    s += x;
    s2 += x * x;
  }
  double m = s / n;
  return {m, std::sqrt((s2 / n - m * m) / (n - 1))};
}

PoissonConfig single_site(double v = 1.0) {
  PoissonConfig c;
  c.M = 1;
  c.positions = {RVec{0.0, 0.0, 0.0}};
  c.weights = {v};
  return c;
}

}  // namespace

TEST_CASE("counter rng is reproducible and stream separated") {
  CounterRng a(5, 0), b(5, 0), c(5, 1);
  for (int i = 0; i < 10; ++i) {
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  auto m = sample_mean(200000, [](std::size_t i) {
    CounterRng r(11, i);
    return r.uniform();
  });
  CHECK(std::abs(m.mean - 0.5) < 4 * m.se);
}

TEST_CASE("poisson sampling") {
  for (double mean : {2.0, 45.0}) {
    auto m = sample_mean(100000, [&](std::size_t i) {
      CounterRng r(1, i);
      return double(sample_poisson(r, mean));
    });
    CHECK(std::abs(m.mean - mean) < 3 * m.se);
  }
  auto lat = build_lattice(1, 2.0, 4);
  auto rad = WeightDistribution::rademacher();
  auto fm = sample_mean(100000, [&](std::size_t i) {
    double M = double(sample_config(lat, rad, 3, i).M);
    return M * (M - 1) * (M - 2);
  });
  CHECK(std::abs(fm.mean - 8.0) < 3 * fm.se);
}

TEST_CASE("sampled configurations") {
  auto lat = build_lattice(1, 2.0, 4);
  auto rad = WeightDistribution::rademacher();
  double s1 = 0, s2 = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < 20000; ++i) {
    auto c = sample_config(lat, rad, 8, i);
    CHECK(c.positions.size() == c.M);
    for (std::size_t g = 0; g < c.M; ++g) {
      CHECK(c.positions[g][0] >= -1.0);
      CHECK(c.positions[g][0] < 1.0);
      s1 += c.weights[g];
      s2 += c.weights[g] * c.weights[g];
      ++count;
    }
  }
  CHECK(std::abs(s1 / count) < 3.0 / std::sqrt(double(count)));
  CHECK(s2 / count == 1.0);
  CHECK_THROWS(sample_config(lat, WeightDistribution::explicit_moments({0.0, 1.0}), 1, 0));
}

TEST_CASE("potential transform") {
  auto m = standard_model();
  PoissonConfig empty;
  CHECK(potential_fourier(empty, m, IVec{3, 0, 0}) == cplx(0.0));
  auto one = single_site();
  for (int k = -16; k <= 16; ++k) CHECK(potential_fourier(one, m, IVec{k, 0, 0}) == cplx(m.table().at(IVec{k, 0, 0})));
  auto c = sample_config(m.lattice(), m.dist(), 4, 2);
  for (int k = 0; k <= 16; ++k)
    CHECK(std::abs(potential_fourier(c, m, IVec{-k, 0, 0}) - std::conj(potential_fourier(c, m, IVec{k, 0, 0}))) <= 1e-14);
}

TEST_CASE("hamiltonian assembly") {
  auto m = standard_model();
  const auto& lat = m.lattice();
  auto c = sample_config(lat, m.dist(), 4, 1);
  auto H0 = assemble_hamiltonian(c, 0.0, m);
  Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> es(H0);
  std::vector<double> nus = lat.nu_table();
  std::sort(nus.begin(), nus.end());
  for (std::size_t i = 0; i < nus.size(); ++i) CHECK(es.eigenvalues()[i] == doctest::Approx(nus[i]).epsilon(1e-14));

  auto H = assemble_hamiltonian(single_site(), 0.3, m);
  for (std::size_t i = 0; i < lat.size(); ++i)
    for (std::size_t j = 0; j < lat.size(); ++j) {
      IVec d{lat.coords(i)[0] - lat.coords(j)[0], 0, 0};
      cplx want = 0.3 * m.table().at(d) / lat.volume() + (i == j ? lat.nu(i) : 0.0);
      CHECK(std::abs(H(i, j) - want) <= 1e-15);
    }
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(hermiticity_residual(assemble_hamiltonian(sample_config(lat, m.dist(), 9, i), 0.5, m)) <= 1e-13);
}

TEST_CASE("resolvent matrix element") {
  auto m = standard_model();
  auto psi = centered_packet(m.lattice());
  SpectralParameter z(1.0, 0.3);
  PoissonConfig empty;
  auto H0 = assemble_hamiltonian(empty, 0.0, m);
  cplx free = resolvent_matrix_element(H0, m.lattice(), z.z(), psi, psi);
  CHECK(std::abs(free - coefficient_T(m, 0, z, psi, psi).value) <= 1e-15 * std::abs(free));
  for (std::size_t i = 0; i < 10; ++i) {
    auto H = assemble_hamiltonian(sample_config(m.lattice(), m.dist(), 2, i), 0.5, m);
    cplx v = resolvent_matrix_element(H, m.lattice(), z.z(), psi, psi);
    CHECK(std::abs(v) <= psi.norm * psi.norm / z.eta);
    CHECK(v.imag() > 0.0);
  }
}

TEST_CASE("neumann identity") {
  auto m = standard_model();
  auto psi = centered_packet(m.lattice());
  SpectralParameter z(1.0, 0.3);
  auto c = sample_config(m.lattice(), m.dist(), 6, 0);
  CHECK(neumann_identity_check(c, 0.5, z, 0, m, psi).lhs <= 1e-12);
  for (int n = 1; n <= 3; ++n) CHECK(neumann_identity_check(c, 0.1, z, n, m, psi).lhs <= 1e-9);
  auto r0 = neumann_remainder_bound_check(c, 0.0, z, 2, m, psi);
  CHECK(r0.lhs == 0.0);
  for (int n = 0; n <= 3; ++n) CHECK(neumann_remainder_bound_check(c, 0.1, z, n, m, psi).pass);
}

TEST_CASE("estimators") {
  auto m = standard_model();
  auto psi = centered_packet(m.lattice());
  SpectralParameter z(1.0, 0.3);
  McOptions o;
  o.n_samples = 10000;
  o.seed = 17;
  cplx t0 = coefficient_T(m, 0, z, psi, psi).value;

  auto e0 = estimate_expectation(m, 0.0, z, psi, psi, o);
  CHECK(std::abs(e0.mean - t0) <= 1e-14 * std::abs(t0));
  CHECK(e0.std_error == doctest::Approx(0.0));

  auto p0 = estimate_partial_term(m, 0, z, psi, psi, o);
  CHECK(std::abs(p0.mean - t0) <= 1e-14 * std::abs(t0));
  auto p1 = estimate_partial_term(m, 1, z, psi, psi, o);
  CHECK(std::abs(p1.mean.real()) <= 3 * p1.std_error_re);
  CHECK(std::abs(p1.mean.imag()) <= 3 * p1.std_error_im);
  auto p2 = estimate_partial_term(m, 2, z, psi, psi, o);
  cplx t2 = coefficient_T(m, 2, z, psi, psi).value;
  CHECK(std::abs(p2.mean.real() - t2.real()) <= 3 * p2.std_error_re);
  CHECK(std::abs(p2.mean.imag() - t2.imag()) <= 3 * p2.std_error_im);

  McOptions half = o;
  half.n_samples = 5000;
  auto small = estimate_expectation(m, 0.3, z, psi, psi, half);
  auto big = estimate_expectation(m, 0.3, z, psi, psi, o);
  CHECK(big.std_error / small.std_error == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("estimators are independent of the worker count") {
  auto m = standard_model();
  auto psi = centered_packet(m.lattice());
  McOptions a, b;
  a.n_samples = b.n_samples = 300;
  a.seed = b.seed = 5;
  a.threads = 1;
  b.threads = 4;
  SpectralParameter z(1.0, 0.3);
  auto x = estimate_expectation(m, 0.1, z, psi, psi, a);
  auto y = estimate_expectation(m, 0.1, z, psi, psi, b);
  CHECK(x.mean == y.mean);
  CHECK(x.std_error == y.std_error);
  CHECK_THROWS(estimate_expectation(m, 0.1, z, psi, psi, McOptions{1, 1, 1}));
}

TEST_CASE("residual sweep at zero coupling") {
  auto m = standard_model();
  auto psi = centered_packet(m.lattice());
  McOptions o;
  o.n_samples = 200;
  auto rows = residual_sweep(m, {0.0, 0.1}, 2, SpectralParameter(1.0, 0.3), psi, psi, o);
  REQUIRE(rows.size() == 2);
  CHECK(std::abs(rows[0].residual) <= 1e-15);
  CHECK(std::abs(rows[0].residual_cv) <= 1e-15);
}

TEST_CASE("smoothed traces") {
  auto m = standard_model();
  Bump chi;
  const double eta = 0.2;
  PoissonConfig empty;
  double free = smoothed_trace_sample(empty, 0.0, chi, eta, m);
  double want = 0.0;
  for (double e : m.lattice().nu_table()) want += smoothed_bump(chi, eta, e);
  CHECK(free == doctest::Approx(want / m.lattice().volume()).epsilon(1e-14));
  for (double mu : {-1.0, 0.5, 1.0, 1.7, 4.0}) {
    double v = smoothed_bump(chi, eta, mu);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  auto c = sample_config(m.lattice(), m.dist(), 12, 0);
  double eig = smoothed_trace_sample(c, 0.3, chi, eta, m);
  double stone = smoothed_trace_stone(c, 0.3, chi, eta, m, 2000);
  CHECK(std::abs(eig - stone) <= 1e-8);
  CHECK_THROWS(validate_bump(Bump{0.2, 0.5}));
}
