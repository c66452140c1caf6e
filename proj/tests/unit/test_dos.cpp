#include <doctest.h>

#include <cmath>

#include "instance.hpp"
#include "wdexp/dos.hpp"

using namespace wdexp;
using wdexp::testing::standard_model;

TEST_CASE("zeroth order density coefficient") {
  auto m = standard_model();
  for (double E : {0.3, 1.0, 2.5})
    for (double eta : {0.05, 0.3, 1.0}) {
      double direct = 0.0;
      for (double e : m.lattice().nu_table()) direct += eta / ((e - E) * (e - E) + eta * eta);
      direct /= m.lattice().volume();
      CHECK(dos_D0_closed(m.lattice(), E, eta) == doctest::Approx(direct).epsilon(1e-13));
      CHECK(std::abs(dos_coefficient_D(m, 0, E, eta).value - direct) <= 1e-12 * direct);
    }
}

TEST_CASE("density coefficients are real and odd orders vanish") {
  auto m = standard_model();
  CHECK(dos_coefficient_D(m, 1, 1.0, 0.5).value == 0.0);
  for (int n = 0; n <= 2; ++n) {
    auto D = dos_coefficient_D(m, n, 1.0, 0.5);
    CHECK(std::abs(D.imag_residual) <= 1e-12 * std::max(1e-300, std::abs(D.value)));
  }
}

TEST_CASE("second order density coefficient equals the plane-wave average") {
  auto m = standard_model();
  const auto& lat = m.lattice();
  const double E = 1.0, eta = 0.5;
  std::vector<double> im(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    auto phi = plane_wave_state(lat, lat.coords(i));
    cplx up = coefficient_T(m, 2, SpectralParameter(E, eta, +1), phi, phi).value;
    cplx dn = coefficient_T(m, 2, SpectralParameter(E, eta, -1), phi, phi).value;
    im[i] = ((up - dn) / cplx(0.0, 2.0)).real();
  }
  double want = discrete_integral(im, lat);
  CHECK(std::abs(dos_coefficient_D(m, 2, E, eta).value - want) <= 1e-12 * std::abs(want));
}

TEST_CASE("coupling schedule and order cap") {
  CHECK(dos_eta(0.05, 0.5) == doctest::Approx(std::pow(0.05, 1.5)));
  CHECK_THROWS(dos_eta(0.05, 2.0));
  CHECK(dos_order_cap(1) == 3);
  CHECK(dos_order_cap(2) == 2);
  CHECK(dos_order_cap(3) == 2);
}

TEST_CASE("expansion at zero coupling equals the free trace") {
  auto m = standard_model();
  Bump chi;
  const double eta = 0.2;
  auto ex = dos_expansion(m, chi, 0.0, eta, 2);
  REQUIRE(ex.orders.size() == 3);
  CHECK(ex.orders[1].integral == 0.0);
  CHECK(ex.total == ex.orders[0].contribution);
  McOptions o;
  o.n_samples = 4;
  auto mc = dos_mc(m, chi, 0.0, eta, o);
  CHECK(mc.std_error == 0.0);
  CHECK(std::abs(mc.mean.real() - ex.total) <= 1e-8 * ex.total);
  auto capped = dos_expansion(m, chi, 0.0, eta, 9);
  CHECK(capped.max_order == 3);
  CHECK(capped.note.find("capped") != std::string::npos);
}

TEST_CASE("monte carlo density is positive and below the crude trace bound") {
  auto m = standard_model();
  Bump chi;
  McOptions o;
  o.n_samples = 50;
  o.seed = 3;
  auto mc = dos_mc(m, chi, 0.3, 0.2, o);
  CHECK(mc.mean.real() > 0.0);
  CHECK(mc.mean.real() <= double(m.lattice().size()) / m.lattice().volume());
}

TEST_CASE("trace class bound") {
  auto m = standard_model();
  auto f = [](double x) { return 1.0 / (1.0 + x * x); };
  PoissonConfig empty;
  auto r0 = trace_class_bound_check(empty, 0.0, m, f, 1.0);
  CHECK(r0.pass);
  double lhs = 0.0, rhs = 0.0;
  for (double e : m.lattice().nu_table()) {
    lhs += f(e);
    rhs += 2.0 / (e * e + 1.0);
  }
  CHECK(r0.lhs == doctest::Approx(lhs));
  CHECK(r0.rhs == doctest::Approx(rhs));
  auto c = sample_config(m.lattice(), m.dist(), 21, 0);
  auto r1 = trace_class_bound_check(c, 0.5, m, f, 1.0);
  auto r2 = trace_class_bound_check(c, 2.0, m, f, 1.0);
  CHECK(r1.pass);
  CHECK(r2.pass);
  CHECK(r2.lhs / r2.rhs <= r1.lhs / r1.rhs);
}

TEST_CASE("eta scaling of the free density") {
  auto m = standard_model();
  CHECK(dos_eta_scaling_check(m.lattice(), 1.0, {1e-3, 1e-2, 0.1, 1.0, 10.0}).pass);
}
