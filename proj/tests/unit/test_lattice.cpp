#include <doctest.h>

#include <cmath>
#include <vector>

#include "instance.hpp"
#include "wdexp/errors.hpp"
#include "wdexp/lattice.hpp"
#include "wdexp/profile.hpp"

using namespace wdexp;

namespace {

// Composite Simpson rule, used as an independent quadrature oracle.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  double h = (b - a) / n, s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("lattice sizes and spacing") {
  auto a = build_lattice(1, 2.0, 3);
  CHECK(a.size() == 7);
  CHECK(a.point(0)[0] == doctest::Approx(-1.5));
  CHECK(a.point(6)[0] == doctest::Approx(1.5));
  CHECK(a.point(1)[0] - a.point(0)[0] == doctest::Approx(0.5));
  CHECK(build_lattice(2, 1.0, 1).size() == 9);
  auto c = build_lattice(3, 4.0, 2);
  CHECK(c.size() == 125);
  CHECK(c.point(1)[0] - c.point(0)[0] == doctest::Approx(0.25));
}

TEST_CASE("first coordinate runs fastest and index inverts coords") {
  auto lat = build_lattice(2, 1.0, 1);
  CHECK(lat.coords(0) == IVec{-1, -1, 0});
  CHECK(lat.coords(1) == IVec{0, -1, 0});
  for (std::size_t i = 0; i < lat.size(); ++i) CHECK(lat.index(lat.coords(i)) == static_cast<long>(i));
  CHECK(lat.index(IVec{2, 0, 0}) == -1);
}

TEST_CASE("point budget") {
  CHECK_THROWS_AS(build_lattice(3, 1.0, 30, 1000), BudgetError);
}

TEST_CASE("kinetic energy") {
  CHECK(nu(RVec{1, 0, 0}, 3) == 0.5);
  CHECK(nu(RVec{0, 0, 0}, 3) == 0.0);
  CHECK(nu(RVec{-2, 2, 0}, 2) == 4.0);
  auto lat = build_lattice(2, 2.0, 3);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    IVec m = lat.coords(i), neg{-m[0], -m[1], 0};
    CHECK(lat.nu(i) >= 0.0);
    CHECK(lat.nu(i) == lat.nu(static_cast<std::size_t>(lat.index(neg))));
  }
}

TEST_CASE("discrete integral") {
  auto lat = build_lattice(1, 2.0, 3);
  std::vector<double> one(lat.size(), 1.0), delta(lat.size(), 0.0);
  delta[3] = 1.0;
  CHECK(discrete_integral(one, lat) == doctest::Approx(3.5));
  CHECK(discrete_integral(delta, lat) == 0.5);
  auto unit = build_lattice(1, 1.0, 1);
  CHECK(discrete_integral(unit.nu_table(), unit) == doctest::Approx(1.0));
}

TEST_CASE("spectral parameter") {
  SpectralParameter z(1.0, 0.3);
  CHECK(z.z() == cplx(1.0, 0.3));
  CHECK(z.conj().z() == cplx(1.0, -0.3));
  CHECK(z.dist_to_spectrum() == doctest::Approx(0.3));
  CHECK(SpectralParameter(-1.0, 0.5).dist_to_spectrum() == doctest::Approx(std::hypot(1.0, 0.5)));
  CHECK_THROWS(SpectralParameter(1.0, 0.0));
}

TEST_CASE("periodized gaussian transform") {
  Profile g(ProfileSpec{}, 1);
  CHECK(std::abs(profile_fourier_periodized(g, RVec{0, 0, 0}, 8.0) - 1.0) < 1e-12);
  for (double p : {0.25, 0.5, 1.0, 1.5})
    CHECK(profile_fourier_periodized(g, RVec{p, 0, 0}, 16.0).real() ==
          doctest::Approx(std::exp(-kPi * p * p)).epsilon(1e-12));
  // Small box: compare against direct quadrature of the restricted profile.
  for (double p : {0.0, 0.5, 1.5}) {
    double ref = simpson([&](double t) { return std::exp(-kPi * t * t) * std::cos(2 * kPi * p * t); }, -1.0, 1.0);
    CHECK(profile_fourier_periodized(g, RVec{p, 0, 0}, 2.0).real() == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("cosine bump transform matches quadrature") {
  ProfileSpec s;
  s.kind = ProfileKind::cosine_bump;
  s.radius = 0.4;
  s.amplitude = 2.0;
  Profile b(s, 1);
  for (double p : {0.0, 0.5, 1.0, 2.5}) {
    double ref = simpson(
        [&](double t) {
          double c = std::cos(kPi * t / (2 * 0.4));
          return 2.0 * c * c * std::cos(2 * kPi * p * t);
        },
        -0.4, 0.4);
    CHECK(profile_fourier_periodized(b, RVec{p, 0, 0}, 2.0).real() == doctest::Approx(ref).epsilon(1e-10));
  }
  CHECK_THROWS(b.require_box(0.6));
}

TEST_CASE("symmetric profile transform is real and even") {
  ProfileSpec s;
  s.width = 0.7;
  Profile g(s, 2);
  for (double a : {-1.0, -0.5, 0.5, 1.5})
    for (double b : {-0.5, 1.0}) {
      cplx v = profile_fourier_periodized(g, RVec{a, b, 0}, 2.0);
      cplx w = profile_fourier_periodized(g, RVec{-a, -b, 0}, 2.0);
      CHECK(v.imag() == 0.0);
      CHECK(std::abs(v - w) <= 1e-15);
    }
}

TEST_CASE("wavepacket parseval on the truncated lattice") {
  Wavepacket psi;
  psi.width = 1.0;
  auto lat = build_lattice(1, 2.0, 16);
  auto st = wavepacket_state(psi, lat);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    CHECK(std::abs(st.hat[i].imag()) <= 1e-15);
    // The box cut makes far coefficients ring; near the origin they stay positive.
    if (std::abs(lat.point(i)[0]) <= 1.0) CHECK(st.hat[i].real() > 0.0);
  }
  std::vector<double> sq(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) sq[i] = std::norm(st.hat[i]);
  double c2 = std::sqrt(2.0);
  double box = simpson([&](double x) { return c2 * std::exp(-2 * kPi * x * x); }, -1.0, 1.0);
  CHECK(wavepacket_box_norm2(psi, 1, 2.0) == doctest::Approx(box).epsilon(1e-12));
  CHECK(std::abs(discrete_integral(sq, lat) - box) <= wavepacket_parseval_tail_bound(psi, lat) + 1e-13);
}

TEST_CASE("moving wavepacket peaks near its wavevector") {
  Wavepacket psi;
  psi.wavevector = {1.0, 0, 0};
  psi.width = 0.5;
  auto lat = build_lattice(1, 2.0, 8);
  auto st = wavepacket_state(psi, lat);
  std::size_t best = 0;
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (std::abs(st.hat[i]) > std::abs(st.hat[best])) best = i;
  CHECK(lat.point(best)[0] == doctest::Approx(1.0));
}

TEST_CASE("plane wave state is a unit delta") {
  auto lat = build_lattice(1, 2.0, 4);
  auto st = plane_wave_state(lat, IVec{1, 0, 0});
  std::vector<double> sq(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) sq[i] = std::norm(st.hat[i]);
  CHECK(discrete_integral(sq, lat) == doctest::Approx(1.0));
}

TEST_CASE("fourier decay check") {
  Profile g(ProfileSpec{}, 1);
  auto lat = build_lattice(1, 2.0, 8);
  auto r = fourier_decay_check(g, lat);
  CHECK(r.pass);
  CHECK(r.margin > 0.0);
}
