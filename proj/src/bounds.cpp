#include "wdexp/bounds.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wdexp/dos.hpp"
#include "wdexp/rng.hpp"

namespace wdexp {

namespace {

void check_dim(int d) {
  if (d < 1 || d > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
}

double integrate_pieces(const std::function<double(double)>& f, std::vector<double> cuts, double rel = 1e-10,
                        double abs = 1e-15) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s.add(integrate(f, cuts[i], cuts[i + 1], rel, abs).value);
  return s.value();
}

// Periodized profile transform on a lattice reaching momentum `reach` in each coordinate.
ProfileTable profile_table(const ProfileSpec& spec, int d, double L, double reach) {
  const int Kh = std::max(1, static_cast<int>(std::ceil(0.5 * reach * L)));
  return ProfileTable(Profile(spec, d), MomentumLattice(d, L, Kh, std::size_t{1} << 24));
}

double reach_for(const ProfileSpec& spec) { return spec.kind == ProfileKind::gaussian ? 6.0 / spec.width : 8.0; }

}  // namespace

double sphere_area(int d) {
  check_dim(d);
  return d == 1 ? 2.0 : (d == 2 ? 2.0 * kPi : 4.0 * kPi);
}

double const_C1(double E, int d) {
  if (!(E > 0.0)) throw std::invalid_argument("C1 needs E > 0");
  return std::sqrt(2.0) * (std::pow(E, -0.5) * std::pow(E + 1.0, 0.5 * (d - 1)) + std::pow(E, 0.5 * (d - 2))) *
         sphere_area(d);
}

double window_integral(double E, int d, double eta) {
  check_dim(d);
  if (!(E >= 0.0) || !(eta > 0.0)) throw std::invalid_argument("window integral needs E >= 0 and eta > 0");
  const double a = std::sqrt(2.0 * E + 1.0);
  const double h = eta / std::sqrt(2.0);
  const double rE = std::sqrt(E);
  auto g = [&](double r) { return 1.0 / std::hypot((r - rE) * (r + rE), h); };
  std::vector<double> cuts{0.0, rE, std::sqrt(std::max(0.0, E - h)), std::min(a, std::sqrt(E + h)), a};
  // Geometric cuts around the resonance shell keep each piece's log growth mild.
  for (double s = 4.0 * h / std::max(2.0 * rE, h); s < a; s *= 4.0) {
    if (rE - s > 0.0) cuts.push_back(rE - s);
    if (rE + s < a) cuts.push_back(rE + s);
  }
  // Pieces far from the shell are tiny; an absolute floor keeps them from
  // chasing relative accuracy below the total's.
  const double floor = 1e-13;
  if (d == 1) return 2.0 * integrate_pieces(g, cuts, 1e-10, floor);
  const double top = a * std::sqrt(2.0);
  cuts.push_back(top);
  if (d == 2) {
    // Beyond r = a the arc length has a square-root edge; r = a + t^2 removes it.
    auto outer = [&](double t) {
      double r = a + t * t;
      return 2.0 * t * r * (2.0 * kPi - 8.0 * std::acos(std::min(1.0, a / r))) * g(r);
    };
    cuts.pop_back();
    return integrate_pieces([&](double r) { return 2.0 * kPi * r * g(r); }, cuts, 1e-10, floor) +
           integrate(outer, 0.0, std::sqrt(top - a), 1e-10, 1e-15).value;
  }
  auto f = [&](double r) { return (4.0 * kPi * r * r - 12.0 * kPi * r * std::max(0.0, r - a)) * g(r); };
  double ball = integrate_pieces(f, cuts, 1e-10, floor);
  // Corners of the cube beyond radius a sqrt 2, where the integrand is smooth.
  auto inner = [&](double q1, double q2) {
    double lo = std::sqrt(std::max(0.0, 2.0 * a * a - q1 * q1 - q2 * q2));
    if (lo >= a) return 0.0;
    return integrate([&](double q3) { return g(std::sqrt(q1 * q1 + q2 * q2 + q3 * q3)); }, lo, a, 1e-12, 1e-15)
        .value;
  };
  auto mid = [&](double q1) {
    double lo = std::sqrt(std::max(0.0, a * a - q1 * q1));
    return integrate([&](double q2) { return inner(q1, q2); }, lo, a, 1e-10, 1e-14).value;
  };
  double corners = 8.0 * integrate(mid, 0.0, a, 1e-8, 1e-12).value;
  return ball + corners;
}

LatticeNorms lattice_norms(const ProfileTable& table) { return {table.sup_bound(), table.l1_full()}; }

double const_C0(double E, int d, double eta, const LatticeNorms& f) {
  return f.sup * window_integral(E, d, eta) + f.l1 / (E + 1.0);
}

double const_C(double E, int d, double eta, const LatticeNorms& f) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  return 2.0 * f.sup * (const_C1(2.0 * E, d) * std::log(1.0 / eta + 1.0) +
                        std::pow(2.0, d) * std::sqrt(2.0) * std::pow(4.0 * E + 1.0, 0.5 * d)) +
         2.0 * f.l1;
}

BoundReport check_C0_bound(double E, int d, double L, double eta, const ProfileSpec& f) {
  ProfileTable tab = profile_table(f, d, L, reach_for(f));
  const auto& lat = tab.diff_lattice();
  CompensatedSum s;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    double q2 = 2.0 * lat.nu(i);
    s.add(std::abs(tab.at_index(i)) / std::hypot(q2 - E, eta));
  }
  const double edge = lat.cutoff() / L;
  const double tail = tab.l1_outside(lat.cutoff()) / std::max(eta, edge * edge - E);
  const double lhs = s.value() / lat.volume() + tail;
  return make_report("C0_bound", {{"E", E}, {"d", double(d)}, {"L", L}, {"eta", eta}}, lhs,
                     const_C0(E, d, eta, lattice_norms(tab)));
}

BoundReport check_resolvent_sum_bound(double E, int d, double L, double eta, const ProfileSpec& f, int sign) {
  if (!(E > 0.0) || !(eta > 0.0)) throw std::invalid_argument("resolvent sum bound needs E > 0 and eta > 0");
  ProfileTable tab = profile_table(f, d, L, reach_for(f));
  const auto& lat = tab.diff_lattice();
  CompensatedComplexSum s;
  const cplx shift(-E, sign >= 0 ? eta : -eta);
  for (std::size_t i = 0; i < lat.size(); ++i) s.add(tab.at_index(i) / (lat.nu(i) + shift));
  const double edge = lat.cutoff() / L;
  const double tail = tab.l1_outside(lat.cutoff()) / std::max(eta, 0.5 * edge * edge - E);
  const double lhs = std::abs(s.value()) / lat.volume() + tail;
  return make_report("resolvent_sum_bound",
                     {{"E", E}, {"d", double(d)}, {"L", L}, {"eta", eta}, {"sign", double(sign)}}, lhs,
                     const_C(E, d, eta, lattice_norms(tab)));
}

BoundReport check_log_integral_bound(double E, int d, double eta, const ProfileSpec& f, int sign) {
  check_dim(d);
  if (f.kind != ProfileKind::gaussian) throw std::invalid_argument("log integral check needs a Gaussian profile");
  if (!(E > 0.0) || !(eta > 0.0)) throw std::invalid_argument("log integral bound needs E > 0 and eta > 0");
  const double s = f.width;
  const double peak = std::abs(f.amplitude) * std::pow(s, d);
  auto fr = [&](double r) { return peak * std::exp(-kPi * s * s * r * r) * std::pow(r, d - 1); };
  const double rE = std::sqrt(E);
  const double rmax = std::max(2.0 * std::sqrt(E + 1.0), 7.0 / s) + 10.0 / s;
  std::vector<double> cuts{0.0, rE, std::sqrt(std::max(0.0, E - eta)), std::sqrt(E + eta), rmax};
  auto re = [&](double r) {
    double x = (r - rE) * (r + rE);
    return fr(r) * x / (x * x + eta * eta);
  };
  auto im = [&](double r) {
    double x = (r - rE) * (r + rE);
    return fr(r) * eta / (x * x + eta * eta);
  };
  const double S = sphere_area(d);
  const double lhs = S * std::hypot(integrate_pieces(re, cuts), integrate_pieces(im, cuts));
  const double rhs = const_C1(E, d) * peak * std::log(1.0 / eta + 1.0) + std::sqrt(2.0) * std::abs(f.amplitude);
  return make_report("log_integral_bound",
                     {{"E", E}, {"d", double(d)}, {"eta", eta}, {"sign", double(sign)}}, lhs, rhs);
}

double bracket_weighted_sup(const std::function<double(double)>& f, double window) {
  if (!(window > 0.0)) throw std::invalid_argument("window must be positive");
  const int N = 20000;
  auto w = [&](double x) { return (1.0 + x * x) * std::abs(f(x)); };
  double best = -1.0, xb = 0.0;
  for (int i = 0; i <= N; ++i) {
    double x = -window + 2.0 * window * i / N;
    double v = w(x);
    if (v > best) {
      best = v;
      xb = x;
    }
  }
  const double h = 2.0 * window / N;
  auto r = boost::math::tools::brent_find_minima([&](double x) { return -w(x); }, xb - h, xb + h, 50);
  return std::max(best, -r.second);
}

BoundReport check_arctan_bound(const std::function<double(double)>& f, double a, double b, double window,
                               const char* label) {
  if (!(a <= b)) throw std::invalid_argument("interval must satisfy a <= b");
  std::vector<double> cuts{a, b};
  if (a < 0.0 && b > 0.0) cuts.push_back(0.0);
  const double lhs = integrate_pieces([&](double x) { return std::abs(f(x)); }, cuts, 1e-10);
  const double rhs = kPi * bracket_weighted_sup(f, std::max({window, std::abs(a), std::abs(b)}));
  return make_report("arctan_bound", {{"a", a}, {"b", b}}, lhs, rhs, label);
}

double weighted_resolvent_sum(double E, double tau, double eta, int d, double L) {
  check_dim(d);
  if (!(tau >= 0.0 && tau < 4.0 - d)) throw std::invalid_argument("tau must lie in [0, 4 - d)");
  if (!(eta > 0.0) || !(L >= 1.0)) throw std::invalid_argument("need eta > 0 and L >= 1");
  const double amax = std::max(d == 1 ? 60.0 : (d == 2 ? 16.0 : 5.0), std::sqrt(4.0 * std::max(E, 0.0) + 4.0) + 1.0);
  const int K = static_cast<int>(std::ceil(amax * L));
  CompensatedSum s;
  IVec m{0, 0, 0};
  for (int j = 0; j < d; ++j) m[j] = -K;
  for (;;) {
    double a2 = 0.0;
    for (int j = 0; j < d; ++j) a2 += double(m[j]) * m[j] / (L * L);
    double x = a2 - E;
    s.add(std::pow(1.0 + a2, 0.5 * tau) / (x * x + eta * eta));
    int j = 0;
    while (j < d && ++m[j] > K) m[j++] = -K;
    if (j == d) break;
  }
  const double p = 4.0 - d - tau;
  const double tail = 8.0 * d * std::pow(3.0, d - 1) * std::pow(L, 4.0 - tau - d) * std::pow(double(K), -p) / p;
  return s.value() / std::pow(L, d) + tail;
}

BoundReport check_weighted_resolvent_sum(double E, double tau, int d, const std::vector<double>& etas,
                                         const std::vector<double>& Ls) {
  if (etas.empty() || Ls.empty()) throw std::invalid_argument("eta and L grids must be non-empty");
  std::vector<std::vector<double>> q(Ls.size(), std::vector<double>(etas.size()));
  for (std::size_t l = 0; l < Ls.size(); ++l)
    for (std::size_t e = 0; e < etas.size(); ++e)
      q[l][e] = weighted_resolvent_sum(E, tau, etas[e], d, Ls[l]) / (1.0 + 1.0 / (etas[e] * etas[e]));
  double worst = 1.0;
  for (std::size_t l = 0; l < Ls.size(); ++l) {
    auto [lo, hi] = std::minmax_element(q[l].begin(), q[l].end());
    worst = std::max(worst, *hi / *lo);
  }
  for (std::size_t e = 0; e < etas.size(); ++e) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t l = 0; l < Ls.size(); ++l) {
      lo = std::min(lo, q[l][e]);
      hi = std::max(hi, q[l][e]);
    }
    worst = std::max(worst, hi / lo);
  }
  return make_report("weighted_resolvent_sum",
                     {{"E", E}, {"tau", tau}, {"d", double(d)}, {"eta_min", *std::min_element(etas.begin(), etas.end())},
                      {"eta_max", *std::max_element(etas.begin(), etas.end())}},
                     worst, 10.0, "max/min ratio of sum / (1 + eta^-2) over the eta and L grids");
}

double measured_cB(const ProfileSpec& profile, int d) {
  double best = -1.0;
  for (double L : {1.0, 2.0, 4.0, 8.0}) {
    Profile B(profile, d);
    try {
      B.require_box(L);
    } catch (const std::invalid_argument&) {
      continue;
    }
    best = std::max(best, ProfileTable(B, MomentumLattice(d, L, 1)).l1_full());
  }
  if (best < 0.0) throw std::invalid_argument("profile does not fit any test box");
  return best;
}

MainErrorBound main_error_bound_rhs(int n, int d, double E, double eta, double lambda, const ProfileSpec& profile,
                                    const WeightDistribution& dist, double psi1_norm, double psi2_norm) {
  if (n < 0 || n > 4) throw std::invalid_argument("main bound order must be in 0..4");
  if (dist.moment(1) != 0.0) throw std::invalid_argument("main bound needs a vanishing first moment");
  if (!(E > 0.0) || !(eta > 0.0) || !(lambda >= 0.0)) throw std::invalid_argument("need E > 0, eta > 0, lambda >= 0");
  MainErrorBound r;
  r.n = n;
  const double B1 = Profile(profile, d).l1_norm();
  r.c_B = measured_cB(profile, d);
  r.C_tilde = std::max(2.0 * B1 * const_C1(2.0 * E, d),
                       2.0 * B1 * std::pow(2.0, d) * std::sqrt(2.0) * std::pow(4.0 * E + 1.0, 0.5 * d) + 2.0 * r.c_B);
  CompensatedSum k2;
  if (n == 0) {
    k2.add(1.0);
  } else {
    for (const auto& A : enumerate_partitions(2 * n)) {
      const double w = std::abs(moment_weight(A, dist));
      if (w == 0.0) continue;
      const int blocks = static_cast<int>(A.block_count());
      k2.add(std::pow(B1, blocks) * w * std::pow(r.C_tilde, 2 * n - blocks));
    }
  }
  r.K = std::sqrt(k2.value());
  r.rhs = r.K * std::pow(lambda * lambda / eta, 0.5 * n) * std::pow(1.0 + std::log(1.0 / eta + 1.0), n) *
          std::pow(eta, -1.5) * psi1_norm * psi2_norm;
  return r;
}

double sup_weight_value(const RVec& q, const RVec& v1, const RVec& v2, double E, double eps, double eta, int sigma,
                        int d) {
  double w = 1.0, a2 = 0.0, b2 = 0.0;
  for (int j = 0; j < d; ++j) {
    w *= std::pow(bracket(v1[j]) * bracket(v2[j]), -1.0 + eps);
    double a = q[j] + v1[j], b = q[j] + sigma * v1[j] + v2[j];
    a2 += a * a;
    b2 += b * b;
  }
  return w / (std::hypot(0.5 * a2 - E, eta) * std::hypot(0.5 * b2 - E, eta));
}

namespace {

// Nelder-Mead minimization; returns the best value found.
double nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0, double step,
                   int max_iter) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> s(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) s[i + 1][i] += step;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(s[i]);
  std::vector<std::size_t> idx(n + 1);
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = idx[0], worst = idx[n], second = idx[n - 1];
    if (std::abs(fv[worst] - fv[best]) <= 1e-14 * (1.0 + std::abs(fv[best]))) break;
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) c[k] += s[i][k] / n;
    auto along = [&](double t) {
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = c[k] + t * (s[worst][k] - c[k]);
      return p;
    };
    auto xr = along(-1.0);
    double fr = f(xr);
    if (fr < fv[best]) {
      auto xe = along(-2.0);
      double fe = f(xe);
      if (fe < fr) {
        s[worst] = xe;
        fv[worst] = fe;
      } else {
        s[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      s[worst] = xr;
      fv[worst] = fr;
    } else {
      auto xc = along(fr < fv[worst] ? -0.5 : 0.5);
      double fc = f(xc);
      if (fc < std::min(fr, fv[worst])) {
        s[worst] = xc;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < n; ++k) s[i][k] = s[best][k] + 0.5 * (s[i][k] - s[best][k]);
          fv[i] = f(s[i]);
        }
      }
    }
  }
  return *std::min_element(fv.begin(), fv.end());
}

}  // namespace

double sup_weight(const RVec& q, double E, double eps, double eta, int sigma, int d) {
  check_dim(d);
  if (!(E > 0.0) || !(eta > 0.0) || !(eps > 0.0 && eps <= 1.0) || (sigma != 0 && sigma != 1))
    throw std::invalid_argument("sup weight needs E > 0, eta > 0, eps in (0, 1], sigma in {0, 1}");
  double qn = 0.0;
  for (int j = 0; j < d; ++j) qn += q[j] * q[j];
  qn = std::sqrt(qn);
  RVec dir{1.0, 0.0, 0.0};
  if (qn > 0.0)
    for (int j = 0; j < d; ++j) dir[j] = q[j] / qn;
  const double rho = std::sqrt(2.0 * E);
  auto objective = [&](const std::vector<double>& x) {
    RVec v1{0.0, 0.0, 0.0}, v2{0.0, 0.0, 0.0};
    for (int j = 0; j < d; ++j) {
      v1[j] = x[j];
      v2[j] = x[d + j];
    }
    return -std::log(sup_weight_value(q, v1, v2, E, eps, eta, sigma, d));
  };
  // Starts at the origin and on the resonance shells |q + v| = sqrt(2E).
  std::vector<RVec> first;
  for (double t : {0.0, -1.0}) {
    RVec v{0.0, 0.0, 0.0};
    for (int j = 0; j < d; ++j) v[j] = t * q[j];
    first.push_back(v);
  }
  for (double sgn : {1.0, -1.0}) {
    RVec v{0.0, 0.0, 0.0};
    for (int j = 0; j < d; ++j) v[j] = -q[j] + sgn * rho * dir[j];
    first.push_back(v);
  }
  std::vector<std::vector<double>> starts;
  for (const auto& v1 : first) {
    RVec base{0.0, 0.0, 0.0};
    for (int j = 0; j < d; ++j) base[j] = q[j] + sigma * v1[j];
    for (double t : {0.0, -1.0, 2.0, 3.0}) {
      std::vector<double> x(2 * d);
      double bn = 0.0;
      for (int j = 0; j < d; ++j) bn += base[j] * base[j];
      bn = std::sqrt(bn);
      for (int j = 0; j < d; ++j) {
        x[j] = v1[j];
        if (t == 0.0) x[d + j] = 0.0;
        else if (t == -1.0) x[d + j] = -base[j];
        else {
          double u = bn > 0.0 ? base[j] / bn : (j == 0 ? 1.0 : 0.0);
          x[d + j] = -base[j] + (t == 2.0 ? rho : -rho) * u;
        }
      }
      starts.push_back(x);
    }
  }
  CounterRng rng(0x5eedULL, static_cast<std::uint64_t>(std::llround(qn * 1000.0)));
  const double box = qn + 4.0;
  for (int k = 0; k < 16; ++k) {
    std::vector<double> x(2 * d);
    for (auto& xi : x) xi = -box + 2.0 * box * rng.uniform();
    starts.push_back(x);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : starts) best = std::min(best, nelder_mead(objective, x, 0.05 + 0.05 * qn, 4000));
  return std::exp(-best);
}

BoundReport check_sup_weight_grid(double E, double eps, double eta, int sigma, int d,
                                  const std::vector<RVec>& q_grid) {
  if (q_grid.empty()) throw std::invalid_argument("q grid must be non-empty");
  std::vector<double> vals;
  for (const auto& q : q_grid) {
    double w = 1.0;
    for (int j = 0; j < d; ++j) w *= std::pow(bracket(q[j]), 1.0 - eps);
    vals.push_back(sup_weight(q, E, eps, eta, sigma, d) * w / (1.0 + 1.0 / (eta * eta)));
  }
  const double top = *std::max_element(vals.begin(), vals.end());
  const double last = vals.back();
  return make_report("sup_weight_grid",
                     {{"E", E}, {"eps", eps}, {"eta", eta}, {"sigma", double(sigma)}, {"d", double(d)},
                      {"first", vals.front()}, {"last", last}},
                     top, 10.0 * vals.front(), "largest normalized sup against 10x the value at the first q");
}

std::vector<BoundReport> default_bound_grid(int threads) {
  std::vector<std::function<BoundReport()>> tasks;
  const ProfileSpec gauss{};
  tasks.push_back([] {
    return make_report("const_C1_spot", {{"E", 1.0}, {"d", 1.0}}, std::abs(const_C1(1.0, 1) - 4.0 * std::sqrt(2.0)),
                       1e-12, "C1(1,1) against 4 sqrt 2");
  });
  for (int d : {1, 2})
    for (double E : {0.5, 1.0, 2.0})
      for (double eta : {1e-3, 1e-2, 0.1, 1.0})
        for (double L : {1.0, 2.0, 4.0, 8.0})
          tasks.push_back([=] { return check_resolvent_sum_bound(E, d, L, eta, gauss); });
  for (int d : {1, 2, 3})
    for (double E : {0.5, 1.0, 2.0})
      for (double eta : {1e-3, 1e-2, 0.1, 1.0})
        for (int sign : {1, -1}) tasks.push_back([=] { return check_log_integral_bound(E, d, eta, gauss, sign); });
  tasks.push_back([] {
    return check_arctan_bound([](double x) { return std::exp(-kPi * x * x); }, -10.0, 10.0, 50.0, "gaussian");
  });
  tasks.push_back([] {
    return check_arctan_bound([](double x) { return 1.0 / (1.0 + x * x); }, -1e3, 1e3, 50.0, "bracket^-2");
  });
  tasks.push_back([] {
    return check_arctan_bound([](double x) { return std::abs(x) < 0.5 ? std::pow(std::cos(kPi * x), 2) : 0.0; },
                              -0.5, 0.5, 50.0, "cosine bump");
  });
  tasks.push_back([] {
    return check_arctan_bound([](double x) { return std::exp(-kPi * x * x); }, 0.0, 0.1, 50.0, "narrow interval");
  });
  struct DecayCase {
    ProfileSpec spec;
    int d;
    double L;
    int K;
  };
  ProfileSpec bump{ProfileKind::cosine_bump, 1.0, 1.0, 0.5};
  ProfileSpec narrow{ProfileKind::gaussian, 1.0, 0.5, 0.5};
  for (DecayCase c : {DecayCase{gauss, 1, 2.0, 8}, DecayCase{gauss, 2, 2.0, 4}, DecayCase{bump, 1, 2.0, 8},
                      DecayCase{narrow, 1, 4.0, 16}})
    tasks.push_back([=] { return fourier_decay_check(Profile(c.spec, c.d), MomentumLattice(c.d, c.L, c.K)); });
  for (double lambda : {0.0, 0.5, 2.0})
    for (std::uint64_t seed : {1u, 2u, 3u})
      tasks.push_back([=] {
        ExpansionModel model(MomentumLattice(1, 2.0, 8), Profile(gauss, 1), WeightDistribution::rademacher());
        PoissonConfig c = sample_config(model.lattice(), model.dist(), seed, 0);
        auto r = trace_class_bound_check(c, lambda, model, [](double x) { return 1.0 / (1.0 + x * x); }, 1.0);
        r.parameters.emplace_back("seed", double(seed));
        return r;
      });
  tasks.push_back([] {
    ExpansionModel model(MomentumLattice(2, 2.0, 4), Profile(ProfileSpec{}, 2), WeightDistribution::centered_uniform());
    PoissonConfig c = sample_config(model.lattice(), model.dist(), 9, 0);
    return trace_class_bound_check(c, 0.5, model, [](double x) { return std::exp(-x * x); }, 1.0);
  });
  const std::vector<double> etas{1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0};
  const std::vector<double> Ls{1.0, 2.0, 4.0, 8.0};
  tasks.push_back([=] { return check_weighted_resolvent_sum(1.0, 0.0, 1, etas, Ls); });
  tasks.push_back([gauss] { return check_C0_bound(1.0, 1, 2.0, 0.5, gauss); });
  for (int sigma : {1, 0})
    tasks.push_back([sigma] {
      std::vector<RVec> q;
      for (double x : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) q.push_back(RVec{x, 0.0, 0.0});
      return check_sup_weight_grid(1.0 / 32.0, 0.5, 0.5, sigma, 1, q);
    });
  std::vector<BoundReport> out(tasks.size());
  parallel_for(tasks.size(), threads > 0 ? threads : default_threads(), [&](std::size_t i) { out[i] = tasks[i](); });
  return out;
}

}  // namespace wdexp
