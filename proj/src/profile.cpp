#include "wdexp/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wdexp/errors.hpp"

namespace wdexp {

namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Integral of f(t) e^{-2 pi i k t} over [a, b] by composite Gauss-Legendre,
// doubling the panel count until two successive values agree to tol.
cplx fourier_segment(const std::function<cplx(double)>& f, double k, double a, double b, double tol,
                     double* err) {
  auto integrand = [&](double t) { return f(t) * std::polar(1.0, -2.0 * kPi * k * t); };
  int panels = std::max(2, static_cast<int>(std::ceil(std::abs(k) * (b - a))) + 2);
  cplx coarse = gauss_legendre(integrand, a, b, panels);
  for (int iter = 0; iter < 12; ++iter) {
    panels *= 2;
    cplx fine = gauss_legendre(integrand, a, b, panels);
    double diff = std::abs(fine - coarse);
    if (diff <= tol) {
      if (err) *err = diff;
      return fine;
    }
    coarse = fine;
  }
  throw ToleranceError("periodized Fourier integral did not reach tolerance", std::abs(coarse));
}

void check_tol(double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

}  // namespace

Profile::Profile(ProfileSpec spec, int d) : spec_(spec), d_(d) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("profile dimension must be 1, 2 or 3");
  if (!std::isfinite(spec.amplitude)) throw std::invalid_argument("profile amplitude must be finite");
  if (spec.kind == ProfileKind::gaussian && !(spec.width > 0.0))
    throw std::invalid_argument("gaussian profile width must be positive");
  if (spec.kind == ProfileKind::cosine_bump && !(spec.radius > 0.0))
    throw std::invalid_argument("cosine bump radius must be positive");
}

void Profile::require_box(double L) const {
  if (spec_.kind == ProfileKind::cosine_bump && !(spec_.radius < 0.5 * L))
    throw std::invalid_argument("cosine bump support radius must be smaller than L/2");
}

double Profile::factor(double t, int derivative) const {
  if (spec_.kind == ProfileKind::gaussian) {
    const double beta = kPi / (spec_.width * spec_.width);
    const double g = std::exp(-beta * t * t);
    switch (derivative) {
      case 0: return g;
      case 1: return -2.0 * beta * t * g;
      case 2: return (4.0 * beta * beta * t * t - 2.0 * beta) * g;
      default: throw std::invalid_argument("derivative order must be 0, 1 or 2");
    }
  }
  const double r = spec_.radius;
  if (std::abs(t) >= r) {
    if (derivative < 0 || derivative > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");
    return 0.0;
  }
  const double w = kPi / r;
  switch (derivative) {
    case 0: return 0.5 * (1.0 + std::cos(w * t));
    case 1: return -0.5 * w * std::sin(w * t);
    case 2: return -0.5 * w * w * std::cos(w * t);
    default: throw std::invalid_argument("derivative order must be 0, 1 or 2");
  }
}

double Profile::value(const RVec& x) const {
  double v = spec_.amplitude;
  for (int j = 0; j < d_; ++j) v *= factor(x[j]);
  return v;
}

double Profile::derivative(const RVec& x, const IVec& alpha) const {
  double v = spec_.amplitude;
  for (int j = 0; j < d_; ++j) v *= factor(x[j], alpha[j]);
  return v;
}

double Profile::l1_norm() const {
  double one = spec_.kind == ProfileKind::gaussian ? spec_.width : spec_.radius;
  return std::abs(spec_.amplitude) * std::pow(one, d_);
}

double Profile::factor_box_l1(double L) const {
  if (spec_.kind == ProfileKind::cosine_bump) {
    if (spec_.radius < 0.5 * L) return spec_.radius;
    return integrate([&](double t) { return factor(t); }, -0.5 * L, 0.5 * L).value;
  }
  return spec_.width * std::erf(std::sqrt(kPi) * 0.5 * L / spec_.width);
}

double Profile::factor_fourier_full(double k) const {
  if (spec_.kind == ProfileKind::gaussian) {
    const double s = spec_.width;
    return s * std::exp(-kPi * s * s * k * k);
  }
  const double r = spec_.radius;
  const double x = 2.0 * kPi * k * r;
  return r * sinc(x) + 0.5 * r * (sinc(kPi + x) + sinc(kPi - x));
}

double Profile::factor_fourier_periodized(double k, double L, double tol, double* err) const {
  check_tol(tol);
  require_box(L);
  if (spec_.kind == ProfileKind::cosine_bump) {
    if (err) *err = 0.0;
    return factor_fourier_full(k);
  }
  const double s = spec_.width;
  const double tail = s * std::erfc(std::sqrt(kPi) * 0.5 * L / s);
  if (tail <= tol) {
    if (err) *err = tail;
    return factor_fourier_full(k);
  }
  auto g = [&](double t) { return cplx(factor(t), 0.0); };
  return fourier_segment(g, k, -0.5 * L, 0.5 * L, tol, err).real();
}

double Profile::fourier_full(const RVec& k) const {
  double v = spec_.amplitude;
  for (int j = 0; j < d_; ++j) v *= factor_fourier_full(k[j]);
  return v;
}

double Profile::fourier_periodized(const RVec& p, double L, double tol) const {
  // Per-factor tolerance so the product error stays below tol.
  double scale = std::max(1.0, std::abs(spec_.amplitude) * std::pow(std::max(1.0, factor_box_l1(L)), d_));
  double ftol = tol / (d_ * scale);
  double v = spec_.amplitude;
  for (int j = 0; j < d_; ++j) v *= factor_fourier_periodized(p[j], L, ftol);
  return v;
}

double Profile::factor_decay_constant(double L) const {
  double boundary = 2.0 * std::abs(factor(0.5 * L, 1));
  double curvature;
  if (spec_.kind == ProfileKind::cosine_bump) {
    curvature = 2.0 * kPi / spec_.radius;
  } else {
    const double beta = kPi / (spec_.width * spec_.width);
    const double t0 = 1.0 / std::sqrt(2.0 * beta);
    auto absg2 = [&](double t) { return std::abs(factor(t, 2)); };
    const double h = 0.5 * L;
    if (t0 < h)
      curvature = 2.0 * (integrate(absg2, 0.0, t0).value + integrate(absg2, t0, h).value);
    else
      curvature = 2.0 * integrate(absg2, 0.0, h).value;
  }
  return (boundary + curvature) / (4.0 * kPi * kPi);
}

cplx profile_fourier_periodized(const Profile& profile, const RVec& p, double L, double tol) {
  return {profile.fourier_periodized(p, L, tol), 0.0};
}

double wavepacket_normalization(const Wavepacket& psi, int d) {
  if (!(psi.width > 0.0)) throw std::invalid_argument("wavepacket width must be positive");
  return std::pow(2.0 * psi.width, 0.25 * d);
}

cplx wavepacket_value(const Wavepacket& psi, int d, const RVec& x) {
  double r2 = 0.0, phase = 0.0;
  for (int j = 0; j < d; ++j) {
    r2 += (x[j] - psi.center[j]) * (x[j] - psi.center[j]);
    phase += x[j] * psi.wavevector[j];
  }
  return wavepacket_normalization(psi, d) * std::exp(-kPi * psi.width * r2) * std::polar(1.0, 2.0 * kPi * phase);
}

namespace {

// One-dimensional factor of the wavepacket transform.
cplx packet_factor_fourier(double s, double x0, double a, double k, double L, double tol) {
  const double n1 = std::pow(2.0 * s, 0.25);
  const double rs = std::sqrt(kPi * s);
  const double tail = n1 / (2.0 * std::sqrt(s)) *
                      (std::erfc(rs * (0.5 * L - x0)) + std::erfc(rs * (0.5 * L + x0)));
  if (tail <= tol) {
    const double q = k - a;
    return n1 / std::sqrt(s) * std::exp(-kPi * q * q / s) * std::polar(1.0, -2.0 * kPi * q * x0);
  }
  auto h = [&](double t) { return n1 * std::exp(-kPi * s * (t - x0) * (t - x0)) * std::polar(1.0, 2.0 * kPi * a * t); };
  return fourier_segment(h, k, -0.5 * L, 0.5 * L, tol, nullptr);
}

double packet_factor_box_norm2(double s, double x0, double L) {
  const double r = std::sqrt(2.0 * kPi * s);
  return 0.5 * (std::erf(r * (0.5 * L - x0)) + std::erf(r * (0.5 * L + x0)));
}

}  // namespace

cplx wavepacket_fourier_periodized(const Wavepacket& psi, int d, const RVec& p, double L, double tol) {
  check_tol(tol);
  wavepacket_normalization(psi, d);
  cplx v = 1.0;
  for (int j = 0; j < d; ++j)
    v *= packet_factor_fourier(psi.width, psi.center[j], psi.wavevector[j], p[j], L, tol / d);
  return v;
}

double wavepacket_box_norm2(const Wavepacket& psi, int d, double L) {
  wavepacket_normalization(psi, d);
  double v = 1.0;
  for (int j = 0; j < d; ++j) v *= packet_factor_box_norm2(psi.width, psi.center[j], L);
  return v;
}

double wavepacket_parseval_tail_bound(const Wavepacket& psi, const MomentumLattice& lattice, double tol) {
  const int d = lattice.dim();
  const double L = lattice.side();
  const int K = lattice.cutoff();
  const double s = psi.width;
  const double n1 = std::pow(2.0 * s, 0.25);
  double inside = 1.0, total = 1.0;
  for (int j = 0; j < d; ++j) {
    const double x0 = psi.center[j], a = psi.wavevector[j];
    auto absh = [&](double t) { return n1 * std::exp(-kPi * s * (t - x0) * (t - x0)); };
    auto absdh = [&](double t) {
      return absh(t) * 2.0 * kPi * std::sqrt(s * s * (t - x0) * (t - x0) + a * a);
    };
    double c1 = (absh(0.5 * L) + absh(-0.5 * L) + integrate(absdh, -0.5 * L, 0.5 * L).value) / (2.0 * kPi);
    CompensatedSum in;
    for (int m = -K; m <= K; ++m) in.add(std::norm(packet_factor_fourier(s, x0, a, m / L, L, tol)));
    double in_j = in.value() / L;
    double out_j = 2.0 * c1 * c1 * L / K;
    inside *= in_j;
    total *= in_j + out_j;
  }
  return std::max(0.0, total - inside);
}

LatticeState wavepacket_state(const Wavepacket& psi, const MomentumLattice& lattice, double tol) {
  LatticeState st;
  st.hat.resize(lattice.size());
  CompensatedSum mass;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    st.hat[i] = wavepacket_fourier_periodized(psi, lattice.dim(), lattice.point(i), lattice.side(), tol);
    mass.add(std::norm(st.hat[i]));
  }
  st.norm = 1.0;
  double out = wavepacket_box_norm2(psi, lattice.dim(), lattice.side()) - mass.value() / lattice.volume();
  st.tail = std::sqrt(std::max(0.0, out) + tol);
  return st;
}

LatticeState plane_wave_state(const MomentumLattice& lattice, const IVec& m) {
  long idx = lattice.index(m);
  if (idx < 0) throw std::invalid_argument("plane wave momentum outside lattice cutoff");
  LatticeState st;
  st.hat.assign(lattice.size(), 0.0);
  st.hat[static_cast<std::size_t>(idx)] = std::sqrt(lattice.volume());
  st.norm = 1.0;
  st.tail = 0.0;
  return st;
}

double fourier_decay_constant(int d) {
  const double c1 = 1.0 / (kPi * kPi) + 1.0 / (2.0 * kPi) + 2.0 * kPi;
  return std::pow(c1, d);
}

double weighted_derivative_sup(const Profile& profile, const IVec& alpha) {
  const int d = profile.dim();
  const auto& spec = profile.spec();
  const double W = spec.kind == ProfileKind::gaussian ? 6.0 * spec.width + 4.0 : spec.radius;
  const int n = d == 1 ? 4001 : (d == 2 ? 401 : 81);
  const double h = 2.0 * W / (n - 1);
  auto F = [&](const RVec& x) {
    double r2 = 0.0;
    for (int j = 0; j < d; ++j) r2 += x[j] * x[j];
    return std::pow(1.0 + r2, d) * std::abs(profile.derivative(x, alpha));
  };
  RVec best{0.0, 0.0, 0.0};
  double best_val = -1.0;
  long total = 1;
  for (int j = 0; j < d; ++j) total *= n;
  for (long idx = 0; idx < total; ++idx) {
    RVec x{0.0, 0.0, 0.0};
    long r = idx;
    for (int j = 0; j < d; ++j) {
      x[j] = -W + h * static_cast<double>(r % n);
      r /= n;
    }
    double v = F(x);
    if (v > best_val) {
      best_val = v;
      best = x;
    }
  }
  // Pattern search around the best grid point.
  double step = h;
  while (step > 1e-12 * W) {
    bool moved = false;
    for (int j = 0; j < d; ++j) {
      for (double dir : {1.0, -1.0}) {
        RVec y = best;
        y[j] = std::clamp(y[j] + dir * step, -W, W);
        double v = F(y);
        if (v > best_val) {
          best_val = v;
          best = y;
          moved = true;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return best_val;
}

BoundReport fourier_decay_check(const Profile& profile, const MomentumLattice& lattice) {
  const int d = lattice.dim();
  if (profile.dim() != d) throw std::invalid_argument("profile and lattice dimensions differ");
  profile.require_box(lattice.side());
  double sups = 0.0;
  int count = 1;
  for (int j = 0; j < d; ++j) count *= 3;
  for (int a = 0; a < count; ++a) {
    IVec alpha{0, 0, 0};
    int r = a;
    for (int j = 0; j < d; ++j) {
      alpha[j] = r % 3;
      r /= 3;
    }
    sups += weighted_derivative_sup(profile, alpha);
  }
  const double rhs = fourier_decay_constant(d) * sups;
  std::vector<BoundReport> parts;
  parts.reserve(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    RVec p = lattice.point(i);
    double w = 1.0;
    for (int j = 0; j < d; ++j) w *= 1.0 + p[j] * p[j];
    double lhs = w * std::abs(profile.fourier_periodized(p, lattice.side(), 1e-13));
    std::vector<std::pair<std::string, double>> params{{"L", lattice.side()}};
    const char* names[] = {"p1", "p2", "p3"};
    for (int j = 0; j < d; ++j) params.emplace_back(names[j], p[j]);
    parts.push_back(make_report("fourier_decay", std::move(params), lhs, rhs));
  }
  std::ostringstream note;
  note << lattice.size() << " lattice points checked";
  return combine_reports("fourier_decay", parts, note.str());
}

}  // namespace wdexp
