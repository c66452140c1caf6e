#include "wdexp/montecarlo.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wdexp/errors.hpp"

namespace wdexp {

using Vec = Eigen::VectorXcd;

namespace {

int resolve_threads(int t) { return t > 0 ? t : default_threads(); }

Vec to_vec(const LatticeState& s) {
  Vec v(static_cast<Eigen::Index>(s.hat.size()));
  for (std::size_t i = 0; i < s.hat.size(); ++i) v[static_cast<Eigen::Index>(i)] = s.hat[i];
  return v;
}

Vec resolvent_diag(const MomentumLattice& lat, cplx z) {
  Vec r(static_cast<Eigen::Index>(lat.size()));
  for (std::size_t i = 0; i < lat.size(); ++i) r[static_cast<Eigen::Index>(i)] = 1.0 / (lat.nu(i) - z);
  return r;
}

cplx inner(const Vec& a, const Vec& b, const MomentumLattice& lat) {
  CompensatedComplexSum s;
  for (Eigen::Index i = 0; i < a.size(); ++i) s.add(std::conj(a[i]) * b[i]);
  return s.value() / lat.volume();
}

void check_samples(std::size_t n) {
  if (n < 2) throw std::invalid_argument("Monte Carlo needs at least two samples");
}

template <class F>
std::vector<cplx> run_samples(const McOptions& opts, F&& per_sample) {
  check_samples(opts.n_samples);
  std::vector<cplx> out(opts.n_samples);
  parallel_for(opts.n_samples, resolve_threads(opts.threads), [&](std::size_t i) { out[i] = per_sample(i); });
  return out;
}

}  // namespace

EstimatorResult summarize(const std::vector<cplx>& samples, std::uint64_t seed) {
  const std::size_t n = samples.size();
  check_samples(n);
  CompensatedComplexSum s;
  for (cplx x : samples) s.add(x);
  const cplx mean = s.value() / double(n);
  CompensatedSum vr, vi;
  for (cplx x : samples) {
    double dr = x.real() - mean.real(), di = x.imag() - mean.imag();
    vr.add(dr * dr);
    vi.add(di * di);
  }
  EstimatorResult r;
  r.mean = mean;
  r.n_samples = n;
  r.seed = seed;
  const double denom = double(n) * double(n - 1);
  r.std_error_re = std::sqrt(vr.value() / denom);
  r.std_error_im = std::sqrt(vi.value() / denom);
  r.std_error = std::sqrt((vr.value() + vi.value()) / denom);
  return r;
}

PoissonConfig sample_config(const MomentumLattice& lattice, const WeightDistribution& dist, CounterRng& rng) {
  if (!dist.sampleable()) throw std::invalid_argument("weight distribution given only by moments cannot be sampled");
  PoissonConfig c;
  const double L = lattice.side();
  c.M = static_cast<std::size_t>(sample_poisson(rng, lattice.volume()));
  c.positions.resize(c.M);
  c.weights.resize(c.M);
  for (std::size_t g = 0; g < c.M; ++g) {
    RVec y{0.0, 0.0, 0.0};
    for (int j = 0; j < lattice.dim(); ++j) y[j] = -0.5 * L + L * rng.uniform();
    c.positions[g] = y;
    double u = rng.uniform();
    c.weights[g] = dist.kind() == WeightKind::rademacher ? (u < 0.5 ? -1.0 : 1.0) : std::sqrt(3.0) * (2.0 * u - 1.0);
  }
  return c;
}

PoissonConfig sample_config(const MomentumLattice& lattice, const WeightDistribution& dist, std::uint64_t seed,
                            std::uint64_t index) {
  CounterRng rng(seed, index);
  return sample_config(lattice, dist, rng);
}

cplx potential_fourier(const PoissonConfig& config, const ExpansionModel& model, const IVec& p) {
  const auto& diff = model.table().diff_lattice();
  long idx = diff.index(p);
  if (idx < 0) throw std::invalid_argument("momentum outside the difference lattice");
  const double b = model.table().at_index(static_cast<std::size_t>(idx));
  const int d = diff.dim();
  const double L = diff.side();
  CompensatedComplexSum s;
  for (std::size_t g = 0; g < config.M; ++g) {
    double dot = 0.0;
    for (int j = 0; j < d; ++j) dot += p[j] * config.positions[g][j];
    s.add(config.weights[g] * b * std::polar(1.0, -2.0 * kPi * dot / L));
  }
  return s.value();
}

std::vector<cplx> potential_fourier_table(const PoissonConfig& config, const ExpansionModel& model) {
  const auto& diff = model.table().diff_lattice();
  const std::size_t n = diff.size();
  std::vector<cplx> V(n);
  // Index i and n-1-i are mirror momenta; compute one half and conjugate.
  for (std::size_t i = 0; i <= (n - 1) / 2; ++i) {
    V[i] = potential_fourier(config, model, diff.coords(i));
    V[n - 1 - i] = std::conj(V[i]);
  }
  V[(n - 1) / 2] = V[(n - 1) / 2].real();
  return V;
}

HamiltonianMatrix potential_matrix(const PoissonConfig& config, const ExpansionModel& model) {
  const auto& lat = model.lattice();
  const auto& diff = model.table().diff_lattice();
  std::vector<cplx> V = potential_fourier_table(config, model);
  const auto n = static_cast<Eigen::Index>(lat.size());
  HamiltonianMatrix M(n, n);
  const double inv_vol = 1.0 / lat.volume();
  for (Eigen::Index p = 0; p < n; ++p) {
    IVec mp = lat.coords(static_cast<std::size_t>(p));
    for (Eigen::Index q = 0; q < n; ++q) {
      IVec mq = lat.coords(static_cast<std::size_t>(q));
      IVec dm{mp[0] - mq[0], mp[1] - mq[1], mp[2] - mq[2]};
      M(p, q) = V[static_cast<std::size_t>(diff.index(dm))] * inv_vol;
    }
  }
  return M;
}

HamiltonianMatrix assemble_hamiltonian(const PoissonConfig& config, double lambda, const ExpansionModel& model) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("coupling lambda must be >= 0");
  HamiltonianMatrix H = lambda * potential_matrix(config, model);
  for (std::size_t i = 0; i < model.lattice().size(); ++i) {
    auto k = static_cast<Eigen::Index>(i);
    H(k, k) += model.lattice().nu(i);
  }
  return H;
}

double hermiticity_residual(const HamiltonianMatrix& H) {
  double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  return (H - H.adjoint()).cwiseAbs().maxCoeff() / scale;
}

cplx resolvent_matrix_element(const HamiltonianMatrix& H, const MomentumLattice& lattice, cplx z,
                              const LatticeState& psi1, const LatticeState& psi2) {
  const auto n = H.rows();
  HamiltonianMatrix A = H - z * HamiltonianMatrix::Identity(n, n);
  Eigen::PartialPivLU<HamiltonianMatrix> lu(A);
  Vec b = to_vec(psi2);
  Vec x = lu.solve(b);
  double res = (A * x - b).norm();
  if (res > 1e-10 * std::max(b.norm(), 1e-300)) {
    std::ostringstream os;
    os << "resolvent solve residual " << res << " too large (reciprocal condition estimate " << lu.rcond() << ")";
    throw std::runtime_error(os.str());
  }
  return inner(to_vec(psi1), x, lattice);
}

BoundReport neumann_identity_check(const PoissonConfig& config, double lambda, const SpectralParameter& z, int n,
                                   const ExpansionModel& model, const LatticeState& psi2) {
  if (n < 0) throw std::invalid_argument("Neumann order must be >= 0");
  const auto& lat = model.lattice();
  HamiltonianMatrix V = potential_matrix(config, model);
  HamiltonianMatrix H = assemble_hamiltonian(config, lambda, model);
  const auto N = H.rows();
  Eigen::PartialPivLU<HamiltonianMatrix> lu(H - z.z() * HamiltonianMatrix::Identity(N, N));
  Vec R = resolvent_diag(lat, z.z());
  Vec b = to_vec(psi2);
  Vec x = lu.solve(b);
  Vec term = R.cwiseProduct(b), total = term;
  for (int j = 1; j <= n; ++j) {
    term = R.cwiseProduct(-lambda * (V * term));
    total += term;
  }
  Vec rem = x;
  for (int j = 0; j <= n; ++j) rem = -lambda * R.cwiseProduct(V * rem);
  double residual = (x - total - rem).norm() / b.norm();
  return make_report("neumann_identity", {{"n", double(n)}, {"lambda", lambda}, {"E", z.E}, {"eta", z.eta}},
                     residual, 1e-9, "relative residual of the iterated resolvent identity");
}

BoundReport neumann_remainder_bound_check(const PoissonConfig& config, double lambda, const SpectralParameter& z,
                                          int n, const ExpansionModel& model, const LatticeState& psi2) {
  const auto& lat = model.lattice();
  HamiltonianMatrix V = potential_matrix(config, model);
  HamiltonianMatrix H = assemble_hamiltonian(config, lambda, model);
  const auto N = H.rows();
  Eigen::PartialPivLU<HamiltonianMatrix> lu(H - z.z() * HamiltonianMatrix::Identity(N, N));
  Vec R = resolvent_diag(lat, z.z());
  Vec b = to_vec(psi2);
  Vec rem = lu.solve(b);
  for (int j = 0; j <= n; ++j) rem = -lambda * R.cwiseProduct(V * rem);
  Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> es(V, Eigen::EigenvaluesOnly);
  double vnorm = es.eigenvalues().cwiseAbs().maxCoeff();
  double dist = z.dist_to_spectrum();
  double rhs = std::pow(lambda * vnorm / dist, n + 1) * b.norm() / z.eta;
  return make_report("neumann_remainder_bound", {{"n", double(n)}, {"lambda", lambda}, {"eta", z.eta}}, rem.norm(),
                     rhs, "operator-norm chain with the computed ||V||");
}

EstimatorResult estimate_expectation(const ExpansionModel& model, double lambda, const SpectralParameter& z,
                                     const LatticeState& psi1, const LatticeState& psi2, const McOptions& opts) {
  auto samples = run_samples(opts, [&](std::size_t i) {
    PoissonConfig c = sample_config(model.lattice(), model.dist(), opts.seed, i);
    return resolvent_matrix_element(assemble_hamiltonian(c, lambda, model), model.lattice(), z.z(), psi1, psi2);
  });
  return summarize(samples, opts.seed);
}

EstimatorResult estimate_partial_term(const ExpansionModel& model, int n, const SpectralParameter& z,
                                      const LatticeState& psi1, const LatticeState& psi2, const McOptions& opts) {
  if (n < 0 || n > 4) throw std::invalid_argument("partial term order must be in 0..4");
  const Vec R = resolvent_diag(model.lattice(), z.z());
  const Vec a = to_vec(psi1), b = to_vec(psi2);
  auto samples = run_samples(opts, [&](std::size_t i) {
    Vec x = R.cwiseProduct(b);
    if (n > 0) {
      PoissonConfig c = sample_config(model.lattice(), model.dist(), opts.seed, i);
      HamiltonianMatrix V = potential_matrix(c, model);
      for (int j = 0; j < n; ++j) x = R.cwiseProduct(V * x);
    }
    return inner(a, x, model.lattice());
  });
  return summarize(samples, opts.seed);
}

EstimatorResult estimate_error_functional(const ExpansionModel& model, int n, const SpectralParameter& z,
                                          const LatticeState& psi, const McOptions& opts) {
  if (n < 0) throw std::invalid_argument("order must be >= 0");
  const Vec Rc = resolvent_diag(model.lattice(), std::conj(z.z()));
  const Vec b = to_vec(psi);
  auto samples = run_samples(opts, [&](std::size_t i) {
    Vec x = b;
    if (n > 0) {
      PoissonConfig c = sample_config(model.lattice(), model.dist(), opts.seed, i);
      HamiltonianMatrix V = potential_matrix(c, model);
      for (int j = 0; j < n; ++j) x = V * Rc.cwiseProduct(x);
    }
    return inner(x, x, model.lattice());
  });
  return summarize(samples, opts.seed);
}

std::vector<ResidualRow> residual_sweep(const ExpansionModel& model, const std::vector<double>& lambdas, int kept,
                                        const SpectralParameter& z, const LatticeState& psi1,
                                        const LatticeState& psi2, const McOptions& opts) {
  if (kept < 0 || kept > 3) throw std::invalid_argument("retained order must be in 0..3");
  check_samples(opts.n_samples);
  const auto& lat = model.lattice();
  const std::size_t nl = lambdas.size();
  const int cv = kept + 1;
  const Vec R = resolvent_diag(lat, z.z());
  const Vec a = to_vec(psi1), b = to_vec(psi2);
  const auto N = static_cast<Eigen::Index>(lat.size());
  // Per sample: resolvent values for every lambda, then Y_0..Y_cv.
  std::vector<std::vector<cplx>> per(opts.n_samples);
  parallel_for(opts.n_samples, resolve_threads(opts.threads), [&](std::size_t i) {
    PoissonConfig c = sample_config(lat, model.dist(), opts.seed, i);
    HamiltonianMatrix V = potential_matrix(c, model);
    std::vector<cplx> row;
    row.reserve(nl + cv + 1);
    for (double lam : lambdas) {
      HamiltonianMatrix H = lam * V;
      for (Eigen::Index k = 0; k < N; ++k) H(k, k) += lat.nu(static_cast<std::size_t>(k));
      H -= z.z() * HamiltonianMatrix::Identity(N, N);
      Vec x = H.partialPivLu().solve(b);
      row.push_back(inner(a, x, lat));
    }
    Vec x = R.cwiseProduct(b);
    row.push_back(inner(a, x, lat));
    for (int j = 1; j <= cv; ++j) {
      x = R.cwiseProduct(V * x);
      row.push_back(inner(a, x, lat));
    }
    per[i] = std::move(row);
  });
  std::vector<cplx> T(cv + 1);
  for (int j = 0; j <= cv; ++j) T[j] = coefficient_T(model, j, z, psi1, psi2).value;
  std::vector<ResidualRow> rows;
  for (std::size_t l = 0; l < nl; ++l) {
    const double lam = lambdas[l];
    std::vector<cplx> plain(opts.n_samples), adjusted(opts.n_samples);
    for (std::size_t i = 0; i < opts.n_samples; ++i) {
      plain[i] = per[i][l];
      cplx x = per[i][l];
      for (int j = 0; j <= cv; ++j) x -= std::pow(-lam, j) * per[i][nl + j];
      adjusted[i] = x;
    }
    EstimatorResult ep = summarize(plain, opts.seed), ea = summarize(adjusted, opts.seed);
    ResidualRow r;
    r.lambda = lam;
    r.mc_mean = ep.mean;
    r.mc_std_error = ep.std_error;
    for (int j = 0; j <= kept; ++j) r.partial_sum += std::pow(-lam, j) * T[j];
    r.residual = ep.mean - r.partial_sum;
    r.residual_std_error = ep.std_error;
    r.residual_cv = ea.mean + std::pow(-lam, cv) * T[cv];
    r.residual_cv_std_error = ea.std_error;
    rows.push_back(r);
  }
  return rows;
}

double Bump::operator()(double E) const {
  double t = (E - center) / width;
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

void validate_bump(const Bump& chi) {
  if (!(chi.width > 0.0)) throw std::invalid_argument("bump width must be positive");
  if (!(chi.lo() >= 0.0)) throw std::invalid_argument("bump support must lie in (0, inf)");
}

double smoothed_bump(const Bump& chi, double eta, double mu) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  auto f = [&](double E) { return chi(E) * (eta / kPi) / ((mu - E) * (mu - E) + eta * eta); };
  std::vector<double> cuts{chi.lo()};
  for (double c : {mu - 5.0 * eta, mu, mu + 5.0 * eta})
    if (c > cuts.back() && c < chi.hi()) cuts.push_back(c);
  cuts.push_back(chi.hi());
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) s.add(integrate(f, cuts[i], cuts[i + 1], 1e-12, 1e-16).value);
  return s.value();
}

double smoothed_trace_sample(const PoissonConfig& config, double lambda, const Bump& chi, double eta,
                             const ExpansionModel& model) {
  validate_bump(chi);
  if (model.lattice().dim() > 3) throw std::invalid_argument("trace needs d <= 3");
  HamiltonianMatrix H = assemble_hamiltonian(config, lambda, model);
  Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
  CompensatedSum s;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) s.add(smoothed_bump(chi, eta, es.eigenvalues()[k]));
  return s.value() / model.lattice().volume();
}

double smoothed_trace_stone(const PoissonConfig& config, double lambda, const Bump& chi, double eta,
                            const ExpansionModel& model, int nodes) {
  validate_bump(chi);
  if (nodes < 20 || nodes % 20 != 0) throw std::invalid_argument("Stone quadrature nodes must be a multiple of 20");
  HamiltonianMatrix H = assemble_hamiltonian(config, lambda, model);
  const auto N = H.rows();
  auto f = [&](double E) {
    HamiltonianMatrix A = H - cplx(E, eta) * HamiltonianMatrix::Identity(N, N);
    HamiltonianMatrix inv = A.partialPivLu().inverse();
    double im = 0.0;
    for (Eigen::Index k = 0; k < N; ++k) im += inv(k, k).imag();
    return cplx(chi(E) * im, 0.0);
  };
  return gauss_legendre(f, chi.lo(), chi.hi(), nodes / 20).real() / (kPi * model.lattice().volume());
}

}  // namespace wdexp
