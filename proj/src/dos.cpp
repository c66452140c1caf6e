#include "wdexp/dos.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wdexp/errors.hpp"

namespace wdexp {

namespace {

int resolve_threads(int t) { return t > 0 ? t : default_threads(); }

void check_eta(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be positive and finite");
}

// Sum of weighted chain terms over all partitions of {1..n}, trace endpoint.
cplx trace_chain(const ExpansionModel& model, int n, cplx z, const CoefficientOptions& opts,
                 std::uint64_t& terms) {
  ChainInput in;
  in.lattice = &model.lattice();
  in.table = &model.table();
  in.props.assign(n + 1, resolvent_table(model.lattice(), z));
  in.endpoint.assign(model.lattice().size(), cplx(1.0));
  in.threads = resolve_threads(opts.threads);
  in.term_limit = opts.term_limit;
  if (n == 0) {
    ChainTerm t = chain_empty_sum(in);
    terms += t.terms;
    return t.value;
  }
  CompensatedComplexSum total;
  PartitionEnumerator it(n);
  SetPartition A;
  while (it.next(A)) {
    const double w = moment_weight(A, model.dist());
    if (w == 0.0) continue;
    ChainTerm t = chain_partition_sum(in, A);
    total.add(w * t.value);
    terms += t.terms;
  }
  return total.value();
}

double trace_tail(const ExpansionModel& model, int n, double E, double eta) {
  const auto& lat = model.lattice();
  const auto& tab = model.table();
  const int K = lat.cutoff();
  const double L = lat.side();
  const int d = lat.dim();
  const double decay_from = std::max(4.0 * E, 0.0);
  // Bound on |nu - z|^{-2} for every nu >= r2 / 2.
  auto env2 = [&](double r2) {
    double nu = 0.5 * r2;
    if (nu <= E) return 1.0 / (eta * eta);
    return 1.0 / ((nu - E) * (nu - E) + eta * eta);
  };
  if (n == 0) return shell_tail([&](double r2) { return eta * env2(r2); }, K, L, d, decay_from);
  const SpectralParameter sp(E, eta);
  const double Gmid = std::pow(1.0 / sp.dist_to_spectrum(), n - 1);
  const double b = tab.l1_full();
  CompensatedSum inside;
  for (std::size_t i = 0; i < lat.size(); ++i) inside.add(std::norm(1.0 / (lat.nu(i) - sp.z())));
  const double full = inside.value() / lat.volume() + shell_tail(env2, K, L, d, decay_from);
  CompensatedSum s;
  for (const auto& A : enumerate_partitions(n)) {
    const double w = std::abs(moment_weight(A, model.dist()));
    if (w == 0.0) continue;
    const int I = n - static_cast<int>(A.block_count());
    const double bJ = std::pow(tab.sup_bound(), n - I);
    double best = shell_tail(env2, K, L, d, decay_from) * std::pow(b, I);
    if (I > 0)
      for (int R = 0; R <= 2 * K; ++R) {
        double u0 = shell_tail(env2, K - I * R, L, d, decay_from) * std::pow(b, I);
        double jumps = I * tab.l1_outside(R) * std::pow(b, I - 1) * full;
        best = std::min(best, u0 + jumps);
      }
    s.add(w * bJ * Gmid * best);
  }
  return s.value();
}

}  // namespace

DosCoefficient dos_coefficient_D(const ExpansionModel& model, int n, double E, double eta,
                                 const CoefficientOptions& opts) {
  check_eta(eta);
  if (n < 0 || n > kMaxPartitionSize) throw BudgetError("density of states order out of range");
  DosCoefficient r;
  r.n = n;
  r.E = E;
  r.eta = eta;
  const cplx z(E, eta);
  cplx a = trace_chain(model, n, z, opts, r.term_count);
  cplx b = trace_chain(model, n, std::conj(z), opts, r.term_count);
  cplx D = (a - b) / cplx(0.0, 2.0);
  r.value = D.real();
  r.imag_residual = D.imag();
  r.tail_bound = trace_tail(model, n, E, eta);
  return r;
}

double dos_D0_closed(const MomentumLattice& lattice, double E, double eta) {
  check_eta(eta);
  std::vector<double> f(lattice.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double x = lattice.nu(i) - E;
    f[i] = eta / (x * x + eta * eta);
  }
  return discrete_integral(f, lattice);
}

double dos_eta(double lambda, double epsilon) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(epsilon > 0.0 && epsilon < 2.0)) throw std::invalid_argument("epsilon must lie in (0, 2)");
  return std::pow(lambda, 2.0 - epsilon);
}

int dos_order_cap(int d) { return d == 1 ? 3 : 2; }

DosOrder dos_order(const ExpansionModel& model, const Bump& chi, double eta, int n, const CoefficientOptions& opts) {
  validate_bump(chi);
  check_eta(eta);
  DosOrder o;
  o.n = n;
  auto f = [&](double E) { return chi(E) * dos_coefficient_D(model, n, E, eta, opts).value / kPi; };
  // Break the E-integral at the free energies inside the support.
  std::vector<double> cuts{chi.lo(), chi.hi()};
  for (double nu : model.lattice().nu_table())
    if (nu > chi.lo() && nu < chi.hi()) cuts.push_back(nu);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  // Pieces of opposite sign can cancel, so the per-piece tolerance is tightened
  // until the summed error meets the target relative to the total.
  double rel = 1e-9;
  for (int attempt = 0;; ++attempt) {
    CompensatedSum v, e;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      QuadResult q = integrate(f, cuts[i], cuts[i + 1], rel, 1e-15);
      v.add(q.value);
      e.add(q.error);
    }
    o.integral = v.value();
    o.quad_error = e.value();
    const double target = std::max(1e-8 * std::abs(o.integral), 1e-14);
    if (o.quad_error <= target) break;
    if (attempt == 3 || rel <= 1e-14)
      throw ToleranceError("density of states quadrature above tolerance", o.quad_error);
    rel = std::max(1e-14, rel * 0.25 * target / o.quad_error);
  }
  double chi_l1 = integrate([&](double E) { return chi(E); }, chi.lo(), chi.hi(), 1e-12, 1e-16).value;
  double tmax = 0.0;
  for (int k = 0; k <= 8; ++k) {
    double E = chi.lo() + (chi.hi() - chi.lo()) * k / 8.0;
    tmax = std::max(tmax, trace_tail(model, n, E, eta));
  }
  o.tail_bound = chi_l1 * tmax / kPi;
  return o;
}

DosExpansion dos_expansion(const ExpansionModel& model, const Bump& chi, double lambda, double eta, int max_order,
                           const CoefficientOptions& opts) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (max_order < 0) throw std::invalid_argument("order must be >= 0");
  DosExpansion r;
  r.lambda = lambda;
  r.eta = eta;
  const int cap = dos_order_cap(model.lattice().dim());
  r.max_order = std::min(max_order, cap);
  std::ostringstream note;
  note << "orders 0.." << r.max_order;
  if (max_order > cap) note << " (requested " << max_order << ", capped at " << cap << ")";
  r.note = note.str();
  CompensatedSum total;
  for (int n = 0; n <= r.max_order; ++n) {
    DosOrder o = dos_order(model, chi, eta, n, opts);
    o.contribution = std::pow(-lambda, n) * o.integral;
    total.add(o.contribution);
    r.orders.push_back(o);
  }
  r.total = total.value();
  return r;
}

EstimatorResult dos_mc(const ExpansionModel& model, const Bump& chi, double lambda, double eta,
                       const McOptions& opts) {
  validate_bump(chi);
  check_eta(eta);
  if (opts.n_samples < 2) throw std::invalid_argument("Monte Carlo needs at least two samples");
  std::vector<cplx> samples(opts.n_samples);
  parallel_for(opts.n_samples, resolve_threads(opts.threads), [&](std::size_t i) {
    PoissonConfig c = sample_config(model.lattice(), model.dist(), opts.seed, i);
    samples[i] = smoothed_trace_sample(c, lambda, chi, eta, model);
  });
  return summarize(samples, opts.seed);
}

double potential_grid_sup(const PoissonConfig& config, const ExpansionModel& model, int points_per_dim) {
  const auto& lat = model.lattice();
  const int d = lat.dim();
  const double L = lat.side();
  const Profile& B = model.profile();
  if (points_per_dim <= 0) points_per_dim = d == 1 ? 4001 : (d == 2 ? 201 : 41);
  const double reach = B.spec().kind == ProfileKind::gaussian ? 6.0 * B.spec().width : B.spec().radius;
  const int images = static_cast<int>(std::ceil(reach / L)) + 1;
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(points_per_dim);
  double best = 0.0;
  for (std::size_t g = 0; g < total; ++g) {
    RVec x{0.0, 0.0, 0.0};
    std::size_t rem = g;
    for (int j = 0; j < d; ++j) {
      x[j] = -0.5 * L + L * double(rem % points_per_dim) / points_per_dim;
      rem /= points_per_dim;
    }
    double v = 0.0;
    for (std::size_t c = 0; c < config.M; ++c) {
      IVec n{-images, -images, -images};
      for (int j = d; j < kMaxDim; ++j) n[j] = 0;
      for (;;) {
        RVec y{0.0, 0.0, 0.0};
        for (int j = 0; j < d; ++j) y[j] = x[j] - config.positions[c][j] + n[j] * L;
        v += config.weights[c] * B.value(y);
        int j = 0;
        while (j < d && ++n[j] > images) n[j++] = -images;
        if (j == d) break;
      }
    }
    best = std::max(best, std::abs(v));
  }
  return best;
}

BoundReport trace_class_bound_check(const PoissonConfig& config, double lambda, const ExpansionModel& model,
                                    const std::function<double(double)>& f, double C_f) {
  if (model.lattice().dim() > 3) throw std::invalid_argument("trace bound needs d <= 3");
  HamiltonianMatrix H = assemble_hamiltonian(config, lambda, model);
  Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver failed");
  CompensatedSum lhs;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) lhs.add(std::abs(f(es.eigenvalues()[k])));
  Eigen::SelfAdjointEigenSolver<HamiltonianMatrix> ev(potential_matrix(config, model), Eigen::EigenvaluesOnly);
  const double v_op = lambda * (ev.eigenvalues().size() ? ev.eigenvalues().cwiseAbs().maxCoeff() : 0.0);
  const double v_grid = lambda * potential_grid_sup(config, model);
  const double v = std::max(v_op, v_grid);
  CompensatedSum free;
  for (double nu : model.lattice().nu_table()) free.add(1.0 / (nu * nu + 1.0));
  const double rhs = C_f * (2.0 * v * v + 2.0) * free.value();
  return make_report("trace_class_bound",
                     {{"lambda", lambda}, {"C_f", C_f}, {"V_grid", v_grid}, {"V_op", v_op}, {"M", double(config.M)}},
                     lhs.value(), rhs);
}

BoundReport dos_eta_scaling_check(const MomentumLattice& lattice, double E, const std::vector<double>& etas) {
  std::vector<BoundReport> parts;
  const double C = double(lattice.size()) / lattice.volume();
  for (double eta : etas) {
    double q = dos_D0_closed(lattice, E, eta) * eta / (eta * eta + 1.0);
    parts.push_back(make_report("dos_eta_scaling", {{"E", E}, {"eta", eta}}, q, C));
  }
  return combine_reports("dos_eta_scaling", parts, "normalized by the lattice density size / L^d");
}

}  // namespace wdexp
