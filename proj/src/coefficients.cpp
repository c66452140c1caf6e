#include "wdexp/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "wdexp/errors.hpp"

namespace wdexp {

ExpansionModel::ExpansionModel(MomentumLattice lattice, Profile profile, WeightDistribution dist, double tol)
    : lattice_(std::move(lattice)), profile_(std::move(profile)), dist_(std::move(dist)) {
  table_ = std::make_shared<const ProfileTable>(profile_, lattice_, tol);
}

std::vector<cplx> resolvent_table(const MomentumLattice& lattice, cplx z) {
  std::vector<cplx> r(lattice.size());
  for (std::size_t i = 0; i < lattice.size(); ++i) r[i] = 1.0 / (lattice.nu(i) - z);
  return r;
}

namespace {

int resolve_threads(int t) { return t > 0 ? t : default_threads(); }

void check_states(const ExpansionModel& model, const LatticeState& a, const LatticeState& b) {
  if (a.hat.size() != model.lattice().size() || b.hat.size() != model.lattice().size())
    throw std::invalid_argument("test function coefficients do not match the lattice");
}

std::vector<cplx> endpoint_table(const LatticeState& psi1, const LatticeState& psi2) {
  std::vector<cplx> w(psi1.hat.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::conj(psi1.hat[i]) * psi2.hat[i];
  return w;
}

ChainInput chain_for_T(const ExpansionModel& model, int n, cplx z, const LatticeState& psi1,
                       const LatticeState& psi2, const CoefficientOptions& opts) {
  ChainInput in;
  in.lattice = &model.lattice();
  in.table = &model.table();
  in.props.assign(n + 1, resolvent_table(model.lattice(), z));
  in.endpoint = endpoint_table(psi1, psi2);
  in.threads = resolve_threads(opts.threads);
  in.term_limit = opts.term_limit;
  return in;
}

// l^2_* norm of the coefficients with max_j |m_j| > Kin, including the cutoff tail.
double outside_norm(const MomentumLattice& lat, const LatticeState& st, int Kin) {
  CompensatedSum s;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    IVec m = lat.coords(i);
    int mx = 0;
    for (int j = 0; j < lat.dim(); ++j) mx = std::max(mx, std::abs(m[j]));
    if (mx > Kin) s.add(std::norm(st.hat[i]));
  }
  return std::sqrt(st.tail * st.tail + s.value() / lat.volume());
}

// Tail of one partition chain with endpoint weight conj(psi1) psi2 and
// propagator sup bounds G_1..G_{N+1}.
double chain_tail_states(const ExpansionModel& model, int N, int I, double Gprod, const LatticeState& psi1,
                         const LatticeState& psi2) {
  const auto& lat = model.lattice();
  const auto& tab = model.table();
  const int K = lat.cutoff();
  const double bJ = std::pow(tab.sup_bound(), N - I);
  const double b = tab.l1_full();
  const double n1 = outside_norm(lat, psi1, -1), n2 = outside_norm(lat, psi2, -1);
  if (I == 0) return Gprod * bJ * outside_norm(lat, psi1, K) * outside_norm(lat, psi2, K);
  double best = std::numeric_limits<double>::infinity();
  for (int R = 0; R <= 2 * K; ++R) {
    int Kin = K - I * R;
    double u0 = outside_norm(lat, psi1, Kin) * outside_norm(lat, psi2, Kin) * std::pow(b, I);
    double jumps = I * tab.l1_outside(R) * std::pow(b, I - 1) * n1 * n2;
    best = std::min(best, u0 + jumps);
  }
  return Gprod * bJ * best;
}

}  // namespace

cplx partition_term_C(const ExpansionModel& model, const SetPartition& A, const SpectralParameter& z,
                      const LatticeState& psi1, const LatticeState& psi2, const CoefficientOptions& opts) {
  check_states(model, psi1, psi2);
  const double w = moment_weight(A, model.dist());
  if (w == 0.0) return 0.0;
  ChainInput in = chain_for_T(model, A.size(), z.z(), psi1, psi2, opts);
  return w * chain_partition_sum(in, A).value;
}

CoefficientResult coefficient_T(const ExpansionModel& model, int n, const SpectralParameter& z,
                                const LatticeState& psi1, const LatticeState& psi2,
                                const CoefficientOptions& opts) {
  check_states(model, psi1, psi2);
  if (n < 0 || n > kMaxPartitionSize) throw BudgetError("coefficient order out of range");
  CoefficientResult res;
  res.n = n;
  ChainInput in = chain_for_T(model, n, z.z(), psi1, psi2, opts);
  if (n == 0) {
    ChainTerm t = chain_empty_sum(in);
    res.value = t.value;
    res.partition_count = 1;
    res.term_count = t.terms;
    res.truncation_tail_bound = truncation_tail_bound(model, 0, z, psi1, psi2);
    if (opts.record_per_partition) res.per_partition.emplace_back(SetPartition(0, {}), t.value);
    return res;
  }
  CompensatedComplexSum total;
  PartitionEnumerator it(n);
  SetPartition A;
  while (it.next(A)) {
    ++res.partition_count;
    const double w = moment_weight(A, model.dist());
    cplx c = 0.0;
    if (w != 0.0) {
      ChainTerm t = chain_partition_sum(in, A);
      c = w * t.value;
      res.term_count += t.terms;
    }
    total.add(c);
    if (opts.record_per_partition) res.per_partition.emplace_back(A, c);
  }
  res.value = total.value();
  res.truncation_tail_bound = truncation_tail_bound(model, n, z, psi1, psi2);
  return res;
}

cplx coefficient_T_oracle(const ExpansionModel& model, int n, const SpectralParameter& z,
                          const LatticeState& psi1, const LatticeState& psi2, double term_limit) {
  check_states(model, psi1, psi2);
  if (n < 0 || n > 3) throw std::invalid_argument("oracle supports n <= 3");
  const auto& lat = model.lattice();
  const std::size_t P = lat.size();
  const double work = std::pow(double(P), n + 1);
  if (work > term_limit) throw BudgetError("oracle term count above limit");
  const int d = lat.dim();
  const double vol = lat.volume();
  std::vector<IVec> pts(P);
  for (std::size_t i = 0; i < P; ++i) pts[i] = lat.coords(i);
  std::vector<cplx> R = resolvent_table(lat, z.z());

  struct Weighted {
    SetPartition A;
    double w;
  };
  std::vector<Weighted> parts;
  if (n > 0)
    for (auto& A : enumerate_partitions(n)) {
      double w = moment_weight(A, model.dist());
      if (w != 0.0) parts.push_back({A, w});
    }

  std::vector<std::size_t> k(n + 1, 0);
  std::vector<IVec> u(n + 1);
  CompensatedComplexSum total;
  for (;;) {
    cplx base = std::conj(psi1.hat[k[0]]) * psi2.hat[k[n]];
    for (int j = 0; j <= n; ++j) base *= R[k[j]];
    cplx pw = 0.0;
    if (n == 0) {
      pw = 1.0;
    } else {
      double bprod = 1.0;
      for (int l = 0; l < n; ++l) {
        for (int t = 0; t < kMaxDim; ++t) u[l][t] = pts[k[l]][t] - pts[k[l + 1]][t];
        bprod *= model.table().at(u[l]);
      }
      double s = 0.0;
      for (const auto& P_A : parts) {
        double term = P_A.w;
        for (const auto& block : P_A.A.blocks()) {
          IVec sum{0, 0, 0};
          for (int l : block)
            for (int t = 0; t < d; ++t) sum[t] += u[l - 1][t];
          bool zero = true;
          for (int t = 0; t < d; ++t) zero = zero && sum[t] == 0;
          if (!zero) {
            term = 0.0;
            break;
          }
          term *= vol;
        }
        s += term;
      }
      pw = s * bprod;
    }
    if (pw != 0.0) total.add(base * pw);
    int pos = 0;
    while (pos <= n && ++k[pos] == P) k[pos++] = 0;
    if (pos > n) break;
  }
  return total.value() / std::pow(vol, n + 1);
}

BoundReport conj_symmetry_check(const ExpansionModel& model, int n, const SpectralParameter& z,
                                const LatticeState& psi, const CoefficientOptions& opts) {
  cplx a = coefficient_T(model, n, z, psi, psi, opts).value;
  cplx b = coefficient_T(model, n, z.conj(), psi, psi, opts).value;
  double diff = std::abs(b - std::conj(a));
  double scale = std::max(std::abs(a), std::numeric_limits<double>::min());
  auto r = make_report("conj_symmetry", {{"n", double(n)}, {"E", z.E}, {"eta", z.eta}}, diff,
                       1e-12 * scale, "relative tolerance 1e-12");
  if (a == 0.0 && b == 0.0) r = make_report("conj_symmetry", r.parameters, 0.0, 0.0, "both values zero");
  return r;
}

ErrorFunctionalResult error_functional_E(const ExpansionModel& model, int n, const SpectralParameter& z,
                                         const LatticeState& psi, const CoefficientOptions& opts) {
  check_states(model, psi, psi);
  if (n < 0 || 2 * n > kMaxPartitionSize) throw BudgetError("error functional order out of range");
  ChainInput in;
  in.lattice = &model.lattice();
  in.table = &model.table();
  in.threads = resolve_threads(opts.threads);
  in.term_limit = opts.term_limit;
  in.endpoint = endpoint_table(psi, psi);
  auto Rz = resolvent_table(model.lattice(), z.z());
  auto Rc = resolvent_table(model.lattice(), std::conj(z.z()));
  for (int j = 0; j < n; ++j) in.props.push_back(Rz);
  in.props.emplace_back(model.lattice().size(), cplx(1.0));
  for (int j = 0; j < n; ++j) in.props.push_back(Rc);
  ErrorFunctionalResult res;
  if (n == 0) {
    ChainTerm t = chain_empty_sum(in);
    res.value = t.value.real();
    res.imag = t.value.imag();
    res.term_count = t.terms;
    return res;
  }
  CompensatedComplexSum total;
  PartitionEnumerator it(2 * n);
  SetPartition A;
  while (it.next(A)) {
    const double w = moment_weight(A, model.dist());
    if (w == 0.0) continue;
    ChainTerm t = chain_partition_sum(in, A);
    total.add(w * t.value);
    res.term_count += t.terms;
  }
  res.value = total.value().real();
  res.imag = total.value().imag();
  return res;
}

double partition_term_bound(const ExpansionModel& model, const SetPartition& A, const SpectralParameter& z,
                            double psi1_norm, double psi2_norm) {
  const int n = A.size();
  const int I = n - static_cast<int>(A.block_count());
  const double w = std::abs(moment_weight(A, model.dist()));
  return w * std::pow(model.table().profile_l1(), n - I) * std::pow(model.table().l1_full(), I) * psi1_norm *
         psi2_norm * std::pow(z.dist_to_spectrum(), -(n + 1));
}

double coefficient_bound(const ExpansionModel& model, int n, const SpectralParameter& z, double psi1_norm,
                         double psi2_norm) {
  if (n == 0) return psi1_norm * psi2_norm / z.dist_to_spectrum();
  CompensatedSum s;
  for (const auto& A : enumerate_partitions(n)) s.add(partition_term_bound(model, A, z, psi1_norm, psi2_norm));
  return s.value();
}

BoundReport partition_term_bound_check(const ExpansionModel& model, const SetPartition& A,
                                       const SpectralParameter& z, const LatticeState& psi1,
                                       const LatticeState& psi2) {
  double lhs = std::abs(partition_term_C(model, A, z, psi1, psi2));
  double rhs = partition_term_bound(model, A, z, psi1.norm, psi2.norm);
  return make_report("partition_term_bound", {{"n", double(A.size())}, {"E", z.E}, {"eta", z.eta}}, lhs, rhs,
                     A.to_string());
}

double truncation_tail_bound(const ExpansionModel& model, int n, const SpectralParameter& z,
                             const LatticeState& psi1, const LatticeState& psi2) {
  const double G = 1.0 / z.dist_to_spectrum();
  const double Gprod = std::pow(G, n + 1);
  if (n == 0) return chain_tail_states(model, 0, 0, Gprod, psi1, psi2);
  CompensatedSum s;
  for (const auto& A : enumerate_partitions(n)) {
    const double w = std::abs(moment_weight(A, model.dist()));
    if (w == 0.0) continue;
    const int I = n - static_cast<int>(A.block_count());
    s.add(w * chain_tail_states(model, n, I, Gprod, psi1, psi2));
  }
  return s.value();
}

ProbeTable eta_limit_probe(const ExpansionModel& model, int n, double E, const std::vector<double>& etas,
                           const LatticeState& psi1, const LatticeState& psi2, const CoefficientOptions& opts) {
  for (std::size_t i = 1; i < etas.size(); ++i)
    if (!(etas[i] < etas[i - 1])) throw std::invalid_argument("eta sequence must be strictly decreasing");
  ProbeTable tab;
  for (double eta : etas) {
    SpectralParameter z(E, eta);
    CoefficientResult r = coefficient_T(model, n, z, psi1, psi2, opts);
    ProbeRow row;
    row.parameter = eta;
    row.value = r.value;
    row.delta = tab.rows.empty() ? 0.0 : std::abs(r.value - tab.rows.back().value);
    row.bound = coefficient_bound(model, n, z, psi1.norm, psi2.norm);
    row.tail_bound = r.truncation_tail_bound;
    tab.rows.push_back(row);
  }
  tab.cauchy = tab.rows.size() >= 3;
  for (std::size_t i = 2; i < tab.rows.size(); ++i) tab.cauchy = tab.cauchy && tab.rows[i].delta < tab.rows[i - 1].delta;
  return tab;
}

ProbeTable volume_limit_probe(int n, cplx z, const std::vector<double>& Ls, double cutoff_momentum, int d,
                              const ProfileSpec& profile, const WeightDistribution& dist,
                              const Wavepacket& psi1, const Wavepacket& psi2, const CoefficientOptions& opts) {
  for (std::size_t i = 1; i < Ls.size(); ++i)
    if (!(Ls[i] > Ls[i - 1])) throw std::invalid_argument("L sequence must be strictly increasing");
  if (!(cutoff_momentum > 0.0)) throw std::invalid_argument("cutoff momentum must be positive");
  SpectralParameter sp(z.real(), std::abs(z.imag()), z.imag() >= 0 ? 1 : -1);
  ProbeTable tab;
  for (double L : Ls) {
    int K = std::max(1, static_cast<int>(std::lround(cutoff_momentum * L)));
    ExpansionModel model(MomentumLattice(d, L, K), Profile(profile, d), dist);
    LatticeState s1 = wavepacket_state(psi1, model.lattice());
    LatticeState s2 = wavepacket_state(psi2, model.lattice());
    CoefficientResult r = coefficient_T(model, n, sp, s1, s2, opts);
    ProbeRow row;
    row.parameter = L;
    row.value = r.value;
    row.delta = tab.rows.empty() ? 0.0 : std::abs(r.value - tab.rows.back().value);
    row.bound = coefficient_bound(model, n, sp, s1.norm, s2.norm);
    row.tail_bound = r.truncation_tail_bound;
    tab.rows.push_back(row);
  }
  tab.cauchy = tab.rows.size() >= 3;
  for (std::size_t i = 2; i < tab.rows.size(); ++i) tab.cauchy = tab.cauchy && tab.rows[i].delta < tab.rows[i - 1].delta;
  return tab;
}

}  // namespace wdexp
