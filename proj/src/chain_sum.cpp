#include "wdexp/chain_sum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wdexp/errors.hpp"

namespace wdexp {

ProfileTable::ProfileTable(const Profile& profile, const MomentumLattice& lattice, double tol)
    : diff_(lattice.dim(), lattice.side(), 2 * lattice.cutoff(),
            std::max<std::size_t>(kDefaultPointBudget * 8, static_cast<std::size_t>(std::pow(4.0 * lattice.cutoff() + 1.0, lattice.dim())))),
      d_(lattice.dim()),
      amp_(std::abs(profile.spec().amplitude)) {
  if (profile.dim() != lattice.dim()) throw std::invalid_argument("profile and lattice dimensions differ");
  const double L = lattice.side();
  profile.require_box(L);
  const int K2 = 2 * lattice.cutoff();
  const int Rmax = std::max(K2, static_cast<int>(std::ceil(100.0 * L)));
  const double ftol = tol / (d_ * std::max(1.0, amp_ * std::pow(std::max(1.0, profile.factor_box_l1(L)), d_)));
  std::vector<double> g(Rmax + 1);
  for (int m = 0; m <= Rmax; ++m) g[m] = profile.factor_fourier_periodized(m / L, L, ftol);
  values_.resize(diff_.size());
  for (std::size_t i = 0; i < diff_.size(); ++i) {
    IVec m = diff_.coords(i);
    double v = profile.spec().amplitude;
    for (int j = 0; j < d_; ++j) v *= g[std::abs(m[j])];
    values_[i] = v;
  }
  factor_in_.resize(Rmax + 1);
  CompensatedSum s;
  s.add(std::abs(g[0]));
  factor_in_[0] = s.value() / L;
  for (int R = 1; R <= Rmax; ++R) {
    s.add(2.0 * std::abs(g[R]));
    factor_in_[R] = s.value() / L;
  }
  const double c = profile.factor_decay_constant(L);
  factor_all_ = factor_in_[Rmax] + 2.0 * c * L / Rmax;
  l1_full_ = amp_ * std::pow(factor_all_, d_);
  profile_l1_ = profile.l1_norm();
  sup_bound_ = amp_ * std::pow(profile.factor_box_l1(L), d_);
}

double ProfileTable::l1_outside(int R) const {
  if (R < 0) return l1_full_;
  int r = std::min<int>(R, static_cast<int>(factor_in_.size()) - 1);
  return std::max(0.0, amp_ * (std::pow(factor_all_, d_) - std::pow(factor_in_[r], d_)));
}

namespace {

class ChainWalker {
 public:
  ChainWalker(const ChainInput& in, const SetPartition& A) : in_(in), N_(A.size()) {
    const auto& lat = *in.lattice;
    d_ = lat.dim();
    for (std::size_t i = 0; i < lat.size(); ++i) pts_.push_back(lat.coords(i));
    is_I_.assign(N_ + 1, 0);
    others_.assign(N_ + 1, {});
    PartitionMaps maps = partition_maps(A);
    for (int j : maps.I) is_I_[j] = 1;
    for (int j : maps.J)
      for (int l : A.blocks()[A.block_of(j)])
        if (l != j) others_[j].push_back(l);
    v_.assign(N_ + 1, IVec{0, 0, 0});
  }

  ChainTerm run_from(std::size_t u0) {
    acc_ = CompensatedComplexSum();
    terms_ = 0;
    cplx start = in_.endpoint[u0] * in_.props[0][u0];
    if (start != 0.0) walk(1, u0, start);
    return {acc_.value(), terms_};
  }

 private:
  void walk(int j, std::size_t cur, cplx acc) {
    if (j > N_) {
      acc_.add(acc);
      ++terms_;
      return;
    }
    const auto& next_prop = in_.props[j];
    const IVec& c = pts_[cur];
    if (is_I_[j]) {
      for (std::size_t q = 0; q < pts_.size(); ++q) {
        IVec v{0, 0, 0}, mv{0, 0, 0};
        for (int t = 0; t < d_; ++t) {
          v[t] = pts_[q][t] - c[t];
          mv[t] = -v[t];
        }
        cplx w = acc * in_.table->at(mv) * next_prop[q];
        if (w == 0.0) continue;
        v_[j] = v;
        walk(j + 1, q, w);
      }
    } else {
      IVec v{0, 0, 0}, next{0, 0, 0};
      for (int l : others_[j])
        for (int t = 0; t < d_; ++t) v[t] -= v_[l][t];
      for (int t = 0; t < d_; ++t) next[t] = c[t] + v[t];
      long q = in_.lattice->index(next);
      if (q < 0) return;
      IVec mv{-v[0], -v[1], -v[2]};
      cplx w = acc * in_.table->at(mv) * next_prop[static_cast<std::size_t>(q)];
      if (w == 0.0) return;
      v_[j] = v;
      walk(j + 1, static_cast<std::size_t>(q), w);
    }
  }

  const ChainInput& in_;
  int N_;
  int d_ = 1;
  std::vector<IVec> pts_;
  std::vector<char> is_I_;
  std::vector<std::vector<int>> others_;
  std::vector<IVec> v_;
  CompensatedComplexSum acc_;
  std::uint64_t terms_ = 0;
};

void validate(const ChainInput& in, int N) {
  if (!in.lattice || !in.table) throw std::invalid_argument("chain sum needs lattice and profile table");
  if (static_cast<int>(in.props.size()) != N + 1) throw std::invalid_argument("chain sum needs N+1 propagator tables");
  for (const auto& p : in.props)
    if (p.size() != in.lattice->size()) throw std::invalid_argument("propagator table size mismatch");
  if (in.endpoint.size() != in.lattice->size()) throw std::invalid_argument("endpoint table size mismatch");
}

}  // namespace

ChainTerm chain_partition_sum(const ChainInput& in, const SetPartition& A) {
  const int N = A.size();
  validate(in, N);
  const std::size_t free_vars = N - A.block_count() + 1;
  const double work = std::pow(static_cast<double>(in.lattice->size()), static_cast<double>(free_vars));
  if (work > in.term_limit)
    throw BudgetError("partition " + A.to_string() + " needs ~" + std::to_string(work) +
                      " terms, above the limit " + std::to_string(in.term_limit));
  const std::size_t n0 = in.lattice->size();
  std::vector<ChainTerm> parts(n0);
  const int workers = std::max(1, in.threads);
  // One walker per worker slot; u0 values are distributed in fixed chunks.
  const std::size_t chunks = std::min<std::size_t>(n0, static_cast<std::size_t>(workers));
  parallel_for(chunks, workers, [&](std::size_t c) {
    ChainWalker walker(in, A);
    for (std::size_t u0 = c; u0 < n0; u0 += chunks) parts[u0] = walker.run_from(u0);
  });
  CompensatedComplexSum total;
  std::uint64_t terms = 0;
  for (const auto& p : parts) {
    total.add(p.value);
    terms += p.terms;
  }
  const double scale = std::pow(1.0 / in.lattice->volume(), static_cast<double>(free_vars));
  return {total.value() * scale, terms};
}

ChainTerm chain_empty_sum(const ChainInput& in) {
  validate(in, 0);
  CompensatedComplexSum total;
  for (std::size_t u0 = 0; u0 < in.lattice->size(); ++u0) total.add(in.endpoint[u0] * in.props[0][u0]);
  return {total.value() / in.lattice->volume(), in.lattice->size()};
}

double shell_tail(const std::function<double(double)>& envelope, int Kin, double L, int d, double decay_from) {
  if (d < 1 || d > 3) throw std::invalid_argument("shell_tail needs d in 1..3");
  const int S = std::max(Kin, static_cast<int>(std::ceil(L * std::sqrt(std::max(0.0, decay_from))))) + 2000;
  CompensatedSum acc;
  for (int s = std::max(Kin + 1, 0); s <= S; ++s) {
    double count = s == 0 ? 1.0 : std::pow(2.0 * s + 1.0, d) - std::pow(2.0 * s - 1.0, d);
    acc.add(count * envelope(double(s) * s / (L * L)));
  }
  double far = 2.0 * d * std::pow(3.0, d - 1) * 16.0 * std::pow(L, 4.0) * std::pow(double(S), d - 4.0) / (4.0 - d);
  return (acc.value() + far) / std::pow(L, d);
}

}  // namespace wdexp
