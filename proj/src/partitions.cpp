#include "wdexp/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wdexp/errors.hpp"

namespace wdexp {

SetPartition::SetPartition(int n, std::vector<std::vector<int>> blocks) : n_(n), blocks_(std::move(blocks)) {
  if (n < 0) throw std::invalid_argument("partition ground set size must be nonnegative");
  block_of_.assign(n + 1, -1);
  for (auto& b : blocks_) {
    if (b.empty()) throw std::invalid_argument("partition blocks must be nonempty");
    std::sort(b.begin(), b.end());
  }
  std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    for (int j : blocks_[k]) {
      if (j < 1 || j > n) throw std::invalid_argument("partition element out of range");
      if (block_of_[j] != -1) throw std::invalid_argument("partition blocks overlap");
      block_of_[j] = static_cast<int>(k);
    }
  }
  for (int j = 1; j <= n; ++j)
    if (block_of_[j] == -1) throw std::invalid_argument("partition blocks do not cover the ground set");
}

SetPartition SetPartition::from_growth_string(std::span<const int> rgs) {
  std::vector<std::vector<int>> blocks;
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    int b = rgs[i];
    if (b < 0 || b > static_cast<int>(blocks.size())) throw std::invalid_argument("invalid restricted growth string");
    if (b == static_cast<int>(blocks.size())) blocks.emplace_back();
    blocks[b].push_back(static_cast<int>(i) + 1);
  }
  return SetPartition(static_cast<int>(rgs.size()), std::move(blocks));
}

std::string SetPartition::to_string() const {
  std::ostringstream os;
  for (const auto& b : blocks_) {
    os << '{';
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
    os << '}';
  }
  return os.str();
}

PartitionEnumerator::PartitionEnumerator(int n) : n_(n) {
  if (n < 1 || n > kMaxPartitionSize)
    throw BudgetError("partition enumeration supports 1 <= n <= " + std::to_string(kMaxPartitionSize));
  rgs_.assign(n, 0);
  prefix_max_.assign(n, 0);
}

bool PartitionEnumerator::next(SetPartition& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
    out = SetPartition::from_growth_string(rgs_);
    return true;
  }
  // Increment the rightmost position that can grow, reset the tail to zero.
  int i = n_ - 1;
  while (i > 0 && rgs_[i] > prefix_max_[i - 1]) --i;
  if (i == 0) {
    done_ = true;
    return false;
  }
  ++rgs_[i];
  prefix_max_[i] = std::max(prefix_max_[i - 1], rgs_[i]);
  for (int k = i + 1; k < n_; ++k) {
    rgs_[k] = 0;
    prefix_max_[k] = prefix_max_[k - 1];
  }
  out = SetPartition::from_growth_string(rgs_);
  return true;
}

std::vector<SetPartition> enumerate_partitions(int n) {
  PartitionEnumerator it(n);
  std::vector<SetPartition> all;
  SetPartition A;
  while (it.next(A)) all.push_back(A);
  return all;
}

std::uint64_t bell_number(int n) {
  if (n < 0 || n > 25) throw std::invalid_argument("bell_number supports 0 <= n <= 25");
  std::vector<std::uint64_t> B{1};
  for (int m = 0; m < n; ++m) {
    std::uint64_t next = 0, binom = 1;
    for (int k = 0; k <= m; ++k) {
      next += binom * B[k];
      binom = binom * (m - k) / (k + 1);
    }
    B.push_back(next);
  }
  return B[n];
}

PartitionMaps partition_maps(const SetPartition& A) {
  PartitionMaps m;
  const int n = A.size();
  m.block_of.assign(n + 1, -1);
  std::vector<char> is_max(n + 1, 0);
  for (const auto& b : A.blocks()) is_max[b.back()] = 1;
  for (int j = 1; j <= n; ++j) {
    m.block_of[j] = A.block_of(j);
    (is_max[j] ? m.J : m.I).push_back(j);
  }
  return m;
}

std::vector<IVec> apply_MA(const SetPartition& A, const std::vector<IVec>& v) {
  auto add = [](const IVec& a, const IVec& b) { return IVec{a[0] + b[0], a[1] + b[1], a[2] + b[2]}; };
  auto neg = [](const IVec& a) { return IVec{-a[0], -a[1], -a[2]}; };
  return apply_MA(A, v, IVec{0, 0, 0}, add, neg);
}

std::vector<LinearForm> apply_MA(const SetPartition& A, const std::vector<LinearForm>& v) {
  std::size_t width = v.empty() ? 0 : v.front().size();
  for (const auto& f : v)
    if (f.size() != width) throw std::invalid_argument("apply_MA: linear forms differ in length");
  auto add = [](const LinearForm& a, const LinearForm& b) {
    LinearForm r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
  };
  auto neg = [](const LinearForm& a) {
    LinearForm r(a);
    for (auto& x : r) x = -x;
    return r;
  };
  return apply_MA(A, v, LinearForm(width, 0), add, neg);
}

int sigma(const SetPartition& A, int j, int l) {
  if (l < 1 || l > A.size()) throw std::invalid_argument("sigma: index out of range");
  return A.blocks()[A.block_of(l)].back() > j ? 1 : 0;
}

WeightDistribution WeightDistribution::rademacher() {
  WeightDistribution w;
  w.kind_ = WeightKind::rademacher;
  return w;
}

WeightDistribution WeightDistribution::centered_uniform() {
  WeightDistribution w;
  w.kind_ = WeightKind::centered_uniform;
  return w;
}

WeightDistribution WeightDistribution::explicit_moments(std::vector<double> moments) {
  for (double m : moments)
    if (!std::isfinite(m)) throw std::invalid_argument("moments must be finite");
  WeightDistribution w;
  w.kind_ = WeightKind::explicit_moments;
  w.moments_ = std::move(moments);
  return w;
}

double WeightDistribution::moment(int k) const {
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (k == 0) return 1.0;
  switch (kind_) {
    case WeightKind::rademacher: return k % 2 == 0 ? 1.0 : 0.0;
    case WeightKind::centered_uniform: return k % 2 == 0 ? std::pow(3.0, k / 2) / (k + 1) : 0.0;
    case WeightKind::explicit_moments:
      if (k > static_cast<int>(moments_.size()))
        throw std::invalid_argument("moment m_" + std::to_string(k) + " not provided");
      return moments_[k - 1];
  }
  return 0.0;
}

double moment_weight(const SetPartition& A, const WeightDistribution& dist) {
  double w = 1.0;
  for (const auto& b : A.blocks()) w *= dist.moment(static_cast<int>(b.size()));
  return w;
}

int chi_tilde(const SetPartition& A, std::span<const int> labels) {
  if (static_cast<int>(labels.size()) != A.size()) throw std::invalid_argument("chi_tilde: label count mismatch");
  std::vector<int> block_label;
  for (const auto& b : A.blocks()) {
    int lab = labels[b.front() - 1];
    for (int j : b)
      if (labels[j - 1] != lab) return 0;
    block_label.push_back(lab);
  }
  std::sort(block_label.begin(), block_label.end());
  return std::adjacent_find(block_label.begin(), block_label.end()) == block_label.end() ? 1 : 0;
}

BoundReport permutation_count_check(const SetPartition& A, int M) {
  const int n = A.size();
  if (n < 1 || n > 5 || M < 1 || M > 6) throw std::invalid_argument("permutation_count_check needs n <= 5, M <= 6");
  long long count = 0;
  std::vector<int> labels(n, 1);
  for (;;) {
    count += chi_tilde(A, labels);
    int i = 0;
    while (i < n && labels[i] == M) labels[i++] = 1;
    if (i == n) break;
    ++labels[i];
  }
  const int blocks = static_cast<int>(A.block_count());
  long long falling = 0;
  if (blocks <= M) {
    falling = 1;
    for (int j = 0; j < blocks; ++j) falling *= (M - j);
  }
  BoundReport r = make_report("permutation_count", {{"n", double(n)}, {"M", double(M)}, {"blocks", double(blocks)}},
                              double(count), double(falling), A.to_string());
  r.pass = (count == falling);
  r.margin = double(falling - count);
  return r;
}

double poisson_factorial_moment(double mean, int k, double tail_tol) {
  if (!(mean > 0.0)) throw std::invalid_argument("Poisson mean must be positive");
  if (k < 1) throw std::invalid_argument("factorial moment order must be >= 1");
  // term_n = e^{-mean} mean^n / (n-k)!, starting at n = k.
  double term = std::exp(-mean) * std::pow(mean, k);
  CompensatedSum acc;
  for (int j = 0;; ++j) {
    acc.add(term);
    double ratio = mean / (j + 1);
    double next = term * ratio;
    if (ratio < 0.5 && next / (1.0 - ratio) <= tail_tol) break;
    term = next;
    if (j > 100000) break;
  }
  return acc.value();
}

}  // namespace wdexp
