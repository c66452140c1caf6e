#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wdexp/lattice.hpp"
#include "wdexp/report.hpp"

namespace wdexp {

inline constexpr int kMaxPartitionSize = 12;

// Partition of {1..n}: blocks sorted ascending, blocks ordered by minimum.
class SetPartition {
 public:
  SetPartition() = default;
  // Canonicalizes and validates the given blocks.
  SetPartition(int n, std::vector<std::vector<int>> blocks);
  // From a restricted growth string (0-based block labels).
  static SetPartition from_growth_string(std::span<const int> rgs);

  int size() const { return n_; }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  // Block index (0-based) containing element j (1-based).
  int block_of(int j) const { return block_of_[j]; }
  std::string to_string() const;
  bool operator==(const SetPartition& o) const { return n_ == o.n_ && blocks_ == o.blocks_; }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

// Restricted growth string enumeration in lexicographic order.
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(int n);
  // Writes the next partition to out; false when exhausted.
  bool next(SetPartition& out);

 private:
  int n_;
  bool started_ = false;
  bool done_ = false;
  std::vector<int> rgs_, prefix_max_;
};

std::vector<SetPartition> enumerate_partitions(int n);

// Bell number by the recurrence B_{n+1} = sum_k C(n,k) B_k.
std::uint64_t bell_number(int n);

struct PartitionMaps {
  std::vector<int> J;         // block maxima, ascending
  std::vector<int> I;         // complement of J, ascending
  std::vector<int> block_of;  // block_of[j] for j = 1..n, entry 0 unused
};

PartitionMaps partition_maps(const SetPartition& A);

// M_A applied to one vector per element of I_A (ascending). Element j of the
// result is v_j for j in I_A and minus the sum of v_l over the rest of j's block
// for j in J_A.
template <class V, class Add, class Neg>
std::vector<V> apply_MA(const SetPartition& A, const std::vector<V>& v, const V& zero, Add add, Neg neg) {
  PartitionMaps maps = partition_maps(A);
  if (v.size() != maps.I.size()) throw std::invalid_argument("apply_MA: need one vector per I_A element");
  const int n = A.size();
  std::vector<V> out(n + 1, zero);
  std::vector<char> in_I(n + 1, 0);
  for (std::size_t k = 0; k < maps.I.size(); ++k) {
    out[maps.I[k]] = v[k];
    in_I[maps.I[k]] = 1;
  }
  for (int j : maps.J) {
    V s = zero;
    for (int l : A.blocks()[A.block_of(j)])
      if (l != j) s = add(s, out[l]);
    out[j] = neg(s);
  }
  out.erase(out.begin());
  return out;
}

std::vector<IVec> apply_MA(const SetPartition& A, const std::vector<IVec>& v);
// Linear forms: coefficient vectors over formal variables.
using LinearForm = std::vector<long long>;
std::vector<LinearForm> apply_MA(const SetPartition& A, const std::vector<LinearForm>& v);

// 1 iff the block containing l has its maximum above j.
int sigma(const SetPartition& A, int j, int l);

enum class WeightKind { rademacher, centered_uniform, explicit_moments };

class WeightDistribution {
 public:
  static WeightDistribution rademacher();
  // Uniform on [-sqrt 3, sqrt 3].
  static WeightDistribution centered_uniform();
  // moments[k-1] = m_k.
  static WeightDistribution explicit_moments(std::vector<double> moments);

  WeightKind kind() const { return kind_; }
  double moment(int k) const;
  bool sampleable() const { return kind_ != WeightKind::explicit_moments; }

 private:
  WeightKind kind_ = WeightKind::rademacher;
  std::vector<double> moments_;
};

// Product of m_{|a|} over the blocks of A.
double moment_weight(const SetPartition& A, const WeightDistribution& dist);

// 1 iff labels are constant on blocks and distinct across blocks.
int chi_tilde(const SetPartition& A, std::span<const int> labels);

// Exact check that sum over {1..M}^n of chi_tilde equals 1_{|A|<=M} M!/(M-|A|)!.
BoundReport permutation_count_check(const SetPartition& A, int M);

// E prod_{j<k} (N - j) for N ~ Poisson(mean), by the truncated series.
double poisson_factorial_moment(double mean, int k, double tail_tol = 1e-14);

}  // namespace wdexp
