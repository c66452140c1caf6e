#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "wdexp/partitions.hpp"

using namespace wdexp;

namespace {

// Bell numbers from the triangle, independent of the library recurrence.
std::uint64_t bell_triangle(int n) {
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto x : row) next.push_back(next.back() + x);
    row = next;
  }
  return row.front();
}

SetPartition random_partition(std::mt19937_64& gen, int n) {
  std::vector<int> rgs(n);
  int mx = -1;
  for (int i = 0; i < n; ++i) {
    rgs[i] = std::uniform_int_distribution<int>(0, mx + 1)(gen);
    mx = std::max(mx, rgs[i]);
  }
  return SetPartition::from_growth_string(rgs);
}

}  // namespace

TEST_CASE("partition counts") {
  CHECK(enumerate_partitions(1).size() == 1);
  CHECK(enumerate_partitions(1)[0] == SetPartition(1, {{1}}));
  CHECK(enumerate_partitions(3).size() == 5);
  CHECK(enumerate_partitions(8).size() == 4140);
  for (int n = 1; n <= 10; ++n) {
    CHECK(bell_number(n) == bell_triangle(n));
    std::uint64_t count = 0;
    PartitionEnumerator e(n);
    SetPartition A;
    while (e.next(A)) ++count;
    CHECK(count == bell_triangle(n));
  }
}

TEST_CASE("enumeration is in restricted growth string order and distinct") {
  auto all = enumerate_partitions(5);
  std::set<std::string> seen;
  for (const auto& A : all) seen.insert(A.to_string());
  CHECK(seen.size() == all.size());
  CHECK(all.front() == SetPartition(5, {{1, 2, 3, 4, 5}}));
  CHECK(all.back() == SetPartition(5, {{1}, {2}, {3}, {4}, {5}}));
}

TEST_CASE("set partition validation") {
  CHECK_THROWS(SetPartition(3, {{1, 2}}));
  CHECK_THROWS(SetPartition(2, {{1, 2}, {2}}));
  CHECK(SetPartition(3, {{3, 1}, {2}}) == SetPartition(3, {{1, 3}, {2}}));
}

TEST_CASE("block maxima and complement") {
  auto m = partition_maps(SetPartition(2, {{1, 2}}));
  CHECK(m.J == std::vector<int>{2});
  CHECK(m.I == std::vector<int>{1});
  m = partition_maps(SetPartition(2, {{1}, {2}}));
  CHECK(m.J == std::vector<int>{1, 2});
  CHECK(m.I.empty());
  m = partition_maps(SetPartition(10, {{1, 6}, {2, 5}, {3, 7, 9, 10}, {4, 8}}));
  CHECK(m.J == std::vector<int>{5, 6, 8, 10});
  CHECK(m.I == std::vector<int>{1, 2, 3, 4, 7, 9});
}

TEST_CASE("apply_MA cases") {
  IVec a{1, 2, 3}, b{-4, 5, 0};
  auto r = apply_MA(SetPartition(2, {{1, 2}}), {a});
  CHECK(r == std::vector<IVec>{a, IVec{-1, -2, -3}});
  r = apply_MA(SetPartition(2, {{1}, {2}}), std::vector<IVec>{});
  CHECK(r == std::vector<IVec>{IVec{}, IVec{}});
  r = apply_MA(SetPartition(4, {{1, 3}, {2, 4}}), {a, b});
  CHECK(r == std::vector<IVec>{a, b, IVec{-1, -2, -3}, IVec{4, -5, 0}});
  CHECK_THROWS(apply_MA(SetPartition(2, {{1, 2}}), std::vector<IVec>{}));
}

TEST_CASE("apply_MA sums to zero per block on all partitions up to n=7") {
  for (int n = 1; n <= 7; ++n)
    for (const auto& A : enumerate_partitions(n)) {
      auto maps = partition_maps(A);
      std::vector<LinearForm> v;
      for (std::size_t k = 0; k < maps.I.size(); ++k) {
        LinearForm f(maps.I.size(), 0);
        f[k] = 1;
        v.push_back(f);
      }
      auto out = apply_MA(A, v);
      for (const auto& block : A.blocks()) {
        LinearForm s(maps.I.size(), 0);
        for (int j : block)
          for (std::size_t k = 0; k < s.size(); ++k) s[k] += out[j - 1][k];
        CHECK(s == LinearForm(maps.I.size(), 0));
      }
    }
}

TEST_CASE("sigma") {
  SetPartition A(2, {{1, 2}});
  CHECK(sigma(A, 1, 1) == 1);
  CHECK(sigma(A, 2, 1) == 0);
}

TEST_CASE("telescoping identity as exact linear forms") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 10;
    SetPartition A = random_partition(gen, n);
    auto maps = partition_maps(A);
    // Variables: u0 then one per I_A element.
    std::size_t w = maps.I.size() + 1;
    std::vector<LinearForm> v;
    std::map<int, std::size_t> var;
    for (std::size_t k = 0; k < maps.I.size(); ++k) {
      LinearForm f(w, 0);
      f[k + 1] = 1;
      v.push_back(f);
      var[maps.I[k]] = k + 1;
    }
    auto Mu = apply_MA(A, v);
    for (int j = 2; j <= n + 1; ++j) {
      if (!var.count(j - 1)) continue;
      LinearForm lhs(w, 0);
      lhs[0] = 1;
      for (int l = 1; l < j; ++l)
        for (std::size_t k = 0; k < w; ++k) lhs[k] += Mu[l - 1][k];
      LinearForm rhs(w, 0);
      rhs[0] = 1;
      rhs[var[j - 1]] += 1;
      for (int l = 1; l <= j - 2; ++l)
        if (var.count(l)) rhs[var[l]] += sigma(A, j - 2, l);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("moments and moment weights") {
  auto rad = WeightDistribution::rademacher();
  CHECK(moment_weight(SetPartition(4, {{1, 2}, {3, 4}}), rad) == 1.0);
  CHECK(moment_weight(SetPartition(4, {{1, 2, 3, 4}}), rad) == 1.0);
  CHECK(moment_weight(SetPartition(3, {{1, 2}, {3}}), rad) == 0.0);
  auto uni = WeightDistribution::centered_uniform();
  CHECK(uni.moment(1) == 0.0);
  CHECK(uni.moment(2) == doctest::Approx(1.0));
  CHECK(uni.moment(4) == doctest::Approx(9.0 / 5.0));
  CHECK(uni.moment(6) == doctest::Approx(27.0 / 7.0));
  CHECK(moment_weight(SetPartition(6, {{1, 2}, {3, 4, 5, 6}}), uni) == doctest::Approx(9.0 / 5.0));
  auto ex = WeightDistribution::explicit_moments({0.0, 2.0});
  CHECK(ex.moment(2) == 2.0);
  CHECK_THROWS(ex.moment(3));
  CHECK_FALSE(ex.sampleable());
}

TEST_CASE("chi_tilde and partition of unity") {
  CHECK(chi_tilde(SetPartition(2, {{1, 2}}), std::vector<int>{3, 3}) == 1);
  CHECK(chi_tilde(SetPartition(2, {{1}, {2}}), std::vector<int>{3, 3}) == 0);
  for (int n = 1; n <= 5; ++n) {
    auto parts = enumerate_partitions(n);
    std::vector<int> g(n, 1);
    while (true) {
      // The partition induced by equal labels is the only one selected.
      std::map<int, std::vector<int>> cls;
      for (int j = 0; j < n; ++j) cls[g[j]].push_back(j + 1);
      std::vector<std::vector<int>> blocks;
      for (auto& [label, b] : cls) blocks.push_back(b);
      SetPartition induced(n, blocks);
      int total = 0;
      for (const auto& A : parts) {
        int c = chi_tilde(A, g);
        total += c;
        if (c) CHECK(A == induced);
      }
      CHECK(total == 1);
      int j = 0;
      while (j < n && g[j] == 4) g[j++] = 1;
      if (j == n) break;
      ++g[j];
    }
  }
}

TEST_CASE("permutation counts") {
  auto r = permutation_count_check(SetPartition(2, {{1, 2}}), 3);
  CHECK(r.pass);
  CHECK(r.lhs == 3.0);
  r = permutation_count_check(SetPartition(2, {{1}, {2}}), 3);
  CHECK(r.lhs == 6.0);
  CHECK(r.rhs == 6.0);
  r = permutation_count_check(SetPartition(3, {{1}, {2}, {3}}), 2);
  CHECK(r.pass);
  CHECK(r.lhs == 0.0);
}

TEST_CASE("poisson factorial moments") {
  CHECK(poisson_factorial_moment(2.0, 3) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(poisson_factorial_moment(1.0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(poisson_factorial_moment(4.0, 5) - 1024.0) <= 1e-10 * 1024.0);
  for (double mean : {0.5, 1.0, 2.0, 4.0})
    for (int k = 1; k <= 5; ++k)
      CHECK(std::abs(poisson_factorial_moment(mean, k) - std::pow(mean, k)) <= 1e-10 * std::pow(mean, k));
}
