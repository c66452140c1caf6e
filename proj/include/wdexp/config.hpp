#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wdexp/coefficients.hpp"
#include "wdexp/montecarlo.hpp"

namespace wdexp {

struct ModelConfig {
  int d = 1;
  double L = 2.0;
  int K = 8;
  ProfileSpec profile;
  std::string weights_name = "rademacher";
  WeightDistribution weights = WeightDistribution::rademacher();
  Wavepacket psi1;
  Wavepacket psi2;
};

struct ExpandStudy {
  int n_max = 2;
  std::vector<SpectralParameter> z_list;
  bool per_partition = false;
};

struct McValidateStudy {
  double E = 1.0;
  double eta = 0.3;
  std::vector<double> lambdas;
  int kept = 2;
  std::size_t samples = 20000;
  std::optional<std::uint64_t> seed;
  std::vector<int> bound_orders{3, 2};
};

struct DosStudy {
  double lambda = 0.05;
  double epsilon = 0.5;
  std::optional<double> eta;  // defaults to lambda^{2 - epsilon}
  int max_order = -1;         // -1: module cap
  std::vector<int> surrogate_orders{3, 4};
  Bump chi;
  bool mc = true;
  std::size_t samples = 20000;
  std::optional<std::uint64_t> seed;
  std::size_t stone_samples = 2;
  int stone_nodes = 2000;
};

struct BoundsStudy {
  std::string grid = "default";  // default | empty
  bool main_bound = true;
  double E = 1.0;
  double eta = 0.3;
  double lambda = 0.05;
};

struct ScalingStudy {
  int n = 2;
  double E = 1.0;
  std::vector<double> etas;
  double eta = 0.5;
  std::vector<double> Ls;
  double cutoff_momentum = 4.0;
  std::vector<double> lambdas;
  double epsilon = 0.5;
  int bound_order = 3;
};

struct PartitionsStudy {
  int n_max = 4;
  int M_max = 5;
  int bell_max = 10;
  std::vector<double> poisson_means{0.5, 1.0, 2.0, 4.0};
  int k_max = 5;
};

using StudyConfig = std::variant<ExpandStudy, McValidateStudy, DosStudy, BoundsStudy, ScalingStudy, PartitionsStudy>;

struct RunConfig {
  std::string command;
  ModelConfig model;
  StudyConfig study;
  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
};

// Strict JSON config: unknown keys, wrong types and out-of-range values throw ConfigError.
RunConfig parse_config(const std::string& text, const std::string& command);
RunConfig load_config(const std::string& path, const std::string& command);

bool is_stochastic(const StudyConfig& study);

}  // namespace wdexp
