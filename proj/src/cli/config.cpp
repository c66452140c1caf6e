#include "wdexp/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "wdexp/errors.hpp"

namespace wdexp {

namespace {

using json = nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
T get(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("wrong type for '" + std::string(key) + "' in " + where);
  }
}

template <class T>
T get_or(const json& j, const std::string& where, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, where, key) : fallback;
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

double positive(double x, const std::string& name) {
  require(std::isfinite(x) && x > 0.0, name + " must be positive");
  return x;
}

RVec vec3(const json& j, const std::string& where, const char* key, int d) {
  RVec v{0.0, 0.0, 0.0};
  if (!j.contains(key)) return v;
  auto xs = get<std::vector<double>>(j, where, key);
  require(static_cast<int>(xs.size()) == d, where + "." + key + " must have d entries");
  for (int i = 0; i < d; ++i) v[i] = xs[i];
  return v;
}

Wavepacket parse_wavepacket(const json& j, const std::string& where, int d) {
  only_keys(j, where, {"center", "wavevector", "width"});
  Wavepacket w;
  w.center = vec3(j, where, "center", d);
  w.wavevector = vec3(j, where, "wavevector", d);
  w.width = positive(get_or<double>(j, where, "width", 1.0), where + ".width");
  return w;
}

ModelConfig parse_model(const json& j) {
  only_keys(j, "model", {"d", "L", "K", "profile", "weights", "psi1", "psi2"});
  ModelConfig m;
  m.d = get<int>(j, "model", "d");
  require(m.d >= 1 && m.d <= 3, "model.d must be 1, 2 or 3");
  m.L = get<double>(j, "model", "L");
  require(std::isfinite(m.L) && m.L >= 1.0, "model.L must be >= 1");
  m.K = get<int>(j, "model", "K");
  require(m.K >= 1, "model.K must be >= 1");
  if (j.contains("profile")) {
    const json& p = j.at("profile");
    only_keys(p, "model.profile", {"kind", "amplitude", "width", "radius"});
    auto kind = get_or<std::string>(p, "model.profile", "kind", "gaussian");
    if (kind == "gaussian") m.profile.kind = ProfileKind::gaussian;
    else if (kind == "cosine_bump") m.profile.kind = ProfileKind::cosine_bump;
    else throw ConfigError("model.profile.kind must be gaussian or cosine_bump");
    m.profile.amplitude = get_or<double>(p, "model.profile", "amplitude", 1.0);
    m.profile.width = positive(get_or<double>(p, "model.profile", "width", 1.0), "model.profile.width");
    m.profile.radius = positive(get_or<double>(p, "model.profile", "radius", 0.5), "model.profile.radius");
  }
  if (j.contains("weights")) {
    const json& w = j.at("weights");
    only_keys(w, "model.weights", {"kind", "moments"});
    m.weights_name = get<std::string>(w, "model.weights", "kind");
    if (m.weights_name == "rademacher") {
      m.weights = WeightDistribution::rademacher();
    } else if (m.weights_name == "centered_uniform") {
      m.weights = WeightDistribution::centered_uniform();
    } else if (m.weights_name == "explicit_moments") {
      m.weights = WeightDistribution::explicit_moments(get<std::vector<double>>(w, "model.weights", "moments"));
    } else {
      throw ConfigError("model.weights.kind must be rademacher, centered_uniform or explicit_moments");
    }
    if (m.weights_name != "explicit_moments" && w.contains("moments"))
      throw ConfigError("model.weights.moments only applies to explicit_moments");
  }
  if (j.contains("psi1")) m.psi1 = parse_wavepacket(j.at("psi1"), "model.psi1", m.d);
  m.psi2 = j.contains("psi2") ? parse_wavepacket(j.at("psi2"), "model.psi2", m.d) : m.psi1;
  try {
    Profile(m.profile, m.d).require_box(m.L);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model.profile: ") + e.what());
  }
  return m;
}

std::vector<double> positive_list(const json& j, const std::string& where, const char* key, bool allow_zero) {
  auto xs = get<std::vector<double>>(j, where, key);
  for (double x : xs)
    require(std::isfinite(x) && (allow_zero ? x >= 0.0 : x > 0.0),
            where + "." + key + (allow_zero ? " entries must be >= 0" : " entries must be positive"));
  return xs;
}

std::optional<std::uint64_t> parse_seed(const json& j, const std::string& where) {
  if (!j.contains("seed")) return std::nullopt;
  return get<std::uint64_t>(j, where, "seed");
}

StudyConfig parse_study(const json& j, const std::string& command) {
  const std::string w = "study";
  auto kind = get<std::string>(j, w, "kind");
  require(kind == command, "study.kind '" + kind + "' does not match command '" + command + "'");
  if (kind == "expand") {
    only_keys(j, w, {"kind", "n_max", "z", "per_partition"});
    ExpandStudy s;
    s.n_max = get<int>(j, w, "n_max");
    require(s.n_max >= 0 && s.n_max <= 8, "study.n_max must be in 0..8");
    require(j.contains("z"), "missing key 'z' in study");
    const json& zs = j.at("z");
    require(zs.is_array() && !zs.empty(), "study.z must be a non-empty array");
    for (const auto& z : zs) {
      only_keys(z, "study.z[]", {"E", "eta", "sign"});
      double eta = positive(get<double>(z, "study.z[]", "eta"), "study.z[].eta");
      int sign = get_or<int>(z, "study.z[]", "sign", 1);
      require(sign == 1 || sign == -1, "study.z[].sign must be 1 or -1");
      s.z_list.emplace_back(get<double>(z, "study.z[]", "E"), eta, sign);
    }
    s.per_partition = get_or<bool>(j, w, "per_partition", false);
    return s;
  }
  if (kind == "mc-validate") {
    only_keys(j, w, {"kind", "E", "eta", "lambdas", "kept", "samples", "seed", "bound_orders"});
    McValidateStudy s;
    s.E = get<double>(j, w, "E");
    s.eta = positive(get<double>(j, w, "eta"), "study.eta");
    s.lambdas = positive_list(j, w, "lambdas", true);
    require(!s.lambdas.empty(), "study.lambdas must be non-empty");
    s.kept = get_or<int>(j, w, "kept", 2);
    require(s.kept >= 0 && s.kept <= 3, "study.kept must be in 0..3");
    s.samples = get<std::size_t>(j, w, "samples");
    require(s.samples >= 2, "study.samples must be >= 2");
    s.seed = parse_seed(j, w);
    s.bound_orders = get_or<std::vector<int>>(j, w, "bound_orders", s.bound_orders);
    for (int n : s.bound_orders) require(n >= 0 && n <= 4, "study.bound_orders entries must be in 0..4");
    return s;
  }
  if (kind == "dos") {
    only_keys(j, w, {"kind", "lambda", "epsilon", "eta", "max_order", "surrogate_orders", "chi", "mc", "samples",
                     "seed", "stone_samples", "stone_nodes"});
    DosStudy s;
    s.lambda = get<double>(j, w, "lambda");
    require(std::isfinite(s.lambda) && s.lambda >= 0.0, "study.lambda must be >= 0");
    s.epsilon = get_or<double>(j, w, "epsilon", 0.5);
    require(s.epsilon > 0.0 && s.epsilon <= 1.0, "study.epsilon must lie in (0, 1]");
    if (j.contains("eta")) s.eta = positive(get<double>(j, w, "eta"), "study.eta");
    else require(s.lambda > 0.0, "study.eta is required when lambda = 0");
    s.max_order = get_or<int>(j, w, "max_order", -1);
    require(s.max_order >= -1 && s.max_order <= 4, "study.max_order must be in 0..4");
    s.surrogate_orders = get_or<std::vector<int>>(j, w, "surrogate_orders", s.surrogate_orders);
    for (int n : s.surrogate_orders) require(n >= 1 && n <= 4, "study.surrogate_orders entries must be in 1..4");
    if (j.contains("chi")) {
      const json& c = j.at("chi");
      only_keys(c, "study.chi", {"center", "width"});
      s.chi.center = get_or<double>(c, "study.chi", "center", 1.0);
      s.chi.width = get_or<double>(c, "study.chi", "width", 0.5);
      try {
        validate_bump(s.chi);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("study.chi: ") + e.what());
      }
    }
    s.mc = get_or<bool>(j, w, "mc", true);
    s.samples = get_or<std::size_t>(j, w, "samples", s.samples);
    require(!s.mc || s.samples >= 2, "study.samples must be >= 2");
    s.seed = parse_seed(j, w);
    s.stone_samples = get_or<std::size_t>(j, w, "stone_samples", s.stone_samples);
    s.stone_nodes = get_or<int>(j, w, "stone_nodes", s.stone_nodes);
    require(s.stone_nodes >= 20 && s.stone_nodes % 20 == 0, "study.stone_nodes must be a positive multiple of 20");
    return s;
  }
  if (kind == "bounds") {
    only_keys(j, w, {"kind", "grid", "main_bound", "E", "eta", "lambda"});
    BoundsStudy s;
    s.grid = get_or<std::string>(j, w, "grid", "default");
    require(s.grid == "default" || s.grid == "empty", "study.grid must be default or empty");
    s.main_bound = get_or<bool>(j, w, "main_bound", s.grid == "default");
    s.E = positive(get_or<double>(j, w, "E", 1.0), "study.E");
    s.eta = positive(get_or<double>(j, w, "eta", 0.3), "study.eta");
    s.lambda = get_or<double>(j, w, "lambda", 0.05);
    require(s.lambda >= 0.0, "study.lambda must be >= 0");
    return s;
  }
  if (kind == "scaling") {
    only_keys(j, w, {"kind", "n", "E", "etas", "eta", "Ls", "cutoff_momentum", "lambdas", "epsilon", "bound_order"});
    ScalingStudy s;
    s.n = get<int>(j, w, "n");
    require(s.n >= 0 && s.n <= 4, "study.n must be in 0..4");
    s.E = get<double>(j, w, "E");
    s.etas = positive_list(j, w, "etas", false);
    s.eta = positive(get<double>(j, w, "eta"), "study.eta");
    s.Ls = get<std::vector<double>>(j, w, "Ls");
    for (double L : s.Ls) require(L >= 1.0, "study.Ls entries must be >= 1");
    s.cutoff_momentum = positive(get<double>(j, w, "cutoff_momentum"), "study.cutoff_momentum");
    s.lambdas = positive_list(j, w, "lambdas", false);
    require(s.lambdas.size() >= 2, "study.lambdas needs at least two entries");
    s.epsilon = get_or<double>(j, w, "epsilon", 0.5);
    require(s.epsilon > 0.0 && s.epsilon <= 1.0, "study.epsilon must lie in (0, 1]");
    s.bound_order = get_or<int>(j, w, "bound_order", 3);
    require(s.bound_order >= 1 && s.bound_order <= 4, "study.bound_order must be in 1..4");
    return s;
  }
  if (kind == "partitions") {
    only_keys(j, w, {"kind", "n_max", "M_max", "bell_max", "poisson_means", "k_max"});
    PartitionsStudy s;
    s.n_max = get_or<int>(j, w, "n_max", 4);
    require(s.n_max >= 1 && s.n_max <= 6, "study.n_max must be in 1..6");
    s.M_max = get_or<int>(j, w, "M_max", 5);
    require(s.M_max >= 1 && s.M_max <= 8, "study.M_max must be in 1..8");
    s.bell_max = get_or<int>(j, w, "bell_max", 10);
    require(s.bell_max >= 0 && s.bell_max <= kMaxPartitionSize, "study.bell_max out of range");
    s.poisson_means = get_or<std::vector<double>>(j, w, "poisson_means", s.poisson_means);
    for (double m : s.poisson_means) positive(m, "study.poisson_means entries");
    s.k_max = get_or<int>(j, w, "k_max", 5);
    require(s.k_max >= 0 && s.k_max <= 12, "study.k_max must be in 0..12");
    return s;
  }
  throw ConfigError("unknown study kind '" + kind + "'");
}

}  // namespace

bool is_stochastic(const StudyConfig& study) {
  if (std::holds_alternative<McValidateStudy>(study)) return true;
  if (auto* d = std::get_if<DosStudy>(&study)) return d->mc;
  return false;
}

RunConfig parse_config(const std::string& text, const std::string& command) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(j, "config", {"model", "study", "output"});
  RunConfig rc;
  rc.command = command;
  if (!j.contains("model")) throw ConfigError("missing model block");
  if (!j.contains("study")) throw ConfigError("missing study block");
  rc.model = parse_model(j.at("model"));
  rc.study = parse_study(j.at("study"), command);
  if (j.contains("output")) {
    const json& o = j.at("output");
    only_keys(o, "output", {"directory", "formats"});
    rc.out_dir = get_or<std::string>(o, "output", "directory", rc.out_dir);
    rc.formats = get_or<std::vector<std::string>>(o, "output", "formats", rc.formats);
    for (const auto& f : rc.formats) require(f == "csv" || f == "json", "output.formats entries must be csv or json");
  }
  if (is_stochastic(rc.study) && !rc.model.weights.sampleable())
    throw ConfigError("stochastic studies need a sampleable weight distribution");
  return rc;
}

RunConfig load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), command);
}

}  // namespace wdexp
