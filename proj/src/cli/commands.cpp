#include "wdexp/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "wdexp/bounds.hpp"
#include "wdexp/dos.hpp"
#include "wdexp/errors.hpp"

namespace wdexp {

namespace {

using json = nlohmann::json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(long long x) { return std::to_string(x); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

const char* profile_name(ProfileKind k) { return k == ProfileKind::gaussian ? "gaussian" : "cosine_bump"; }

// Model metadata appended to every CSV row.
std::vector<std::string> model_header() {
  return {"d", "L", "K", "profile", "amplitude", "width", "radius", "weights", "seed"};
}

std::vector<std::string> model_cells(const ModelConfig& m, std::optional<std::uint64_t> seed) {
  return {num(static_cast<long long>(m.d)), num(m.L), num(static_cast<long long>(m.K)),
          profile_name(m.profile.kind), num(m.profile.amplitude), num(m.profile.width), num(m.profile.radius),
          m.weights_name, seed ? std::to_string(*seed) : std::string("")};
}

json model_json(const ModelConfig& m) {
  auto wp = [&](const Wavepacket& w) {
    return json{{"center", std::vector<double>(w.center.begin(), w.center.begin() + m.d)},
                {"wavevector", std::vector<double>(w.wavevector.begin(), w.wavevector.begin() + m.d)},
                {"width", w.width}};
  };
  json j{{"d", m.d},
         {"L", m.L},
         {"K", m.K},
         {"profile",
          {{"kind", profile_name(m.profile.kind)},
           {"amplitude", m.profile.amplitude},
           {"width", m.profile.width},
           {"radius", m.profile.radius}}},
         {"weights", m.weights_name},
         {"psi1", wp(m.psi1)},
         {"psi2", wp(m.psi2)}};
  return j;
}

class Writer {
 public:
  Writer(std::string dir, const std::vector<std::string>& formats, CommandResult& result)
      : dir_(std::move(dir)), result_(result) {
    for (const auto& f : formats) {
      if (f == "csv") csv_ = true;
      if (f == "json") json_ = true;
    }
    std::filesystem::create_directories(dir_);
  }
  void table(const std::string& name, const Table& t) {
    if (csv_) write(name + ".csv", t.csv());
  }
  void report(const std::string& name, const json& j) {
    if (json_) write(name + ".json", j.dump(2) + "\n");
  }

 private:
  void write(const std::string& file, const std::string& content) {
    auto path = (std::filesystem::path(dir_) / file).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    result_.files.push_back(path);
  }
  std::string dir_;
  CommandResult& result_;
  bool csv_ = false, json_ = false;
};

ExpansionModel make_model(const ModelConfig& m) {
  return ExpansionModel(MomentumLattice(m.d, m.L, m.K), Profile(m.profile, m.d), m.weights);
}

std::uint64_t need_seed(std::optional<std::uint64_t> cli, std::optional<std::uint64_t> cfg) {
  if (cli) return *cli;
  if (cfg) return *cfg;
  throw ConfigError("a seed is required for stochastic studies (study.seed or --seed)");
}

json report_json(const BoundReport& r) {
  json p = json::object();
  for (const auto& [k, v] : r.parameters) p[k] = v;
  return json{{"name", r.name}, {"parameters", p}, {"lhs", r.lhs},      {"rhs", r.rhs},
              {"margin", r.margin}, {"pass", r.pass}, {"notes", r.notes}};
}

std::string params_string(const BoundReport& r) {
  std::string s;
  for (const auto& [k, v] : r.parameters) s += (s.empty() ? "" : ";") + k + "=" + num(v);
  return s;
}

// Weighted least squares slope of log|y| against log x with log errors se/|y|.
struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0, ci_hi = 0.0;
};

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& se) {
  CompensatedSum sw, swx, swy, swxx, swxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    double s = se.empty() ? 1.0 : std::max(se[i] / std::abs(y[i]), 1e-12);
    double w = 1.0 / (s * s);
    sw.add(w);
    swx.add(w * lx);
    swy.add(w * ly);
    swxx.add(w * lx * lx);
    swxy.add(w * lx * ly);
  }
  const double det = sw.value() * swxx.value() - swx.value() * swx.value();
  if (!(det > 0.0)) throw std::invalid_argument("slope fit needs two distinct abscissae");
  SlopeFit f;
  f.slope = (sw.value() * swxy.value() - swx.value() * swy.value()) / det;
  f.std_error = se.empty() ? 0.0 : std::sqrt(sw.value() / det);
  f.ci_lo = f.slope - 1.96 * f.std_error;
  f.ci_hi = f.slope + 1.96 * f.std_error;
  return f;
}

CommandResult cmd_expand(const RunConfig& rc, const ExpandStudy& s, const std::string& dir, int threads) {
  CommandResult res;
  Writer out(dir, rc.formats, res);
  ExpansionModel model = make_model(rc.model);
  LatticeState psi1 = wavepacket_state(rc.model.psi1, model.lattice());
  LatticeState psi2 = wavepacket_state(rc.model.psi2, model.lattice());
  CoefficientOptions opts;
  opts.threads = threads;
  opts.record_per_partition = s.per_partition;
  Table t{{"n", "re_z", "im_z", "re_T", "im_T", "partition_count", "tail_bound", "bound"}, {}};
  Table parts{{"n", "re_z", "im_z", "partition", "re_C", "im_C"}, {}};
  for (auto& h : model_header()) t.header.push_back(h);
  json rows = json::array();
  for (const auto& z : s.z_list) {
    for (int n = 0; n <= s.n_max; ++n) {
      CoefficientResult r = coefficient_T(model, n, z, psi1, psi2, opts);
      double bound = coefficient_bound(model, n, z, psi1.norm, psi2.norm);
      bool ok = std::isfinite(std::abs(r.value)) && std::abs(r.value) <= bound * (1.0 + 1e-12);
      res.pass = res.pass && ok;
      std::vector<std::string> row{num(static_cast<long long>(n)), num(z.z().real()), num(z.z().imag()),
                                   num(r.value.real()), num(r.value.imag()),
                                   num(static_cast<long long>(r.partition_count)), num(r.truncation_tail_bound),
                                   num(bound)};
      for (auto& c : model_cells(rc.model, std::nullopt)) row.push_back(c);
      t.rows.push_back(row);
      for (const auto& [A, c] : r.per_partition)
        parts.rows.push_back({num(static_cast<long long>(n)), num(z.z().real()), num(z.z().imag()), A.to_string(),
                              num(c.real()), num(c.imag())});
      rows.push_back({{"n", n},
                      {"z", {z.z().real(), z.z().imag()}},
                      {"T", {r.value.real(), r.value.imag()}},
                      {"partition_count", r.partition_count},
                      {"term_count", r.term_count},
                      {"tail_bound", r.truncation_tail_bound},
                      {"bound", bound},
                      {"within_bound", ok}});
    }
  }
  out.table("expand", t);
  if (s.per_partition) out.table("expand_partitions", parts);
  out.report("expand", {{"command", "expand"}, {"model", model_json(rc.model)}, {"rows", rows}, {"pass", res.pass}});
  res.summary.push_back("expand: " + std::to_string(t.rows.size()) + " coefficients, all within bound: " +
                        (res.pass ? "yes" : "no"));
  return res;
}

CommandResult cmd_mc_validate(const RunConfig& rc, const McValidateStudy& s, const std::string& dir, int threads,
                              std::optional<std::uint64_t> cli_seed) {
  CommandResult res;
  const std::uint64_t seed = need_seed(cli_seed, s.seed);
  Writer out(dir, rc.formats, res);
  ExpansionModel model = make_model(rc.model);
  LatticeState psi1 = wavepacket_state(rc.model.psi1, model.lattice());
  LatticeState psi2 = wavepacket_state(rc.model.psi2, model.lattice());
  SpectralParameter z(s.E, s.eta);
  McOptions mo;
  mo.n_samples = s.samples;
  mo.seed = seed;
  mo.threads = threads;
  CoefficientOptions co;
  co.threads = threads;
  std::vector<ResidualRow> rows = residual_sweep(model, s.lambdas, s.kept, z, psi1, psi2, mo);

  // Order of the first coefficient beyond the kept ones that does not vanish.
  std::vector<cplx> T;
  for (int j = 0; j <= s.kept + 1; ++j) T.push_back(coefficient_T(model, j, z, psi1, psi2, co).value);
  const double scale = std::max(1.0, std::abs(T[0]));
  const int expected_slope = std::abs(T[s.kept + 1]) > 1e-12 * scale ? s.kept + 1 : s.kept + 2;

  Table t{{"lambda", "re_mc", "im_mc", "mc_std_error", "re_partial", "im_partial", "re_residual", "im_residual",
           "residual_std_error", "re_residual_cv", "im_residual_cv", "residual_cv_std_error"},
          {}};
  for (int n : s.bound_orders) t.header.push_back("bound_rhs_n" + std::to_string(n));
  t.header.push_back("pass");
  t.header.push_back("E");
  t.header.push_back("eta");
  t.header.push_back("kept");
  t.header.push_back("samples");
  for (auto& h : model_header()) t.header.push_back(h);

  json jrows = json::array();
  std::vector<double> fx, fy, fse;
  for (const auto& r : rows) {
    std::vector<double> rhs;
    for (int n : s.bound_orders)
      rhs.push_back(main_error_bound_rhs(n, rc.model.d, s.E, s.eta, r.lambda, rc.model.profile, rc.model.weights,
                                         psi1.norm, psi2.norm)
                        .rhs);
    const double primary = rhs.empty() ? std::numeric_limits<double>::infinity() : rhs.front();
    const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(r.mc_mean));
    const bool ok = std::abs(r.residual_cv) <= primary + 3.0 * r.residual_cv_std_error + roundoff;
    res.pass = res.pass && ok;
    std::vector<std::string> row{num(r.lambda),
                                 num(r.mc_mean.real()),
                                 num(r.mc_mean.imag()),
                                 num(r.mc_std_error),
                                 num(r.partial_sum.real()),
                                 num(r.partial_sum.imag()),
                                 num(r.residual.real()),
                                 num(r.residual.imag()),
                                 num(r.residual_std_error),
                                 num(r.residual_cv.real()),
                                 num(r.residual_cv.imag()),
                                 num(r.residual_cv_std_error)};
    for (double x : rhs) row.push_back(num(x));
    row.push_back(ok ? "1" : "0");
    row.push_back(num(s.E));
    row.push_back(num(s.eta));
    row.push_back(num(static_cast<long long>(s.kept)));
    row.push_back(num(static_cast<long long>(s.samples)));
    for (auto& c : model_cells(rc.model, seed)) row.push_back(c);
    t.rows.push_back(row);
    jrows.push_back({{"lambda", r.lambda},
                     {"mc", {r.mc_mean.real(), r.mc_mean.imag()}},
                     {"mc_std_error", r.mc_std_error},
                     {"partial_sum", {r.partial_sum.real(), r.partial_sum.imag()}},
                     {"residual", {r.residual.real(), r.residual.imag()}},
                     {"residual_std_error", r.residual_std_error},
                     {"residual_cv", {r.residual_cv.real(), r.residual_cv.imag()}},
                     {"residual_cv_std_error", r.residual_cv_std_error},
                     {"bound_rhs", rhs},
                     {"pass", ok}});
    if (r.lambda > 0.0 && std::abs(r.residual_cv) > 0.0) {
      fx.push_back(r.lambda);
      fy.push_back(std::abs(r.residual_cv));
      fse.push_back(r.residual_cv_std_error);
    }
  }
  json jfit = nullptr;
  if (fx.size() >= 2) {
    SlopeFit f = fit_slope(fx, fy, fse);
    const bool slope_ok = std::abs(f.slope - expected_slope) <= 0.5;
    res.pass = res.pass && slope_ok;
    jfit = {{"slope", f.slope},     {"std_error", f.std_error}, {"ci95", {f.ci_lo, f.ci_hi}},
            {"expected", expected_slope}, {"tolerance", 0.5}, {"pass", slope_ok}};
    char buf[160];
    std::snprintf(buf, sizeof buf, "mc-validate: residual slope %.3f (95%% CI %.3f..%.3f), expected %d", f.slope,
                  f.ci_lo, f.ci_hi, expected_slope);
    res.summary.push_back(buf);
  }
  json jT = json::array();
  for (const auto& x : T) jT.push_back({x.real(), x.imag()});
  out.table("mc_validate", t);
  out.report("mc_validate", {{"command", "mc-validate"},
                             {"model", model_json(rc.model)},
                             {"seed", seed},
                             {"samples", s.samples},
                             {"z", {s.E, s.eta}},
                             {"kept", s.kept},
                             {"coefficients", jT},
                             {"bound_orders", s.bound_orders},
                             {"rows", jrows},
                             {"slope_fit", jfit},
                             {"residual_estimator",
                              "control variates: per-sample Neumann terms j <= kept+1 subtracted, "
                              "(-lambda)^(kept+1) T_(kept+1) added back"},
                             {"pass", res.pass}});
  res.summary.push_back(std::string("mc-validate: residuals within bound: ") + (res.pass ? "yes" : "no"));
  return res;
}

CommandResult cmd_dos(const RunConfig& rc, const DosStudy& s, const std::string& dir, int threads,
                      std::optional<std::uint64_t> cli_seed) {
  CommandResult res;
  std::optional<std::uint64_t> seed;
  if (s.mc) seed = need_seed(cli_seed, s.seed);
  Writer out(dir, rc.formats, res);
  ExpansionModel model = make_model(rc.model);
  const double eta = s.eta ? *s.eta : dos_eta(s.lambda, s.epsilon);
  const int max_order = s.max_order < 0 ? dos_order_cap(rc.model.d) : s.max_order;
  CoefficientOptions co;
  co.threads = threads;
  DosExpansion ex = dos_expansion(model, s.chi, s.lambda, eta, max_order, co);

  double surrogate = 0.0;
  json jsur = json::array();
  for (int n : s.surrogate_orders) {
    double integral = 0.0;
    bool found = false;
    for (const auto& o : ex.orders)
      if (o.n == n) {
        integral = o.integral;
        found = true;
      }
    if (!found) integral = dos_order(model, s.chi, eta, n, co).integral;
    const double c = std::pow(s.lambda, n) * std::abs(integral);
    surrogate += c;
    jsur.push_back({{"n", n}, {"integral", integral}, {"abs_contribution", c}});
  }

  Table t{{"n", "integral", "contribution", "quad_error", "tail_bound", "lambda", "eta", "epsilon", "chi_center",
           "chi_width"},
          {}};
  for (auto& h : model_header()) t.header.push_back(h);
  json jorders = json::array();
  for (const auto& o : ex.orders) {
    std::vector<std::string> row{num(static_cast<long long>(o.n)), num(o.integral), num(o.contribution),
                                 num(o.quad_error), num(o.tail_bound), num(s.lambda), num(eta), num(s.epsilon),
                                 num(s.chi.center), num(s.chi.width)};
    for (auto& c : model_cells(rc.model, seed)) row.push_back(c);
    t.rows.push_back(row);
    jorders.push_back({{"n", o.n},
                       {"integral", o.integral},
                       {"contribution", o.contribution},
                       {"quad_error", o.quad_error},
                       {"tail_bound", o.tail_bound}});
  }
  json j{{"command", "dos"},
         {"model", model_json(rc.model)},
         {"lambda", s.lambda},
         {"epsilon", s.epsilon},
         {"eta", eta},
         {"eta_source", s.eta ? "explicit" : "lambda^(2-epsilon)"},
         {"chi", {{"center", s.chi.center}, {"width", s.chi.width}}},
         {"max_order", ex.max_order},
         {"orders", jorders},
         {"expansion", ex.total},
         {"note", ex.note},
         {"remainder_surrogate", surrogate},
         {"surrogate_terms", jsur}};
  char buf[200];
  std::snprintf(buf, sizeof buf, "dos: expansion through order %d = %.12g (eta %.6g)", ex.max_order, ex.total, eta);
  res.summary.push_back(buf);
  if (s.mc) {
    McOptions mo;
    mo.n_samples = s.samples;
    mo.seed = *seed;
    mo.threads = threads;
    EstimatorResult mc = dos_mc(model, s.chi, s.lambda, eta, mo);
    const double diff = ex.total - mc.mean.real();
    const bool agree = std::abs(diff) <= 3.0 * mc.std_error + surrogate;
    double stone_gap = 0.0;
    for (std::size_t i = 0; i < s.stone_samples; ++i) {
      PoissonConfig c = sample_config(model.lattice(), model.dist(), *seed, i);
      double a = smoothed_trace_sample(c, s.lambda, s.chi, eta, model);
      double b = smoothed_trace_stone(c, s.lambda, s.chi, eta, model, s.stone_nodes);
      stone_gap = std::max(stone_gap, std::abs(a - b));
    }
    const bool stone_ok = stone_gap <= 1e-8;
    res.pass = agree && stone_ok;
    j["seed"] = *seed;
    j["samples"] = s.samples;
    j["mc_mean"] = mc.mean.real();
    j["mc_std_error"] = mc.std_error;
    j["difference"] = diff;
    j["agreement_tolerance"] = 3.0 * mc.std_error + surrogate;
    j["agree"] = agree;
    j["stone_samples"] = s.stone_samples;
    j["stone_max_difference"] = stone_gap;
    j["stone_pass"] = stone_ok;
    std::snprintf(buf, sizeof buf, "dos: MC %.12g +- %.3g, difference %.3g, tolerance %.3g, agree %s", mc.mean.real(),
                  mc.std_error, diff, 3.0 * mc.std_error + surrogate, agree ? "yes" : "no");
    res.summary.push_back(buf);
  }
  j["pass"] = res.pass;
  out.table("dos", t);
  out.report("dos", j);
  return res;
}

CommandResult cmd_bounds(const RunConfig& rc, const BoundsStudy& s, const std::string& dir, int threads) {
  CommandResult res;
  Writer out(dir, rc.formats, res);
  std::vector<BoundReport> reports;
  if (s.grid == "default") reports = default_bound_grid(threads);
  Table t{{"name", "parameters", "lhs", "rhs", "margin", "pass", "notes"}, {}};
  json jr = json::array();
  std::size_t failed = 0;
  for (const auto& r : reports) {
    t.rows.push_back({r.name, params_string(r), num(r.lhs), num(r.rhs), num(r.margin), r.pass ? "1" : "0", r.notes});
    jr.push_back(report_json(r));
    if (!r.pass) ++failed;
  }
  res.pass = failed == 0;
  json j{{"command", "bounds"}, {"grid", s.grid}, {"reports", jr}, {"failed", failed}};
  if (s.main_bound) {
    json jm = json::array();
    LatticeState psi = wavepacket_state(rc.model.psi1, MomentumLattice(rc.model.d, rc.model.L, rc.model.K));
    for (int n = 0; n <= 4; ++n) {
      MainErrorBound b = main_error_bound_rhs(n, rc.model.d, s.E, s.eta, s.lambda, rc.model.profile,
                                              rc.model.weights, psi.norm, psi.norm);
      jm.push_back({{"n", n}, {"K", b.K}, {"C_tilde", b.C_tilde}, {"c_B", b.c_B}, {"rhs", b.rhs}});
    }
    j["main_error_bound"] = {{"E", s.E}, {"eta", s.eta}, {"lambda", s.lambda}, {"c_B_source", "measured"},
                             {"orders", jm}};
  }
  j["pass"] = res.pass;
  out.table("bounds", t);
  out.report("bounds", j);
  res.summary.push_back("bounds: " + std::to_string(reports.size()) + " checks, " + std::to_string(failed) +
                        " failed");
  for (const auto& r : reports)
    if (!r.pass) res.summary.push_back("  FAIL " + r.name + " " + params_string(r) + " lhs=" + num(r.lhs) +
                                       " rhs=" + num(r.rhs));
  return res;
}

CommandResult cmd_scaling(const RunConfig& rc, const ScalingStudy& s, const std::string& dir, int threads) {
  CommandResult res;
  Writer out(dir, rc.formats, res);
  ExpansionModel model = make_model(rc.model);
  LatticeState psi1 = wavepacket_state(rc.model.psi1, model.lattice());
  LatticeState psi2 = wavepacket_state(rc.model.psi2, model.lattice());
  CoefficientOptions co;
  co.threads = threads;
  auto probe_table = [&](const ProbeTable& p, const char* param) {
    Table t{{param, "re_T", "im_T", "delta", "bound", "tail_bound", "n", "E"}, {}};
    for (auto& h : model_header()) t.header.push_back(h);
    json rows = json::array();
    for (const auto& r : p.rows) {
      std::vector<std::string> row{num(r.parameter), num(r.value.real()), num(r.value.imag()), num(r.delta),
                                   num(r.bound), num(r.tail_bound), num(static_cast<long long>(s.n)), num(s.E)};
      for (auto& c : model_cells(rc.model, std::nullopt)) row.push_back(c);
      t.rows.push_back(row);
      rows.push_back({{param, r.parameter},
                      {"T", {r.value.real(), r.value.imag()}},
                      {"delta", r.delta},
                      {"bound", r.bound},
                      {"tail_bound", r.tail_bound}});
    }
    return std::make_pair(t, json{{"rows", rows}, {"cauchy", p.cauchy}});
  };
  json j{{"command", "scaling"}, {"model", model_json(rc.model)}, {"n", s.n}, {"E", s.E}};
  if (!s.etas.empty()) {
    auto [t, jj] = probe_table(eta_limit_probe(model, s.n, s.E, s.etas, psi1, psi2, co), "eta");
    out.table("scaling_eta", t);
    j["eta_probe"] = jj;
  }
  if (!s.Ls.empty()) {
    SpectralParameter z(s.E, s.eta);
    auto [t, jj] = probe_table(volume_limit_probe(s.n, z.z(), s.Ls, s.cutoff_momentum, rc.model.d, rc.model.profile,
                                                  rc.model.weights, rc.model.psi1, rc.model.psi2, co),
                               "L");
    out.table("scaling_volume", t);
    j["volume_probe"] = jj;
    j["volume_probe"]["eta"] = s.eta;
    j["volume_probe"]["cutoff_momentum"] = s.cutoff_momentum;
  }
  const int n = s.bound_order;
  Table tb{{"lambda", "eta", "rhs", "rhs_without_log", "order", "epsilon", "E"}, {}};
  std::vector<double> lam, raw, corrected;
  for (double l : s.lambdas) {
    const double eta = dos_eta(l, s.epsilon);
    MainErrorBound b = main_error_bound_rhs(n, rc.model.d, s.E, eta, l, rc.model.profile, rc.model.weights,
                                            psi1.norm, psi2.norm);
    const double c = b.rhs / std::pow(1.0 + std::log(1.0 / eta + 1.0), n);
    lam.push_back(l);
    raw.push_back(b.rhs);
    corrected.push_back(c);
    tb.rows.push_back({num(l), num(eta), num(b.rhs), num(c), num(static_cast<long long>(n)), num(s.epsilon), num(s.E)});
  }
  const double expected = n - (2.0 - s.epsilon) * (0.5 * n + 1.5);
  const double slope_raw = fit_slope(lam, raw, {}).slope;
  const double slope = fit_slope(lam, corrected, {}).slope;
  const bool ok = std::abs(slope - expected) <= 0.05 * std::abs(expected);
  res.pass = ok;
  out.table("scaling_bound", tb);
  j["bound_slope"] = {{"order", n},         {"epsilon", s.epsilon}, {"expected", expected},
                      {"slope_raw", slope_raw}, {"slope_log_corrected", slope}, {"pass", ok}};
  j["pass"] = res.pass;
  out.report("scaling", j);
  char buf[160];
  std::snprintf(buf, sizeof buf, "scaling: bound slope %.4f (raw %.4f), expected %.4f", slope, slope_raw, expected);
  res.summary.push_back(buf);
  return res;
}

CommandResult cmd_partitions(const RunConfig& rc, const PartitionsStudy& s, const std::string& dir) {
  CommandResult res;
  Writer out(dir, rc.formats, res);
  Table t{{"check", "n", "M", "value", "expected", "pass"}, {}};
  auto add = [&](const std::string& name, long long n, long long M, const std::string& v, const std::string& e,
                 bool ok) {
    t.rows.push_back({name, num(n), num(M), v, e, ok ? "1" : "0"});
    res.pass = res.pass && ok;
  };
  for (int n = 1; n <= s.n_max; ++n) {
    auto parts = enumerate_partitions(n);
    for (int M = 1; M <= s.M_max; ++M) {
      // Every label tuple is covered by exactly one partition.
      std::vector<int> labels(n, 1);
      long long tuples = 0, bad = 0;
      for (;;) {
        long long sum = 0;
        for (const auto& A : parts) sum += chi_tilde(A, labels);
        ++tuples;
        if (sum != 1) ++bad;
        int j = 0;
        while (j < n && ++labels[j] > M) labels[j++] = 1;
        if (j == n) break;
      }
      add("partition_of_unity", n, M, num(tuples - bad), num(tuples), bad == 0);
      long long count_bad = 0;
      for (const auto& A : parts)
        if (!permutation_count_check(A, M).pass) ++count_bad;
      add("permutation_count", n, M, num(static_cast<long long>(parts.size()) - count_bad),
          num(static_cast<long long>(parts.size())), count_bad == 0);
    }
    long long zero_bad = 0;
    for (const auto& A : parts) {
      const std::size_t free = partition_maps(A).I.size();
      std::vector<LinearForm> v(free, LinearForm(free, 0));
      for (std::size_t k = 0; k < free; ++k) v[k][k] = 1;
      LinearForm total(free, 0);
      for (const auto& f : apply_MA(A, v))
        for (std::size_t k = 0; k < free; ++k) total[k] += f[k];
      for (long long c : total)
        if (c != 0) ++zero_bad;
    }
    add("apply_MA_zero_sum", n, 0, num(zero_bad), "0", zero_bad == 0);
  }
  for (int n = 1; n <= s.bell_max; ++n) {
    std::uint64_t count = 0;
    PartitionEnumerator en(n);
    SetPartition A;
    while (en.next(A)) ++count;
    add("bell_number", n, 0, std::to_string(count), std::to_string(bell_number(n)), count == bell_number(n));
  }
  for (double mean : s.poisson_means)
    for (int k = 1; k <= s.k_max; ++k) {
      const double v = poisson_factorial_moment(mean, k), e = std::pow(mean, k);
      add("poisson_factorial_moment_mean=" + num(mean), k, 0, num(v), num(e),
          std::abs(v - e) <= 1e-10 * std::max(1.0, e));
    }
  for (const char* name : {"rademacher", "centered_uniform"}) {
    WeightDistribution w =
        std::string(name) == "rademacher" ? WeightDistribution::rademacher() : WeightDistribution::centered_uniform();
    for (int k = 1; k <= 7; k += 2) add(std::string("odd_moment_zero_") + name, k, 0, num(w.moment(k)), "0", w.moment(k) == 0.0);
  }
  out.table("partitions", t);
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"check", r[0]}, {"n", r[1]}, {"M", r[2]}, {"value", r[3]}, {"expected", r[4]}, {"pass", r[5] == "1"}});
  out.report("partitions", {{"command", "partitions"}, {"rows", rows}, {"pass", res.pass}});
  res.summary.push_back("partitions: " + std::to_string(t.rows.size()) + " identities, all pass: " +
                        (res.pass ? "yes" : "no"));
  return res;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"expand", "mc-validate", "dos", "bounds", "scaling", "partitions"};
  return names;
}

CommandResult run_command(const RunConfig& rc, const std::string& out_dir, int threads,
                          std::optional<std::uint64_t> seed) {
  return std::visit(
      [&](const auto& s) -> CommandResult {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, ExpandStudy>) return cmd_expand(rc, s, out_dir, threads);
        else if constexpr (std::is_same_v<S, McValidateStudy>) return cmd_mc_validate(rc, s, out_dir, threads, seed);
        else if constexpr (std::is_same_v<S, DosStudy>) return cmd_dos(rc, s, out_dir, threads, seed);
        else if constexpr (std::is_same_v<S, BoundsStudy>) return cmd_bounds(rc, s, out_dir, threads);
        else if constexpr (std::is_same_v<S, ScalingStudy>) return cmd_scaling(rc, s, out_dir, threads);
        else return cmd_partitions(rc, s, out_dir);
      },
      rc.study);
}

int run_cli(const CliOptions& o) {
  try {
    RunConfig rc = load_config(o.config_path, o.command);
    const std::string dir = o.out_dir ? *o.out_dir : rc.out_dir;
    const int threads = o.threads > 0 ? o.threads : default_threads();
    CommandResult r = run_command(rc, dir, threads, o.seed);
    for (const auto& line : r.summary) std::cout << line << '\n';
    for (const auto& f : r.files) std::cout << "wrote " << f << '\n';
    if (o.check && !r.pass) {
      std::cerr << "check failed\n";
      return kExitCheck;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace wdexp
