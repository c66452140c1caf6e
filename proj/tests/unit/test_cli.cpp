#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wdexp/cli.hpp"
#include "wdexp/errors.hpp"

using namespace wdexp;
namespace fs = std::filesystem;

namespace {

const std::string kModel =
    R"("model": {"d": 1, "L": 2.0, "K": 4, "profile": {"kind": "gaussian", "amplitude": 1.0, "width": 1.0},
                 "weights": {"kind": "rademacher"}, "psi1": {"center": [0.0], "wavevector": [0.0], "width": 1.0}})";

std::string with_study(const std::string& study) { return "{" + kModel + ", \"study\": " + study + "}"; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("wdexp_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  auto rc = parse_config(with_study(R"({"kind": "expand", "n_max": 2, "z": [{"E": 1.0, "eta": 0.3}]})"), "expand");
  CHECK(rc.model.K == 4);
  CHECK(std::get<ExpandStudy>(rc.study).n_max == 2);
  CHECK(rc.model.psi2.width == rc.model.psi1.width);
  CHECK_FALSE(is_stochastic(rc.study));
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config(with_study(R"({"kind": "expand", "n_max": 2, "bogus": 1})"), "expand"), ConfigError);
  CHECK_THROWS_AS(parse_config(with_study(R"({"kind": "expand", "n_max": "two"})"), "expand"), ConfigError);
  CHECK_THROWS_AS(parse_config(with_study(R"({"kind": "bounds"})"), "expand"), ConfigError);
  CHECK_THROWS_AS(parse_config("{not json", "expand"), ConfigError);
  CHECK_THROWS_AS(parse_config(with_study(R"({"kind": "mc-validate", "E": 1.0, "eta": 0.3, "lambdas": [0.1], "eta": -1.0, "seed": 1})"),
                               "mc-validate"),
                  ConfigError);
  std::string explicit_model =
      R"({"model": {"d": 1, "L": 2.0, "K": 4, "weights": {"kind": "explicit_moments", "moments": [0, 1]}},
          "study": {"kind": "mc-validate", "E": 1.0, "eta": 0.3, "lambdas": [0.1], "seed": 1}})";
  CHECK_THROWS_AS(parse_config(explicit_model, "mc-validate"), ConfigError);
}

TEST_CASE("stochastic studies need a seed") {
  auto rc = parse_config(with_study(R"({"kind": "mc-validate", "E": 1.0, "eta": 0.3, "lambdas": [0.1], "samples": 10})"), "mc-validate");
  CHECK(is_stochastic(rc.study));
  CHECK_THROWS_AS(run_command(rc, scratch("noseed").string(), 1, std::nullopt), ConfigError);
}

TEST_CASE("empty bounds grid writes a header-only table") {
  auto rc = parse_config(with_study(R"({"kind": "bounds", "grid": "empty", "main_bound": false})"), "bounds");
  auto dir = scratch("empty");
  auto res = run_command(rc, dir.string(), 1, std::nullopt);
  CHECK(res.pass);
  std::string csv = slurp((dir / "bounds.csv").string());
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
}

TEST_CASE("reruns are byte identical at any thread count") {
  const std::string cfg = with_study(R"({"kind": "mc-validate", "E": 1.0, "eta": 0.3, "lambdas": [0.0, 0.1, 0.05], "samples": 60})");
  auto rc = parse_config(cfg, "mc-validate");
  auto a = scratch("det_a"), b = scratch("det_b");
  auto ra = run_command(rc, a.string(), 1, 42);
  auto rb = run_command(rc, b.string(), 3, 42);
  REQUIRE(ra.files.size() == rb.files.size());
  for (std::size_t i = 0; i < ra.files.size(); ++i) {
    auto name = fs::path(ra.files[i]).filename();
    CHECK(slurp((a / name).string()) == slurp((b / name).string()));
  }
  auto c = scratch("det_c");
  run_command(rc, c.string(), 1, 43);
  CHECK(slurp((a / "mc_validate.csv").string()) != slurp((c / "mc_validate.csv").string()));
}

TEST_CASE("cli exit codes") {
  auto dir = scratch("exit");
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream((dir / name).string()) << text;
    return (dir / name).string();
  };
  CliOptions o;
  o.out_dir = (dir / "out").string();
  o.threads = 1;
  o.command = "expand";
  o.config_path = write("bad.json", with_study(R"({"kind": "expand", "typo": 1})"));
  CHECK(run_cli(o) == kExitConfig);
  o.config_path = write("budget.json",
                        R"({"model": {"d": 3, "L": 2.0, "K": 40}, "study": {"kind": "expand", "n_max": 1, "z": [{"E": 1.0, "eta": 0.3}]}})");
  CHECK(run_cli(o) == kExitBudget);
  o.config_path = write("ok.json", with_study(R"({"kind": "expand", "n_max": 2, "z": [{"E": 1.0, "eta": 0.3}]})"));
  o.check = true;
  CHECK(run_cli(o) == kExitOk);
  std::string csv = slurp((dir / "out" / "expand.csv").string());
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}
