#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latdisc/error.hpp"
#include "latdisc/experiment.hpp"
#include "latdisc/io.hpp"

using namespace latdisc;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "latdisc-cli-test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path write_config(const std::string& name, const Json& config) {
  const auto path = scratch_dir() / name;
  std::ofstream(path) << config.dump(2);
  return path;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LATDISC_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Json count_config() {
  return Json::parse(R"({"experiment":"count","body":{"kind":"ball","dim":2},"params":{"r":10}})");
}

Json norm_config() {
  return Json::parse(R"({
    "experiment": "mixed-norm",
    "body": {"kind": "ball", "dim": 2},
    "measure": {"kind": "dirac"},
    "params": {"p": [2, 4], "R": [6], "grid": 32}
  })");
}

}  // namespace

TEST_CASE("body and measure JSON round trip") {
  Eigen::MatrixXd M(2, 2);
  M << 1.25, 0.1, -0.3, 0.8;
  Eigen::VectorXd p(2);
  p << 0.1, -0.2;
  const auto body = ConvexBody::ellipsoid(M, p);
  const auto back = body_from_json(Json::parse(to_json(body).dump()));
  CHECK(back.matrix() == body.matrix());
  CHECK(back.center() == body.center());
  CHECK(to_json(back).dump() == to_json(body).dump());
  for (const auto& m : {DilationMeasure::dirac(0.5), DilationMeasure::uniform01(), DilationMeasure::power_law(0.3),
                        DilationMeasure::smooth_bump()}) {
    const auto again = measure_from_json(Json::parse(to_json(m).dump()));
    CHECK(again.kind() == m.kind());
    CHECK(again.alpha() == m.alpha());
    CHECK(to_json(again).dump() == to_json(m).dump());
  }
  CHECK_THROWS_AS(body_from_json(Json::parse(R"({"kind":"cube","dim":2})")), Error);
}

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("count experiment") {
  const auto rep = run_experiment(count_config());
  CHECK(rep.extra["count"] == 317);
  const auto text = render_report(rep, "json");
  const auto parsed = Json::parse(text);
  CHECK(parsed["count"] == 317);
  CHECK(parsed["tool"] == "latdisc");
  // parse(emit(x)) = x
  CHECK(Json::parse(parsed.dump()) == parsed);
  CHECK(render_report(rep, "json") == text);
}

TEST_CASE("mixed-norm CSV") {
  const auto rep = run_experiment(norm_config());
  const auto csv = render_report(rep, "csv");
  std::istringstream in(csv);
  std::string meta, header, row2, row4, extra;
  std::getline(in, meta);
  std::getline(in, header);
  std::getline(in, row2);
  std::getline(in, row4);
  CHECK(meta.rfind("# tool=latdisc", 0) == 0);
  CHECK(header == "d,body,measure,beta,p,H,R,G,radial_mode,value,meta_tail");
  CHECK_FALSE(std::getline(in, extra));
  auto value = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream s(line);
    for (std::string c; std::getline(s, c, ',');) cells.push_back(c);
    return std::stod(cells.at(9));
  };
  CHECK(value(row2) <= value(row4));

  auto one = norm_config();
  one["params"]["p"] = Json::array({2});
  const auto single = render_report(run_experiment(one), "csv");
  CHECK(std::count(single.begin(), single.end(), '\n') == 3);
}

TEST_CASE("emit refuses empty results") {
  Report rep;
  rep.experiment = "count";
  rep.columns = {"r", "count"};
  const auto path = scratch_dir() / "empty.json";
  fs::remove(path);
  try {
    emit_report(rep, "json", path.string());
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io_error);
  }
  CHECK_FALSE(fs::exists(path));
}

TEST_CASE("config validation") {
  auto bad = count_config();
  bad["experiment"] = "nope";
  CHECK_THROWS_AS(run_experiment(bad), Error);
  auto missing = count_config();
  missing["params"].erase("r");
  CHECK_THROWS_AS(run_experiment(missing), Error);
  auto costly = norm_config();
  costly["params"]["budget"] = 10;
  try {
    run_experiment(costly);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::budget_exceeded);
  }
}

TEST_CASE("overrides") {
  Overrides o;
  o.p = std::vector<double>{3.0};
  o.R = std::vector<double>{5.0, 7.0};
  o.grid = 16;
  o.out = "x.csv";
  const auto c = apply_overrides(norm_config(), o);
  CHECK(c["params"]["p"] == Json::array({3.0}));
  CHECK(c["params"]["grid"] == 16);
  CHECK(output_format(c) == "csv");
  Overrides elsewhere;
  elsewhere.out = "y.json";
  CHECK(config_hash(c) == config_hash(apply_overrides(c, elsewhere)));
}

TEST_CASE("command line runs are byte-identical") {
  const auto cfg = write_config("norm.json", norm_config());
  const auto a = scratch_dir() / "a.csv";
  const auto b = scratch_dir() / "b.csv";
  REQUIRE(run_cli(cfg.string() + " --out " + a.string() + " --threads 1") == 0);
  REQUIRE(run_cli(cfg.string() + " --out " + b.string() + " --threads 3") == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());

  const auto c = scratch_dir() / "c.csv";
  REQUIRE(run_cli(cfg.string() + " --out " + c.string() + " --p 2,3 --R 4 --grid 8") == 0);
  std::istringstream in(slurp(c));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) rows += line.rfind("2,ball", 0) == 0;
  CHECK(rows == 2);
}

TEST_CASE("command line errors exit nonzero") {
  auto bad = count_config();
  bad["body"]["dim"] = "two";
  const auto cfg = write_config("bad.json", bad);
  CHECK(run_cli(cfg.string()) != 0);
  CHECK(run_cli((scratch_dir() / "does-not-exist.json").string()) != 0);
  const auto good = write_config("count.json", count_config());
  const auto out = scratch_dir() / "count.json.out";
  CHECK(run_cli(good.string() + " --out " + out.string()) == 0);
  CHECK(Json::parse(slurp(out))["count"] == 317);
}
