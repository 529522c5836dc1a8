#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <thread>

#include "latdisc/error.hpp"
#include "latdisc/experiment.hpp"
#include "latdisc/parallel.hpp"

int main(int argc, char** argv) {
  using namespace latdisc;
  CLI::App app{"Lattice-point discrepancy lab"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  std::string config_path;
  Overrides ov;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string out;
  std::uint64_t seed = 0;
  std::vector<double> p, R;
  int grid = 0;

  app.add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  auto* o_out = app.add_option("--out", out, "Output path; the extension picks csv or json");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  auto* o_seed = app.add_option("--seed", seed, "RNG seed for randomized experiments");
  auto* o_p = app.add_option("--p", p, "Exponents p (comma separated)")->delimiter(',');
  auto* o_R = app.add_option("--R", R, "Radii R (comma separated)")->delimiter(',');
  auto* o_grid = app.add_option("--grid", grid, "Torus grid size G")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  if (*o_out) ov.out = out;
  if (*o_seed) ov.seed = seed;
  if (*o_p) ov.p = p;
  if (*o_R) ov.R = R;
  if (*o_grid) ov.grid = grid;

  try {
    std::ifstream in(config_path);
    Json config;
    try {
      config = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::config_invalid, std::string("cannot parse ") + config_path + ": " + e.what());
    }
    config = apply_overrides(std::move(config), ov);
    set_thread_count(threads);
    const auto report = run_experiment(config);
    const auto format = output_format(config);
    const auto path = output_path(config);
    if (path.empty()) {
      if (report.results.empty()) throw Error(ErrorCode::io_error, "no results to emit");
      std::cout << render_report(report, format);
    } else {
      emit_report(report, format, path);
    }
    if (!report.ok) {
      std::cerr << "latdisc: verify failed\n";
      return 1;
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "latdisc: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "latdisc: " << e.what() << "\n";
    return 2;
  }
}
