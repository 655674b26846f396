// relest: command-line front end for relative-measurement estimation.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relest/error.hpp"
#include "relest/estimation.hpp"
#include "relest/experiment.hpp"
#include "relest/graph.hpp"
#include "relest/io.hpp"
#include "relest/ring.hpp"
#include "relest/spectral.hpp"

namespace {

std::filesystem::path output_dir(const relest::ExperimentConfig& config) {
  if (const char* env = std::getenv("RELEST_OUT"); env && *env) return env;
  return config.outputs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least-squares estimation from relative measurements on networked agents"};
  app.require_subcommand(1);

  std::string graph_path;
  auto* analyze = app.add_subcommand("analyze", "Spectral report of an edge-list graph (JSON)");
  analyze->add_option("graph", graph_path, "edge-list file")->required();

  std::string measurements_path;
  auto* solve = app.add_subcommand("solve", "Centralized minimum-norm solution (CSV)");
  solve->add_option("graph", graph_path, "edge-list file")->required();
  solve->add_option("measurements", measurements_path, "'i j value' file")->required();

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run an experiment config and write artifacts");
  simulate->add_option("config", config_path, "experiment JSON")->required();

  std::size_t grid = 0;
  auto* sweep = app.add_subcommand("sweep", "Spectral and measured rate over an eta grid (CSV)");
  sweep->add_option("config", config_path, "experiment JSON")->required();
  sweep->add_option("--grid", grid, "number of grid points on [0, 1)")->required();

  std::size_t n_min = 3, n_max = 64;
  auto* table1 = app.add_subcommand("table1", "Closed-form ring quantities (CSV)");
  table1->add_option("--n-min", n_min, "smallest ring size")->required();
  table1->add_option("--n-max", n_max, "largest ring size")->required();

  std::vector<std::string> config_paths;
  auto* table2 = app.add_subcommand("table2", "Convergence parameters per topology (CSV)");
  table2->add_option("configs", config_paths, "experiment JSON files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*analyze) {
      const auto g = relest::load_edge_list(graph_path);
      std::cout << relest::report_to_json(relest::analyze(g)).dump(2) << '\n';
    } else if (*solve) {
      const auto g = relest::load_edge_list(graph_path);
      const auto m = relest::load_measurements(measurements_path, g);
      relest::write_solution_csv(std::cout, relest::centralized_solve(g, m));
    } else if (*simulate) {
      const auto config = relest::load_config(config_path);
      const auto result = relest::run(config);
      const auto dir = output_dir(config);
      relest::write_artifacts(result, dir);
      std::cout << relest::summary_to_json(result.summary).dump(2) << '\n';
      std::cerr << "artifacts written to " << dir.string() << '\n';
    } else if (*sweep) {
      const auto config = relest::load_config(config_path);
      std::ostringstream csv;
      relest::write_sweep_csv(csv, relest::sweep_eta(config, grid));
      relest::write_file_atomic(output_dir(config) / "sweep.csv", csv.str());
      std::cout << csv.str();
    } else if (*table1) {
      relest::write_table1_csv(std::cout, n_min, n_max);
    } else if (*table2) {
      std::vector<relest::ExperimentConfig> configs;
      for (const auto& p : config_paths) configs.push_back(relest::load_config(p));
      relest::write_table2_csv(std::cout, relest::table2(configs));
    }
  } catch (const relest::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const relest::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
