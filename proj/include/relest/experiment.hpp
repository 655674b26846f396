#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "relest/estimation.hpp"
#include "relest/spectral.hpp"
#include "relest/topology.hpp"

namespace relest {

struct GroundTruthSpec {
  enum class Kind { zero, random_uniform, explicit_values };
  Kind kind = Kind::random_uniform;
  double low = -1.0;
  double high = 1.0;
  std::vector<double> values;
};

struct SchemeSpec {
  Scheme::Kind kind = Scheme::Kind::sigma0;
  bool optimal = false;  ///< resolve eta to eta_star of the generated graph
  double eta = 0.0;
};

struct ExperimentConfig {
  std::string name;
  TopologyRecipe recipe;  ///< recipe.seed is derived from seed, tag "topology"
  GroundTruthSpec ground_truth;
  NoiseModel noise;
  std::vector<SchemeSpec> schemes;
  std::size_t steps = 20;
  std::uint64_t seed = 0;
  std::vector<double> initial;  ///< empty: x(0) = 0
  std::filesystem::path outputs;
};

/// Relative paths inside the document (edge-list files) resolve against base_dir.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

nlohmann::json report_to_json(const SpectralReport& report);

enum class Classification { converged, converging, oscillating, diverged };
std::string classification_name(Classification c);

inline constexpr std::size_t kDecayWindow = 20;

/// Per-step contraction of the increments ||x(t) - x(t-1)||_2 over the last
/// `window` steps that sit above the round-off floor (1e-11 of the largest
/// increment). 0 when the trajectory settles within one step.
double measured_decay_ratio(const Trajectory& t, std::size_t window = kDecayWindow);

/// converged:   ||x(T) - x(T-1)||_inf < 1e-8
/// oscillating: otherwise, spectral rate within 1e-6 of 1 and the aligned
///              error flat to 1% over the last 20 steps
/// converging:  otherwise, measured decay ratio < 1
/// diverged:    anything else
Classification classify(const Trajectory& t, double spectral_rate);

struct SchemeOutcome {
  Scheme scheme;
  bool eta_optimal = false;
  double spectral_rate = 0.0;
  double final_cost = 0.0;
  double final_cost_gap = 0.0;  ///< phi(x(T)) - phi(x*)
  double final_mse = 0.0;
  double final_aligned_mse = 0.0;
  Classification classification = Classification::diverged;
  double decay_ratio = 0.0;
  std::string trajectory_file;
};

struct RunSummary {
  ExperimentConfig config;  ///< with every scheme's eta resolved
  std::string label;
  SpectralReport spectral;
  std::uint64_t generator_attempt = 0;
  std::uint64_t generator_sub_seed = 0;
  double optimal_cost = 0.0;
  std::vector<SchemeOutcome> schemes;
};

struct RunResult {
  RunSummary summary;
  Graph graph;
  std::vector<double> ground_truth;
  MeasurementSet measurements;
  std::vector<double> reference;  ///< centralized minimum-norm solution
  std::vector<Trajectory> trajectories;
};

/// Generates the graph, measurements, reference solution and one
/// trajectory per scheme. Deterministic in the config.
RunResult run(const ExperimentConfig& config);

nlohmann::json summary_to_json(const RunSummary& summary);

/// summary.json, graph.edges, measurements.txt, solution.csv and one
/// trajectory CSV per scheme, each written atomically.
void write_artifacts(const RunResult& result, const std::filesystem::path& dir);

struct SweepRow {
  double eta = 0.0;
  double measured_decay = 0.0;
  double spectral_rate = 0.0;
};

/// eta on the uniform grid k / grid, k = 0..grid-1. Throws if grid < 3.
std::vector<SweepRow> sweep_eta(const ExperimentConfig& config, std::size_t grid);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct Table2Row {
  std::string topology;
  std::size_t diameter = 0;
  double eta_star = 0.0;
  double rate_sigma0 = 0.0;
  double rate_eta_star = 0.0;
};

Table2Row table2_row(const ExperimentConfig& config);
std::vector<Table2Row> table2(const std::vector<ExperimentConfig>& configs);

/// topology,diameter,eta_star,rate_sigma0,rate_eta_star with four decimals;
/// rate_eta_star is '-' when eta_star is 0.
void write_table2_csv(std::ostream& out, const std::vector<Table2Row>& rows);

/// "node,x" CSV.
void write_solution_csv(std::ostream& out, const std::vector<double>& x);

}  // namespace relest
