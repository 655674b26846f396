#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "oracles.hpp"
#include "relest/error.hpp"
#include "relest/experiment.hpp"
#include "relest/io.hpp"

using namespace relest;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ExperimentConfig config_from(const std::string& text) {
  return parse_config(json::parse(text), fs::path(RELEST_SOURCE_DIR) / "configs");
}

ExperimentConfig k36() {
  return config_from(R"({"name": "K_36", "seed": 36, "topology": {"family": "complete", "n": 36},
    "schemes": ["sigma0", {"scheme": "sigma_eta", "eta": "optimal"}], "steps": 20})");
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("relest_test_" + name);
  fs::remove_all(dir);
  return dir;
}

Trajectory synthetic(const std::vector<std::vector<double>>& states,
                     const std::vector<double>& aligned) {
  Trajectory t;
  t.states = states;
  t.aligned_mse = aligned;
  t.cost.assign(states.size(), 0.0);
  t.mse = aligned;
  return t;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("K_36 run resolves the optimal eta and converges") {
  const auto r = run(k36());
  REQUIRE(r.summary.schemes.size() == 2);
  const auto& opt = r.summary.schemes[1];
  CHECK(opt.eta_optimal);
  CHECK(std::abs(opt.scheme.eta - 0.0278) < 1e-3);
  CHECK(std::abs(r.summary.config.schemes[1].eta - 1.0 / 36.0) < 1e-12);
  CHECK(std::abs(opt.spectral_rate) < 1e-9);
  CHECK(opt.classification == Classification::converged);
  CHECK(r.summary.schemes[0].classification == Classification::converged);
  CHECK(opt.final_cost_gap < 1e-12);
  const auto echoed = summary_to_json(r.summary);
  CHECK(echoed["config"]["schemes"][1]["eta"].get<double>() == r.summary.config.schemes[1].eta);
}

TEST_CASE("reruns write byte-identical artifacts") {
  const auto a = scratch_dir("rerun_a");
  const auto b = scratch_dir("rerun_b");
  auto config = config_from(R"({"seed": 5, "topology": {"family": "erdos_renyi", "n": 20, "p": 0.3},
    "noise": {"model": "gaussian", "std": 0.05},
    "schemes": ["sigma0", {"scheme": "sigma_eta", "eta": "optimal"}, {"scheme": "sigma_eta", "eta": 0.5}],
    "steps": 40})");
  write_artifacts(run(config), a);
  write_artifacts(run(config), b);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    CHECK(read_file(entry.path()) == read_file(b / entry.path().filename()));
    CHECK(entry.path().extension() != ".tmp");
  }
  CHECK(files == 7);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("adding a scheme leaves graph and measurements untouched") {
  auto one = config_from(R"({"seed": 9, "topology": {"family": "random_regular", "n": 16, "degree": 3},
    "schemes": ["sigma0"]})");
  auto two = config_from(R"({"seed": 9, "topology": {"family": "random_regular", "n": 16, "degree": 3},
    "schemes": ["sigma0", {"scheme": "sigma_eta", "eta": 0.2}]})");
  const auto r1 = run(one);
  const auto r2 = run(two);
  CHECK(r1.graph == r2.graph);
  CHECK(r1.reference == r2.reference);
  CHECK(r1.trajectories[0].states == r2.trajectories[0].states);
}

TEST_CASE("bipartite 3-regular Cayley graph oscillates without memory") {
  const auto r = run(config_from(R"({"seed": 1,
    "topology": {"family": "cayley_dihedral", "n": 36, "generators": [
      {"rotation": 0, "reflection": true}, {"rotation": 1, "reflection": true},
      {"rotation": 6, "reflection": true}]},
    "schemes": ["sigma0", {"scheme": "sigma_eta", "eta": "optimal"}], "steps": 200})"));
  CHECK(r.summary.spectral.bipartite);
  CHECK(r.summary.schemes[0].classification == Classification::oscillating);
  CHECK(r.summary.schemes[1].classification != Classification::oscillating);
  CHECK(r.summary.schemes[1].classification != Classification::diverged);
}

TEST_CASE("dense ER instance: both converge, memory is not slower") {
  const auto r = run(config_from(R"({"seed": 8, "topology": {"family": "erdos_renyi", "n": 36, "p": 0.8},
    "schemes": ["sigma0", {"scheme": "sigma_eta", "eta": "optimal"}], "steps": 60})"));
  const auto& s0 = r.summary.schemes[0];
  const auto& se = r.summary.schemes[1];
  CHECK(s0.classification == Classification::converged);
  CHECK(se.classification == Classification::converged);
  CHECK(se.spectral_rate <= s0.spectral_rate + 1e-12);
  CHECK(se.decay_ratio <= s0.decay_ratio);
}

TEST_CASE("measured decay stays under the spectral rate on convergent runs") {
  const char* topologies[] = {
      R"({"family": "ring", "n": 9})",
      R"({"family": "circulant", "n": 36, "offsets": [1, 2]})",
      R"({"family": "random_regular", "n": 30, "degree": 3})",
      R"({"family": "erdos_renyi", "n": 36, "p": 0.2})",
      R"({"family": "erdos_renyi", "n": 36, "p": 0.4})",
      R"({"family": "edge_list_file", "path": "../data/regular8.edges"})",
  };
  for (const char* topo : topologies) {
    const auto r = run(config_from(std::string(R"({"seed": 3, "topology": )") + topo +
                                   R"(, "schemes": ["sigma0", {"scheme": "sigma_eta", "eta": "optimal"},
                                      {"scheme": "sigma_eta", "eta": 0.3}], "steps": 150})"));
    for (const auto& o : r.summary.schemes) {
      if (o.classification == Classification::converging ||
          o.classification == Classification::converged) {
        CHECK(o.decay_ratio <= o.spectral_rate + 0.05);
      }
    }
  }
}

TEST_CASE("sweep on K_36: spectral minimum at 1/36") {
  const auto rows = sweep_eta(k36(), 36);
  REQUIRE(rows.size() == 36);
  const auto best = std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.spectral_rate < b.spectral_rate;
  });
  CHECK(std::abs(best->eta - 1.0 / 36.0) <= 1.0 / 36.0);
  CHECK_THROWS_AS(sweep_eta(k36(), 2), ValidationError);
}

TEST_CASE("sweep on the even ring: rate 1 at eta = 0, convex, minimum at the bipartite value") {
  auto config = config_from(R"({"seed": 2, "topology": {"family": "ring", "n": 8},
    "schemes": ["sigma0"], "steps": 30})");
  const std::size_t grid = 100;
  const auto rows = sweep_eta(config, grid);
  CHECK(std::abs(rows[0].spectral_rate - 1.0) < 1e-9);
  for (std::size_t k = 1; k + 1 < rows.size(); ++k)
    CHECK(rows[k - 1].spectral_rate + rows[k + 1].spectral_rate - 2.0 * rows[k].spectral_rate >
          -1e-12);
  const auto best = std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.spectral_rate < b.spectral_rate;
  });
  const double lambda1 = 1.0 - std::cos(2.0 * std::numbers::pi / 8.0);
  CHECK(std::abs(best->eta - lambda1 / (2.0 + lambda1)) <= 1.0 / double(grid));
}

TEST_CASE("table2 rows") {
  const auto rows = table2({load_config(fs::path(RELEST_SOURCE_DIR) / "configs/k36.json"),
                            load_config(fs::path(RELEST_SOURCE_DIR) / "configs/c36_1_2.json")});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].diameter == 1);
  CHECK(std::abs(rows[0].eta_star - 0.0278) < 5e-4);
  CHECK(std::abs(rows[0].rate_sigma0 - 0.0286) < 5e-4);
  CHECK(std::abs(rows[0].rate_eta_star) < 1e-9);
  CHECK(rows[1].diameter == 9);
  CHECK(rows[1].eta_star == 0.0);
  CHECK(std::abs(rows[1].rate_sigma0 - 0.9623) < 5e-4);
  std::ostringstream out;
  write_table2_csv(out, rows);
  CHECK(out.str() ==
        "topology,diameter,eta_star,rate_sigma0,rate_eta_star\n"
        "K_36,1,0.0278,0.0286,0.0000\n"
        "\"C_36(1,2)\",9,0.0000,0.9623,-\n");
}

TEST_CASE("config validation") {
  const char* bad[] = {
      R"([])",
      R"({"topology": {"family": "ring", "n": 8}})",
      R"({"topology": {"family": "ring", "n": 8}, "schemes": []})",
      R"({"topology": {"family": "hypercube", "n": 8}, "schemes": ["sigma0"]})",
      R"({"topology": {"family": "ring"}, "schemes": ["sigma0"]})",
      R"({"topology": {"family": "circulant", "n": 8}, "schemes": ["sigma0"]})",
      R"({"topology": {"family": "ring", "n": 8}, "schemes": ["sigma1"]})",
      R"({"topology": {"family": "ring", "n": 8}, "schemes": [{"scheme": "sigma_eta", "eta": 1.0}]})",
      R"({"topology": {"family": "ring", "n": 8}, "schemes": [{"scheme": "sigma_eta", "eta": "best"}]})",
      R"({"topology": {"family": "ring", "n": 8}, "schemes": ["sigma0"], "steps": 0})",
      R"({"topology": {"family": "ring", "n": 8}, "schemes": ["sigma0"], "steps": "many"})",
      R"({"topology": {"family": "ring", "n": 8}, "schemes": ["sigma0"], "noise": {"model": "laplace"}})",
      R"({"topology": {"family": "ring", "n": 8}, "schemes": ["sigma0"], "ground_truth": {"kind": "random_uniform", "low": 1, "high": 0}})",
  };
  for (const char* text : bad) CHECK_THROWS_AS(config_from(text), ValidationError);

  auto explicit_gt = config_from(R"({"topology": {"family": "ring", "n": 4}, "schemes": ["sigma0"],
    "ground_truth": {"kind": "explicit", "values": [1, 2, 3]}})");
  CHECK_THROWS_AS(run(explicit_gt), ValidationError);
  auto bad_initial = config_from(R"({"topology": {"family": "ring", "n": 4}, "schemes": ["sigma0"],
    "initial": [0, 0]})");
  CHECK_THROWS_AS(run(bad_initial), ValidationError);

  const auto dir = scratch_dir("config");
  fs::create_directories(dir);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ValidationError);
  CHECK_THROWS_AS(load_config(dir / "absent.json"), ValidationError);
  fs::remove_all(dir);
}

TEST_CASE("config echo round trips") {
  const auto c = config_from(R"({"name": "x", "seed": 4,
    "topology": {"family": "circulant", "n": 12, "offsets": [1, 3]},
    "ground_truth": {"kind": "zero"}, "noise": {"model": "uniform", "half_width": 0.2},
    "schemes": ["sigma0", {"scheme": "sigma_eta", "eta": 0.25}], "steps": 7, "outputs": "somewhere"})");
  const auto again = parse_config(config_to_json(c), fs::path("."));
  CHECK(config_to_json(again) == config_to_json(c));
  CHECK(again.steps == 7);
  CHECK(again.noise.amplitude == 0.2);
  CHECK(again.outputs == fs::path("somewhere"));
}

TEST_CASE("defaults") {
  const auto c = config_from(R"({"topology": {"family": "ring", "n": 5}, "schemes": ["sigma0"]})");
  CHECK(c.steps == 20);
  CHECK(c.noise.kind == NoiseModel::Kind::uniform);
  CHECK(c.noise.amplitude == 0.1);
  CHECK(c.ground_truth.kind == GroundTruthSpec::Kind::random_uniform);
  CHECK(c.outputs == fs::path("out") / c.name);
}

TEST_CASE("classification rules") {
  // settled: last increment below 1e-8
  CHECK(classify(synthetic({{0, 0}, {1, 1}, {1, 1 + 1e-9}}, {1, 0, 0}), 0.5) ==
        Classification::converged);
  // period-two swing with flat error on a unit-rate spectrum
  std::vector<std::vector<double>> swing;
  std::vector<double> flat;
  for (int t = 0; t <= 40; ++t) {
    swing.push_back({t % 2 ? 1.0 : -1.0, 0.0});
    flat.push_back(0.25);
  }
  CHECK(classify(synthetic(swing, flat), 1.0) == Classification::oscillating);
  CHECK(classify(synthetic(swing, flat), 0.9) == Classification::diverged);
  // geometric decay
  std::vector<std::vector<double>> decay;
  std::vector<double> err;
  for (int t = 0; t <= 40; ++t) {
    decay.push_back({std::pow(0.7, t), 0.0});
    err.push_back(std::pow(0.7, 2 * t));
  }
  const auto tr = synthetic(decay, err);
  CHECK(classify(tr, 0.7) == Classification::converging);
  CHECK(measured_decay_ratio(tr) == doctest::Approx(0.7));
  // growth
  std::vector<std::vector<double>> grow;
  std::vector<double> grow_err;
  for (int t = 0; t <= 40; ++t) {
    grow.push_back({std::pow(1.1, t), 0.0});
    grow_err.push_back(std::pow(1.1, 2 * t));
  }
  CHECK(classify(synthetic(grow, grow_err), 1.0) == Classification::diverged);
  CHECK(classification_name(Classification::oscillating) == "oscillating");
}

TEST_CASE("decay ratio sign on an alternating mode") {
  // A dominant negative eigenvalue still yields a positive per-step ratio.
  std::vector<std::vector<double>> alt;
  for (int t = 0; t <= 30; ++t) alt.push_back({std::pow(-0.6, t), 0.0});
  CHECK(measured_decay_ratio(synthetic(alt, std::vector<double>(31, 0.0))) ==
        doctest::Approx(0.6));
}

}
