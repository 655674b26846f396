#include "relest/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "relest/error.hpp"
#include "relest/io.hpp"
#include "relest/rng.hpp"

namespace relest {
namespace {

using nlohmann::json;

template <typename T>
T field_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
  return obj.at(key).get<T>();
}

TopologyRecipe parse_recipe(const json& t, const std::filesystem::path& base_dir) {
  if (!t.is_object()) throw ValidationError("'topology' must be an object");
  TopologyRecipe r;
  r.family = parse_family(t.at("family").get<std::string>());
  r.n = field_or<std::size_t>(t, "n", 0);
  switch (r.family) {
    case Family::circulant:
      r.offsets = t.at("offsets").get<std::vector<std::size_t>>();
      break;
    case Family::cayley_cyclic:
      r.generators = t.at("generators").get<std::vector<std::size_t>>();
      break;
    case Family::cayley_dihedral:
      for (const auto& g : t.at("generators"))
        r.dihedral_generators.push_back(
            {g.at("rotation").get<std::size_t>(), field_or<bool>(g, "reflection", false)});
      break;
    case Family::random_regular:
    case Family::ramanujan:
      r.degree = t.at("degree").get<std::size_t>();
      break;
    case Family::erdos_renyi:
      r.probability = t.at("p").get<double>();
      break;
    case Family::edge_list_file: {
      std::filesystem::path p = t.at("path").get<std::string>();
      r.path = (p.is_relative() ? base_dir / p : p).lexically_normal().string();
      break;
    }
    case Family::ring:
    case Family::complete:
      break;
  }
  if (r.family != Family::edge_list_file && r.n == 0)
    throw ValidationError("topology '" + family_name(r.family) + "' needs 'n'");
  return r;
}

json recipe_to_json(const TopologyRecipe& r) {
  json t;
  t["family"] = family_name(r.family);
  if (r.family != Family::edge_list_file) t["n"] = r.n;
  switch (r.family) {
    case Family::circulant: t["offsets"] = r.offsets; break;
    case Family::cayley_cyclic: t["generators"] = r.generators; break;
    case Family::cayley_dihedral: {
      json gens = json::array();
      for (const auto& g : r.dihedral_generators)
        gens.push_back({{"rotation", g.rotation}, {"reflection", g.reflection}});
      t["generators"] = gens;
      break;
    }
    case Family::random_regular:
    case Family::ramanujan: t["degree"] = r.degree; break;
    case Family::erdos_renyi: t["p"] = r.probability; break;
    case Family::edge_list_file: t["path"] = r.path; break;
    case Family::ring:
    case Family::complete: break;
  }
  t["seed"] = r.seed;
  return t;
}

GroundTruthSpec parse_ground_truth(const json& doc) {
  GroundTruthSpec gt;
  if (!doc.contains("ground_truth")) return gt;
  const json& g = doc.at("ground_truth");
  const auto kind = g.at("kind").get<std::string>();
  if (kind == "zero") {
    gt.kind = GroundTruthSpec::Kind::zero;
  } else if (kind == "random_uniform") {
    gt.kind = GroundTruthSpec::Kind::random_uniform;
    gt.low = field_or<double>(g, "low", -1.0);
    gt.high = field_or<double>(g, "high", 1.0);
    if (!(gt.low < gt.high)) throw ValidationError("ground_truth needs low < high");
  } else if (kind == "explicit") {
    gt.kind = GroundTruthSpec::Kind::explicit_values;
    gt.values = g.at("values").get<std::vector<double>>();
  } else {
    throw ValidationError("unknown ground_truth kind '" + kind + "'");
  }
  return gt;
}

NoiseModel parse_noise(const json& doc) {
  if (!doc.contains("noise")) return NoiseModel{};
  const json& n = doc.at("noise");
  const auto model = n.at("model").get<std::string>();
  if (model == "none") return NoiseModel::none();
  if (model == "uniform") return NoiseModel::uniform(field_or<double>(n, "half_width", 0.1));
  if (model == "gaussian") return NoiseModel::gaussian(n.at("std").get<double>());
  throw ValidationError("unknown noise model '" + model + "'");
}

SchemeSpec parse_scheme(const json& s) {
  SchemeSpec spec;
  std::string name;
  json eta = "optimal";
  if (s.is_string()) {
    name = s.get<std::string>();
  } else if (s.is_object()) {
    name = s.at("scheme").get<std::string>();
    if (s.contains("eta")) eta = s.at("eta");
  } else {
    throw ValidationError("scheme entries must be strings or objects");
  }
  if (name == "sigma0") return spec;
  if (name != "sigma_eta") throw ValidationError("unknown scheme '" + name + "'");
  spec.kind = Scheme::Kind::sigma_eta;
  if (eta.is_string()) {
    if (eta.get<std::string>() != "optimal")
      throw ValidationError("eta must be a number or \"optimal\"");
    spec.optimal = true;
  } else {
    spec.eta = eta.get<double>();
    if (!(spec.eta >= 0.0 && spec.eta < 1.0)) throw ValidationError("eta must lie in [0, 1)");
  }
  return spec;
}

json scheme_to_json(const SchemeSpec& s) {
  if (s.kind == Scheme::Kind::sigma0) return {{"scheme", "sigma0"}, {"eta", 0.0}};
  json j = {{"scheme", "sigma_eta"}, {"eta", s.eta}};
  if (s.optimal) j["eta_source"] = "optimal";
  return j;
}

std::vector<double> draw_ground_truth(const GroundTruthSpec& gt, std::size_t n,
                                      std::uint64_t seed) {
  switch (gt.kind) {
    case GroundTruthSpec::Kind::zero: return std::vector<double>(n, 0.0);
    case GroundTruthSpec::Kind::explicit_values:
      if (gt.values.size() != n)
        throw ValidationError("explicit ground truth has " + std::to_string(gt.values.size()) +
                              " values for " + std::to_string(n) + " nodes");
      return gt.values;
    case GroundTruthSpec::Kind::random_uniform: {
      SplitMix64 rng(derive_seed(seed, "ground_truth"));
      std::vector<double> x(n);
      for (auto& v : x) v = gt.low + (gt.high - gt.low) * rng.uniform01();
      return x;
    }
  }
  return std::vector<double>(n, 0.0);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

double increment_inf(const Trajectory& t) {
  const auto& a = t.states[t.states.size() - 1];
  const auto& b = t.states[t.states.size() - 2];
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

struct Prepared {
  GeneratedGraph generated;
  SpectralReport report;
  std::vector<double> ground_truth;
  MeasurementSet measurements;
  std::vector<double> reference;
  std::vector<double> x0;
};

Prepared prepare(const ExperimentConfig& config) {
  if (config.steps < 1) throw ValidationError("steps must be >= 1");
  TopologyRecipe recipe = config.recipe;
  recipe.seed = derive_seed(config.seed, "topology");
  auto generated = generate(recipe);
  const Graph& g = generated.graph;
  auto report = analyze(g);
  auto truth = draw_ground_truth(config.ground_truth, g.order(), config.seed);
  auto m = synthesize_measurements(g, truth, config.noise, derive_seed(config.seed, "measurements"));
  auto reference = centralized_solve(g, m);
  std::vector<double> x0 = config.initial.empty() ? std::vector<double>(g.order(), 0.0)
                                                  : config.initial;
  if (x0.size() != g.order()) throw ValidationError("initial state length does not match n");
  return {std::move(generated), std::move(report), std::move(truth), std::move(m),
          std::move(reference), std::move(x0)};
}

}  // namespace

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  try {
    if (!doc.is_object()) throw ValidationError("config must be a JSON object");
    ExperimentConfig c;
    c.seed = field_or<std::uint64_t>(doc, "seed", 0);
    c.recipe = parse_recipe(doc.at("topology"), base_dir);
    c.recipe.seed = derive_seed(c.seed, "topology");
    c.name = field_or<std::string>(doc, "name", recipe_label(c.recipe));
    c.ground_truth = parse_ground_truth(doc);
    c.noise = parse_noise(doc);
    if (!doc.contains("schemes") || !doc.at("schemes").is_array() || doc.at("schemes").empty())
      throw ValidationError("config needs at least one scheme");
    for (const auto& s : doc.at("schemes")) c.schemes.push_back(parse_scheme(s));
    const auto steps = field_or<long long>(doc, "steps", 20);
    if (steps < 1) throw ValidationError("steps must be >= 1");
    c.steps = static_cast<std::size_t>(steps);
    c.initial = field_or<std::vector<double>>(doc, "initial", {});
    c.outputs = field_or<std::string>(doc, "outputs", "out/" + c.name);
    return c;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("config '" + path.string() + "': " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["seed"] = c.seed;
  j["topology"] = recipe_to_json(c.recipe);
  switch (c.ground_truth.kind) {
    case GroundTruthSpec::Kind::zero: j["ground_truth"] = {{"kind", "zero"}}; break;
    case GroundTruthSpec::Kind::random_uniform:
      j["ground_truth"] = {
          {"kind", "random_uniform"}, {"low", c.ground_truth.low}, {"high", c.ground_truth.high}};
      break;
    case GroundTruthSpec::Kind::explicit_values:
      j["ground_truth"] = {{"kind", "explicit"}, {"values", c.ground_truth.values}};
      break;
  }
  switch (c.noise.kind) {
    case NoiseModel::Kind::none: j["noise"] = {{"model", "none"}}; break;
    case NoiseModel::Kind::uniform:
      j["noise"] = {{"model", "uniform"}, {"half_width", c.noise.amplitude}};
      break;
    case NoiseModel::Kind::gaussian:
      j["noise"] = {{"model", "gaussian"}, {"std", c.noise.amplitude}};
      break;
  }
  json schemes = json::array();
  for (const auto& s : c.schemes) schemes.push_back(scheme_to_json(s));
  j["schemes"] = schemes;
  j["steps"] = c.steps;
  if (!c.initial.empty()) j["initial"] = c.initial;
  j["outputs"] = c.outputs.string();
  return j;
}

json report_to_json(const SpectralReport& r) {
  json j;
  j["n"] = r.n;
  j["lap_eigs"] = r.lap_eigs;
  j["lambda1"] = r.lambda1;
  j["lambda_last"] = r.lambda_last;
  j["sigma"] = r.sigma;
  j["eta_star"] = r.eta_star;
  j["rate_sigma0"] = r.rate_sigma0;
  j["rate_eta_star"] = r.rate_eta_star;
  j["bipartite"] = r.bipartite;
  j["diameter"] = r.diameter;
  j["diameter_bound"] = r.diameter_bound ? json(*r.diameter_bound) : json(nullptr);
  j["rate_lower_bound"] = r.rate_lower_bound ? json(*r.rate_lower_bound) : json(nullptr);
  j["regular_degree"] = r.regular_degree ? json(*r.regular_degree) : json(nullptr);
  if (r.ramanujan) {
    j["ramanujan"] = {{"ramanujan", r.ramanujan->ramanujan},
                      {"second_modulus", r.ramanujan->second_modulus},
                      {"bound", r.ramanujan->bound},
                      {"bipartite_pair_excluded", r.ramanujan->bipartite}};
  } else {
    j["ramanujan"] = nullptr;
  }
  return j;
}

std::string classification_name(Classification c) {
  switch (c) {
    case Classification::converged: return "converged";
    case Classification::converging: return "converging";
    case Classification::oscillating: return "oscillating";
    case Classification::diverged: return "diverged";
  }
  return "unknown";
}

double measured_decay_ratio(const Trajectory& t, std::size_t window) {
  const std::size_t steps = t.steps();
  if (steps < 2 || window == 0) return 0.0;
  std::vector<double> inc(steps + 1, 0.0);
  double largest = 0.0;
  for (std::size_t s = 1; s <= steps; ++s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.states[s].size(); ++i) {
      const double d = t.states[s][i] - t.states[s - 1][i];
      acc += d * d;
    }
    inc[s] = std::sqrt(acc);
    largest = std::max(largest, inc[s]);
  }
  if (largest == 0.0) return 0.0;
  const double floor = 1e-11 * largest;
  std::size_t last = steps;
  while (last >= 1 && inc[last] <= floor) --last;
  if (last < 2) return 0.0;
  const std::size_t w = std::min(window, last - 1);
  const double first = inc[last - w];
  if (first == 0.0) return 0.0;
  return std::pow(inc[last] / first, 1.0 / static_cast<double>(w));
}

Classification classify(const Trajectory& t, double spectral_rate) {
  if (t.steps() < 1) throw ValidationError("classification needs at least one step");
  if (increment_inf(t) < 1e-8) return Classification::converged;
  if (std::abs(spectral_rate - 1.0) <= 1e-6) {
    const std::size_t w = std::min<std::size_t>(kDecayWindow, t.steps());
    const auto first = t.aligned_mse.end() - static_cast<std::ptrdiff_t>(w);
    const auto [lo, hi] = std::minmax_element(first, t.aligned_mse.end());
    if (*hi > 0.0 && (*hi - *lo) <= 0.01 * *hi) return Classification::oscillating;
  }
  return measured_decay_ratio(t) < 1.0 ? Classification::converging : Classification::diverged;
}

RunResult run(const ExperimentConfig& config) {
  Prepared p = prepare(config);
  const Graph& g = p.generated.graph;

  RunSummary summary;
  summary.config = config;
  summary.config.recipe.seed = derive_seed(config.seed, "topology");
  summary.label = config.name;
  summary.spectral = p.report;
  summary.generator_attempt = p.generated.attempt;
  summary.generator_sub_seed = p.generated.sub_seed;
  summary.optimal_cost = cost(g, p.measurements, p.reference);

  const auto f0 = f0_spectrum(p.report.lap_eigs);
  std::vector<Trajectory> trajectories;
  for (std::size_t k = 0; k < config.schemes.size(); ++k) {
    SchemeSpec& spec = summary.config.schemes[k];
    if (spec.optimal) spec.eta = p.report.eta_star;
    const Scheme scheme =
        spec.kind == Scheme::Kind::sigma0 ? Scheme::sigma0() : Scheme::sigma_eta(spec.eta);
    auto traj = iterate(g, p.measurements, scheme, p.x0, config.steps, p.reference);

    SchemeOutcome out;
    out.scheme = scheme;
    out.eta_optimal = spec.optimal;
    out.spectral_rate = convergence_rate(f0, scheme.effective_eta());
    out.final_cost = traj.cost.back();
    out.final_cost_gap = out.final_cost - summary.optimal_cost;
    out.final_mse = traj.mse.back();
    out.final_aligned_mse = traj.aligned_mse.back();
    out.classification = classify(traj, out.spectral_rate);
    out.decay_ratio = measured_decay_ratio(traj);
    out.trajectory_file = "trajectory_" + std::to_string(k) + "_" + scheme.name() + ".csv";
    summary.schemes.push_back(out);
    trajectories.push_back(std::move(traj));
  }
  return RunResult{std::move(summary),   std::move(p.generated.graph), std::move(p.ground_truth),
                   std::move(p.measurements), std::move(p.reference),   std::move(trajectories)};
}

json summary_to_json(const RunSummary& s) {
  json j;
  j["label"] = s.label;
  j["config"] = config_to_json(s.config);
  j["generator"] = {{"attempt", s.generator_attempt}, {"sub_seed", s.generator_sub_seed}};
  j["spectral"] = report_to_json(s.spectral);
  j["optimal_cost"] = s.optimal_cost;
  json schemes = json::array();
  for (const auto& o : s.schemes) {
    schemes.push_back({{"scheme", o.scheme.name()},
                       {"eta", o.scheme.effective_eta()},
                       {"eta_optimal", o.eta_optimal},
                       {"spectral_rate", o.spectral_rate},
                       {"final_cost", o.final_cost},
                       {"final_cost_gap", o.final_cost_gap},
                       {"final_mse", o.final_mse},
                       {"final_aligned_mse", o.final_aligned_mse},
                       {"classification", classification_name(o.classification)},
                       {"decay_ratio", o.decay_ratio},
                       {"trajectory", o.trajectory_file}});
  }
  j["schemes"] = schemes;
  return j;
}

void write_solution_csv(std::ostream& out, const std::vector<double>& x) {
  out << "node,x\n";
  for (std::size_t i = 0; i < x.size(); ++i) out << i << ',' << format_real(x[i]) << '\n';
}

void write_artifacts(const RunResult& result, const std::filesystem::path& dir) {
  write_file_atomic(dir / "summary.json", summary_to_json(result.summary).dump(2) + "\n");
  {
    std::ostringstream out;
    write_edge_list(out, result.graph);
    write_file_atomic(dir / "graph.edges", out.str());
  }
  {
    std::ostringstream out;
    write_measurements(out, result.graph, result.measurements);
    write_file_atomic(dir / "measurements.txt", out.str());
  }
  {
    std::ostringstream out;
    write_solution_csv(out, result.reference);
    write_file_atomic(dir / "solution.csv", out.str());
  }
  for (std::size_t k = 0; k < result.trajectories.size(); ++k) {
    std::ostringstream out;
    write_trajectory_csv(out, result.trajectories[k]);
    write_file_atomic(dir / result.summary.schemes[k].trajectory_file, out.str());
  }
}

std::vector<SweepRow> sweep_eta(const ExperimentConfig& config, std::size_t grid) {
  if (grid < 3) throw ValidationError("sweep grid needs at least 3 points");
  Prepared p = prepare(config);
  const auto f0 = f0_spectrum(p.report.lap_eigs);
  std::vector<SweepRow> rows;
  rows.reserve(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    const double eta = static_cast<double>(k) / static_cast<double>(grid);
    const auto traj = iterate(p.generated.graph, p.measurements, Scheme::sigma_eta(eta), p.x0,
                              config.steps, p.reference);
    rows.push_back({eta, measured_decay_ratio(traj), convergence_rate(f0, eta)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "eta,measured_decay,spectral_rate\n";
  for (const auto& r : rows)
    out << format_real(r.eta) << ',' << format_real(r.measured_decay) << ','
        << format_real(r.spectral_rate) << '\n';
}

Table2Row table2_row(const ExperimentConfig& config) {
  TopologyRecipe recipe = config.recipe;
  recipe.seed = derive_seed(config.seed, "topology");
  const auto generated = generate(recipe);
  const auto report = analyze(generated.graph);
  return {config.name, report.diameter, report.eta_star, report.rate_sigma0, report.rate_eta_star};
}

std::vector<Table2Row> table2(const std::vector<ExperimentConfig>& configs) {
  std::vector<Table2Row> rows;
  rows.reserve(configs.size());
  for (const auto& c : configs) rows.push_back(table2_row(c));
  return rows;
}

void write_table2_csv(std::ostream& out, const std::vector<Table2Row>& rows) {
  out << "topology,diameter,eta_star,rate_sigma0,rate_eta_star\n";
  for (const auto& r : rows) {
    out << csv_field(r.topology) << ',' << r.diameter << ',' << format_fixed(r.eta_star, 4) << ','
        << format_fixed(r.rate_sigma0, 4) << ','
        << (r.eta_star == 0.0 ? std::string("-") : format_fixed(r.rate_eta_star, 4)) << '\n';
  }
}

}  // namespace relest
