#include "relest/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "relest/error.hpp"
#include "relest/io.hpp"
#include "relest/kernels.hpp"
#include "relest/rng.hpp"
#include "relest/spectral.hpp"

namespace relest {
namespace {

void require_length(std::span<const double> x, std::size_t n, const char* what) {
  if (x.size() != n)
    throw ValidationError(std::string(what) + " has length " + std::to_string(x.size()) +
                          ", expected " + std::to_string(n));
}

void require_measurements(const Graph& g, const MeasurementSet& m) {
  if (!m.matches(g)) throw ValidationError("measurement set does not match the graph");
}

}  // namespace

MeasurementSet::MeasurementSet(const Graph& g) {
  const std::size_t n = g.order();
  offsets_.resize(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    offsets_[i + 1] = offsets_[i] + g.degree(i);
    const auto nb = g.neighbors(i);
    neighbors_.insert(neighbors_.end(), nb.begin(), nb.end());
  }
  values_.assign(neighbors_.size(), 0.0);
}

std::size_t MeasurementSet::locate(std::size_t i, std::size_t j) const {
  if (i + 1 < offsets_.size()) {
    const auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
    const auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it != last && *it == j) return static_cast<std::size_t>(it - neighbors_.begin());
  }
  throw ValidationError("no edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
}

double MeasurementSet::value(std::size_t i, std::size_t j) const { return values_[locate(i, j)]; }

void MeasurementSet::set(std::size_t i, std::size_t j, double value) { values_[locate(i, j)] = value; }

bool MeasurementSet::matches(const Graph& g) const noexcept {
  if (g.order() != order()) return false;
  for (std::size_t i = 0; i < g.order(); ++i) {
    const auto nb = g.neighbors(i);
    if (nb.size() != offsets_[i + 1] - offsets_[i]) return false;
    if (!std::equal(nb.begin(), nb.end(), neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i])))
      return false;
  }
  return true;
}

std::string noise_kind_name(NoiseModel::Kind kind) {
  switch (kind) {
    case NoiseModel::Kind::none: return "none";
    case NoiseModel::Kind::uniform: return "uniform";
    case NoiseModel::Kind::gaussian: return "gaussian";
  }
  return "unknown";
}

MeasurementSet synthesize_measurements(const Graph& g, std::span<const double> ground_truth,
                                       const NoiseModel& noise, std::uint64_t seed) {
  require_length(ground_truth, g.order(), "ground truth");
  if (noise.kind != NoiseModel::Kind::none && !(noise.amplitude > 0.0))
    throw ValidationError("noise amplitude must be positive");
  SplitMix64 rng(seed);
  auto draw = [&]() {
    switch (noise.kind) {
      case NoiseModel::Kind::none: return 0.0;
      case NoiseModel::Kind::uniform: return rng.symmetric(noise.amplitude);
      case NoiseModel::Kind::gaussian: return rng.normal(noise.amplitude);
    }
    return 0.0;
  };
  MeasurementSet m(g);
  for (const auto& e : g.edges()) {
    const double forward = draw();
    const double backward = draw();
    m.set(e.u, e.v, ground_truth[e.v] - ground_truth[e.u] + forward);
    m.set(e.v, e.u, ground_truth[e.u] - ground_truth[e.v] + backward);
  }
  return m;
}

std::vector<double> stacked_measurement(const Graph& g, const MeasurementSet& m) {
  require_measurements(g, m);
  std::vector<double> xt(g.order(), 0.0);
  for (std::size_t i = 0; i < g.order(); ++i) {
    const auto nb = g.neighbors(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < nb.size(); ++k) acc += m.value(nb[k], i) - m.value_at(i, k);
    xt[i] = acc;
  }
  return xt;
}

double cost(const Graph& g, const MeasurementSet& m, std::span<const double> x) {
  require_measurements(g, m);
  require_length(x, g.order(), "state");
  double acc = 0.0;
  for (std::size_t i = 0; i < g.order(); ++i) {
    const auto nb = g.neighbors(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const double r = x[i] - x[nb[k]] + m.value_at(i, k);
      acc += r * r;
    }
  }
  return 0.5 * acc;
}

std::vector<double> gradient(const Graph& g, const MeasurementSet& m, std::span<const double> x) {
  require_measurements(g, m);
  require_length(x, g.order(), "state");
  std::vector<double> grad(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) {
    const auto nb = g.neighbors(i);
    double neighbor_sum = 0.0;
    double measured = 0.0;
    for (std::size_t k = 0; k < nb.size(); ++k) {
      neighbor_sum += x[nb[k]];
      measured += m.value(nb[k], i) - m.value_at(i, k);
    }
    grad[i] = 2.0 * static_cast<double>(nb.size()) * x[i] - 2.0 * neighbor_sum - measured;
  }
  return grad;
}

std::vector<double> centralized_solve(const Graph& g, const MeasurementSet& m) {
  require_connected(g);
  const std::size_t n = g.order();
  const auto xt = stacked_measurement(g, m);
  const auto eig = sym_eigen(laplacian(g));
  const double tau = 1e-9 * eig.eigenvalues.back();

  double xt_norm = 0.0;
  for (const double v : xt) xt_norm += v * v;
  xt_norm = std::sqrt(xt_norm);

  std::vector<double> x(n, 0.0);
  double kernel_sq = 0.0;
  std::size_t kernel_dim = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double proj = 0.0;
    for (std::size_t i = 0; i < n; ++i) proj += eig.vector_component(i, k) * xt[i];
    const double lambda = eig.eigenvalues[k];
    if (lambda <= tau) {
      ++kernel_dim;
      kernel_sq += proj * proj;
      continue;
    }
    const double coeff = 0.5 * proj / lambda;
    for (std::size_t i = 0; i < n; ++i) x[i] += coeff * eig.vector_component(i, k);
  }
  if (kernel_dim != 1) throw ValidationError("graph is not connected (Laplacian kernel dimension " +
                                             std::to_string(kernel_dim) + ")");
  if (std::sqrt(kernel_sq) > tau * xt_norm)
    throw ValidationError("measurement vector in ker(L)");
  return x;
}

DenseMatrix f0_matrix(const Graph& g) { return f_eta_matrix(g, 0.0); }

DenseMatrix f_eta_matrix(const Graph& g, double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) throw ValidationError("eta must lie in [0, 1)");
  DenseMatrix f(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (g.degree(i) == 0) throw ValidationError("zero-degree node " + std::to_string(i));
    const double w = (1.0 - eta) / static_cast<double>(g.degree(i));
    for (const std::size_t j : g.neighbors(i)) f(i, j) = w;
    f(i, i) += eta;
  }
  return f;
}

std::vector<double> u0_vector(const Graph& g, const MeasurementSet& m) {
  auto u = stacked_measurement(g, m);
  for (std::size_t i = 0; i < g.order(); ++i) {
    if (g.degree(i) == 0) throw ValidationError("zero-degree node " + std::to_string(i));
    u[i] /= 2.0 * static_cast<double>(g.degree(i));
  }
  return u;
}

std::string Scheme::name() const { return kind == Kind::sigma0 ? "sigma0" : "sigma_eta"; }

Trajectory iterate(const Graph& g, const MeasurementSet& m, const Scheme& scheme,
                   std::span<const double> x0, std::size_t steps,
                   std::span<const double> reference) {
  const std::size_t n = g.order();
  require_length(x0, n, "initial state");
  if (!reference.empty()) require_length(reference, n, "reference");
  const double eta = scheme.effective_eta();
  if (!(eta >= 0.0 && eta < 1.0)) throw ValidationError("eta must lie in [0, 1)");

  const auto u0 = u0_vector(g, m);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  Trajectory t;
  t.scheme = scheme;
  t.states.reserve(steps + 1);
  t.states.emplace_back(x0.begin(), x0.end());
  auto record = [&](const std::vector<double>& x) {
    t.cost.push_back(cost(g, m, x));
    t.mse.push_back(reference.empty() ? nan : mse(x, reference));
    t.aligned_mse.push_back(reference.empty() ? nan : aligned_mse(x, reference));
  };
  record(t.states.back());
  for (std::size_t step = 0; step < steps; ++step) {
    std::vector<double> next(n);
    kernels::consensus_step_local(g, t.states.back(), u0, eta, next);
    t.states.push_back(std::move(next));
    record(t.states.back());
  }
  return t;
}

double mse(std::span<const double> x, std::span<const double> reference) {
  require_length(reference, x.size(), "reference");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - reference[i]) * (x[i] - reference[i]);
  return acc / static_cast<double>(x.size());
}

double aligned_mse(std::span<const double> x, std::span<const double> reference) {
  const double d = aligned_distance(x, reference);
  return d * d / static_cast<double>(x.size());
}

double aligned_distance(std::span<const double> x, std::span<const double> reference) {
  require_length(reference, x.size(), "reference");
  double shift = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) shift += x[i] - reference[i];
  shift /= static_cast<double>(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] - reference[i] - shift;
    acc += r * r;
  }
  return std::sqrt(acc);
}

double degree_weighted_mean(const Graph& g, std::span<const double> x) {
  require_length(x, g.order(), "state");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < g.order(); ++i) {
    const double d = static_cast<double>(g.degree(i));
    num += d * x[i];
    den += d;
  }
  return num / den;
}

void write_measurements(std::ostream& out, const Graph& g, const MeasurementSet& m) {
  require_measurements(g, m);
  for (std::size_t i = 0; i < g.order(); ++i) {
    const auto nb = g.neighbors(i);
    for (std::size_t k = 0; k < nb.size(); ++k)
      out << i << ' ' << nb[k] << ' ' << format_real(m.value_at(i, k)) << '\n';
  }
}

MeasurementSet read_measurements(std::istream& in, const Graph& g) {
  MeasurementSet m(g);
  std::vector<char> seen(2 * g.size(), 0);
  std::size_t count = 0;
  std::string line;
  std::size_t line_no = 0;
  // Slot index of (i, j) in the adjacency layout, used to detect repeats.
  std::vector<std::size_t> base(g.order() + 1, 0);
  for (std::size_t i = 0; i < g.order(); ++i) base[i + 1] = base[i] + g.degree(i);
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long i = 0, j = 0;
    double value = 0.0;
    if (!(fields >> i)) continue;
    std::string extra;
    if (!(fields >> j >> value) || (fields >> extra) || i < 0 || j < 0)
      throw ValidationError("measurements line " + std::to_string(line_no) +
                            ": expected 'i j value'");
    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    if (!g.has_edge(ui, uj))
      throw ValidationError("measurements line " + std::to_string(line_no) + ": (" +
                            std::to_string(i) + ", " + std::to_string(j) + ") is not an edge");
    const auto nb = g.neighbors(ui);
    const auto slot = base[ui] + static_cast<std::size_t>(
                                     std::lower_bound(nb.begin(), nb.end(), uj) - nb.begin());
    if (seen[slot])
      throw ValidationError("measurements line " + std::to_string(line_no) + ": repeated pair");
    seen[slot] = 1;
    ++count;
    m.set(ui, uj, value);
  }
  if (count != 2 * g.size())
    throw ValidationError("measurements cover " + std::to_string(count) + " of " +
                          std::to_string(2 * g.size()) + " ordered pairs");
  return m;
}

MeasurementSet load_measurements(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open measurements '" + path + "'");
  return read_measurements(in, g);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const std::size_t n = trajectory.states.empty() ? 0 : trajectory.states.front().size();
  out << 't';
  for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
  out << ",phi,mse,aligned_mse\n";
  for (std::size_t t = 0; t < trajectory.states.size(); ++t) {
    out << t;
    for (const double v : trajectory.states[t]) out << ',' << format_real(v);
    out << ',' << format_real(trajectory.cost[t]) << ',' << format_real(trajectory.mse[t]) << ','
        << format_real(trajectory.aligned_mse[t]) << '\n';
  }
}

}  // namespace relest
