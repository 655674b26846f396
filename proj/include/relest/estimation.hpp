#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "relest/graph.hpp"

namespace relest {

/// Relative measurements x~_ij ~ x_j - x_i on every ordered pair (i, j)
/// with {i, j} an edge. Both orientations are stored independently.
class MeasurementSet {
 public:
  /// All values zero, laid out on the adjacency of g.
  explicit MeasurementSet(const Graph& g);

  std::size_t order() const noexcept { return offsets_.size() - 1; }
  double value(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);

  /// Value for (i, k-th neighbor of i) in the graph's sorted neighbor order.
  double value_at(std::size_t i, std::size_t slot) const noexcept {
    return values_[offsets_[i] + slot];
  }

  bool matches(const Graph& g) const noexcept;

 private:
  std::size_t locate(std::size_t i, std::size_t j) const;

  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> neighbors_;
  std::vector<double> values_;
};

struct NoiseModel {
  enum class Kind { none, uniform, gaussian };
  Kind kind = Kind::uniform;
  double amplitude = 0.1;  ///< half-width for uniform, standard deviation for gaussian

  static NoiseModel none() { return {Kind::none, 0.0}; }
  static NoiseModel uniform(double half_width) { return {Kind::uniform, half_width}; }
  static NoiseModel gaussian(double stddev) { return {Kind::gaussian, stddev}; }
};

std::string noise_kind_name(NoiseModel::Kind kind);

/// x~_ij = (x_j - x_i) + e_ij. Noise is drawn from SplitMix64(seed) for each
/// edge (u < v) in canonical order: e_uv first, then e_vu.
MeasurementSet synthesize_measurements(const Graph& g, std::span<const double> ground_truth,
                                       const NoiseModel& noise, std::uint64_t seed);

/// Entry i: sum over neighbors j of (x~_ji - x~_ij). Right-hand side of 2 L x = x~.
std::vector<double> stacked_measurement(const Graph& g, const MeasurementSet& m);

/// 1/2 sum_i sum_{j in N_i} (x_i - x_j + x~_ij)^2
double cost(const Graph& g, const MeasurementSet& m, std::span<const double> x);

/// [grad]_i = 2 deg_i x_i - 2 sum_j x_j - sum_j (x~_ji - x~_ij)
std::vector<double> gradient(const Graph& g, const MeasurementSet& m, std::span<const double> x);

/// Minimum-norm least-squares solution x* = 1/2 L^+ x~ via the Laplacian
/// eigendecomposition, discarding eigenvalues below 1e-9 * lambda_max.
std::vector<double> centralized_solve(const Graph& g, const MeasurementSet& m);

/// D^{-1} A
DenseMatrix f0_matrix(const Graph& g);

/// eta I + (1 - eta) D^{-1} A
DenseMatrix f_eta_matrix(const Graph& g, double eta);

/// 1/2 D^{-1} x~
std::vector<double> u0_vector(const Graph& g, const MeasurementSet& m);

struct Scheme {
  enum class Kind { sigma0, sigma_eta };
  Kind kind = Kind::sigma0;
  double eta = 0.0;

  static Scheme sigma0() { return {Kind::sigma0, 0.0}; }
  static Scheme sigma_eta(double eta) { return {Kind::sigma_eta, eta}; }
  double effective_eta() const noexcept { return kind == Kind::sigma0 ? 0.0 : eta; }
  std::string name() const;
};

struct Trajectory {
  Scheme scheme;
  std::vector<std::vector<double>> states;  ///< x(0) .. x(T)
  std::vector<double> cost;
  std::vector<double> mse;          ///< against the reference; NaN when none was given
  std::vector<double> aligned_mse;  ///< same, after removing the best constant offset

  std::size_t steps() const noexcept { return states.empty() ? 0 : states.size() - 1; }
};

/// Runs T synchronous steps of the neighbor-local update from x0.
/// Throws ValidationError for eta outside [0, 1).
Trajectory iterate(const Graph& g, const MeasurementSet& m, const Scheme& scheme,
                   std::span<const double> x0, std::size_t steps,
                   std::span<const double> reference = {});

/// (1/n) sum (x_i - ref_i)^2
double mse(std::span<const double> x, std::span<const double> reference);

/// mse after subtracting the mean of (x - ref), i.e. minimized over shifts along 1.
double aligned_mse(std::span<const double> x, std::span<const double> reference);

/// Euclidean norm of (x - ref) with its mean removed.
double aligned_distance(std::span<const double> x, std::span<const double> reference);

/// sum deg_i x_i / sum deg_i
double degree_weighted_mean(const Graph& g, std::span<const double> x);

// Measurement text format: one "i j value" line per ordered pair; '#'
// starts a comment. read_measurements requires every orientation of every
// edge exactly once.
void write_measurements(std::ostream& out, const Graph& g, const MeasurementSet& m);
MeasurementSet read_measurements(std::istream& in, const Graph& g);
MeasurementSet load_measurements(const std::string& path, const Graph& g);

/// CSV with header "t,x_0,...,x_{n-1},phi,mse,aligned_mse".
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace relest
