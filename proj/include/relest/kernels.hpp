#pragma once

// Data-parallel inner loops. Each kernel has an OpenMP version used by the
// library and a plain serial version kept as the reference for tests and
// benchmarks. Without OpenMP the parallel versions run single-threaded and
// produce the same results.

#include <cstddef>
#include <limits>
#include <utility>
#include <span>
#include <vector>

namespace relest {
class Graph;
}

namespace relest::kernels {

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm is at or below
  /// off_tolerance * max(1, ||A||_F).
  double off_tolerance = 1e-12;
  int max_sweeps = 100;
};

struct JacobiResult {
  std::vector<double> eigenvalues;   ///< diagonal after convergence, unsorted
  std::vector<double> eigenvectors;  ///< row-major n x n, column k pairs with eigenvalues[k]
  int sweeps = 0;
  double off_norm = 0.0;
  bool converged = false;
};

/// Cyclic-by-row Jacobi: pivots (p, q) visited p < q in row order.
JacobiResult jacobi_serial(std::span<const double> matrix, std::size_t n,
                           const JacobiOptions& options = {});

/// Round-robin (Brent-Luk) Jacobi. Each round rotates n/2 disjoint pivot
/// pairs at once; the pair schedule is fixed, so results do not depend on
/// the thread count.
JacobiResult jacobi_parallel(std::span<const double> matrix, std::size_t n,
                             const JacobiOptions& options = {});

/// Round-robin schedule: round r of n_padded - 1 rounds, as (p, q) pairs
/// with p < q. Indices >= n (padding for odd n) are dropped.
std::vector<std::pair<std::size_t, std::size_t>> round_robin_round(std::size_t n,
                                                                   std::size_t round);
std::size_t round_robin_rounds(std::size_t n) noexcept;

constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

/// Breadth-first eccentricity of every node; kUnreachable where some node
/// cannot be reached.
std::vector<std::size_t> eccentricities_serial(const Graph& g);
std::vector<std::size_t> eccentricities_parallel(const Graph& g);

/// One synchronous step in neighbor-local form:
///   out_i = eta x_i + (1 - eta) (sum_{j in N_i} x_j / deg_i + u0_i)
void consensus_step_local(const Graph& g, std::span<const double> x,
                          std::span<const double> u0, double eta, std::span<double> out);

/// One step in dense matrix form: out = F x + u (row-major F).
void consensus_step_dense(std::span<const double> f, std::size_t n, std::span<const double> x,
                          std::span<const double> u, std::span<double> out);

}  // namespace relest::kernels
