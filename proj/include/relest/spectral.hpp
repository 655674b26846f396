#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "relest/graph.hpp"

namespace relest {

/// Eigenvalues ascending; eigenvector k is column k of a row-major n x n
/// array, orthonormal, with its largest-magnitude component positive
/// (first such index on ties).
struct EigenDecomposition {
  std::size_t order = 0;
  std::vector<double> eigenvalues;
  std::vector<double> eigenvectors;

  double vector_component(std::size_t row, std::size_t k) const noexcept {
    return eigenvectors[row * order + k];
  }
  std::vector<double> vector(std::size_t k) const;
};

/// Symmetric eigendecomposition by round-robin Jacobi.
/// Throws NumericalError (with the residual off-diagonal norm) on
/// non-convergence within 100 sweeps.
EigenDecomposition sym_eigen(const DenseSymMatrix& m);

/// Same contract, backed by the serial cyclic-by-row kernel.
EigenDecomposition sym_eigen_reference(const DenseSymMatrix& m);

/// Tolerance for "eigenvalue equals 0" and "eigenvalue equals 2".
inline constexpr double kSpectralTolerance = 1e-9;

/// 1 - lambda_i of the normalized Laplacian, in descending order.
std::vector<double> f0_spectrum(std::span<const double> laplacian_eigs);

/// eta + (1 - eta) lambda elementwise. Throws ValidationError for eta outside [0, 1).
std::vector<double> eta_spectrum(std::span<const double> f0_eigs, double eta);

double sigma(double lambda1, double lambda_last) noexcept;

/// Optimal memory parameter: 1 - 1/sigma if sigma > 1, else 0.
/// Throws ValidationError("graph disconnected") if lambda1 <= 0.
double eta_star(double lambda1, double lambda_last);

/// lambda1 / (2 + lambda1): eta_star with lambda_last = 2.
double eta_star_bipartite(double lambda1) noexcept;

/// Second largest modulus of the F_eta spectrum (f0_eigs descending, first
/// entry is the unit eigenvalue).
double convergence_rate(std::span<const double> f0_eigs, double eta);

/// Rate at eta_star in closed form:
/// (l_last - l1) / (l_last + l1) if sigma > 1, else 1 - l1.
double rate_at_eta_star(double lambda1, double lambda_last) noexcept;

/// ceil(arcosh(n - 1) / arcosh((l_last + l1) / (l_last - l1))) for
/// non-complete graphs. Throws ValidationError when l_last - l1 <= 1e-9.
std::size_t diameter_upper_bound(double lambda1, double lambda_last, std::size_t n);

/// sech(arcosh(n - 1) / (diameter - 1)). Throws ValidationError if
/// diameter < 2 or n < 3.
double rate_lower_bound(std::size_t n, std::size_t diameter);

struct RamanujanCheck {
  bool ramanujan = false;
  double second_modulus = 0.0;  ///< largest |mu_i| over non-trivial adjacency eigenvalues
  double bound = 0.0;           ///< 2 sqrt(k - 1)
  bool bipartite = false;       ///< if true, mu = -k was treated as trivial
};

/// Throws ValidationError unless g is k-regular.
RamanujanCheck ramanujan_check(const Graph& g, std::size_t k);
bool is_ramanujan(const Graph& g, std::size_t k);

struct SpectralReport {
  std::size_t n = 0;
  std::vector<double> lap_eigs;
  double lambda1 = 0.0;
  double lambda_last = 0.0;
  double sigma = 0.0;
  double eta_star = 0.0;
  double rate_sigma0 = 0.0;
  double rate_eta_star = 0.0;
  bool bipartite = false;
  std::size_t diameter = 0;
  std::optional<std::size_t> diameter_bound;  ///< absent for complete graphs
  std::optional<double> rate_lower_bound;     ///< absent when diameter < 2 or n < 3
  std::optional<std::size_t> regular_degree;
  std::optional<RamanujanCheck> ramanujan;    ///< present for regular graphs
};

/// Full spectral analysis of a connected graph.
SpectralReport analyze(const Graph& g);

}  // namespace relest
