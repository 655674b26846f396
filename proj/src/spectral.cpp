#include "relest/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "relest/error.hpp"
#include "relest/kernels.hpp"

namespace relest {
namespace {

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta < 1.0)) {
    std::ostringstream msg;
    msg << "eta must lie in [0, 1), got " << eta;
    throw ValidationError(msg.str());
  }
}

EigenDecomposition package(kernels::JacobiResult&& raw, std::size_t n) {
  if (!raw.converged) {
    std::ostringstream msg;
    msg << "Jacobi eigensolver did not converge after " << raw.sweeps
        << " sweeps (off-diagonal norm " << raw.off_norm << ")";
    throw NumericalError(msg.str());
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return raw.eigenvalues[a] < raw.eigenvalues[b];
  });

  EigenDecomposition out;
  out.order = n;
  out.eigenvalues.resize(n);
  out.eigenvectors.assign(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = raw.eigenvalues[src];
    std::size_t lead = 0;
    double lead_abs = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(raw.eigenvectors[i * n + src]);
      if (a > lead_abs) {
        lead_abs = a;
        lead = i;
      }
    }
    const double sign = raw.eigenvectors[lead * n + src] < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i)
      out.eigenvectors[i * n + k] = sign * raw.eigenvectors[i * n + src];
  }
  return out;
}

}  // namespace

std::vector<double> EigenDecomposition::vector(std::size_t k) const {
  std::vector<double> v(order);
  for (std::size_t i = 0; i < order; ++i) v[i] = eigenvectors[i * order + k];
  return v;
}

EigenDecomposition sym_eigen(const DenseSymMatrix& m) {
  if (m.order() == 0) throw ValidationError("eigendecomposition of an empty matrix");
  return package(kernels::jacobi_parallel(m.data(), m.order()), m.order());
}

EigenDecomposition sym_eigen_reference(const DenseSymMatrix& m) {
  if (m.order() == 0) throw ValidationError("eigendecomposition of an empty matrix");
  return package(kernels::jacobi_serial(m.data(), m.order()), m.order());
}

std::vector<double> f0_spectrum(std::span<const double> laplacian_eigs) {
  std::vector<double> f(laplacian_eigs.size());
  std::transform(laplacian_eigs.begin(), laplacian_eigs.end(), f.begin(),
                 [](double l) { return 1.0 - l; });
  return f;
}

std::vector<double> eta_spectrum(std::span<const double> f0_eigs, double eta) {
  require_eta(eta);
  std::vector<double> f(f0_eigs.size());
  std::transform(f0_eigs.begin(), f0_eigs.end(), f.begin(),
                 [eta](double l) { return eta + (1.0 - eta) * l; });
  return f;
}

double sigma(double lambda1, double lambda_last) noexcept { return 0.5 * (lambda1 + lambda_last); }

double eta_star(double lambda1, double lambda_last) {
  if (!(lambda1 > 0.0)) throw ValidationError("graph disconnected (lambda1 <= 0)");
  const double s = sigma(lambda1, lambda_last);
  return s > 1.0 ? 1.0 - 1.0 / s : 0.0;
}

double eta_star_bipartite(double lambda1) noexcept { return lambda1 / (2.0 + lambda1); }

double convergence_rate(std::span<const double> f0_eigs, double eta) {
  require_eta(eta);
  double rate = 0.0;
  for (std::size_t i = 1; i < f0_eigs.size(); ++i)
    rate = std::max(rate, std::abs(eta + (1.0 - eta) * f0_eigs[i]));
  return rate;
}

double rate_at_eta_star(double lambda1, double lambda_last) noexcept {
  if (sigma(lambda1, lambda_last) > 1.0) return (lambda_last - lambda1) / (lambda_last + lambda1);
  return 1.0 - lambda1;
}

std::size_t diameter_upper_bound(double lambda1, double lambda_last, std::size_t n) {
  if (!(lambda1 > 0.0)) throw ValidationError("graph disconnected (lambda1 <= 0)");
  if (lambda_last - lambda1 <= kSpectralTolerance)
    throw ValidationError("bound undefined for complete graphs");
  const double ratio = (lambda_last + lambda1) / (lambda_last - lambda1);
  const double bound = std::acosh(static_cast<double>(n - 1)) / std::acosh(ratio);
  return static_cast<std::size_t>(std::ceil(bound));
}

double rate_lower_bound(std::size_t n, std::size_t diameter) {
  if (diameter < 2) throw ValidationError("bound requires diameter >= 2");
  if (n < 3) throw ValidationError("bound requires n >= 3");
  const double arg =
      std::acosh(static_cast<double>(n - 1)) / static_cast<double>(diameter - 1);
  return 1.0 / std::cosh(arg);
}

RamanujanCheck ramanujan_check(const Graph& g, std::size_t k) {
  const auto deg = regular_degree(g);
  if (!deg || *deg != k)
    throw ValidationError("Ramanujan check requires a " + std::to_string(k) + "-regular graph");
  const auto eig = sym_eigen(adjacency(g));
  RamanujanCheck check;
  check.bipartite = is_bipartite(g);
  check.bound = 2.0 * std::sqrt(static_cast<double>(k) - 1.0);
  // Ascending: the last eigenvalue is +k; on bipartite graphs the first is -k.
  const std::size_t n = g.order();
  const std::size_t first = check.bipartite ? 1 : 0;
  for (std::size_t i = first; i + 1 < n; ++i)
    check.second_modulus = std::max(check.second_modulus, std::abs(eig.eigenvalues[i]));
  check.ramanujan = check.second_modulus <= check.bound + kSpectralTolerance;
  return check;
}

bool is_ramanujan(const Graph& g, std::size_t k) { return ramanujan_check(g, k).ramanujan; }

SpectralReport analyze(const Graph& g) {
  require_connected(g);
  const std::size_t n = g.order();
  const auto eig = sym_eigen(normalized_laplacian(g));

  SpectralReport r;
  r.n = n;
  r.lap_eigs = eig.eigenvalues;
  r.lambda1 = r.lap_eigs[1];
  r.lambda_last = r.lap_eigs[n - 1];
  r.sigma = sigma(r.lambda1, r.lambda_last);
  r.eta_star = eta_star(r.lambda1, r.lambda_last);
  const auto f0 = f0_spectrum(r.lap_eigs);
  r.rate_sigma0 = convergence_rate(f0, 0.0);
  r.rate_eta_star = rate_at_eta_star(r.lambda1, r.lambda_last);
  r.bipartite = is_bipartite(g);
  r.diameter = diameter(g);
  if (!is_complete(g)) r.diameter_bound = diameter_upper_bound(r.lambda1, r.lambda_last, n);
  if (r.diameter >= 2 && n >= 3) r.rate_lower_bound = rate_lower_bound(n, r.diameter);
  r.regular_degree = regular_degree(g);
  if (r.regular_degree) r.ramanujan = ramanujan_check(g, *r.regular_degree);
  return r;
}

}  // namespace relest
