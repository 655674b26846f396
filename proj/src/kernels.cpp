#include "relest/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "relest/graph.hpp"

namespace relest::kernels {
namespace {

// Below this order the OpenMP regions are not worth their fork/join cost.
constexpr std::size_t kParallelMinOrder = 128;

struct Rotation {
  std::size_t p;
  std::size_t q;
  double c;
  double s;
  double t;
};

// Rotation J (J_pp = J_qq = c, J_pq = s, J_qp = -s) annihilating a_pq in J^T A J.
bool make_rotation(double app, double aqq, double apq, Rotation& r) {
  if (apq == 0.0) return false;
  const double tau = (aqq - app) / (2.0 * apq);
  const double t = std::abs(tau) > 1e150
                       ? 0.5 / tau
                       : std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  r.t = t;
  r.c = 1.0 / std::sqrt(1.0 + t * t);
  r.s = t * r.c;
  return true;
}

double frobenius(std::span<const double> a) {
  double sum = 0.0;
  for (const double v : a) sum += v * v;
  return std::sqrt(sum);
}

// Row partials are summed in row order, independent of the thread count.
double off_diagonal_norm(const std::vector<double>& a, std::size_t n,
                         std::vector<double>& row_partial) {
#pragma omp parallel for if (n >= kParallelMinOrder) schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) acc += a[i * n + j] * a[i * n + j];
    row_partial[i] = acc;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += row_partial[i];
  return std::sqrt(sum);
}

std::vector<double> identity(std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  return v;
}

JacobiResult finish(std::vector<double>& a, std::vector<double>&& v, std::size_t n, int sweeps,
                    double off, bool converged) {
  JacobiResult result;
  result.eigenvalues.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.eigenvalues[i] = a[i * n + i];
  result.eigenvectors = std::move(v);
  result.sweeps = sweeps;
  result.off_norm = off;
  result.converged = converged;
  return result;
}

std::size_t bfs_eccentricity(const Graph& g, std::size_t source, std::vector<std::size_t>& dist,
                             std::vector<std::size_t>& queue) {
  std::fill(dist.begin(), dist.end(), kUnreachable);
  dist[source] = 0;
  queue.clear();
  queue.push_back(source);
  std::size_t head = 0;
  std::size_t far = 0;
  while (head < queue.size()) {
    const std::size_t v = queue[head++];
    far = dist[v];
    for (const std::size_t w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return queue.size() == g.order() ? far : kUnreachable;
}

}  // namespace

JacobiResult jacobi_serial(std::span<const double> matrix, std::size_t n,
                           const JacobiOptions& options) {
  std::vector<double> a(matrix.begin(), matrix.end());
  std::vector<double> v = identity(n);
  std::vector<double> scratch(n);
  const double threshold = options.off_tolerance * std::max(1.0, frobenius(matrix));

  double off = off_diagonal_norm(a, n, scratch);
  int sweep = 0;
  for (; off > threshold && sweep < options.max_sweeps; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        Rotation r{p, q, 1.0, 0.0, 0.0};
        if (!make_rotation(a[p * n + p], a[q * n + q], a[p * n + q], r)) continue;
        const double apq = a[p * n + q];
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          const double np = r.c * akp - r.s * akq;
          const double nq = r.s * akp + r.c * akq;
          a[k * n + p] = a[p * n + k] = np;
          a[k * n + q] = a[q * n + k] = nq;
        }
        a[p * n + p] -= r.t * apq;
        a[q * n + q] += r.t * apq;
        a[p * n + q] = a[q * n + p] = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = r.c * vkp - r.s * vkq;
          v[k * n + q] = r.s * vkp + r.c * vkq;
        }
      }
    }
    off = off_diagonal_norm(a, n, scratch);
  }
  return finish(a, std::move(v), n, sweep, off, off <= threshold);
}

std::size_t round_robin_rounds(std::size_t n) noexcept {
  const std::size_t m = n + (n % 2);
  return m > 1 ? m - 1 : 0;
}

std::vector<std::pair<std::size_t, std::size_t>> round_robin_round(std::size_t n,
                                                                   std::size_t round) {
  const std::size_t m = n + (n % 2);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (m < 2) return pairs;
  const std::size_t cycle = m - 1;
  auto add = [&](std::size_t a, std::size_t b) {
    if (a >= n || b >= n) return;
    pairs.emplace_back(std::min(a, b), std::max(a, b));
  };
  add(round % cycle, m - 1);
  for (std::size_t k = 1; k < m / 2; ++k) add((round + k) % cycle, (round + cycle - k) % cycle);
  return pairs;
}

JacobiResult jacobi_parallel(std::span<const double> matrix, std::size_t n,
                             const JacobiOptions& options) {
  std::vector<double> a(matrix.begin(), matrix.end());
  std::vector<double> v = identity(n);
  std::vector<double> scratch(n);
  const double threshold = options.off_tolerance * std::max(1.0, frobenius(matrix));
  const bool wide = n >= kParallelMinOrder;

  const std::size_t rounds = round_robin_rounds(n);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> schedule(rounds);
  for (std::size_t r = 0; r < rounds; ++r) schedule[r] = round_robin_round(n, r);

  std::vector<Rotation> rot;
  rot.reserve(n / 2 + 1);

  double off = off_diagonal_norm(a, n, scratch);
  int sweep = 0;
  for (; off > threshold && sweep < options.max_sweeps; ++sweep) {
    for (const auto& pairs : schedule) {
      rot.clear();
      for (const auto& [p, q] : pairs) {
        Rotation r{p, q, 1.0, 0.0, 0.0};
        if (make_rotation(a[p * n + p], a[q * n + q], a[p * n + q], r)) rot.push_back(r);
      }
      if (rot.empty()) continue;
      const std::size_t nrot = rot.size();

      // A <- A J: each row owns its entries.
#pragma omp parallel for if (wide) schedule(static)
      for (std::size_t i = 0; i < n; ++i) {
        double* row = a.data() + i * n;
        for (std::size_t k = 0; k < nrot; ++k) {
          const Rotation& r = rot[k];
          const double xp = row[r.p];
          const double xq = row[r.q];
          row[r.p] = r.c * xp - r.s * xq;
          row[r.q] = r.s * xp + r.c * xq;
        }
      }
      // A <- J^T A: each pair owns rows p and q.
#pragma omp parallel for if (wide) schedule(static)
      for (std::size_t k = 0; k < nrot; ++k) {
        const Rotation& r = rot[k];
        double* rp = a.data() + r.p * n;
        double* rq = a.data() + r.q * n;
        for (std::size_t j = 0; j < n; ++j) {
          const double xp = rp[j];
          const double xq = rq[j];
          rp[j] = r.c * xp - r.s * xq;
          rq[j] = r.s * xp + r.c * xq;
        }
      }
      // V <- V J.
#pragma omp parallel for if (wide) schedule(static)
      for (std::size_t i = 0; i < n; ++i) {
        double* row = v.data() + i * n;
        for (std::size_t k = 0; k < nrot; ++k) {
          const Rotation& r = rot[k];
          const double xp = row[r.p];
          const double xq = row[r.q];
          row[r.p] = r.c * xp - r.s * xq;
          row[r.q] = r.s * xp + r.c * xq;
        }
      }
      for (const Rotation& r : rot) a[r.p * n + r.q] = a[r.q * n + r.p] = 0.0;
      // Mirror the upper triangle so stored entries stay exactly symmetric.
#pragma omp parallel for if (wide) schedule(static)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a[j * n + i] = a[i * n + j];
    }
    off = off_diagonal_norm(a, n, scratch);
  }
  return finish(a, std::move(v), n, sweep, off, off <= threshold);
}

std::vector<std::size_t> eccentricities_serial(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<std::size_t> ecc(n);
  std::vector<std::size_t> dist(n);
  std::vector<std::size_t> queue;
  queue.reserve(n);
  for (std::size_t s = 0; s < n; ++s) ecc[s] = bfs_eccentricity(g, s, dist, queue);
  return ecc;
}

std::vector<std::size_t> eccentricities_parallel(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<std::size_t> ecc(n);
#pragma omp parallel if (n >= kParallelMinOrder)
  {
    std::vector<std::size_t> dist(n);
    std::vector<std::size_t> queue;
    queue.reserve(n);
#pragma omp for schedule(dynamic, 16)
    for (std::size_t s = 0; s < n; ++s) ecc[s] = bfs_eccentricity(g, s, dist, queue);
  }
  return ecc;
}

void consensus_step_local(const Graph& g, std::span<const double> x, std::span<const double> u0,
                          double eta, std::span<double> out) {
  const std::size_t n = g.order();
  const double keep = 1.0 - eta;
#pragma omp parallel for if (n >= 4 * kParallelMinOrder) schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const std::size_t j : g.neighbors(i)) sum += x[j];
    const double avg = sum / static_cast<double>(g.degree(i));
    out[i] = eta * x[i] + keep * (avg + u0[i]);
  }
}

void consensus_step_dense(std::span<const double> f, std::size_t n, std::span<const double> x,
                          std::span<const double> u, std::span<double> out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += f[i * n + j] * x[j];
    out[i] = acc + u[i];
  }
}

}  // namespace relest::kernels
