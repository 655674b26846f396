#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace relest {

enum class Parity { odd, even };

/// Closed-form convergence quantities of the n-node ring, theta = pi / (2n).
struct RingReport {
  std::size_t n = 0;
  double theta = 0.0;
  double lambda1 = 0.0;      ///< 8 s^2 c^2
  double lambda_last = 0.0;  ///< 2 (even) or 2 c^2 (odd)
  double sigma = 0.0;
  double eta_star = 0.0;
  double rate = 0.0;
  Parity parity = Parity::odd;
};

/// Large-n expansions of the same quantities.
struct RingAsymptotics {
  double lambda1 = 0.0;
  double lambda_last = 0.0;
  double sigma = 0.0;
  double eta_star = 0.0;
  double rate = 0.0;  ///< (n^2 - pi^2) / (n^2 + pi^2) for both parities
};

/// cos(4 theta i) = cos(2 pi i / n) for i = 0..n-1 (index order, not sorted).
std::vector<double> ring_f0_spectrum(std::size_t n);

RingReport ring_closed_forms(std::size_t n);
RingAsymptotics ring_asymptotics(std::size_t n);

/// CSV: n,parity,lambda1,lambda_last,sigma,eta_star,rate,rate_asymptotic
void write_table1_csv(std::ostream& out, std::size_t n_min, std::size_t n_max);

}  // namespace relest
