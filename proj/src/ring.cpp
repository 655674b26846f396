#include "relest/ring.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "relest/error.hpp"
#include "relest/io.hpp"

namespace relest {
namespace {

void require_ring(std::size_t n) {
  if (n < 3) throw ValidationError("ring needs n >= 3");
}

}  // namespace

std::vector<double> ring_f0_spectrum(std::size_t n) {
  require_ring(n);
  const double theta = std::numbers::pi / (2.0 * static_cast<double>(n));
  std::vector<double> eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = std::cos(4.0 * theta * static_cast<double>(i));
  return eigs;
}

RingReport ring_closed_forms(std::size_t n) {
  require_ring(n);
  RingReport r;
  r.n = n;
  r.parity = n % 2 == 0 ? Parity::even : Parity::odd;
  r.theta = std::numbers::pi / (2.0 * static_cast<double>(n));
  const double s2 = std::sin(r.theta) * std::sin(r.theta);
  const double c2 = std::cos(r.theta) * std::cos(r.theta);
  const double q = 4.0 * s2 * c2;

  r.lambda1 = 2.0 * q;
  if (r.parity == Parity::even) {
    r.lambda_last = 2.0;
    r.sigma = 1.0 + q;
    r.eta_star = q / (1.0 + q);
    r.rate = (1.0 - q) / (1.0 + q);
  } else {
    r.lambda_last = 2.0 * c2;
    r.sigma = c2 + q;
    r.eta_star = (q - s2) / (q + c2);
    r.rate = (1.0 - 4.0 * s2) / (1.0 + 4.0 * s2);
  }
  return r;
}

RingAsymptotics ring_asymptotics(std::size_t n) {
  require_ring(n);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  RingAsymptotics a;
  a.lambda1 = 2.0 * pi2 / n2;
  a.rate = (n2 - pi2) / (n2 + pi2);
  if (n % 2 == 0) {
    a.lambda_last = 2.0;
    a.sigma = 1.0 + pi2 / n2;
    a.eta_star = pi2 / (pi2 + n2);
  } else {
    a.lambda_last = 2.0 - pi2 / (2.0 * n2);
    a.sigma = 1.0 + 3.0 * pi2 / (4.0 * n2);
    a.eta_star = 0.75 * pi2 / (pi2 + n2);
  }
  return a;
}

void write_table1_csv(std::ostream& out, std::size_t n_min, std::size_t n_max) {
  require_ring(n_min);
  if (n_max < n_min) throw ValidationError("table1 needs n-min <= n-max");
  out << "n,parity,lambda1,lambda_last,sigma,eta_star,rate,rate_asymptotic\n";
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto r = ring_closed_forms(n);
    const auto a = ring_asymptotics(n);
    out << n << ',' << (r.parity == Parity::even ? "even" : "odd") << ','
        << format_real(r.lambda1) << ',' << format_real(r.lambda_last) << ','
        << format_real(r.sigma) << ',' << format_real(r.eta_star) << ',' << format_real(r.rate)
        << ',' << format_real(a.rate) << '\n';
  }
}

}  // namespace relest
