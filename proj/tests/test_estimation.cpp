#include <sstream>

#include <doctest.h>

#include "oracles.hpp"
#include "relest/error.hpp"
#include "relest/estimation.hpp"
#include "relest/graph.hpp"
#include "relest/kernels.hpp"
#include "relest/rng.hpp"
#include "relest/spectral.hpp"
#include "relest/topology.hpp"

using namespace relest;

namespace {

Graph p2() { return Graph(2, {{0, 1}}); }

// x~_01 = 1, x~_10 = -1: node 1 sits one unit above node 0.
MeasurementSet p2_measurements() {
  const auto g = p2();
  MeasurementSet m(g);
  m.set(0, 1, 1.0);
  m.set(1, 0, -1.0);
  return m;
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("two-node hand example") {
  const auto g = p2();
  const auto m = p2_measurements();
  const std::vector<double> zero{0.0, 0.0};
  // phi(0) = 1/2 [(0 - 0 + 1)^2 + (0 - 0 - 1)^2] = 1
  CHECK(cost(g, m, zero) == doctest::Approx(1.0));
  // x~ = (x~_10 - x~_01, x~_01 - x~_10) = (-2, 2), gradient at 0 is -x~
  const auto xt = stacked_measurement(g, m);
  CHECK(xt[0] == doctest::Approx(-2.0));
  CHECK(xt[1] == doctest::Approx(2.0));
  const auto grad = gradient(g, m, zero);
  CHECK(grad[0] == doctest::Approx(2.0));
  CHECK(grad[1] == doctest::Approx(-2.0));
  const auto xs = centralized_solve(g, m);
  CHECK(xs[0] == doctest::Approx(-0.5));
  CHECK(xs[1] == doctest::Approx(0.5));
  CHECK(cost(g, m, xs) < 1e-24);
  const auto u0 = u0_vector(g, m);
  CHECK(u0[0] == doctest::Approx(-1.0));
  CHECK(u0[1] == doctest::Approx(1.0));
}

TEST_CASE("measurement set bookkeeping") {
  const auto g = ring(5);
  MeasurementSet m(g);
  m.set(0, 4, 2.5);
  CHECK(m.value(0, 4) == 2.5);
  CHECK(m.value(4, 0) == 0.0);
  CHECK_THROWS_AS(m.value(0, 2), ValidationError);
  CHECK_THROWS_AS(m.set(1, 3, 1.0), ValidationError);
  CHECK(m.matches(g));
  CHECK_FALSE(m.matches(complete(5)));
}

TEST_CASE("noiseless measurements are recovered exactly up to a shift") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = oracle::random_connected_graph(seed, 4, 25, 0.2);
    const auto truth = oracle::random_vector(seed + 7, g.order());
    const auto m = synthesize_measurements(g, truth, NoiseModel::none(), seed);
    const auto xs = centralized_solve(g, m);
    CHECK(aligned_distance(xs, truth) < 1e-10);
    double mean = 0.0;
    for (const double v : xs) mean += v;
    CHECK(std::abs(mean) < 1e-10);  // minimum norm: orthogonal to 1
  }
}

TEST_CASE("noise draws follow the documented stream and statistics") {
  const auto g = ring(4);
  const std::vector<double> truth{0.0, 0.0, 0.0, 0.0};
  const auto m = synthesize_measurements(g, truth, NoiseModel::uniform(0.5), 99);
  SplitMix64 rng(99);
  for (const auto& e : g.edges()) {
    CHECK(m.value(e.u, e.v) == rng.symmetric(0.5));
    CHECK(m.value(e.v, e.u) == rng.symmetric(0.5));
  }

  const auto big = complete(200);
  const std::vector<double> z(200, 0.0);
  for (const auto noise : {NoiseModel::uniform(0.1), NoiseModel::gaussian(0.1)}) {
    const auto mm = synthesize_measurements(big, z, noise, 5);
    double s = 0.0, s2 = 0.0;
    std::size_t count = 0;
    for (const auto& e : big.edges())
      for (const double v : {mm.value(e.u, e.v), mm.value(e.v, e.u)}) {
        s += v;
        s2 += v * v;
        ++count;
      }
    const double var = noise.kind == NoiseModel::Kind::uniform ? 0.01 / 3.0 : 0.01;
    CHECK(std::abs(s / double(count)) < 4.0 * std::sqrt(var / double(count)));
    CHECK(std::abs(s2 / double(count) - var) < 0.05 * var);
  }
  CHECK_THROWS_AS(synthesize_measurements(g, truth, NoiseModel::uniform(-1.0), 1), ValidationError);
  CHECK_THROWS_AS(synthesize_measurements(g, std::vector<double>{1.0}, NoiseModel::none(), 1),
                  ValidationError);
}

TEST_CASE("gradient matches finite differences and vanishes at the solution") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = oracle::random_connected_graph(seed + 40, 4, 20, 0.25);
    const auto truth = oracle::random_vector(seed, g.order());
    const auto m = synthesize_measurements(g, truth, NoiseModel::uniform(0.1), seed);
    const auto x = oracle::random_vector(seed + 1000, g.order());
    const auto fd = oracle::finite_difference_gradient(
        [&](const std::vector<double>& y) { return cost(g, m, y); }, x);
    const auto grad = gradient(g, m, x);
    CHECK(oracle::max_abs_diff(grad, fd) / std::max(1.0, oracle::norm2(fd)) < 1e-6);
    CHECK(oracle::norm2(gradient(g, m, centralized_solve(g, m))) < 1e-8);
  }
}

TEST_CASE("centralized solve agrees with a bordered linear system") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = oracle::random_connected_graph(seed + 80, 3, 30, 0.15);
    const auto truth = oracle::random_vector(seed, g.order());
    const auto m = synthesize_measurements(g, truth, NoiseModel::gaussian(0.2), seed);
    const auto expected = oracle::bordered_min_norm_solve(g, stacked_measurement(g, m));
    CHECK(oracle::max_abs_diff(centralized_solve(g, m), expected) < 1e-9);
  }
}

TEST_CASE("centralized solve rejects a disconnected graph") {
  Graph split(4, {{0, 1}, {2, 3}});
  MeasurementSet m(split);
  m.set(0, 1, 1.0);
  CHECK_THROWS_AS(centralized_solve(split, m), ValidationError);
}

TEST_CASE("F_eta is row stochastic and u0 is half the scaled measurement") {
  const auto g = oracle::random_connected_graph(4, 10, 10, 0.3);
  const auto f = f_eta_matrix(g, 0.3);
  for (std::size_t i = 0; i < g.order(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < g.order(); ++j) s += f(i, j);
    CHECK(s == doctest::Approx(1.0));
    CHECK(f(i, i) == doctest::Approx(0.3));
  }
  CHECK_THROWS_AS(f_eta_matrix(g, 1.0), ValidationError);
}

TEST_CASE("fixed point of the iteration is a least-squares solution") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = oracle::random_connected_graph(seed + 9, 5, 20, 0.3);
    const auto truth = oracle::random_vector(seed, g.order());
    const auto m = synthesize_measurements(g, truth, NoiseModel::uniform(0.1), seed);
    const auto rep = analyze(g);
    const auto xs = centralized_solve(g, m);
    const std::vector<double> x0(g.order(), 0.0);
    const auto t = iterate(g, m, Scheme::sigma_eta(rep.eta_star), x0, 3000, xs);
    CHECK(t.aligned_mse.back() < 1e-20);
    CHECK(std::isfinite(t.mse.back()));
  }
}

TEST_CASE("degree-weighted mean is conserved") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = oracle::random_connected_graph(seed + 300, 5, 30, 0.2);
    const auto m =
        synthesize_measurements(g, oracle::random_vector(seed, g.order()), NoiseModel{}, seed);
    const auto x0 = oracle::random_vector(seed + 1, g.order());
    for (const auto& s : {Scheme::sigma0(), Scheme::sigma_eta(0.4)}) {
      const auto t = iterate(g, m, s, x0, 200);
      const double mean0 = degree_weighted_mean(g, x0);
      for (const auto& x : t.states) CHECK(std::abs(degree_weighted_mean(g, x) - mean0) < 1e-10);
      CHECK(std::isnan(t.mse.back()));
    }
  }
}

TEST_CASE("iterate matches repeated dense steps") {
  const auto g = oracle::random_connected_graph(12, 15, 15, 0.2);
  const auto m = synthesize_measurements(g, oracle::random_vector(1, 15), NoiseModel{}, 3);
  const double eta = 0.25;
  const auto f = f_eta_matrix(g, eta);
  auto u = u0_vector(g, m);
  for (auto& v : u) v *= (1.0 - eta);
  std::vector<double> x(15, 0.0), next(15);
  const auto t = iterate(g, m, Scheme::sigma_eta(eta), x, 30);
  for (int step = 1; step <= 30; ++step) {
    kernels::consensus_step_dense(f.data(), 15, x, u, next);
    x = next;
    CHECK(oracle::max_abs_diff(x, t.states[step]) < 1e-12);
  }
  CHECK(t.cost.size() == 31);
  CHECK(t.cost[0] == doctest::Approx(cost(g, m, t.states[0])));
  CHECK_THROWS_AS(iterate(g, m, Scheme::sigma_eta(1.0), x, 1), ValidationError);
}

TEST_CASE("optimal scheme on K_n settles after one step") {
  const auto g = complete(12);
  const auto m = synthesize_measurements(g, oracle::random_vector(2, 12), NoiseModel{}, 2);
  const std::vector<double> x0(12, 0.0);
  const auto t = iterate(g, m, Scheme::sigma_eta(1.0 / 12.0), x0, 3);
  CHECK(t.cost[1] <= t.cost[0]);
  CHECK(t.cost[2] == doctest::Approx(t.cost[1]).epsilon(1e-12));
}

TEST_CASE("error metrics") {
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{2.0, 3.0, 4.0};
  CHECK(mse(a, b) == doctest::Approx(1.0));
  CHECK(aligned_mse(a, b) == doctest::Approx(0.0).scale(1.0));
  CHECK(aligned_distance(a, b) < 1e-15);
  const std::vector<double> c{0.0, 0.0, 3.0};
  // c - a = (-1, -2, 0), centered (0, -1, 1)
  CHECK(aligned_mse(c, a) == doctest::Approx(2.0 / 3.0));
  CHECK(aligned_distance(c, a) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("measurement file round trip and errors") {
  const auto g = ring(5);
  const auto m = synthesize_measurements(g, oracle::random_vector(3, 5), NoiseModel{}, 3);
  std::ostringstream out;
  write_measurements(out, g, m);
  std::istringstream in(out.str());
  const auto back = read_measurements(in, g);
  for (const auto& e : g.edges()) {
    CHECK(back.value(e.u, e.v) == m.value(e.u, e.v));
    CHECK(back.value(e.v, e.u) == m.value(e.v, e.u));
  }

  const auto p = p2();
  std::istringstream missing("0 1 1.0\n");
  CHECK_THROWS_AS(read_measurements(missing, p), ValidationError);
  std::istringstream repeated("0 1 1.0\n0 1 2.0\n1 0 -1\n");
  CHECK_THROWS_AS(read_measurements(repeated, p), ValidationError);
  std::istringstream non_edge("0 1 1.0\n1 0 -1\n0 2 3\n");
  CHECK_THROWS_AS(read_measurements(non_edge, p), ValidationError);
  std::istringstream bad_number("0 1 abc\n1 0 -1\n");
  CHECK_THROWS_AS(read_measurements(bad_number, p), ValidationError);
  std::istringstream ok("# comment\n0 1 1.0\n1 0 -1.0 # trailing\n");
  CHECK(read_measurements(ok, p).value(1, 0) == -1.0);
}

TEST_CASE("trajectory CSV layout") {
  const auto g = p2();
  const auto m = p2_measurements();
  const std::vector<double> x0{0.0, 0.0};
  const auto t = iterate(g, m, Scheme::sigma0(), x0, 2, centralized_solve(g, m));
  std::ostringstream out;
  write_trajectory_csv(out, t);
  std::istringstream lines(out.str());
  std::string header;
  std::getline(lines, header);
  CHECK(header == "t,x_0,x_1,phi,mse,aligned_mse");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 3);
}

}
