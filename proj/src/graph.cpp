#include "relest/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "relest/error.hpp"
#include "relest/kernels.hpp"

namespace relest {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 2) throw ValidationError("graph needs at least 2 nodes");
  for (auto& e : edges_) {
    if (e.u == e.v) throw ValidationError("self-loop at node " + std::to_string(e.u));
    if (e.u >= n_ || e.v >= n_)
      throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") out of range for n=" + std::to_string(n_));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end())
    throw ValidationError("duplicate edge (" + std::to_string(dup->u) + ", " +
                          std::to_string(dup->v) + ")");

  offsets_.assign(n_ + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(2 * edges_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < n_; ++i)
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
}

bool Graph::has_edge(std::size_t i, std::size_t j) const noexcept {
  if (i >= n_ || j >= n_) return false;
  const auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += data_[i * n_ + j] * x[j];
    y[i] = acc;
  }
  return y;
}

double DenseSymMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const double v : data_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> DenseSymMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += data_[i * n_ + j] * x[j];
    y[i] = acc;
  }
  return y;
}

DenseSymMatrix adjacency(const Graph& g) {
  DenseSymMatrix a(g.order());
  for (const auto& e : g.edges()) a.set(e.u, e.v, 1.0);
  return a;
}

std::vector<std::size_t> degree_vector(const Graph& g) {
  std::vector<std::size_t> d(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) d[i] = g.degree(i);
  return d;
}

DenseSymMatrix laplacian(const Graph& g) {
  DenseSymMatrix l(g.order());
  for (std::size_t i = 0; i < g.order(); ++i) l.set(i, i, static_cast<double>(g.degree(i)));
  for (const auto& e : g.edges()) l.set(e.u, e.v, -1.0);
  return l;
}

DenseSymMatrix normalized_laplacian(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<double> inv_sqrt(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (g.degree(i) == 0) throw ValidationError("zero-degree node " + std::to_string(i));
    inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(g.degree(i)));
  }
  DenseSymMatrix l(n);
  for (std::size_t i = 0; i < n; ++i) l.set(i, i, 1.0);
  for (const auto& e : g.edges()) l.set(e.u, e.v, -inv_sqrt[e.u] * inv_sqrt[e.v]);
  return l;
}

bool is_connected(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<char> seen(n, 0);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (const std::size_t w : g.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        frontier.push(w);
      }
    }
  }
  return reached == n;
}

bool is_bipartite(const Graph& g) {
  const std::size_t n = g.order();
  std::vector<int> color(n, -1);
  std::queue<std::size_t> frontier;
  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] >= 0) continue;
    color[root] = 0;
    frontier.push(root);
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (const std::size_t w : g.neighbors(v)) {
        if (color[w] < 0) {
          color[w] = 1 - color[v];
          frontier.push(w);
        } else if (color[w] == color[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::size_t diameter(const Graph& g) {
  const auto ecc = kernels::eccentricities_parallel(g);
  std::size_t d = 0;
  for (const std::size_t e : ecc) {
    if (e == kernels::kUnreachable) throw ValidationError("diameter of a disconnected graph");
    d = std::max(d, e);
  }
  return d;
}

bool is_complete(const Graph& g) noexcept {
  const std::size_t n = g.order();
  return g.size() == n * (n - 1) / 2;
}

std::optional<std::size_t> regular_degree(const Graph& g) noexcept {
  const std::size_t k = g.degree(0);
  for (std::size_t i = 1; i < g.order(); ++i)
    if (g.degree(i) != k) return std::nullopt;
  return k;
}

void require_connected(const Graph& g) {
  if (!is_connected(g)) throw ValidationError("graph is not connected");
}

Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::optional<std::size_t> declared_n;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first.rfind("n=", 0) == 0) {
      try {
        declared_n = std::stoul(first.substr(2));
      } catch (const std::exception&) {
        throw ValidationError("line " + std::to_string(line_no) + ": bad header '" + first + "'");
      }
      continue;
    }
    std::string second, extra;
    if (!(fields >> second) || (fields >> extra))
      throw ValidationError("line " + std::to_string(line_no) + ": expected 'i j'");
    std::size_t u = 0, v = 0;
    try {
      std::size_t pos = 0;
      u = std::stoul(first, &pos);
      if (pos != first.size()) throw std::invalid_argument(first);
      v = std::stoul(second, &pos);
      if (pos != second.size()) throw std::invalid_argument(second);
    } catch (const std::exception&) {
      throw ValidationError("line " + std::to_string(line_no) + ": node indices must be integers");
    }
    max_index = std::max({max_index, u, v});
    edges.push_back({u, v});
  }
  if (edges.empty()) throw ValidationError("edge list has no edges");
  const std::size_t n = declared_n.value_or(max_index + 1);
  if (max_index >= n)
    throw ValidationError("edge index " + std::to_string(max_index) + " exceeds header n=" +
                          std::to_string(n));
  Graph g(n, std::move(edges));
  require_connected(g);
  return g;
}

Graph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "n=" << g.order() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

}  // namespace relest
