#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relest {

/// Undirected edge stored with u < v.
struct Edge {
  std::size_t u;
  std::size_t v;
  auto operator<=>(const Edge&) const = default;
};

/// Undirected simple graph on nodes 0..n-1.
///
/// Edges are kept sorted in canonical (u < v) form; adjacency lists are
/// sorted ascending. Construction rejects self-loops, duplicates and
/// out-of-range indices. Connectivity is not enforced here; see
/// require_connected() and read_edge_list().
class Graph {
 public:
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t order() const noexcept { return n_; }
  std::size_t size() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const std::size_t> neighbors(std::size_t i) const noexcept {
    return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(std::size_t i) const noexcept {
    return offsets_[i + 1] - offsets_[i];
  }
  bool has_edge(std::size_t i, std::size_t j) const noexcept;

  bool operator==(const Graph& other) const noexcept {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> adjacency_;
};

/// Square row-major matrix.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t order) : n_(order), data_(order * order, 0.0) {}

  std::size_t order() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  std::span<const double> data() const noexcept { return data_; }

  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

/// Symmetric row-major matrix. Writes go through set(), which stores both
/// (i, j) and (j, i), so the stored entries are symmetric bit-for-bit.
class DenseSymMatrix {
 public:
  explicit DenseSymMatrix(std::size_t order) : n_(order), data_(order * order, 0.0) {}

  std::size_t order() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double value) noexcept {
    data_[i * n_ + j] = value;
    data_[j * n_ + i] = value;
  }
  std::span<const double> data() const noexcept { return data_; }

  double max_abs() const noexcept;
  std::vector<double> multiply(std::span<const double> x) const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

DenseSymMatrix adjacency(const Graph& g);
std::vector<std::size_t> degree_vector(const Graph& g);
DenseSymMatrix laplacian(const Graph& g);

/// I - D^{-1/2} A D^{-1/2}. Throws ValidationError on a zero-degree node.
DenseSymMatrix normalized_laplacian(const Graph& g);

bool is_connected(const Graph& g);

/// Breadth-first 2-coloring. Disconnected graphs are colored per component.
bool is_bipartite(const Graph& g);

/// Longest shortest path, in edges. Throws ValidationError when disconnected.
std::size_t diameter(const Graph& g);

bool is_complete(const Graph& g) noexcept;

/// Common degree if every node has the same degree.
std::optional<std::size_t> regular_degree(const Graph& g) noexcept;

/// Throws ValidationError unless g is connected (which also rules out
/// isolated nodes, since n >= 2).
void require_connected(const Graph& g);

// Edge-list text format:
//   # comment            (anything after '#' is ignored)
//   n=<int>              (optional header; otherwise n = max index + 1)
//   i j                  (one undirected edge per line, 0-based)
// read_edge_list validates connectivity.
Graph read_edge_list(std::istream& in);
Graph load_edge_list(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace relest
