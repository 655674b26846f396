#include "relest/topology.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <sstream>

#include "relest/error.hpp"
#include "relest/rng.hpp"
#include "relest/spectral.hpp"

namespace relest {
namespace {

Graph connected_or_throw(Graph g, const std::string& what) {
  if (!is_connected(g)) throw ValidationError(what + " is disconnected");
  return g;
}

std::vector<Edge> unique_edges(std::set<std::pair<std::size_t, std::size_t>>&& pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) edges.push_back({u, v});
  return edges;
}

std::string format_probability(double p) {
  std::ostringstream out;
  out << p;
  return out.str();
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::ring: return "ring";
    case Family::complete: return "complete";
    case Family::circulant: return "circulant";
    case Family::cayley_cyclic: return "cayley_cyclic";
    case Family::cayley_dihedral: return "cayley_dihedral";
    case Family::random_regular: return "random_regular";
    case Family::ramanujan: return "ramanujan";
    case Family::erdos_renyi: return "erdos_renyi";
    case Family::edge_list_file: return "edge_list_file";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  for (const Family f : {Family::ring, Family::complete, Family::circulant, Family::cayley_cyclic,
                         Family::cayley_dihedral, Family::random_regular, Family::ramanujan,
                         Family::erdos_renyi, Family::edge_list_file})
    if (family_name(f) == name) return f;
  throw ValidationError("unknown topology family '" + name + "'");
}

Graph ring(std::size_t n) {
  if (n < 3) throw ValidationError("ring needs n >= 3");
  return circulant(n, {1});
}

Graph complete(std::size_t n) {
  if (n < 2) throw ValidationError("complete graph needs n >= 2");
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Graph(n, std::move(edges));
}

Graph circulant(std::size_t n, const std::vector<std::size_t>& offsets) {
  if (n < 3) throw ValidationError("circulant needs n >= 3");
  if (offsets.empty()) throw ValidationError("circulant needs at least one offset");
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const std::size_t s : offsets) {
    if (s == 0 || s > n / 2)
      throw ValidationError("circulant offset " + std::to_string(s) + " outside [1, " +
                            std::to_string(n / 2) + "]");
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + s) % n;
      pairs.emplace(std::min(i, j), std::max(i, j));
    }
  }
  return connected_or_throw(Graph(n, unique_edges(std::move(pairs))), "circulant graph");
}

Graph cayley_cyclic(std::size_t n, const std::vector<std::size_t>& generators) {
  if (n < 2) throw ValidationError("Cayley graph needs n >= 2");
  if (generators.empty()) throw ValidationError("Cayley graph needs generators");
  std::set<std::size_t> set;
  for (const std::size_t s : generators) {
    if (s % n == 0) throw ValidationError("Cayley generator must be nonzero in Z_n");
    set.insert(s % n);
  }
  for (const std::size_t s : set)
    if (!set.contains(n - s))
      throw ValidationError("Cayley generator set is not closed under negation (" +
                            std::to_string(s) + " without " + std::to_string(n - s) + ")");
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const std::size_t s : set)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = (i + s) % n;
      pairs.emplace(std::min(i, j), std::max(i, j));
    }
  return connected_or_throw(Graph(n, unique_edges(std::move(pairs))), "Cayley graph");
}

Graph cayley_dihedral(std::size_t m, const std::vector<DihedralElement>& generators) {
  if (m < 2) throw ValidationError("dihedral group needs m >= 2");
  if (generators.empty()) throw ValidationError("Cayley graph needs generators");
  std::set<DihedralElement> set;
  for (auto g : generators) {
    g.rotation %= m;
    if (g.rotation == 0 && !g.reflection)
      throw ValidationError("Cayley generator must not be the identity");
    set.insert(g);
  }
  for (const auto& g : set) {
    const DihedralElement inverse =
        g.reflection ? g : DihedralElement{(m - g.rotation) % m, false};
    if (!set.contains(inverse))
      throw ValidationError("dihedral generator set is not closed under inversion");
  }
  // (r^a s^f)(r^b s^g) = r^(a + (-1)^f b) s^(f + g)
  auto index = [m](std::size_t rot, bool refl) { return rot + (refl ? m : 0); };
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < m; ++a)
    for (const bool f : {false, true})
      for (const auto& g : set) {
        const std::size_t rot = f ? (a + m - g.rotation) % m : (a + g.rotation) % m;
        const std::size_t u = index(a, f);
        const std::size_t v = index(rot, f != g.reflection);
        pairs.emplace(std::min(u, v), std::max(u, v));
      }
  return connected_or_throw(Graph(2 * m, unique_edges(std::move(pairs))), "dihedral Cayley graph");
}

GeneratedGraph random_regular(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k >= n) throw ValidationError("random regular graph needs 0 < k < n");
  if ((n * k) % 2 != 0) throw ValidationError("random regular graph needs n*k even");
  SplitMix64 rng(seed);
  std::vector<std::size_t> stubs(n * k);
  for (std::uint64_t attempt = 0; attempt < kGeneratorAttemptCap; ++attempt) {
    for (std::size_t i = 0; i < stubs.size(); ++i) stubs[i] = i / k;
    // Fisher-Yates, high index down.
    for (std::size_t i = stubs.size() - 1; i > 0; --i)
      std::swap(stubs[i], stubs[static_cast<std::size_t>(rng.below(i + 1))]);
    std::vector<Edge> edges;
    edges.reserve(stubs.size() / 2);
    bool simple = true;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t i = 0; i < stubs.size() && simple; i += 2) {
      const std::size_t u = std::min(stubs[i], stubs[i + 1]);
      const std::size_t v = std::max(stubs[i], stubs[i + 1]);
      simple = u != v && seen.emplace(u, v).second;
      edges.push_back({u, v});
    }
    if (!simple) continue;
    Graph g(n, std::move(edges));
    if (is_connected(g)) return {std::move(g), attempt, seed};
  }
  throw NumericalError("random regular generator exceeded " +
                       std::to_string(kGeneratorAttemptCap) + " attempts");
}

GeneratedGraph ramanujan(std::size_t n, std::size_t k, std::uint64_t seed) {
  for (std::uint64_t candidate = 0; candidate < kGeneratorAttemptCap; ++candidate) {
    const std::uint64_t sub = derive_seed(seed, "ramanujan", candidate);
    auto g = random_regular(n, k, sub);
    if (is_ramanujan(g.graph, k)) return {std::move(g.graph), candidate, sub};
  }
  throw NumericalError("no Ramanujan candidate within " + std::to_string(kGeneratorAttemptCap) +
                       " attempts");
}

GeneratedGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw ValidationError("Erdos-Renyi graph needs n >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("edge probability must lie in (0, 1]");
  for (std::uint64_t attempt = 0; attempt < kGeneratorAttemptCap; ++attempt) {
    const std::uint64_t sub = derive_seed(seed, "erdos_renyi", attempt);
    SplitMix64 rng(sub);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.uniform01() < p) edges.push_back({i, j});
    Graph g(n, std::move(edges));
    if (is_connected(g)) return {std::move(g), attempt, sub};
  }
  throw NumericalError("p too small for connectivity at this n");
}

GeneratedGraph generate(const TopologyRecipe& r) {
  switch (r.family) {
    case Family::ring: return {ring(r.n)};
    case Family::complete: return {complete(r.n)};
    case Family::circulant: return {circulant(r.n, r.offsets)};
    case Family::cayley_cyclic: return {cayley_cyclic(r.n, r.generators)};
    case Family::cayley_dihedral: {
      if (r.n % 2 != 0) throw ValidationError("dihedral Cayley graph needs an even node count");
      return {cayley_dihedral(r.n / 2, r.dihedral_generators)};
    }
    case Family::random_regular: return random_regular(r.n, r.degree, r.seed);
    case Family::ramanujan: return ramanujan(r.n, r.degree, r.seed);
    case Family::erdos_renyi: return erdos_renyi(r.n, r.probability, r.seed);
    case Family::edge_list_file: return {load_edge_list(r.path)};
  }
  throw ValidationError("unknown topology family");
}

std::string recipe_label(const TopologyRecipe& r) {
  const std::string n = std::to_string(r.n);
  auto joined = [](const std::vector<std::size_t>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + std::to_string(values[i]);
    return s;
  };
  switch (r.family) {
    case Family::ring: return "C_" + n;
    case Family::complete: return "K_" + n;
    case Family::circulant: return "C_" + n + "(" + joined(r.offsets) + ")";
    case Family::cayley_cyclic:
    case Family::cayley_dihedral: {
      const std::size_t k = r.family == Family::cayley_cyclic ? r.generators.size()
                                                              : r.dihedral_generators.size();
      return "Gamma_" + n + "(" + std::to_string(k) + ")";
    }
    case Family::random_regular: return "RR_" + n + "(" + std::to_string(r.degree) + ")";
    case Family::ramanujan: return "R_" + n + "(" + std::to_string(r.degree) + ")";
    case Family::erdos_renyi: return "G(" + n + "," + format_probability(r.probability) + ")";
    case Family::edge_list_file: return std::filesystem::path(r.path).stem().string();
  }
  return "graph";
}

}  // namespace relest
