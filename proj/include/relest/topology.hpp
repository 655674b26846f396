#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "relest/graph.hpp"

namespace relest {

/// Element r^rotation s^reflection of the dihedral group of order 2m.
struct DihedralElement {
  std::size_t rotation = 0;
  bool reflection = false;
  auto operator<=>(const DihedralElement&) const = default;
};

enum class Family {
  ring,
  complete,
  circulant,
  cayley_cyclic,
  cayley_dihedral,
  random_regular,
  ramanujan,
  erdos_renyi,
  edge_list_file,
};

std::string family_name(Family f);
Family parse_family(const std::string& name);

/// Declarative description of a topology. Only the fields relevant to the
/// family are read.
struct TopologyRecipe {
  Family family = Family::ring;
  std::size_t n = 0;                          ///< for cayley_dihedral: number of nodes 2m
  std::vector<std::size_t> offsets;           ///< circulant, in [1, n/2]
  std::vector<std::size_t> generators;        ///< cayley_cyclic, elements of Z_n
  std::vector<DihedralElement> dihedral_generators;
  std::size_t degree = 0;                     ///< random_regular / ramanujan
  double probability = 0.0;                   ///< erdos_renyi
  std::string path;                           ///< edge_list_file
  std::uint64_t seed = 0;
};

/// A generated graph plus the retry bookkeeping that produced it.
struct GeneratedGraph {
  Graph graph;
  std::uint64_t attempt = 0;   ///< zero-based index of the accepted candidate
  std::uint64_t sub_seed = 0;  ///< seed of the accepted candidate, where applicable
};

inline constexpr std::uint64_t kGeneratorAttemptCap = 10000;

Graph ring(std::size_t n);
Graph complete(std::size_t n);

/// i ~ i +/- s (mod n) for every offset s.
Graph circulant(std::size_t n, const std::vector<std::size_t>& offsets);

/// Cayley graph of Z_n; the generator set must be closed under negation.
Graph cayley_cyclic(std::size_t n, const std::vector<std::size_t>& generators);

/// Cayley graph of the dihedral group of order 2m (nodes: rotation + m *
/// reflection), with x ~ x g. The generator set must be closed under
/// inversion. Generators that are all reflections give a bipartite graph.
Graph cayley_dihedral(std::size_t m, const std::vector<DihedralElement>& generators);

/// Pairing (configuration) model, retried until simple and connected.
GeneratedGraph random_regular(std::size_t n, std::size_t k, std::uint64_t seed);

/// First random_regular candidate, over derived sub-seeds, that passes
/// is_ramanujan.
GeneratedGraph ramanujan(std::size_t n, std::size_t k, std::uint64_t seed);

/// G(n, p), redrawn with the next sub-seed until connected.
GeneratedGraph erdos_renyi(std::size_t n, double p, std::uint64_t seed);

GeneratedGraph generate(const TopologyRecipe& recipe);

/// Short display label such as "K_36", "C_36(1,2)" or "G(36,0.8)".
std::string recipe_label(const TopologyRecipe& recipe);

}  // namespace relest
