#pragma once

// Regular graphs with consistent labelings: each label is a permutation of
// the vertex set, so walks can be run backwards exactly.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "wtk/common.hpp"
#include "wtk/rng.hpp"

namespace wtk::expander {

using Vertex = std::uint32_t;

class LabeledGraph {
 public:
  /// labels[t][u] = L(u, t). Validates bijectivity and undirected symmetry.
  LabeledGraph(std::vector<std::vector<Vertex>> labels, std::string family = "custom");

  std::uint32_t vertices() const { return n_; }
  unsigned degree() const { return static_cast<unsigned>(fwd_.size()); }
  const std::string& family() const { return family_; }
  const std::vector<std::vector<Vertex>>& labels() const { return fwd_; }

  Vertex step(Vertex u, unsigned t) const;
  Vertex step_inverse(Vertex v, unsigned t) const;

 private:
  std::uint32_t n_;
  std::string family_;
  std::vector<std::vector<Vertex>> fwd_;
  std::vector<std::vector<Vertex>> inv_;
};

/// Label 0 is +1, label 1 is -1.
LabeledGraph cycle(std::uint32_t n);
/// Cayley graph of Z_N with every shift as a label: L(u, t) = u + t mod N.
LabeledGraph complete_selfloop(std::uint32_t n);
/// Margulis-Gabber-Galil graph on Z_m^2, vertex (x, y) = x*m + y. Labels, in order:
/// x+2y, x-2y, x+(2y+1), x-(2y+1) acting on x; y+2x, y-2x, y+(2x+1), y-(2x+1) acting on y.
LabeledGraph margulis(std::uint32_t m);

/// Tags: "cycle", "complete-selfloop", "margulis". UnsupportedFamily otherwise.
LabeledGraph family_graph(const std::string& tag, std::uint32_t size);

Vertex walk(const LabeledGraph& g, Vertex start, std::span<const Symbol> labels);
Vertex walk_inverse(const LabeledGraph& g, Vertex end, std::span<const Symbol> labels);

struct SpectralReport {
  double lambda = 0;
  std::size_t iterations = 0;
  double residual = 0;
};

/// Second largest absolute eigenvalue of the normalized adjacency operator, by power
/// iteration on A^2 restricted to the complement of the constant vector.
SpectralReport second_eigenvalue(const LabeledGraph& g, double tol = 1e-9, std::size_t max_iter = 200000,
                                 std::uint64_t seed = 0x5eed);

/// p -> pA for a probability (row) vector p.
std::vector<double> propagate(const LabeledGraph& g, std::span<const double> p);

nlohmann::ordered_json to_json(const LabeledGraph& g);
LabeledGraph graph_from_json(const nlohmann::json& j);

}  // namespace wtk::expander
