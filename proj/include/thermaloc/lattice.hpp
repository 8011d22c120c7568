#pragma once

#include <cstddef>
#include <map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace thermaloc {

using Vertex = int;
using EdgeId = std::size_t;

/// Sorted, duplicate-free set of vertex ids.
using VertexSet = std::vector<Vertex>;
/// Sorted, duplicate-free set of indices into InteractionGraph::edges().
using EdgeSet = std::vector<EdgeId>;

VertexSet make_vertex_set(std::vector<Vertex> vs);
EdgeSet make_edge_set(std::vector<EdgeId> es);

/// Finite interaction hypergraph. Edges are sorted vertex lists; an edge's
/// index in edges() is its identity and also the fixed total order used by
/// the animal enumeration. Immutable after construction.
class InteractionGraph {
 public:
  InteractionGraph() = default;
  /// Throws invalid_argument on dangling or duplicate edges, empty edges,
  /// or non-positive local dimensions. Vertices default to dimension 2.
  InteractionGraph(std::vector<Vertex> vertices, std::vector<std::vector<Vertex>> edges,
                   std::map<Vertex, int> local_dims = {});

  const VertexSet& vertices() const noexcept { return vertices_; }
  const std::vector<VertexSet>& edges() const noexcept { return edges_; }
  const VertexSet& edge(EdgeId e) const { return edges_.at(e); }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  int local_dim(Vertex v) const;
  const std::map<Vertex, int>& local_dims() const noexcept { return local_dims_; }
  std::vector<int> dims_of(const VertexSet& sites) const;

  bool has_vertex(Vertex v) const;
  /// Position of v in vertices(); throws invalid_argument if absent.
  std::size_t position(Vertex v) const;
  /// Index of the edge with exactly these vertices, or npos.
  std::size_t find_edge(const VertexSet& e) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Edges sharing at least one vertex with e (e itself included).
  const std::vector<EdgeId>& overlapping(EdgeId e) const { return edge_overlap_.at(e); }
  /// Edges containing vertex v.
  const std::vector<EdgeId>& incident(Vertex v) const;

  bool operator==(const InteractionGraph& other) const {
    return vertices_ == other.vertices_ && edges_ == other.edges_ && local_dims_ == other.local_dims_;
  }

 private:
  VertexSet vertices_;
  std::vector<VertexSet> edges_;
  std::map<Vertex, int> local_dims_;
  std::vector<std::vector<EdgeId>> edge_overlap_;
  std::map<Vertex, std::vector<EdgeId>> incident_;
};

void to_json(nlohmann::json& j, const InteractionGraph& g);
void from_json(const nlohmann::json& j, InteractionGraph& g);

InteractionGraph build_chain(int n, bool periodic);
/// Vertex (r, c) has id r * cols + c.
InteractionGraph build_square_lattice(int rows, int cols, bool periodic);

bool overlaps(const VertexSet& a, const VertexSet& b);
bool edge_overlaps_vertices(const InteractionGraph& g, EdgeId e, const VertexSet& xs);
bool edge_sets_overlap(const InteractionGraph& g, const EdgeSet& a, const EdgeSet& b);
VertexSet vertices_of(const InteractionGraph& g, const EdgeSet& es);
VertexSet complement(const InteractionGraph& g, const VertexSet& b);
EdgeSet complement(const InteractionGraph& g, const EdgeSet& f);

/// Shortest-path graph distance between vertex sets (0 on overlap). Two
/// vertices are adjacent when some hyperedge contains both.
std::size_t vertex_set_distance(const InteractionGraph& g, const VertexSet& x, const VertexSet& y);

/// 0 if F overlaps X, else the size of the smallest edge set connecting X
/// and F: a chain of pairwise overlapping edges, the first overlapping X and
/// the last overlapping some edge of F.
std::size_t edge_set_distance(const InteractionGraph& g, const VertexSet& x, const EdgeSet& f);

/// Edges overlapping both B and its complement.
EdgeSet boundary_edges(const InteractionGraph& g, const VertexSet& b);
/// Edges fully contained in B.
EdgeSet restricted_edges(const InteractionGraph& g, const VertexSet& b);

struct EdgeExtension {
  EdgeSet extension;
  EdgeSet boundary;
};
/// Extension = all edges sharing a vertex with an edge of G; boundary = extension \ G.
EdgeExtension edge_extension_and_boundary(const InteractionGraph& g, const EdgeSet& edges);

/// True if the edges form a single overlap-connected component (empty is not).
bool is_connected(const InteractionGraph& g, const EdgeSet& edges);
/// Overlap-connected components of an edge set, each sorted, ordered by
/// smallest member.
std::vector<EdgeSet> connected_components(const InteractionGraph& g, const EdgeSet& edges);

using Animal = EdgeSet;

struct AnimalLimits {
  std::size_t m_max = 10;
};

/// All connected edge sets of size m containing `root`, each exactly once,
/// sorted lexicographically. Throws resource_limit if m > limits.m_max.
std::vector<Animal> enumerate_animals(const InteractionGraph& g, EdgeId root, std::size_t m,
                                      AnimalLimits limits = {});
/// Same count as enumerate_animals(...).size() without materialising.
std::size_t count_animals(const InteractionGraph& g, EdgeId root, std::size_t m, AnimalLimits limits = {});

namespace growth {
struct Cubic {
  int dimension;
};
struct SpreadOut {
  int dimension;
  int range;
};
struct Explicit {
  double alpha;
};
}  // namespace growth
using GrowthFamily = std::variant<growth::Cubic, growth::SpreadOut, growth::Explicit>;

/// Upper bound on the animal growth constant: cubic(D) -> 2De,
/// spread_out(D,R) -> ((2R+1)^D - 1)e, explicit -> alpha.
double growth_constant_bound(const GrowthFamily& family);

}  // namespace thermaloc
