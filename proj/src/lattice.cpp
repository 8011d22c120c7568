#include "thermaloc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <string>

#include "thermaloc/error.hpp"

namespace thermaloc {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_size: return "invalid-size";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::distance_undefined: return "distance-undefined";
    case ErrorKind::resource_limit: return "resource-limit";
    case ErrorKind::not_hermitian: return "not-hermitian";
    case ErrorKind::invalid_term: return "invalid-term";
    case ErrorKind::unsupported_model: return "unsupported-model";
    case ErrorKind::parity_violation: return "parity-violation";
    case ErrorKind::divergent_length: return "divergent-length";
    case ErrorKind::out_of_regime: return "out-of-regime";
    case ErrorKind::bound_inapplicable: return "bound-inapplicable";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

VertexSet make_vertex_set(std::vector<Vertex> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

EdgeSet make_edge_set(std::vector<EdgeId> es) {
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  return es;
}

InteractionGraph::InteractionGraph(std::vector<Vertex> vertices, std::vector<std::vector<Vertex>> edges,
                                   std::map<Vertex, int> local_dims) {
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
    fail(ErrorKind::invalid_argument, "duplicate vertex id");
  vertices_ = std::move(vertices);

  for (auto [v, d] : local_dims) {
    if (!has_vertex(v)) fail(ErrorKind::invalid_argument, "local dimension for unknown vertex " + std::to_string(v));
    if (d < 1) fail(ErrorKind::invalid_argument, "local dimension must be positive");
  }
  for (Vertex v : vertices_) local_dims_[v] = local_dims.count(v) ? local_dims.at(v) : 2;

  for (auto& e : edges) {
    if (e.empty()) fail(ErrorKind::invalid_argument, "empty edge");
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      fail(ErrorKind::invalid_argument, "edge with repeated vertex");
    for (Vertex v : e)
      if (!has_vertex(v)) fail(ErrorKind::invalid_argument, "edge references unknown vertex " + std::to_string(v));
    if (std::find(edges_.begin(), edges_.end(), e) != edges_.end())
      fail(ErrorKind::invalid_argument, "duplicate edge");
    edges_.push_back(e);
  }

  for (EdgeId e = 0; e < edges_.size(); ++e)
    for (Vertex v : edges_[e]) incident_[v].push_back(e);
  edge_overlap_.resize(edges_.size());
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    std::vector<EdgeId> nb;
    for (Vertex v : edges_[e])
      for (EdgeId f : incident_[v]) nb.push_back(f);
    edge_overlap_[e] = make_edge_set(std::move(nb));
  }
}

int InteractionGraph::local_dim(Vertex v) const {
  auto it = local_dims_.find(v);
  if (it == local_dims_.end()) fail(ErrorKind::invalid_argument, "unknown vertex " + std::to_string(v));
  return it->second;
}

std::vector<int> InteractionGraph::dims_of(const VertexSet& sites) const {
  std::vector<int> d;
  d.reserve(sites.size());
  for (Vertex v : sites) d.push_back(local_dim(v));
  return d;
}

bool InteractionGraph::has_vertex(Vertex v) const {
  return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::size_t InteractionGraph::position(Vertex v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) fail(ErrorKind::invalid_argument, "unknown vertex " + std::to_string(v));
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::size_t InteractionGraph::find_edge(const VertexSet& e) const {
  auto it = std::find(edges_.begin(), edges_.end(), e);
  return it == edges_.end() ? npos : static_cast<std::size_t>(it - edges_.begin());
}

const std::vector<EdgeId>& InteractionGraph::incident(Vertex v) const {
  static const std::vector<EdgeId> none;
  auto it = incident_.find(v);
  return it == incident_.end() ? none : it->second;
}

void to_json(nlohmann::json& j, const InteractionGraph& g) {
  nlohmann::json dims = nlohmann::json::object();
  for (auto [v, d] : g.local_dims()) dims[std::to_string(v)] = d;
  j = nlohmann::json{{"vertices", g.vertices()}, {"edges", g.edges()}, {"local_dims", dims}};
}

void from_json(const nlohmann::json& j, InteractionGraph& g) {
  auto vertices = j.at("vertices").get<std::vector<Vertex>>();
  auto edges = j.at("edges").get<std::vector<std::vector<Vertex>>>();
  std::map<Vertex, int> dims;
  if (j.contains("local_dims"))
    for (auto& [k, d] : j.at("local_dims").items()) dims[std::stoi(k)] = d.get<int>();
  g = InteractionGraph(std::move(vertices), std::move(edges), std::move(dims));
}

InteractionGraph build_chain(int n, bool periodic) {
  if (n < 2) fail(ErrorKind::invalid_size, "chain needs at least 2 sites");
  std::vector<Vertex> vs(n);
  std::iota(vs.begin(), vs.end(), 0);
  std::vector<std::vector<Vertex>> es;
  for (int i = 0; i + 1 < n; ++i) es.push_back({i, i + 1});
  if (periodic && n > 2) es.push_back({0, n - 1});
  return InteractionGraph(vs, es);
}

InteractionGraph build_square_lattice(int rows, int cols, bool periodic) {
  if (rows < 1 || cols < 1 || rows * cols < 2) fail(ErrorKind::invalid_size, "degenerate square lattice");
  std::vector<Vertex> vs(rows * cols);
  std::iota(vs.begin(), vs.end(), 0);
  std::vector<std::vector<Vertex>> es;
  auto id = [cols](int r, int c) { return r * cols + c; };
  auto add = [&es](Vertex a, Vertex b) {
    std::vector<Vertex> e{std::min(a, b), std::max(a, b)};
    if (a != b && std::find(es.begin(), es.end(), e) == es.end()) es.push_back(e);
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) add(id(r, c), id(r, c + 1));
      else if (periodic && cols > 2) add(id(r, c), id(r, 0));
      if (r + 1 < rows) add(id(r, c), id(r + 1, c));
      else if (periodic && rows > 2) add(id(r, c), id(0, c));
    }
  return InteractionGraph(vs, es);
}

bool overlaps(const VertexSet& a, const VertexSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i;
    else ++j;
  }
  return false;
}

bool edge_overlaps_vertices(const InteractionGraph& g, EdgeId e, const VertexSet& xs) {
  return overlaps(g.edge(e), xs);
}

bool edge_sets_overlap(const InteractionGraph& g, const EdgeSet& a, const EdgeSet& b) {
  for (EdgeId e : a)
    for (EdgeId f : b)
      if (overlaps(g.edge(e), g.edge(f))) return true;
  return false;
}

VertexSet vertices_of(const InteractionGraph& g, const EdgeSet& es) {
  std::vector<Vertex> vs;
  for (EdgeId e : es) vs.insert(vs.end(), g.edge(e).begin(), g.edge(e).end());
  return make_vertex_set(std::move(vs));
}

VertexSet complement(const InteractionGraph& g, const VertexSet& b) {
  VertexSet out;
  std::set_difference(g.vertices().begin(), g.vertices().end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

EdgeSet complement(const InteractionGraph& g, const EdgeSet& f) {
  EdgeSet out;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (!std::binary_search(f.begin(), f.end(), e)) out.push_back(e);
  return out;
}

namespace {

void require_vertices(const InteractionGraph& g, const VertexSet& xs) {
  for (Vertex v : xs)
    if (!g.has_vertex(v)) fail(ErrorKind::invalid_argument, "vertex " + std::to_string(v) + " not in graph");
}

}  // namespace

std::size_t vertex_set_distance(const InteractionGraph& g, const VertexSet& x, const VertexSet& y) {
  if (x.empty() || y.empty()) fail(ErrorKind::invalid_argument, "distance between empty vertex sets");
  require_vertices(g, x);
  require_vertices(g, y);
  if (overlaps(x, y)) return 0;

  std::map<Vertex, std::size_t> dist;
  std::deque<Vertex> queue;
  for (Vertex v : x) {
    dist[v] = 0;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (EdgeId e : g.incident(v))
      for (Vertex u : g.edge(e)) {
        if (dist.count(u)) continue;
        dist[u] = dist[v] + 1;
        if (std::binary_search(y.begin(), y.end(), u)) return dist[u];
        queue.push_back(u);
      }
  }
  fail(ErrorKind::distance_undefined, "vertex sets are not connected");
}

std::size_t edge_set_distance(const InteractionGraph& g, const VertexSet& x, const EdgeSet& f) {
  if (x.empty() || f.empty()) fail(ErrorKind::invalid_argument, "distance to an empty set");
  require_vertices(g, x);
  for (EdgeId e : f)
    if (e >= g.edge_count()) fail(ErrorKind::invalid_argument, "edge index out of range");

  const VertexSet f_vertices = vertices_of(g, f);
  if (overlaps(f_vertices, x)) return 0;

  // An edge "reaches" F when it shares a vertex with some edge of F.
  std::vector<std::size_t> depth(g.edge_count(), 0);
  std::deque<EdgeId> queue;
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    if (overlaps(g.edge(e), x)) {
      depth[e] = 1;
      queue.push_back(e);
    }
  while (!queue.empty()) {
    EdgeId e = queue.front();
    queue.pop_front();
    if (overlaps(g.edge(e), f_vertices)) return depth[e];
    for (EdgeId n : g.overlapping(e))
      if (depth[n] == 0) {
        depth[n] = depth[e] + 1;
        queue.push_back(n);
      }
  }
  fail(ErrorKind::distance_undefined, "no edge set connects the vertex set to F");
}

EdgeSet boundary_edges(const InteractionGraph& g, const VertexSet& b) {
  EdgeSet out;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    bool inside = false;
    bool outside = false;
    for (Vertex v : edge) (std::binary_search(b.begin(), b.end(), v) ? inside : outside) = true;
    if (inside && outside) out.push_back(e);
  }
  return out;
}

EdgeSet restricted_edges(const InteractionGraph& g, const VertexSet& b) {
  EdgeSet out;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& edge = g.edge(e);
    if (std::includes(b.begin(), b.end(), edge.begin(), edge.end())) out.push_back(e);
  }
  return out;
}

EdgeExtension edge_extension_and_boundary(const InteractionGraph& g, const EdgeSet& edges) {
  std::vector<EdgeId> ext;
  for (EdgeId e : edges) ext.insert(ext.end(), g.overlapping(e).begin(), g.overlapping(e).end());
  EdgeExtension out{make_edge_set(std::move(ext)), {}};
  std::set_difference(out.extension.begin(), out.extension.end(), edges.begin(), edges.end(),
                      std::back_inserter(out.boundary));
  return out;
}

std::vector<EdgeSet> connected_components(const InteractionGraph& g, const EdgeSet& edges) {
  std::vector<std::size_t> parent(edges.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j)
      if (overlaps(g.edge(edges[i]), g.edge(edges[j]))) parent[find(i)] = find(j);

  std::map<std::size_t, EdgeSet> groups;
  for (std::size_t i = 0; i < edges.size(); ++i) groups[find(i)].push_back(edges[i]);
  std::vector<EdgeSet> out;
  for (auto& [root, members] : groups) out.push_back(make_edge_set(std::move(members)));
  std::sort(out.begin(), out.end(), [](const EdgeSet& a, const EdgeSet& b) { return a.front() < b.front(); });
  return out;
}

bool is_connected(const InteractionGraph& g, const EdgeSet& edges) {
  return !edges.empty() && connected_components(g, edges).size() == 1;
}

namespace {

// Redelmeier-style growth: each branch removes the chosen edge from the
// untried frontier so later siblings never re-add it, which makes every
// connected set containing the root appear exactly once.
template <class Emit>
void grow(const InteractionGraph& g, std::size_t m, std::vector<EdgeId>& animal, std::vector<EdgeId> untried,
          std::vector<char>& seen, Emit& emit) {
  for (std::size_t i = 0; i < untried.size(); ++i) {
    const EdgeId e = untried[i];
    animal.push_back(e);
    if (animal.size() == m) {
      emit(animal);
    } else {
      std::vector<EdgeId> next(untried.begin() + static_cast<std::ptrdiff_t>(i) + 1, untried.end());
      std::vector<EdgeId> added;
      for (EdgeId n : g.overlapping(e))
        if (!seen[n]) {
          seen[n] = 1;
          added.push_back(n);
          next.push_back(n);
        }
      grow(g, m, animal, std::move(next), seen, emit);
      for (EdgeId n : added) seen[n] = 0;
    }
    animal.pop_back();
  }
}

template <class Emit>
void run_enumeration(const InteractionGraph& g, EdgeId root, std::size_t m, AnimalLimits limits, Emit& emit) {
  if (root >= g.edge_count()) fail(ErrorKind::invalid_argument, "root edge out of range");
  if (m < 1) fail(ErrorKind::invalid_argument, "animal size must be at least 1");
  if (m > limits.m_max) fail(ErrorKind::resource_limit, "animal size exceeds m_max");
  std::vector<char> seen(g.edge_count(), 0);
  seen[root] = 1;
  std::vector<EdgeId> animal;
  grow(g, m, animal, {root}, seen, emit);
}

}  // namespace

std::vector<Animal> enumerate_animals(const InteractionGraph& g, EdgeId root, std::size_t m, AnimalLimits limits) {
  std::vector<Animal> out;
  auto emit = [&out](const std::vector<EdgeId>& a) { out.push_back(make_edge_set(a)); };
  run_enumeration(g, root, m, limits, emit);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t count_animals(const InteractionGraph& g, EdgeId root, std::size_t m, AnimalLimits limits) {
  std::size_t count = 0;
  auto emit = [&count](const std::vector<EdgeId>&) { ++count; };
  run_enumeration(g, root, m, limits, emit);
  return count;
}

double growth_constant_bound(const GrowthFamily& family) {
  constexpr double e = std::numbers::e;
  return std::visit(
      [e](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, growth::Cubic>) {
          if (f.dimension < 1) fail(ErrorKind::invalid_argument, "dimension must be positive");
          return 2.0 * f.dimension * e;
        } else if constexpr (std::is_same_v<T, growth::SpreadOut>) {
          if (f.dimension < 1 || f.range < 1) fail(ErrorKind::invalid_argument, "dimension and range must be positive");
          return (std::pow(2.0 * f.range + 1.0, f.dimension) - 1.0) * e;
        } else {
          if (!(f.alpha > 0.0)) fail(ErrorKind::invalid_argument, "growth constant must be positive");
          return f.alpha;
        }
      },
      family);
}

}  // namespace thermaloc
