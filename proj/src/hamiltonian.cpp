#include "thermaloc/hamiltonian.hpp"

#include <algorithm>
#include <cctype>

#include "thermaloc/error.hpp"

namespace thermaloc {

LocalHamiltonian::LocalHamiltonian(InteractionGraph graph) : graph_(std::move(graph)) {}

void LocalHamiltonian::add_term(EdgeId edge, const DenseOperator& term) {
  if (edge >= graph_.edge_count()) fail(ErrorKind::invalid_argument, "edge index out of range");
  const VertexSet& sites = graph_.edge(edge);
  if (!std::includes(sites.begin(), sites.end(), term.sites().begin(), term.sites().end()))
    fail(ErrorKind::invalid_term, "term support is not contained in its edge");
  if (hermiticity_defect(term.matrix()) > 1e-10) fail(ErrorKind::not_hermitian, "local term is not Hermitian");

  DenseOperator lifted = embed(term, sites, graph_.dims_of(sites));
  auto it = terms_.find(edge);
  if (it == terms_.end()) {
    terms_.emplace(edge, std::move(lifted));
  } else {
    it->second = DenseOperator(sites, it->second.dims(), it->second.matrix() + lifted.matrix());
  }
  strength_ = 0.0;
  for (const auto& [e, t] : terms_) strength_ = std::max(strength_, schatten_norm(t.matrix(), schatten_infinity));
}

DenseOperator LocalHamiltonian::term(EdgeId edge) const {
  auto it = terms_.find(edge);
  if (it != terms_.end()) return it->second;
  const VertexSet& sites = graph_.edge(edge);
  return DenseOperator::zero(sites, graph_.dims_of(sites));
}

DenseOperator assemble_edges(const LocalHamiltonian& h, const EdgeSet& edges) {
  const InteractionGraph& g = h.graph();
  DenseOperator total = DenseOperator::zero(g.vertices(), g.dims_of(g.vertices()));
  Matrix sum = total.matrix();
  for (EdgeId e : edges) {
    auto it = h.terms().find(e);
    if (it == h.terms().end()) continue;
    sum += embed(it->second, g).matrix();
  }
  return DenseOperator(g.vertices(), g.dims_of(g.vertices()), std::move(sum));
}

DenseOperator assemble(const LocalHamiltonian& h) {
  EdgeSet all(h.graph().edge_count());
  for (EdgeId e = 0; e < all.size(); ++e) all[e] = e;
  return assemble_edges(h, all);
}

LocalHamiltonian truncate(const LocalHamiltonian& h, const VertexSet& b) {
  const InteractionGraph& g = h.graph();
  for (Vertex v : b)
    if (!g.has_vertex(v)) fail(ErrorKind::invalid_argument, "region vertex not in graph");
  const EdgeSet kept = restricted_edges(g, b);
  std::vector<std::vector<Vertex>> edges;
  std::map<Vertex, int> dims;
  for (EdgeId e : kept) edges.push_back(g.edge(e));
  for (Vertex v : b) dims[v] = g.local_dim(v);

  LocalHamiltonian out{InteractionGraph(b, edges, dims)};
  for (std::size_t k = 0; k < kept.size(); ++k) {
    auto it = h.terms().find(kept[k]);
    if (it != h.terms().end()) out.add_term(k, it->second);
  }
  return out;
}

DenseOperator boundary_hamiltonian(const LocalHamiltonian& h, const VertexSet& b) {
  return assemble_edges(h, boundary_edges(h.graph(), b));
}

Matrix interpolate(const Matrix& h0, const Matrix& h1, double s) {
  if (!(s >= 0.0 && s <= 1.0)) fail(ErrorKind::invalid_argument, "interpolation parameter must lie in [0, 1]");
  if (h0.rows() != h1.rows() || h0.cols() != h1.cols()) fail(ErrorKind::invalid_argument, "dimension mismatch");
  return h0 + s * (h1 - h0);
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "ising") return ModelKind::ising;
  if (name == "xy") return ModelKind::xy;
  if (name == "heisenberg") return ModelKind::heisenberg;
  fail(ErrorKind::unsupported_model, "unknown model kind '" + name + "'");
}

LocalHamiltonian standard_model(ModelKind kind, const InteractionGraph& g, double coupling, double field) {
  for (auto [v, d] : g.local_dims())
    if (d != 2) fail(ErrorKind::unsupported_model, "standard models need qubit sites");

  std::vector<std::vector<Vertex>> edges = g.edges();
  if (field != 0.0)
    for (Vertex v : g.vertices())
      if (g.find_edge({v}) == InteractionGraph::npos) edges.push_back({v});
  InteractionGraph full(g.vertices(), edges, g.local_dims());

  Matrix bond;
  switch (kind) {
    case ModelKind::ising: bond = kron(pauli::Z(), pauli::Z()); break;
    case ModelKind::xy: bond = 0.5 * (kron(pauli::X(), pauli::X()) + kron(pauli::Y(), pauli::Y())); break;
    case ModelKind::heisenberg:
      bond = 0.25 * (kron(pauli::X(), pauli::X()) + kron(pauli::Y(), pauli::Y()) + kron(pauli::Z(), pauli::Z()));
      break;
  }
  const Matrix onsite = kind == ModelKind::ising ? pauli::X() : pauli::Z();

  LocalHamiltonian h(full);
  for (EdgeId e = 0; e < full.edge_count(); ++e) {
    const VertexSet& sites = full.edge(e);
    if (sites.size() == 2) {
      h.add_term(e, DenseOperator(sites, {2, 2}, coupling * bond));
    } else if (sites.size() == 1) {
      if (field != 0.0) h.add_term(e, DenseOperator(sites, {2}, field * onsite));
    } else {
      fail(ErrorKind::unsupported_model, "standard models support only one- and two-site edges");
    }
  }
  return h;
}

DenseOperator parse_pauli_string(const std::string& spec) {
  std::map<Vertex, Matrix> factors;
  std::size_t i = 0;
  while (i < spec.size()) {
    const char p = static_cast<char>(std::toupper(static_cast<unsigned char>(spec[i])));
    std::size_t j = i + 1;
    while (j < spec.size() && std::isdigit(static_cast<unsigned char>(spec[j]))) ++j;
    if (j == i + 1) fail(ErrorKind::invalid_argument, "bad Pauli string '" + spec + "'");
    const Vertex v = std::stoi(spec.substr(i + 1, j - i - 1));
    Matrix m;
    switch (p) {
      case 'I': m = pauli::I(); break;
      case 'X': m = pauli::X(); break;
      case 'Y': m = pauli::Y(); break;
      case 'Z': m = pauli::Z(); break;
      default: fail(ErrorKind::invalid_argument, "bad Pauli letter in '" + spec + "'");
    }
    if (factors.count(v)) factors[v] = factors[v] * m;
    else factors[v] = m;
    i = j;
  }
  if (factors.empty()) fail(ErrorKind::invalid_argument, "empty Pauli string");
  VertexSet sites;
  std::vector<Matrix> ms;
  for (auto& [v, m] : factors) {
    sites.push_back(v);
    ms.push_back(m);
  }
  return DenseOperator(sites, std::vector<int>(sites.size(), 2), kron(ms));
}

}  // namespace thermaloc
