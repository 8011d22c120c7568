#include "thermaloc/fermions.hpp"

#include <algorithm>

#include "thermaloc/error.hpp"

namespace thermaloc {

FermionicSystem::FermionicSystem(int modes) : modes_(modes) {
  if (modes < 1) fail(ErrorKind::invalid_size, "need at least one mode");
  if (modes > max_modes) fail(ErrorKind::resource_limit, "too many modes for a dense Fock space");

  Matrix lower = Matrix::Zero(2, 2);  // |0><1|
  lower(0, 1) = 1.0;
  for (int x = 0; x < modes; ++x) {
    std::vector<Matrix> factors;
    for (int y = 0; y < modes; ++y) factors.push_back(y < x ? pauli::Z() : y == x ? lower : pauli::I());
    annihilators_.push_back(kron(factors));
  }
  parity_ = kron(std::vector<Matrix>(static_cast<std::size_t>(modes), pauli::Z()));
}

bool FermionicSystem::is_even(const Matrix& op, double tol) const {
  const double scale = std::max(1.0, op.norm());
  return (op * parity_ - parity_ * op).norm() <= tol * scale;
}

VertexSet FermionicSystem::sites() const {
  VertexSet s(static_cast<std::size_t>(modes_));
  for (int x = 0; x < modes_; ++x) s[static_cast<std::size_t>(x)] = x;
  return s;
}

FermionicHamiltonian::FermionicHamiltonian(std::shared_ptr<const FermionicSystem> system, InteractionGraph graph,
                                           std::map<EdgeId, Matrix> terms)
    : system_(std::move(system)), graph_(std::move(graph)), terms_(std::move(terms)) {
  for (const auto& [e, m] : terms_) strength_ = std::max(strength_, schatten_norm(m, schatten_infinity));
}

FermionicHamiltonian fermionic_local_hamiltonian(std::shared_ptr<const FermionicSystem> system,
                                                 const std::vector<FermionicTerm>& terms) {
  const FermionicSystem& sys = *system;
  std::vector<VertexSet> supports;
  std::vector<Matrix> summed;
  for (const auto& t : terms) {
    const VertexSet support = make_vertex_set(t.support);
    if (support.empty()) fail(ErrorKind::invalid_term, "empty term support");
    for (Vertex v : support)
      if (v < 0 || v >= sys.modes()) fail(ErrorKind::invalid_term, "support mode out of range");
    if (t.op.rows() != sys.dim() || t.op.cols() != sys.dim())
      fail(ErrorKind::invalid_argument, "term is not a Fock-space matrix");
    if (!sys.is_even(t.op)) fail(ErrorKind::parity_violation, "odd term violates the parity superselection rule");
    if (hermiticity_defect(t.op) > 1e-10) fail(ErrorKind::not_hermitian, "fermionic term is not Hermitian");
    const double scale = std::max(1.0, t.op.norm());
    for (int y = 0; y < sys.modes(); ++y) {
      if (std::binary_search(support.begin(), support.end(), y)) continue;
      const Matrix n = sys.number(y);
      if ((t.op * n - n * t.op).norm() > 1e-12 * scale)
        fail(ErrorKind::invalid_term, "term acts on mode " + std::to_string(y) + " outside its support");
    }
    auto it = std::find(supports.begin(), supports.end(), support);
    if (it == supports.end()) {
      supports.push_back(support);
      summed.push_back(t.op);
    } else {
      summed[static_cast<std::size_t>(it - supports.begin())] += t.op;
    }
  }

  std::vector<std::vector<Vertex>> edges(supports.begin(), supports.end());
  InteractionGraph graph(sys.sites(), edges);
  std::map<EdgeId, Matrix> by_edge;
  for (std::size_t k = 0; k < summed.size(); ++k) by_edge.emplace(graph.find_edge(supports[k]), summed[k]);
  return FermionicHamiltonian(std::move(system), std::move(graph), std::move(by_edge));
}

FermionicHamiltonian fermionic_chain(std::shared_ptr<const FermionicSystem> system, double hopping, double interaction) {
  const FermionicSystem& sys = *system;
  std::vector<FermionicTerm> terms;
  for (int x = 0; x + 1 < sys.modes(); ++x) {
    const Matrix hop = sys.creation(x) * sys.annihilation(x + 1);
    terms.push_back({{x, x + 1}, -hopping * (hop + hop.adjoint()) + interaction * sys.number(x) * sys.number(x + 1)});
  }
  return fermionic_local_hamiltonian(std::move(system), terms);
}

Matrix assemble_edges(const FermionicHamiltonian& h, const EdgeSet& edges) {
  Matrix sum = Matrix::Zero(h.system().dim(), h.system().dim());
  for (EdgeId e : edges)
    if (auto it = h.terms().find(e); it != h.terms().end()) sum += it->second;
  return sum;
}

Matrix assemble(const FermionicHamiltonian& h) {
  Matrix sum = Matrix::Zero(h.system().dim(), h.system().dim());
  for (const auto& [e, m] : h.terms()) sum += m;
  return sum;
}

Matrix truncate(const FermionicHamiltonian& h, const VertexSet& b) {
  return assemble_edges(h, restricted_edges(h.graph(), b));
}

Matrix boundary_hamiltonian(const FermionicHamiltonian& h, const VertexSet& b) {
  return assemble_edges(h, boundary_edges(h.graph(), b));
}

}  // namespace thermaloc
