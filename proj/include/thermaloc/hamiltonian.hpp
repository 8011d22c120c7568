#pragma once

#include <map>
#include <string>
#include <vector>

#include "thermaloc/lattice.hpp"
#include "thermaloc/opalg.hpp"

namespace thermaloc {

/// Sum of Hermitian terms, one per hyperedge, each stored on exactly the
/// edge's sites. J is the largest operator norm among the terms.
class LocalHamiltonian {
 public:
  LocalHamiltonian() = default;
  explicit LocalHamiltonian(InteractionGraph graph);

  /// Adds `term` to the term of `edge` (summing if one exists). The term's
  /// sites must be a subset of the edge; otherwise invalid_term. Non-Hermitian
  /// terms are rejected with not_hermitian.
  void add_term(EdgeId edge, const DenseOperator& term);

  const InteractionGraph& graph() const noexcept { return graph_; }
  const std::map<EdgeId, DenseOperator>& terms() const noexcept { return terms_; }
  /// Zero operator on the edge when no term was added.
  DenseOperator term(EdgeId edge) const;
  double local_strength() const noexcept { return strength_; }

 private:
  InteractionGraph graph_;
  std::map<EdgeId, DenseOperator> terms_;
  double strength_ = 0.0;
};

/// H = sum of embedded terms, on the full space of the graph.
DenseOperator assemble(const LocalHamiltonian& h);
/// Sum of the embedded terms of a subset of edges, on the full space.
DenseOperator assemble_edges(const LocalHamiltonian& h, const EdgeSet& edges);

/// Hamiltonian of the edges contained in B, as an operator on B's sites
/// only. Its graph has vertex set B and edge set restricted_edges(B).
LocalHamiltonian truncate(const LocalHamiltonian& h, const VertexSet& b);

/// Sum over the boundary edges of B, embedded on the full space.
DenseOperator boundary_hamiltonian(const LocalHamiltonian& h, const VertexSet& b);

/// H0 + s (H - H0), s in [0, 1].
Matrix interpolate(const Matrix& h0, const Matrix& h1, double s);

enum class ModelKind { ising, xy, heisenberg };
ModelKind parse_model_kind(const std::string& name);

/// Standard qubit models with +coupling sign convention (ferromagnets take a
/// negative coupling):
///   ising:      coupling Z Z per edge, field X on size-1 edges
///   xy:         coupling (X X + Y Y) / 2, field Z on size-1 edges
///   heisenberg: coupling (X X + Y Y + Z Z) / 4, field Z on size-1 edges
/// A nonzero field adds a size-1 edge per vertex to the graph. Non-qubit
/// sites or hyperedges of size > 2 throw unsupported_model.
LocalHamiltonian standard_model(ModelKind kind, const InteractionGraph& g, double coupling, double field = 0.0);

/// Pauli-string observable such as "Z0", "X3", "Z0Z1" or "X0Y2".
DenseOperator parse_pauli_string(const std::string& spec);

}  // namespace thermaloc
