#pragma once

#include <memory>
#include <vector>

#include "thermaloc/lattice.hpp"
#include "thermaloc/opalg.hpp"

namespace thermaloc {

/// Mode operators on the 2^n Fock space built from Jordan-Wigner sign
/// strings in mode order 0 < 1 < ... < n-1. Mode 0 is the most significant
/// tensor factor and |1> is the occupied state.
class FermionicSystem {
 public:
  static constexpr int max_modes = 12;
  /// Throws invalid_size for n < 1 and resource_limit for n > max_modes.
  explicit FermionicSystem(int modes);

  int modes() const noexcept { return modes_; }
  Eigen::Index dim() const noexcept { return parity_.rows(); }

  const Matrix& annihilation(int x) const { return annihilators_.at(static_cast<std::size_t>(x)); }
  Matrix creation(int x) const { return annihilation(x).adjoint(); }
  Matrix number(int x) const { return creation(x) * annihilation(x); }
  /// prod_x (1 - 2 n_x)
  const Matrix& parity() const noexcept { return parity_; }

  /// Even operators commute with the parity operator.
  bool is_even(const Matrix& op, double tol = 1e-12) const;

  /// Mode-order view of the Fock space as sites 0..n-1, qubit dims.
  VertexSet sites() const;
  std::vector<int> site_dims() const { return std::vector<int>(static_cast<std::size_t>(modes_), 2); }

 private:
  int modes_;
  std::vector<Matrix> annihilators_;
  Matrix parity_;
};

struct FermionicTerm {
  VertexSet support;
  Matrix op;  // full Fock-space matrix
};

/// Fermionic analogue of LocalHamiltonian: vertices are modes, edges are
/// the declared term supports, terms are dense Fock-space matrices.
class FermionicHamiltonian {
 public:
  FermionicHamiltonian(std::shared_ptr<const FermionicSystem> system, InteractionGraph graph,
                       std::map<EdgeId, Matrix> terms);

  const FermionicSystem& system() const noexcept { return *system_; }
  const InteractionGraph& graph() const noexcept { return graph_; }
  const std::map<EdgeId, Matrix>& terms() const noexcept { return terms_; }
  double local_strength() const noexcept { return strength_; }

 private:
  std::shared_ptr<const FermionicSystem> system_;
  InteractionGraph graph_;
  std::map<EdgeId, Matrix> terms_;
  double strength_ = 0.0;
};

/// Terms with identical supports are summed. Odd terms throw
/// parity_violation; non-Hermitian terms throw not_hermitian; terms that
/// fail to commute with n_y for a mode y outside the declared support throw
/// invalid_term.
FermionicHamiltonian fermionic_local_hamiltonian(std::shared_ptr<const FermionicSystem> system,
                                                 const std::vector<FermionicTerm>& terms);

/// Nearest-neighbour chain: -t (f_x^dag f_{x+1} + h.c.) + V n_x n_{x+1}.
FermionicHamiltonian fermionic_chain(std::shared_ptr<const FermionicSystem> system, double hopping, double interaction);

Matrix assemble(const FermionicHamiltonian& h);
Matrix assemble_edges(const FermionicHamiltonian& h, const EdgeSet& edges);
/// Terms contained in B, still as a Fock-space operator.
Matrix truncate(const FermionicHamiltonian& h, const VertexSet& b);
Matrix boundary_hamiltonian(const FermionicHamiltonian& h, const VertexSet& b);

}  // namespace thermaloc
