#pragma once

#include <memory>

#include "thermaloc/fermions.hpp"
#include "thermaloc/hamiltonian.hpp"
#include "thermaloc/opalg.hpp"

namespace thermaloc {

/// Full-rank state rho = sum_j p_j |u_j><u_j|, stored as its eigenbasis and
/// log-populations. Gibbs states share the spectrum of H across temperatures.
class ThermalState {
 public:
  /// g(beta) = exp(-beta H) / Z(beta). Negative beta is allowed.
  static ThermalState gibbs(const Matrix& h, double beta);
  static ThermalState gibbs(const DenseOperator& h, double beta) { return gibbs(h.matrix(), beta); }
  static ThermalState gibbs(std::shared_ptr<const Spectrum> spectrum, double beta);
  /// Any positive definite density matrix; rank-deficient input throws
  /// invalid_argument.
  static ThermalState from_density(const Matrix& rho);

  double beta() const noexcept { return beta_; }
  double log_partition() const noexcept { return log_z_; }
  Eigen::Index dim() const noexcept { return log_weights_.size(); }
  const Spectrum& spectrum() const noexcept { return *spectrum_; }
  std::shared_ptr<const Spectrum> shared_spectrum() const noexcept { return spectrum_; }
  /// ln p_j, aligned with the eigenvector columns.
  const RealVector& log_weights() const noexcept { return log_weights_; }
  RealVector populations() const { return log_weights_.array().exp(); }
  /// Two log-weights closer than this are treated as degenerate.
  double degeneracy_tolerance() const noexcept { return degeneracy_tol_; }

  Matrix density() const;
  /// rho^tau for tau in [0, 1]; tau = 0 gives the identity.
  Matrix power(double tau) const;
  /// U^dagger A U
  Matrix to_eigenbasis(const Matrix& a) const;
  /// U^dagger embed(op) U for a local operator on a space with the given
  /// sites, applying op row-wise so only one dense product is needed.
  Matrix local_to_eigenbasis(const DenseOperator& op, const VertexSet& sites, const std::vector<int>& dims) const;
  cplx expectation(const Matrix& a) const;

 private:
  ThermalState() = default;
  std::shared_ptr<const Spectrum> spectrum_;
  RealVector log_weights_;
  double beta_ = 0.0;
  double log_z_ = 0.0;
  double degeneracy_tol_ = 0.0;
};

struct CovarianceQuery {
  Matrix a;
  Matrix b;
  double tau = 0.5;
};

/// Tr(rho^tau A rho^(1-tau) B) - Tr(rho A) Tr(rho B).
cplx generalized_covariance(const ThermalState& t, const Matrix& a, const Matrix& b, double tau);
inline cplx generalized_covariance(const ThermalState& t, const CovarianceQuery& q) {
  return generalized_covariance(t, q.a, q.b, q.tau);
}

/// Integral of the generalized covariance over tau in [0, 1], in closed form.
cplx tau_averaged_covariance(const ThermalState& t, const Matrix& a, const Matrix& b);

/// Reusable contraction for one operator pair in a fixed state: evaluates
/// the generalized covariance at many tau values for O(dim^2) each. Both
/// operators must already be in the state's eigenbasis.
class CovarianceContraction {
 public:
  CovarianceContraction(const ThermalState& t, const Matrix& a_eig, const Matrix& b_eig);
  cplx at(double tau) const;
  cplx tau_averaged() const;

 private:
  RealVector log_weights_;
  double degeneracy_tol_;
  Matrix product_;  // A'_jk B'_kj
  cplx mean_product_;
};

/// beta * int_0^1 ds int_0^1 dtau cov^tau_{g_s}(H - H0, A) with
/// g_s = g[H0 + s (H - H0)], s integrated by Gauss-Legendre of the given order.
cplx averaged_covariance(const Matrix& h0, const Matrix& h, double beta, const Matrix& a, int s_order);

/// Both sides of an exact formula and the absolute residual between them.
struct FormulaCheck {
  cplx lhs;
  cplx rhs;
  double residual = 0.0;
};

/// lhs = Tr(A g[H0]) - Tr(A g[H]), rhs = averaged_covariance(H0, H, beta, A).
FormulaCheck perturbation_check(const Matrix& h0, const Matrix& h, double beta, const Matrix& a, int s_order);
double perturbation_residual(const Matrix& h0, const Matrix& h, double beta, const Matrix& a, int s_order);

/// lhs = Tr(A_B g|B) - Tr(A g), rhs = beta int int cov_{g_s}(H_dB, A) with
/// H(s) = H - (1 - s) H_dB. A must be supported in B.
FormulaCheck truncation_check(const LocalHamiltonian& h, const VertexSet& b, double beta, const DenseOperator& a,
                              int s_order);
double truncation_residual(const LocalHamiltonian& h, const VertexSet& b, double beta, const DenseOperator& a,
                           int s_order);
/// Fermionic version; `a` is a Fock-space matrix declared to act on the
/// modes in `support`.
FormulaCheck truncation_check(const FermionicHamiltonian& h, const VertexSet& b, double beta, const Matrix& a,
                              const VertexSet& support, int s_order);
double truncation_residual(const FermionicHamiltonian& h, const VertexSet& b, double beta, const Matrix& a,
                           const VertexSet& support, int s_order);

/// || Tr_{S^c} g(beta) - Tr_{S^c} g[H|B](beta) ||_1 for S within B within V.
double locality_gap(const LocalHamiltonian& h, const VertexSet& s, const VertexSet& b, double beta);
/// Fermionic version. S must be a contiguous block of modes, so that the
/// even part of the reduced state is local in the mode-ordered tensor view.
double locality_gap(const FermionicHamiltonian& h, const VertexSet& s, const VertexSet& b, double beta);

}  // namespace thermaloc
