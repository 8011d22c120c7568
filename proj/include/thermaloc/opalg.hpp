#pragma once

#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "thermaloc/lattice.hpp"

namespace thermaloc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Complex square matrix on the tensor product of the listed sites. Sites
/// are kept in ascending vertex order; the first site is the most
/// significant tensor factor (Kronecker convention). The operator acts as
/// identity on every site not listed.
class DenseOperator {
 public:
  DenseOperator() = default;
  DenseOperator(VertexSet sites, std::vector<int> dims, Matrix matrix);

  static DenseOperator identity(VertexSet sites, std::vector<int> dims);
  static DenseOperator zero(VertexSet sites, std::vector<int> dims);
  /// Operator on a single site.
  static DenseOperator on_site(Vertex v, const Matrix& m);

  const VertexSet& sites() const noexcept { return sites_; }
  const std::vector<int>& dims() const noexcept { return dims_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

 private:
  VertexSet sites_;
  std::vector<int> dims_;
  Matrix matrix_;
};

/// Tensor-product embedding into the space of `target_sites` (must contain
/// op.sites(); dims must agree), identity on the extra sites.
DenseOperator embed(const DenseOperator& op, const VertexSet& target_sites, const std::vector<int>& target_dims);
/// Embedding into the full space of g, in the graph's vertex order.
DenseOperator embed(const DenseOperator& op, const InteractionGraph& g);

/// Product of two operators after embedding both into the union of their sites.
DenseOperator multiply(const DenseOperator& a, const DenseOperator& b);

/// embed(op) * x for x with rows indexed by the space of `sites`, without
/// forming the embedded matrix.
Matrix apply_local(const DenseOperator& op, const VertexSet& sites, const std::vector<int>& dims, const Matrix& x);

/// Trace over every site not in `keep`. An empty `keep` yields the 1x1 trace.
DenseOperator partial_trace(const DenseOperator& op, const VertexSet& keep);

/// Relative Frobenius norm of A - A^dagger.
double hermiticity_defect(const Matrix& a);

struct Spectrum {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, columns are eigenvectors
  /// Same vectors as a real orthogonal matrix when the input was real
  /// symmetric; empty otherwise.
  Eigen::MatrixXd real_eigenvectors;
  bool is_real() const noexcept { return real_eigenvectors.size() > 0; }
};

/// Full eigendecomposition. Inputs with relative defect up to 1e-6 are
/// symmetrised first; anything worse throws not_hermitian.
Spectrum hermitian_spectrum(const Matrix& a);
inline Spectrum hermitian_spectrum(const DenseOperator& a) { return hermitian_spectrum(a.matrix()); }

/// U diag(f(lambda)) U^dagger for a real function given as values.
Matrix from_eigen(const Spectrum& s, const RealVector& values);

/// Thermal power g(beta)^tau = exp(-beta tau H) / Z(beta)^tau, evaluated
/// with the extremal-eigenvalue shift. tau must lie in [0, 1].
Matrix fractional_power(const Spectrum& s, double tau, double beta);

inline constexpr double schatten_infinity = std::numeric_limits<double>::infinity();
/// Schatten p-norm for p in [1, inf]; p = schatten_infinity is the operator norm.
double schatten_norm(const Matrix& a, double p);
inline double schatten_norm(const DenseOperator& a, double p) { return schatten_norm(a.matrix(), p); }

/// Permutation swapping tensor factors i and j (1-based, i < j) of n copies
/// of a dim-dimensional space.
Matrix swap_operator(int copies, int i, int j, int dim);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix kron(const std::vector<Matrix>& factors);

namespace pauli {
Matrix I();
Matrix X();
Matrix Y();
Matrix Z();
}  // namespace pauli

}  // namespace thermaloc
