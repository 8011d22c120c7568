#include "thermaloc/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "thermaloc/error.hpp"

namespace thermaloc {

namespace {

std::size_t product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// For a space over `sites` and a subset `sub`, maps every basis index to its
// index within the subset factor and within the complementary factor.
struct IndexSplit {
  std::vector<Eigen::Index> sub;
  std::vector<Eigen::Index> rest;
  Eigen::Index sub_dim = 1;
  Eigen::Index rest_dim = 1;
};

IndexSplit split_indices(const VertexSet& sites, const std::vector<int>& dims, const VertexSet& sub) {
  const std::size_t total = product(dims);
  std::vector<char> in_sub(sites.size());
  IndexSplit out;
  for (std::size_t k = 0; k < sites.size(); ++k) {
    in_sub[k] = std::binary_search(sub.begin(), sub.end(), sites[k]);
    (in_sub[k] ? out.sub_dim : out.rest_dim) *= dims[k];
  }
  out.sub.resize(total);
  out.rest.resize(total);
  std::vector<int> digit(sites.size(), 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Eigen::Index s = 0;
    Eigen::Index r = 0;
    for (std::size_t k = 0; k < sites.size(); ++k) {
      if (in_sub[k]) s = s * dims[k] + digit[k];
      else r = r * dims[k] + digit[k];
    }
    out.sub[idx] = s;
    out.rest[idx] = r;
    for (std::size_t k = sites.size(); k-- > 0;) {
      if (++digit[k] < dims[k]) break;
      digit[k] = 0;
    }
  }
  return out;
}

// idx_of[r][s] = full index with rest index r and subset index s.
std::vector<std::vector<Eigen::Index>> group_by_rest(const IndexSplit& split) {
  std::vector<std::vector<Eigen::Index>> groups(split.rest_dim, std::vector<Eigen::Index>(split.sub_dim));
  for (std::size_t idx = 0; idx < split.sub.size(); ++idx)
    groups[split.rest[idx]][split.sub[idx]] = static_cast<Eigen::Index>(idx);
  return groups;
}

}  // namespace

DenseOperator::DenseOperator(VertexSet sites, std::vector<int> dims, Matrix matrix)
    : sites_(std::move(sites)), dims_(std::move(dims)), matrix_(std::move(matrix)) {
  if (sites_.size() != dims_.size()) fail(ErrorKind::invalid_argument, "one dimension per site required");
  if (!std::is_sorted(sites_.begin(), sites_.end()) ||
      std::adjacent_find(sites_.begin(), sites_.end()) != sites_.end())
    fail(ErrorKind::invalid_argument, "operator sites must be strictly ascending");
  const auto d = static_cast<Eigen::Index>(product(dims_));
  if (matrix_.rows() != d || matrix_.cols() != d)
    fail(ErrorKind::invalid_argument, "matrix size " + std::to_string(matrix_.rows()) +
                                          " does not match product of site dimensions " + std::to_string(d));
}

DenseOperator DenseOperator::identity(VertexSet sites, std::vector<int> dims) {
  const auto d = static_cast<Eigen::Index>(product(dims));
  return DenseOperator(std::move(sites), std::move(dims), Matrix::Identity(d, d));
}

DenseOperator DenseOperator::zero(VertexSet sites, std::vector<int> dims) {
  const auto d = static_cast<Eigen::Index>(product(dims));
  return DenseOperator(std::move(sites), std::move(dims), Matrix::Zero(d, d));
}

DenseOperator DenseOperator::on_site(Vertex v, const Matrix& m) {
  return DenseOperator({v}, {static_cast<int>(m.rows())}, m);
}

DenseOperator embed(const DenseOperator& op, const VertexSet& target_sites, const std::vector<int>& target_dims) {
  if (target_sites.size() != target_dims.size()) fail(ErrorKind::invalid_argument, "one dimension per target site required");
  for (std::size_t k = 0; k < op.sites().size(); ++k) {
    auto it = std::lower_bound(target_sites.begin(), target_sites.end(), op.sites()[k]);
    if (it == target_sites.end() || *it != op.sites()[k])
      fail(ErrorKind::invalid_argument, "operator site " + std::to_string(op.sites()[k]) + " not in target space");
    if (target_dims[static_cast<std::size_t>(it - target_sites.begin())] != op.dims()[k])
      fail(ErrorKind::invalid_argument, "dimension mismatch at site " + std::to_string(op.sites()[k]));
  }
  if (op.sites() == target_sites) return op;

  const IndexSplit split = split_indices(target_sites, target_dims, op.sites());
  const auto groups = group_by_rest(split);
  const auto d = static_cast<Eigen::Index>(split.sub.size());
  Matrix out = Matrix::Zero(d, d);
  const Matrix& m = op.matrix();
  for (const auto& idx : groups)
    for (Eigen::Index b = 0; b < split.sub_dim; ++b)
      for (Eigen::Index a = 0; a < split.sub_dim; ++a) out(idx[a], idx[b]) = m(a, b);
  return DenseOperator(target_sites, target_dims, std::move(out));
}

DenseOperator embed(const DenseOperator& op, const InteractionGraph& g) {
  return embed(op, g.vertices(), g.dims_of(g.vertices()));
}

DenseOperator multiply(const DenseOperator& a, const DenseOperator& b) {
  std::vector<Vertex> all(a.sites());
  all.insert(all.end(), b.sites().begin(), b.sites().end());
  VertexSet sites = make_vertex_set(std::move(all));
  std::vector<int> dims;
  for (Vertex v : sites) {
    auto ia = std::find(a.sites().begin(), a.sites().end(), v);
    dims.push_back(ia != a.sites().end() ? a.dims()[ia - a.sites().begin()]
                                         : b.dims()[std::find(b.sites().begin(), b.sites().end(), v) - b.sites().begin()]);
  }
  DenseOperator ea = embed(a, sites, dims);
  DenseOperator eb = embed(b, sites, dims);
  return DenseOperator(sites, dims, ea.matrix() * eb.matrix());
}

Matrix apply_local(const DenseOperator& op, const VertexSet& sites, const std::vector<int>& dims, const Matrix& x) {
  for (std::size_t k = 0; k < op.sites().size(); ++k) {
    auto it = std::lower_bound(sites.begin(), sites.end(), op.sites()[k]);
    if (it == sites.end() || *it != op.sites()[k])
      fail(ErrorKind::invalid_argument, "operator site " + std::to_string(op.sites()[k]) + " not in target space");
    if (dims[static_cast<std::size_t>(it - sites.begin())] != op.dims()[k])
      fail(ErrorKind::invalid_argument, "dimension mismatch at site " + std::to_string(op.sites()[k]));
  }
  const IndexSplit split = split_indices(sites, dims, op.sites());
  if (static_cast<Eigen::Index>(split.sub.size()) != x.rows()) fail(ErrorKind::invalid_argument, "row count mismatch");
  const auto groups = group_by_rest(split);
  const Matrix& m = op.matrix();
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (const auto& idx : groups)
    for (Eigen::Index a = 0; a < split.sub_dim; ++a)
      for (Eigen::Index b = 0; b < split.sub_dim; ++b)
        if (m(a, b) != cplx(0.0)) out.row(idx[a]) += m(a, b) * x.row(idx[b]);
  return out;
}

DenseOperator partial_trace(const DenseOperator& op, const VertexSet& keep) {
  for (Vertex v : keep)
    if (!std::binary_search(op.sites().begin(), op.sites().end(), v))
      fail(ErrorKind::invalid_argument, "kept site " + std::to_string(v) + " not in operator space");
  if (keep == op.sites()) return op;

  const IndexSplit split = split_indices(op.sites(), op.dims(), keep);
  const auto groups = group_by_rest(split);
  Matrix out = Matrix::Zero(split.sub_dim, split.sub_dim);
  const Matrix& m = op.matrix();
  for (const auto& idx : groups)
    for (Eigen::Index b = 0; b < split.sub_dim; ++b)
      for (Eigen::Index a = 0; a < split.sub_dim; ++a) out(a, b) += m(idx[a], idx[b]);

  std::vector<int> dims;
  for (Vertex v : keep)
    dims.push_back(op.dims()[std::find(op.sites().begin(), op.sites().end(), v) - op.sites().begin()]);
  return DenseOperator(keep, std::move(dims), std::move(out));
}

double hermiticity_defect(const Matrix& a) {
  const double norm = a.norm();
  if (norm == 0.0) return 0.0;
  return (a - a.adjoint()).norm() / norm;
}

Spectrum hermitian_spectrum(const Matrix& a) {
  if (a.rows() != a.cols()) fail(ErrorKind::invalid_argument, "matrix must be square");
  const double defect = hermiticity_defect(a);
  if (defect > 1e-6) fail(ErrorKind::not_hermitian, "relative anti-Hermitian part " + std::to_string(defect));
  const Matrix sym = 0.5 * (a + a.adjoint());
  if (sym.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym.real());
    if (solver.info() != Eigen::Success) fail(ErrorKind::not_hermitian, "eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors().cast<cplx>(), solver.eigenvectors()};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) fail(ErrorKind::not_hermitian, "eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors(), {}};
}

Matrix from_eigen(const Spectrum& s, const RealVector& values) {
  return s.eigenvectors * values.cast<cplx>().asDiagonal() * s.eigenvectors.adjoint();
}

Matrix fractional_power(const Spectrum& s, double tau, double beta) {
  if (!(tau >= 0.0 && tau <= 1.0)) fail(ErrorKind::invalid_argument, "tau must lie in [0, 1]");
  const RealVector exponent = -beta * s.eigenvalues;
  const double shift = exponent.maxCoeff();
  const double log_z = shift + std::log((exponent.array() - shift).exp().sum());
  const RealVector values = (tau * (exponent.array() - log_z)).exp();
  return from_eigen(s, values);
}

double schatten_norm(const Matrix& a, double p) {
  if (!(p >= 1.0)) fail(ErrorKind::invalid_argument, "Schatten norm needs p >= 1");
  if (a.size() == 0) return 0.0;
  const RealVector sv = Eigen::BDCSVD<Matrix>(a).singularValues();
  const double top = sv.maxCoeff();
  if (std::isinf(p) || top == 0.0) return top;
  if (p == 1.0) return sv.sum();
  return top * std::pow((sv.array() / top).pow(p).sum(), 1.0 / p);
}

Matrix swap_operator(int copies, int i, int j, int dim) {
  if (copies < 2 || i < 1 || j <= i || j > copies || dim < 1)
    fail(ErrorKind::invalid_argument, "swap needs 1 <= i < j <= copies");
  Eigen::Index total = 1;
  for (int k = 0; k < copies; ++k) total *= dim;
  Matrix out = Matrix::Zero(total, total);
  std::vector<int> digit(copies, 0);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    std::vector<int> swapped = digit;
    std::swap(swapped[i - 1], swapped[j - 1]);
    Eigen::Index target = 0;
    for (int k = 0; k < copies; ++k) target = target * dim + swapped[k];
    out(target, idx) = 1.0;
    for (int k = copies; k-- > 0;) {
      if (++digit[k] < dim) break;
      digit[k] = 0;
    }
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix kron(const std::vector<Matrix>& factors) {
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

namespace pauli {
Matrix I() { return Matrix::Identity(2, 2); }
Matrix X() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Matrix Y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
Matrix Z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

}  // namespace thermaloc
