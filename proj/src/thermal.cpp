#include "thermaloc/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermaloc/error.hpp"
#include "thermaloc/kernels.hpp"
#include "thermaloc/quadrature.hpp"

namespace thermaloc {

namespace {

void require_square(const Matrix& a, Eigen::Index dim, const char* what) {
  if (a.rows() != dim || a.cols() != dim)
    fail(ErrorKind::invalid_argument, std::string(what) + " does not act on the state's space");
}

std::span<const double> as_span(const Eigen::MatrixXd& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<const double> as_span(const RealVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }
std::span<const cplx> as_span(const Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }

// W_jk = int_0^1 p_j^tau p_k^(1-tau) dtau, the logarithmic mean of p_j and p_k.
Eigen::MatrixXd log_mean_weights(const RealVector& lw, double tol) {
  const Eigen::Index n = lw.size();
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double pk = std::exp(lw(k));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = lw(j) - lw(k);
      w(j, k) = std::abs(d) <= tol ? std::exp(0.5 * (lw(j) + lw(k))) : pk * std::expm1(d) / d;
    }
  }
  return w;
}

cplx diagonal_mean(const RealVector& lw, const Matrix& a_eig) {
  cplx sum = 0.0;
  for (Eigen::Index j = 0; j < lw.size(); ++j) sum += std::exp(lw(j)) * a_eig(j, j);
  return sum;
}

}  // namespace

ThermalState ThermalState::gibbs(const Matrix& h, double beta) {
  return gibbs(std::make_shared<const Spectrum>(hermitian_spectrum(h)), beta);
}

ThermalState ThermalState::gibbs(std::shared_ptr<const Spectrum> spectrum, double beta) {
  if (!spectrum) fail(ErrorKind::invalid_argument, "null spectrum");
  if (!std::isfinite(beta)) fail(ErrorKind::invalid_argument, "beta must be finite");
  ThermalState t;
  const RealVector exponent = -beta * spectrum->eigenvalues;
  const double shift = exponent.maxCoeff();
  t.log_z_ = shift + std::log((exponent.array() - shift).exp().sum());
  t.log_weights_ = exponent.array() - t.log_z_;
  t.beta_ = beta;
  t.degeneracy_tol_ = 1e-12 * std::abs(beta) * spectrum->eigenvalues.cwiseAbs().maxCoeff();
  t.spectrum_ = std::move(spectrum);
  return t;
}

ThermalState ThermalState::from_density(const Matrix& rho) {
  auto spectrum = std::make_shared<Spectrum>(hermitian_spectrum(rho));
  const RealVector& p = spectrum->eigenvalues;
  if (!(p.minCoeff() > 0.0)) fail(ErrorKind::invalid_argument, "state is not full rank");
  ThermalState t;
  const double trace = p.sum();
  t.log_weights_ = (p / trace).array().log();
  t.log_z_ = std::log(trace);
  t.beta_ = std::numeric_limits<double>::quiet_NaN();
  t.degeneracy_tol_ = 1e-12 * t.log_weights_.cwiseAbs().maxCoeff();
  t.spectrum_ = std::move(spectrum);
  return t;
}

Matrix ThermalState::density() const { return from_eigen(*spectrum_, populations()); }

Matrix ThermalState::power(double tau) const {
  if (!(tau >= 0.0 && tau <= 1.0)) fail(ErrorKind::invalid_argument, "tau must lie in [0, 1]");
  return from_eigen(*spectrum_, (tau * log_weights_.array()).exp());
}

namespace {

// U^dagger W for the state's eigenvectors, in real arithmetic when possible.
Matrix left_adjoint_product(const Spectrum& s, const Matrix& w) {
  if (!s.is_real()) return s.eigenvectors.adjoint() * w;
  const Eigen::MatrixXd ut = s.real_eigenvectors.transpose();
  const Eigen::MatrixXd re = ut * w.real();
  if (w.imag().cwiseAbs().maxCoeff() == 0.0) return re.cast<cplx>();
  Matrix out(re.rows(), re.cols());
  out.real() = re;
  out.imag() = ut * w.imag();
  return out;
}

}  // namespace

Matrix ThermalState::to_eigenbasis(const Matrix& a) const {
  require_square(a, dim(), "operator");
  if (!spectrum_->is_real()) return spectrum_->eigenvectors.adjoint() * a * spectrum_->eigenvectors;
  const Eigen::MatrixXd& u = spectrum_->real_eigenvectors;
  Matrix w(a.rows(), a.cols());
  w.real() = a.real() * u;
  if (a.imag().cwiseAbs().maxCoeff() == 0.0) w.imag().setZero();
  else w.imag() = a.imag() * u;
  return left_adjoint_product(*spectrum_, w);
}

Matrix ThermalState::local_to_eigenbasis(const DenseOperator& op, const VertexSet& sites,
                                         const std::vector<int>& dims) const {
  return left_adjoint_product(*spectrum_, apply_local(op, sites, dims, spectrum_->eigenvectors));
}

cplx ThermalState::expectation(const Matrix& a) const { return diagonal_mean(log_weights_, to_eigenbasis(a)); }

CovarianceContraction::CovarianceContraction(const ThermalState& t, const Matrix& a_eig, const Matrix& b_eig)
    : log_weights_(t.log_weights()), degeneracy_tol_(t.degeneracy_tolerance()) {
  require_square(a_eig, t.dim(), "first operator");
  require_square(b_eig, t.dim(), "second operator");
  product_ = a_eig.cwiseProduct(b_eig.transpose());
  mean_product_ = diagonal_mean(t.log_weights(), a_eig) * diagonal_mean(t.log_weights(), b_eig);
}

cplx CovarianceContraction::at(double tau) const {
  if (!(tau >= 0.0 && tau <= 1.0)) fail(ErrorKind::invalid_argument, "tau must lie in [0, 1]");
  const RealVector& lw = log_weights_;
  const RealVector u = (tau * lw.array()).exp();
  const Eigen::Index n = lw.size();
  const std::span<const double> us = as_span(u);
  cplx sum = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double vk = std::exp((1.0 - tau) * lw(k));
    sum += vk * kernels::weighted_sum(us, {product_.col(k).data(), static_cast<std::size_t>(n)});
  }
  return sum - mean_product_;
}

cplx CovarianceContraction::tau_averaged() const {
  const Eigen::MatrixXd w = log_mean_weights(log_weights_, degeneracy_tol_);
  return kernels::weighted_sum(as_span(w), as_span(product_)) - mean_product_;
}

cplx generalized_covariance(const ThermalState& t, const Matrix& a, const Matrix& b, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) fail(ErrorKind::invalid_argument, "tau must lie in [0, 1]");
  return CovarianceContraction(t, t.to_eigenbasis(a), t.to_eigenbasis(b)).at(tau);
}

cplx tau_averaged_covariance(const ThermalState& t, const Matrix& a, const Matrix& b) {
  const Matrix a_eig = t.to_eigenbasis(a);
  const Matrix b_eig_t = t.to_eigenbasis(b).transpose();
  const Eigen::MatrixXd w = log_mean_weights(t.log_weights(), t.degeneracy_tolerance());
  const cplx mean = diagonal_mean(t.log_weights(), a_eig) * diagonal_mean(t.log_weights(), b_eig_t);
  return kernels::weighted_triple_sum(as_span(w), as_span(a_eig), as_span(b_eig_t)) - mean;
}

cplx averaged_covariance(const Matrix& h0, const Matrix& h, double beta, const Matrix& a, int s_order) {
  if (s_order < 2) fail(ErrorKind::invalid_argument, "s quadrature order must be at least 2");
  if (h0.rows() != h.rows() || h0.cols() != h.cols()) fail(ErrorKind::invalid_argument, "Hamiltonian dimensions differ");
  require_square(a, h.rows(), "observable");
  const Matrix delta = h - h0;
  const QuadratureRule rule = gauss_legendre(s_order);
  cplx sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const ThermalState gs = ThermalState::gibbs(interpolate(h0, h, rule.nodes[i]), beta);
    sum += rule.weights[i] * tau_averaged_covariance(gs, delta, a);
  }
  return beta * sum;
}

FormulaCheck perturbation_check(const Matrix& h0, const Matrix& h, double beta, const Matrix& a, int s_order) {
  const cplx rhs = averaged_covariance(h0, h, beta, a, s_order);
  // g(0) is the maximally mixed state whatever the Hamiltonian.
  const cplx lhs =
      beta == 0.0 ? cplx{0.0} : ThermalState::gibbs(h0, beta).expectation(a) - ThermalState::gibbs(h, beta).expectation(a);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

double perturbation_residual(const Matrix& h0, const Matrix& h, double beta, const Matrix& a, int s_order) {
  return perturbation_check(h0, h, beta, a, s_order).residual;
}

FormulaCheck truncation_check(const LocalHamiltonian& h, const VertexSet& b, double beta, const DenseOperator& a,
                              int s_order) {
  if (!std::includes(b.begin(), b.end(), a.sites().begin(), a.sites().end()))
    fail(ErrorKind::invalid_argument, "observable support is not contained in B");
  const InteractionGraph& g = h.graph();
  const Matrix full = assemble(h).matrix();
  const Matrix boundary = boundary_hamiltonian(h, b).matrix();
  const Matrix truncated = assemble(truncate(h, b)).matrix();
  const Matrix a_full = embed(a, g).matrix();
  const Matrix a_b = embed(a, b, g.dims_of(b)).matrix();

  const cplx rhs = averaged_covariance(full - boundary, full, beta, a_full, s_order);
  const cplx lhs = ThermalState::gibbs(truncated, beta).expectation(a_b) - ThermalState::gibbs(full, beta).expectation(a_full);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

double truncation_residual(const LocalHamiltonian& h, const VertexSet& b, double beta, const DenseOperator& a,
                           int s_order) {
  return truncation_check(h, b, beta, a, s_order).residual;
}

FormulaCheck truncation_check(const FermionicHamiltonian& h, const VertexSet& b, double beta, const Matrix& a,
                              const VertexSet& support, int s_order) {
  if (!std::includes(b.begin(), b.end(), support.begin(), support.end()))
    fail(ErrorKind::invalid_argument, "observable support is not contained in B");
  for (Vertex v : b)
    if (!h.graph().has_vertex(v)) fail(ErrorKind::invalid_argument, "region mode not in system");
  const Matrix full = assemble(h);
  const Matrix boundary = boundary_hamiltonian(h, b);
  const Matrix truncated = truncate(h, b);

  // Even operators on B and on its complement factorize under the trace, so
  // g[H|B] on the whole Fock space reproduces Tr(A_B g|B).
  const cplx rhs = averaged_covariance(full - boundary, full, beta, a, s_order);
  const cplx lhs = ThermalState::gibbs(truncated, beta).expectation(a) - ThermalState::gibbs(full, beta).expectation(a);
  return {lhs, rhs, std::abs(lhs - rhs)};
}

double truncation_residual(const FermionicHamiltonian& h, const VertexSet& b, double beta, const Matrix& a,
                           const VertexSet& support, int s_order) {
  return truncation_check(h, b, beta, a, support, s_order).residual;
}

namespace {

void require_nested(const InteractionGraph& g, const VertexSet& s, const VertexSet& b) {
  if (!std::includes(b.begin(), b.end(), s.begin(), s.end())) fail(ErrorKind::invalid_argument, "S is not contained in B");
  for (Vertex v : b)
    if (!g.has_vertex(v)) fail(ErrorKind::invalid_argument, "B is not contained in the vertex set");
}

}  // namespace

double locality_gap(const LocalHamiltonian& h, const VertexSet& s, const VertexSet& b, double beta) {
  const InteractionGraph& g = h.graph();
  require_nested(g, s, b);
  const DenseOperator rho(g.vertices(), g.dims_of(g.vertices()), ThermalState::gibbs(assemble(h), beta).density());
  const DenseOperator rho_b(b, g.dims_of(b), ThermalState::gibbs(assemble(truncate(h, b)), beta).density());
  return schatten_norm(partial_trace(rho, s).matrix() - partial_trace(rho_b, s).matrix(), 1.0);
}

double locality_gap(const FermionicHamiltonian& h, const VertexSet& s, const VertexSet& b, double beta) {
  require_nested(h.graph(), s, b);
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] != s[i - 1] + 1) fail(ErrorKind::invalid_argument, "fermionic S must be a contiguous block of modes");
  const FermionicSystem& sys = h.system();
  const DenseOperator rho(sys.sites(), sys.site_dims(), ThermalState::gibbs(assemble(h), beta).density());
  const DenseOperator rho_b(sys.sites(), sys.site_dims(), ThermalState::gibbs(truncate(h, b), beta).density());
  return schatten_norm(partial_trace(rho, s).matrix() - partial_trace(rho_b, s).matrix(), 1.0);
}

}  // namespace thermaloc
