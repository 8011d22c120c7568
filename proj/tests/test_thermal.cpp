#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "thermaloc/bounds.hpp"
#include "thermaloc/error.hpp"
#include "thermaloc/quadrature.hpp"
#include "thermaloc/random.hpp"
#include "thermaloc/thermal.hpp"

using namespace thermaloc;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

// Direct evaluation through fractional powers.
cplx covariance_direct(const ThermalState& t, const Matrix& a, const Matrix& b, double tau) {
  const Matrix rho = t.density();
  return (t.power(tau) * a * t.power(1.0 - tau) * b).trace() - (rho * a).trace() * (rho * b).trace();
}

Matrix diagonal(std::initializer_list<double> xs) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) m(i, i) = x, ++i;
  return m;
}

}  // namespace

TEST_CASE("gauss-legendre rules") {
  const auto rule = gauss_legendre(5);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], 9);
  CHECK(sum == doctest::Approx(0.1).epsilon(1e-14));
  const auto wide = gauss_legendre(64, -1.0, 2.0);
  double integral = 0.0;
  for (std::size_t i = 0; i < wide.nodes.size(); ++i) integral += wide.weights[i] * std::exp(wide.nodes[i]);
  CHECK(integral == doctest::Approx(std::exp(2.0) - std::exp(-1.0)).epsilon(1e-14));
  CHECK_THROWS_AS(gauss_legendre(0), Error);
}

TEST_CASE("gibbs states") {
  std::mt19937_64 rng(1);
  const Matrix h = random_hermitian(8, rng);
  const auto flat = ThermalState::gibbs(h, 0.0);
  CHECK(max_abs(flat.density() - identity(8) / 8.0) < 1e-14);
  CHECK(flat.log_partition() == doctest::Approx(std::log(8.0)));

  const auto q = ThermalState::gibbs(pauli::Z(), 1.0);
  const RealVector p = q.populations();
  CHECK(p(0) == doctest::Approx(std::exp(1.0) / (2 * std::cosh(1.0))));
  CHECK(p(1) == doctest::Approx(std::exp(-1.0) / (2 * std::cosh(1.0))));
  CHECK(q.log_partition() == doctest::Approx(std::log(2 * std::cosh(1.0))));

  for (double beta : {-2.0, 0.5, 3.0, 60.0}) {
    const auto t = ThermalState::gibbs(h, beta);
    const Matrix rho = t.density();
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    CHECK(hermitian_spectrum(rho).eigenvalues.minCoeff() > -1e-15);
    CHECK(t.populations().minCoeff() > 0.0);
  }
  CHECK(max_abs(ThermalState::gibbs(h, 0.7).power(0.0) - identity(8)) < 1e-12);

  const auto shared = std::make_shared<const Spectrum>(hermitian_spectrum(h));
  CHECK(max_abs(ThermalState::gibbs(shared, 0.4).density() - ThermalState::gibbs(h, 0.4).density()) < 1e-13);

  const Matrix rho = ThermalState::gibbs(h, 1.1).density();
  const auto from = ThermalState::from_density(rho);
  CHECK(max_abs(from.density() - rho) < 1e-12);
  CHECK(std::isnan(from.beta()));
  Matrix pure = Matrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  CHECK_THROWS_AS(ThermalState::from_density(pure), Error);
}

TEST_CASE("generalized covariance: closed forms") {
  const Matrix h = kron(pauli::Z(), pauli::Z());
  const auto t = ThermalState::gibbs(h, 1.0);
  const Matrix z1 = kron(pauli::Z(), pauli::I()), z2 = kron(pauli::I(), pauli::Z());
  for (double tau : {0.0, 0.25, 0.5, 1.0}) {
    CHECK(generalized_covariance(t, z1, z2, tau).real() == doctest::Approx(-std::tanh(1.0)).epsilon(1e-13));
    CHECK(std::abs(generalized_covariance(t, identity(4), z2, tau)) < 1e-15);
  }
  CHECK(tau_averaged_covariance(t, z1, z2).real() == doctest::Approx(-0.761594155955765).epsilon(1e-13));

  // Product state, disjoint supports.
  std::mt19937_64 rng(2);
  const Matrix ha = random_hermitian(2, rng), hb = random_hermitian(2, rng);
  const Matrix prod = kron(ha, identity(2)) + kron(identity(2), hb);
  const auto tp = ThermalState::gibbs(prod, 0.9);
  const Matrix a = kron(random_hermitian(2, rng), identity(2)), b = kron(identity(2), random_hermitian(2, rng));
  for (double tau : {0.0, 0.3, 1.0}) CHECK(std::abs(generalized_covariance(tp, a, b, tau)) < 1e-14);
}

TEST_CASE("generalized covariance matches fractional powers") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto t = ThermalState::gibbs(random_hermitian(8, rng), 0.8);
    const Matrix a = random_matrix(8, rng), b = random_matrix(8, rng);
    const CovarianceContraction c(t, t.to_eigenbasis(a), t.to_eigenbasis(b));
    for (double tau : {0.0, 0.2, 0.5, 0.9, 1.0}) {
      const cplx direct = covariance_direct(t, a, b, tau);
      CHECK(std::abs(generalized_covariance(t, a, b, tau) - direct) < 1e-12);
      CHECK(std::abs(c.at(tau) - direct) < 1e-12);
    }
    CHECK(std::abs(c.tau_averaged() - tau_averaged_covariance(t, a, b)) < 1e-12);
  }
  const auto t = ThermalState::gibbs(pauli::Z(), 1.0);
  CHECK_THROWS_AS(generalized_covariance(t, pauli::X(), pauli::X(), -0.1), Error);
  CHECK_THROWS_AS(generalized_covariance(t, identity(4), pauli::X(), 0.5), Error);
}

TEST_CASE("local operators in the eigenbasis") {
  std::mt19937_64 rng(6);
  const auto g = build_chain(4, false);
  LocalHamiltonian h(g);
  for (EdgeId e = 0; e < g.edge_count(); ++e) h.add_term(e, DenseOperator(g.edge(e), {2, 2}, random_hermitian(4, rng)));
  const auto t = ThermalState::gibbs(assemble(h), 0.5);
  const DenseOperator op({1, 3}, {2, 2}, random_matrix(4, rng));
  const Matrix direct = t.to_eigenbasis(embed(op, g).matrix());
  CHECK(max_abs(t.local_to_eigenbasis(op, g.vertices(), g.dims_of(g.vertices())) - direct) < 1e-12);

  // Real Hamiltonian takes the real eigensolver path.
  const auto ising = standard_model(ModelKind::ising, build_chain(4, false), 1.0, 0.3);
  const auto tr = ThermalState::gibbs(assemble(ising), 0.5);
  CHECK(tr.spectrum().is_real());
  const Matrix y = embed(DenseOperator::on_site(2, pauli::Y()), ising.graph()).matrix();
  CHECK(max_abs(tr.to_eigenbasis(y) - tr.spectrum().eigenvectors.adjoint() * y * tr.spectrum().eigenvectors) < 1e-12);
}

TEST_CASE("tau-averaged covariance") {
  std::mt19937_64 rng(4);
  // Commuting case: every tau agrees with the ordinary covariance.
  const Matrix hd = diagonal({0.3, -1.0, 2.0, 0.5});
  const auto td = ThermalState::gibbs(hd, 1.2);
  const Matrix ad = diagonal({1.0, 2.0, -1.0, 0.0}), bd = diagonal({0.5, 0.5, 3.0, -2.0});
  CHECK(std::abs(tau_averaged_covariance(td, ad, bd) - generalized_covariance(td, ad, bd, 1.0)) < 1e-13);

  const auto rule = gauss_legendre(64);
  for (int trial = 0; trial < 5; ++trial) {
    const auto t = ThermalState::gibbs(random_hermitian(4, rng), 1.5);
    const Matrix a = random_hermitian(4, rng), b = random_hermitian(4, rng);
    cplx quad = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) quad += rule.weights[i] * covariance_direct(t, a, b, rule.nodes[i]);
    CHECK(std::abs(tau_averaged_covariance(t, a, b) - quad) < 1e-10);
    CHECK(std::abs(tau_averaged_covariance(t, identity(4), b)) < 1e-14);
  }

  // Exact degeneracies take the analytic limit.
  const auto deg = ThermalState::gibbs(kron(pauli::Z(), pauli::Z()), 0.7);
  const Matrix x = kron(pauli::X(), pauli::X()), xi = kron(pauli::X(), pauli::I());
  cplx quad = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) quad += rule.weights[i] * covariance_direct(deg, xi, xi, rule.nodes[i]);
  CHECK(std::abs(tau_averaged_covariance(deg, xi, xi) - quad) < 1e-12);
  CHECK(std::abs(tau_averaged_covariance(deg, x, x) - covariance_direct(deg, x, x, 0.5)) < 1e-12);
}

TEST_CASE("covariance properties on random instances") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = ThermalState::gibbs(random_hermitian(4, rng), 1.0);
    const Matrix a = random_hermitian(4, rng), b = random_hermitian(4, rng);
    const double bound = schatten_norm(a, schatten_infinity) * schatten_norm(b, schatten_infinity);
    std::vector<double> self;
    for (int k = 0; k <= 20; ++k) {
      const double tau = k / 20.0;
      const cplx ab = generalized_covariance(t, a, b, tau);
      CHECK(std::abs(ab) <= bound * (1 + 1e-12));
      CHECK(std::abs(ab - generalized_covariance(t, b, a, 1.0 - tau)) < 1e-12);
      self.push_back(generalized_covariance(t, a, a, tau).real());
    }
    for (std::size_t k = 1; k + 1 < self.size(); ++k) CHECK(self[k - 1] - 2 * self[k] + self[k + 1] >= -1e-10);
  }
}

TEST_CASE("golden-thompson chain bound") {
  std::mt19937_64 rng(12);
  const auto g = build_chain(6, false);
  for (int trial = 0; trial < 5; ++trial) {
    LocalHamiltonian h(g);
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      h.add_term(e, DenseOperator(g.edge(e), {2, 2}, random_hermitian(4, rng)));
    const Matrix full = assemble(h).matrix();
    const std::vector<EdgeSet> parts{{0}, {2, 3}};  // non-overlapping animals
    for (double beta : {-0.7, 0.4, 1.5}) {
      Matrix rest = full;
      double prod = 1.0;
      for (const auto& part : parts) {
        const Matrix hg = assemble_edges(h, part).matrix();
        rest -= hg;
        const auto s = hermitian_spectrum(hg);
        prod *= std::exp(std::abs(beta) * s.eigenvalues.cwiseAbs().maxCoeff());
      }
      const auto sr = hermitian_spectrum(rest);
      const double lhs = (-beta * sr.eigenvalues).array().exp().sum();
      const double z = std::exp(ThermalState::gibbs(full, beta).log_partition());
      CHECK(lhs <= z * prod * (1 + 1e-12));
    }
  }
}

TEST_CASE("averaged covariance") {
  std::mt19937_64 rng(13);
  const Matrix h = random_hermitian(4, rng), a = random_hermitian(4, rng);
  CHECK(std::abs(averaged_covariance(h, h, 0.9, a, 16)) < 1e-14);

  // Diagonal case against a scalar composite-Simpson double integral.
  const std::vector<double> e0{0.2, -0.5, 1.0, 0.0}, e1{1.1, 0.3, -0.4, 0.6}, av{1.0, -2.0, 0.5, 3.0};
  const double beta = 1.3;
  auto integrand = [&](double s) {
    std::vector<double> w(4);
    double z = 0.0;
    for (std::size_t j = 0; j < 4; ++j) z += w[j] = std::exp(-beta * (e0[j] + s * (e1[j] - e0[j])));
    double mda = 0.0, md = 0.0, ma = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
      const double p = w[j] / z, d = e1[j] - e0[j];
      mda += p * d * av[j];
      md += p * d;
      ma += p * av[j];
    }
    return mda - md * ma;
  };
  const int n = 4000;
  double simpson = integrand(0.0) + integrand(1.0);
  for (int k = 1; k < n; ++k) simpson += (k % 2 ? 4.0 : 2.0) * integrand(static_cast<double>(k) / n);
  const double expected = beta * simpson / (3.0 * n);
  const cplx got = averaged_covariance(diagonal({0.2, -0.5, 1.0, 0.0}), diagonal({1.1, 0.3, -0.4, 0.6}), beta,
                                       diagonal({1.0, -2.0, 0.5, 3.0}), 32);
  CHECK(std::abs(got - expected) < 1e-10);

  const Matrix h0 = random_hermitian(4, rng), h1 = random_hermitian(4, rng), b = random_hermitian(4, rng);
  CHECK(std::abs(averaged_covariance(h0, h1, 1.0, b, 32) - averaged_covariance(h0, h1, 1.0, b, 64)) < 1e-10);
  CHECK_THROWS_AS(averaged_covariance(h0, h1, 1.0, b, 1), Error);
}

TEST_CASE("perturbation formula") {
  std::mt19937_64 rng(14);
  const Matrix h = random_hermitian(8, rng), a = random_hermitian(8, rng);
  CHECK(perturbation_residual(h, h, 1.0, a, 64) == 0.0);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix h0 = random_hermitian(8, rng), h1 = random_hermitian(8, rng), x = random_hermitian(8, rng);
    CHECK(perturbation_residual(h0, h1, 1.0, x, 64) < 1e-8);
    CHECK(perturbation_residual(h0, h1, 0.0, x, 64) == 0.0);
  }
  // Gauss-Legendre convergence: the residual falls rapidly with the order.
  const Matrix h0 = 2.0 * random_hermitian(8, rng), h1 = 2.0 * random_hermitian(8, rng), x = random_hermitian(8, rng);
  const double r2 = perturbation_residual(h0, h1, 1.0, x, 2);
  const double r4 = perturbation_residual(h0, h1, 1.0, x, 4);
  const double r8 = perturbation_residual(h0, h1, 1.0, x, 8);
  CHECK(r4 < r2);
  CHECK(r8 < 1e-2 * r4);
}

TEST_CASE("truncation formula: spins") {
  const auto g = build_chain(5, false);
  const auto h = standard_model(ModelKind::ising, g, 1.0, 0.7);
  const VertexSet b{0, 1, 2};
  CHECK(truncation_residual(h, g.vertices(), 0.8, parse_pauli_string("Z0"), 16) == 0.0);
  CHECK(truncation_residual(h, b, 0.5, parse_pauli_string("Z0"), 64) < 1e-8);
  for (const char* obs : {"X0", "Z0Z1", "X1Y2"})
    for (double beta : {0.2, 1.0}) CHECK(truncation_residual(h, b, beta, parse_pauli_string(obs), 64) < 1e-8);
  const auto c = truncation_check(h, b, 1.0, parse_pauli_string("X0"), 64);
  CHECK(std::abs(c.lhs) > 1e-5);
  CHECK_THROWS_AS(truncation_check(h, b, 1.0, parse_pauli_string("Z4"), 64), Error);
}

TEST_CASE("truncation formula: fermions") {
  const auto sys = std::make_shared<const FermionicSystem>(4);
  const auto h = fermionic_chain(sys, 1.0, 0.5);
  const VertexSet b{0, 1};
  CHECK(truncation_residual(h, b, 0.5, sys->number(0), {0}, 64) < 1e-8);
  const Matrix hop = sys->creation(0) * sys->annihilation(1) + sys->creation(1) * sys->annihilation(0);
  for (double beta : {0.2, 1.0}) CHECK(truncation_residual(h, b, beta, hop, {0, 1}, 64) < 1e-8);
  CHECK(truncation_residual(h, {0, 1, 2, 3}, 0.5, sys->number(0), {0}, 64) == 0.0);
  CHECK_THROWS_AS(truncation_check(h, b, 0.5, sys->number(3), {3}, 64), Error);
}

TEST_CASE("locality gap") {
  const auto g = build_chain(8, false);
  const auto h = standard_model(ModelKind::ising, g, 1.0, 1.0);
  CHECK(locality_gap(h, {3}, g.vertices(), 0.4) < 1e-12);

  // Without the bond across the boundary nothing is cut.
  const InteractionGraph split({0, 1, 2, 3}, {{0, 1}, {2, 3}});
  const auto hs = standard_model(ModelKind::heisenberg, split, 1.0, 0.4);
  CHECK(locality_gap(hs, {1}, {0, 1}, 0.9) < 1e-12);

  const VertexSet s{3}, b{1, 2, 3, 4, 5, 6};
  const double gap = locality_gap(h, s, b, 0.2);
  CHECK(gap > 1e-12);
  // Compared against the bound inside its regime, with alpha = 4e for the
  // chain with on-site edges.
  const double alpha = 4 * std::numbers::e;
  const double beta = 0.5 * bounds::beta_star(alpha, 1.0);
  const double dist = static_cast<double>(edge_set_distance(g, s, boundary_edges(h.graph(), b)));
  const double bs = static_cast<double>(boundary_edges(h.graph(), s).size());
  const double bb = static_cast<double>(boundary_edges(h.graph(), b).size());
  const auto rhs = bounds::locality_rhs(beta, bs, bb, dist, alpha, 1.0);
  REQUIRE(rhs.has_value());
  const double g2 = locality_gap(h, s, b, beta);
  CHECK(g2 <= *rhs);
  CHECK(g2 <= bounds::locality_rhs_tight(beta, bs, bb, dist, alpha, 1.0));

  CHECK_THROWS_AS(locality_gap(h, {0}, {1, 2}, 0.1), Error);
}

TEST_CASE("fermionic locality gap") {
  const auto sys = std::make_shared<const FermionicSystem>(4);
  const auto h = fermionic_chain(sys, 1.0, 0.5);
  CHECK(locality_gap(h, {0}, {0, 1, 2, 3}, 0.5) < 1e-12);
  const double gap = locality_gap(h, {0}, {0, 1, 2}, 0.5);
  CHECK(gap > 1e-8);
  CHECK(locality_gap(h, {0, 1}, {0, 1, 2}, 0.5) >= gap - 1e-12);
  CHECK_THROWS_AS(locality_gap(h, {0, 2}, {0, 1, 2}, 0.5), Error);
}
