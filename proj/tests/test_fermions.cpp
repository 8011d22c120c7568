#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "thermaloc/error.hpp"
#include "thermaloc/fermions.hpp"
#include "thermaloc/thermal.hpp"

using namespace thermaloc;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::shared_ptr<const FermionicSystem> modes(int n) { return std::make_shared<const FermionicSystem>(n); }

}  // namespace

TEST_CASE("canonical anticommutation relations") {
  const auto one = modes(1);
  const auto s1 = hermitian_spectrum(one->number(0));
  CHECK(s1.eigenvalues(0) == doctest::Approx(0.0));
  CHECK(s1.eigenvalues(1) == doctest::Approx(1.0));

  for (int n : {2, 3}) {
    const FermionicSystem sys(n);
    const Matrix id = Matrix::Identity(sys.dim(), sys.dim());
    for (int x = 0; x < n; ++x) {
      CHECK(max_abs(sys.parity() * sys.annihilation(x) + sys.annihilation(x) * sys.parity()) < 1e-12);
      for (int y = 0; y < n; ++y) {
        const Matrix fx = sys.annihilation(x), fy = sys.annihilation(y);
        const Matrix anti = fx * fy.adjoint() + fy.adjoint() * fx;
        CHECK(max_abs(anti - (x == y ? id : Matrix::Zero(sys.dim(), sys.dim()))) < 1e-12);
        CHECK(max_abs(fx * fy + fy * fx) < 1e-12);
      }
    }
    CHECK(max_abs(sys.parity() * sys.parity() - id) < 1e-12);
  }
  CHECK_THROWS_AS(FermionicSystem(0), Error);
  CHECK_THROWS_AS(FermionicSystem(FermionicSystem::max_modes + 1), Error);
}

TEST_CASE("fermionic terms") {
  const auto sys = modes(3);
  const Matrix hop = sys->creation(0) * sys->annihilation(1) + sys->creation(1) * sys->annihilation(0);
  CHECK(sys->is_even(hop));
  const Matrix nn = sys->number(0) * sys->number(1);
  CHECK(max_abs(Matrix(nn.diagonal().asDiagonal()) - nn) == 0.0);

  try {
    fermionic_local_hamiltonian(sys, {{{0}, sys->annihilation(0) + sys->creation(0)}});
    FAIL("expected parity_violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parity_violation);
  }
  try {
    fermionic_local_hamiltonian(sys, {{{0, 1}, sys->creation(0) * sys->annihilation(1)}});
    FAIL("expected not_hermitian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_hermitian);
  }
  try {
    fermionic_local_hamiltonian(sys, {{{0}, hop}});
    FAIL("expected invalid_term");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_term);
  }
  const auto h = fermionic_local_hamiltonian(sys, {{{0, 1}, hop}, {{1, 0}, nn}, {{2}, sys->number(2)}});
  CHECK(h.graph().edge_count() == 2);
  CHECK(max_abs(assemble(h) - (hop + nn + sys->number(2))) < 1e-15);
}

TEST_CASE("hopping chain matches the cosine band") {
  const int n = 4;
  const double t = 0.9;
  const auto h = fermionic_chain(modes(n), t, 0.0);
  std::vector<double> single;
  for (int k = 1; k <= n; ++k) single.push_back(-2.0 * t * std::cos(k * std::numbers::pi / (n + 1)));
  std::vector<double> many;
  for (int mask = 0; mask < (1 << n); ++mask) {
    double e = 0.0;
    for (int k = 0; k < n; ++k)
      if (mask >> k & 1) e += single[static_cast<std::size_t>(k)];
    many.push_back(e);
  }
  std::sort(many.begin(), many.end());
  const auto spec = hermitian_spectrum(assemble(h));
  for (int i = 0; i < (1 << n); ++i) CHECK(spec.eigenvalues(i) == doctest::Approx(many[static_cast<std::size_t>(i)]).epsilon(1e-12));
  CHECK(h.local_strength() == doctest::Approx(t));
}

TEST_CASE("truncated thermal states factorize") {
  const auto h = fermionic_chain(modes(4), 1.0, 0.6);
  const VertexSet b{0, 1}, bc{2, 3};
  const Matrix hb = truncate(h, b), hc = truncate(h, bc);
  CHECK(max_abs(hb + hc + boundary_hamiltonian(h, b) - assemble(h)) < 1e-12);
  for (double beta : {0.3, 1.2}) {
    const Matrix product = ThermalState::gibbs(hb, beta).density() * ThermalState::gibbs(hc, beta).density();
    const Matrix joint = ThermalState::gibbs(Matrix(hb + hc), beta).density();
    CHECK(max_abs(product / product.trace() - joint) < 1e-10);
  }
}
