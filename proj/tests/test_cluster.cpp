#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "thermaloc/bounds.hpp"
#include "thermaloc/cluster.hpp"
#include "thermaloc/error.hpp"
#include "thermaloc/random.hpp"
#include "thermaloc/thermal.hpp"

using namespace thermaloc;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

EdgeId edge_id(const InteractionGraph& g, VertexSet e) { return g.find_edge(e); }

Matrix expm_hermitian(const Matrix& h, double beta) {
  const auto s = hermitian_spectrum(h);
  return from_eigen(s, (-beta * s.eigenvalues).array().exp().matrix());
}

LocalHamiltonian random_chain(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto g = build_chain(n, false);
  LocalHamiltonian h(g);
  for (EdgeId e = 0; e < g.edge_count(); ++e) h.add_term(e, DenseOperator(g.edge(e), {2, 2}, random_hermitian(4, rng)));
  return h;
}

EdgeSet all_edges(const InteractionGraph& g) {
  EdgeSet all(g.edge_count());
  for (EdgeId e = 0; e < all.size(); ++e) all[e] = e;
  return all;
}

}  // namespace

TEST_CASE("maximal clusters") {
  const auto g = build_chain(4, false);
  const EdgeId e01 = edge_id(g, {0, 1}), e12 = edge_id(g, {1, 2}), e23 = edge_id(g, {2, 3});
  const auto two = maximal_clusters(g, {e01, e23});
  REQUIRE(two.clusters.size() == 2);
  CHECK(two.clusters[0].size() == 1);
  CHECK(two.clusters[1].size() == 1);
  const auto one = maximal_clusters(g, {e01, e23, e12});
  REQUIRE(one.clusters.size() == 1);
  CHECK(one.clusters[0].size() == 3);
  CHECK(maximal_clusters(g, {}).clusters.empty());
  const auto rep = maximal_clusters(g, {e01, e01, e23});
  REQUIRE(rep.clusters.size() == 2);
  CHECK(rep.clusters[0].size() == 2);
  CHECK(rep.clusters[0].distinct_size() == 1);
  CHECK(rep.clusters[0].positions == std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(maximal_clusters(g, {7}), Error);

  // Sizes add up and different clusters never share a vertex.
  const auto grid = build_square_lattice(3, 3, false);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, grid.edge_count() - 1);
  for (int trial = 0; trial < 50; ++trial) {
    Word w(1 + trial % 7);
    for (auto& x : w) x = pick(rng);
    const auto d = maximal_clusters(grid, w);
    std::size_t total = 0;
    for (const auto& c : d.clusters) total += c.size();
    CHECK(total == w.size());
    for (std::size_t i = 0; i < d.clusters.size(); ++i)
      for (std::size_t j = i + 1; j < d.clusters.size(); ++j)
        CHECK(!edge_sets_overlap(grid, make_edge_set(d.clusters[i].letters), make_edge_set(d.clusters[j].letters)));
  }
}

TEST_CASE("word classes") {
  const auto g = build_chain(4, false);
  const EdgeId e01 = edge_id(g, {0, 1}), e12 = edge_id(g, {1, 2}), e23 = edge_id(g, {2, 3});
  const EdgeSet all = all_edges(g);
  CHECK(word_in_class(g, {e23}, all, 1));
  CHECK(!word_in_class(g, {}, all, 1));
  CHECK(word_in_class(g, {e01, e01, e12}, {e01}, 3));
  CHECK(!word_in_class(g, {e01, e01, e12}, {e01}, 3, ClusterSize::distinct));
  CHECK(!word_in_class(g, {e01, e23}, {e01}, 2));
  CHECK(!word_in_class(g, {e01, e23, e23}, {e01}, 2));
  CHECK(word_in_class(g, {e01, e23, e23}, {e23}, 2));
}

TEST_CASE("word operators and reordering") {
  const auto h = random_chain(5, 2);
  const auto& g = h.graph();
  CHECK(max_abs(word_operator(h, {}) - Matrix::Identity(32, 32)) == 0.0);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, g.edge_count() - 1);
  for (int trial = 0; trial < 20; ++trial) {
    Word w(2 + trial % 5);
    for (auto& x : w) x = pick(rng);
    Word reordered;
    for (const auto& c : maximal_clusters(g, w).clusters) reordered.insert(reordered.end(), c.letters.begin(), c.letters.end());
    const Matrix a = word_operator(h, w);
    CHECK(max_abs(a - word_operator(h, reordered)) < 1e-12 * std::max(1.0, max_abs(a)));
  }
}

TEST_CASE("series tail bound") {
  const double t = series_tail_bound(0.1, 1.0, 3, 5);
  CHECK(t == doctest::Approx(std::pow(0.3, 6) * std::exp(0.3) / 720.0).epsilon(1e-14));
  CHECK(series_tail_bound(0.0, 1.0, 3, 5) == 0.0);
}

TEST_CASE("truncated cluster expansion") {
  SeriesTruncation trunc;
  trunc.max_word_length = 10;

  const auto h = random_chain(4, 7);
  const auto& g = h.graph();
  const EdgeSet all = all_edges(g);
  CHECK(max_abs(omega_truncated(h, 0.0, all, 1, trunc).value) == 0.0);

  // All words up to K reproduce the Taylor partial sum exactly.
  const double beta = 0.15;
  const Matrix hm = assemble(h).matrix();
  Matrix taylor = Matrix::Identity(hm.rows(), hm.cols()), term = taylor;
  for (std::size_t k = 1; k <= trunc.max_word_length; ++k) {
    term = term * (-beta * hm) / static_cast<double>(k);
    taylor += term;
  }
  const auto full = omega_truncated(h, beta, all, 1, trunc);
  CHECK(max_abs(full.value + Matrix::Identity(hm.rows(), hm.cols()) - taylor) < 1e-13);
  const Matrix exact = expm_hermitian(hm, beta);
  CHECK(schatten_norm(Matrix(full.value - (exact - Matrix::Identity(hm.rows(), hm.cols()))), schatten_infinity) <=
        full.tail_bound + 1e-13);

  // One edge: all words are powers of one letter.
  const auto single = random_chain(2, 9);
  const Matrix hs = assemble(single).matrix();
  const auto two = omega_truncated(single, 0.4, {0}, 2, trunc);
  const Matrix closed = expm_hermitian(hs, 0.4) - Matrix::Identity(4, 4) + 0.4 * hs;
  CHECK(schatten_norm(Matrix(two.value - closed), schatten_infinity) <= two.tail_bound + 1e-13);

  try {
    omega_truncated(random_chain(7, 1), beta, {0}, 1, trunc);
    FAIL("expected resource_limit");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::resource_limit);
  }
  SeriesTruncation deep;
  deep.max_word_length = 13;
  CHECK_THROWS_AS(omega_truncated(h, beta, all, 1, deep), Error);
}

TEST_CASE("omega obeys its norm bound") {
  SeriesTruncation trunc;
  trunc.max_word_length = 9;
  const auto h = standard_model(ModelKind::ising, build_chain(4, false), 1.0);
  const auto& g = h.graph();
  const double alpha = 2 * std::numbers::e;
  for (double beta : {0.03, 0.06}) {
    const double y = bounds::alpha_y(beta, alpha);
    const double z = std::exp(ThermalState::gibbs(assemble(h), beta).log_partition());
    for (const EdgeSet& f : {EdgeSet{0}, EdgeSet{0, 2}, all_edges(g)})
      for (std::size_t L : {1u, 2u, 3u}) {
        const auto omega = omega_truncated(h, beta, f, L, trunc);
        const double lhs = schatten_norm(omega.value, 1.0) / z;
        const double rhs = bounds::mpo_error_bound_from_alpha_y(static_cast<double>(f.size()), L, y);
        CHECK(lhs <= rhs + 16.0 * omega.tail_bound / z);
      }
  }
}

TEST_CASE("cluster proxy state") {
  SeriesTruncation trunc;
  trunc.max_word_length = 10;
  const auto h = standard_model(ModelKind::ising, build_chain(4, false), 1.0);
  const double beta = 0.05;
  const auto t = ThermalState::gibbs(assemble(h), beta);
  const double z = std::exp(t.log_partition());

  const auto flat = cluster_proxy_state(h, beta, 1, trunc);
  CHECK(max_abs(flat.value - Matrix::Identity(16, 16) / z) < 1e-14);

  const auto big = cluster_proxy_state(h, beta, 11, trunc);
  CHECK(schatten_norm(Matrix(big.value - t.density()), schatten_infinity) <= big.tail_bound + 1e-13);

  const auto proxy = cluster_proxy_state(h, beta, 2, trunc);
  CHECK(hermiticity_defect(proxy.value) < 1e-12);
  const double dist = schatten_norm(Matrix(t.density() - proxy.value), 1.0);
  const double bound = bounds::mpo_error_bound(3.0, 2.0, beta, 1.0, 2 * std::numbers::e);
  CHECK(dist <= bound + 16.0 * proxy.tail_bound);
  CHECK(dist > 0.0);
}

TEST_CASE("eta series") {
  SeriesTruncation trunc;
  trunc.max_word_length = 10;
  const auto h = random_chain(4, 11);
  const auto& g = h.graph();
  const EdgeId e = edge_id(g, {1, 2});
  const Matrix he = embed(h.term(e), g).matrix();
  const auto one = eta_truncated(h, {e}, 0.3, trunc);
  const Matrix closed = expm_hermitian(he, 0.3) - Matrix::Identity(16, 16);
  CHECK(schatten_norm(Matrix(one.value - closed), schatten_infinity) <= one.tail_bound + 1e-13);
  CHECK(max_abs(eta_truncated(h, {0, 1}, 0.0, trunc).value) == 0.0);

  // Two letters: inclusion-exclusion over the letters used.
  const Matrix h0 = embed(h.term(0), g).matrix(), h1 = embed(h.term(1), g).matrix();
  const auto pair = eta_truncated(h, {0, 1}, 0.2, trunc);
  const Matrix ie = expm_hermitian(Matrix(h0 + h1), 0.2) - expm_hermitian(h0, 0.2) - expm_hermitian(h1, 0.2) +
                    Matrix::Identity(16, 16);
  CHECK(schatten_norm(Matrix(pair.value - ie), schatten_infinity) <= pair.tail_bound + 1e-13);
}

TEST_CASE("lemma checks") {
  const auto ab = check_alternating_binomial(4, 8);
  CHECK(ab.pass);
  const auto zero = check_alternating_binomial(4, 8, 3, true);
  CHECK(zero.pass);
  CHECK(zero.violation <= 0.0);

  const auto eta = check_eta_series(0.1, 3, 10);
  CHECK(eta.pass);
  CHECK(check_eta_series(0.5, 1, 12).pass);

  const auto h = random_chain(5, 13);
  SeriesTruncation trunc;
  trunc.max_word_length = 8;
  CHECK(check_rho_factorization(h, 0.1, {1}, trunc).pass);
  CHECK(check_rho_factorization(h, -0.1, {0, 3}, trunc).pass);

  const auto chain = build_chain(5, false);
  const auto mfold = check_mfold_animals(chain, all_edges(chain), 1, 0.1, 2);
  CHECK(mfold.pass);
  CHECK(mfold.violation < 0.0);

  const auto report = lemma_suite(standard_model(ModelKind::ising, chain, 1.0), 0.1, trunc, 3);
  CHECK(report.checks.size() == 4);
  CHECK(report.pass());
  CHECK(report.max_violation() <= 0.0);
}
