#include "thermaloc/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include <fmt/format.h>

#include "thermaloc/error.hpp"

namespace thermaloc {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

Eigen::Index full_dim(const InteractionGraph& g) {
  Eigen::Index d = 1;
  for (Vertex v : g.vertices()) d *= g.local_dim(v);
  return d;
}

bool edges_overlap(const InteractionGraph& g, EdgeId a, EdgeId b) {
  const auto& ov = g.overlapping(a);
  return std::binary_search(ov.begin(), ov.end(), b);
}

// c[k] = (-beta)^k / k!
std::vector<double> series_coefficients(double beta, std::size_t K) {
  std::vector<double> c(K + 1, 1.0);
  for (std::size_t k = 1; k <= K; ++k) c[k] = c[k - 1] * (-beta) / static_cast<double>(k);
  return c;
}

struct Alphabet {
  std::vector<EdgeId> edges;
  std::vector<Matrix> ops;  // full-space h_e
};

Alphabet make_alphabet(const LocalHamiltonian& h, const EdgeSet& edges) {
  Alphabet a;
  for (EdgeId e : edges) {
    auto it = h.terms().find(e);
    if (it == h.terms().end()) continue;  // zero term: every word using it vanishes
    a.edges.push_back(e);
    a.ops.push_back(embed(it->second, h.graph()).matrix());
  }
  return a;
}

void check_budget(std::size_t letters, std::size_t K, const SeriesTruncation& trunc) {
  if (letters > trunc.edge_limit)
    fail(ErrorKind::resource_limit, fmt::format("{} letters exceed the enumeration limit {}", letters, trunc.edge_limit));
  if (K > trunc.length_limit)
    fail(ErrorKind::resource_limit, fmt::format("word length {} exceeds the limit {}", K, trunc.length_limit));
}

// Depth-first over all nonempty words of length <= K. visit(word, h(word)).
template <class Visit>
void for_each_word(const Alphabet& a, std::size_t K, Visit&& visit) {
  if (K == 0 || a.ops.empty()) return;
  Word w;
  std::vector<Matrix> products(K);
  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    for (std::size_t i = 0; i < a.ops.size(); ++i) {
      products[depth] = depth == 0 ? a.ops[i] : Matrix(products[depth - 1] * a.ops[i]);
      w.push_back(a.edges[i]);
      visit(static_cast<const Word&>(w), static_cast<const Matrix&>(products[depth]));
      if (depth + 1 < K) self(self, depth + 1);
      w.pop_back();
    }
  };
  recurse(recurse, 0);
}

bool contains_all(const Word& w, const EdgeSet& required) {
  for (EdgeId e : required)
    if (std::find(w.begin(), w.end(), e) == w.end()) return false;
  return true;
}

EdgeSet all_edges(const InteractionGraph& g) {
  EdgeSet es(g.edge_count());
  std::iota(es.begin(), es.end(), EdgeId{0});
  return es;
}

struct SplitSeries {
  Matrix in_class;
  Matrix out_class;  // includes the empty word
  double tail = 0.0;
};

SplitSeries split_series(const LocalHamiltonian& h, double beta, const EdgeSet& f, std::size_t L,
                         const SeriesTruncation& trunc) {
  const InteractionGraph& g = h.graph();
  for (EdgeId e : f)
    if (e >= g.edge_count()) fail(ErrorKind::invalid_argument, "F contains an edge outside the graph");
  const std::size_t K = trunc.max_word_length;
  check_budget(g.edge_count(), K, trunc);
  const Alphabet a = make_alphabet(h, all_edges(g));
  const Eigen::Index dim = full_dim(g);
  const auto coeff = series_coefficients(beta, K);

  SplitSeries out;
  out.in_class = Matrix::Zero(dim, dim);
  out.out_class = Matrix::Identity(dim, dim);
  for_each_word(a, K, [&](const Word& w, const Matrix& p) {
    if (word_in_class(g, w, f, L, trunc.counting)) out.in_class += coeff[w.size()] * p;
    else out.out_class += coeff[w.size()] * p;
  });
  out.tail = series_tail_bound(beta, h.local_strength(), a.edges.size(), K);
  return out;
}

}  // namespace

std::size_t Cluster::distinct_size() const { return std::set<EdgeId>(letters.begin(), letters.end()).size(); }

ClusterDecomposition maximal_clusters(const InteractionGraph& g, const Word& w) {
  for (EdgeId e : w)
    if (e >= g.edge_count()) fail(ErrorKind::invalid_argument, "word letter outside the graph");
  UnionFind uf(w.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j)
      if (edges_overlap(g, w[i], w[j])) uf.unite(i, j);

  ClusterDecomposition out;
  std::vector<std::size_t> slot(w.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::size_t root = uf.find(i);
    if (slot[root] == static_cast<std::size_t>(-1)) {
      slot[root] = out.clusters.size();
      out.clusters.emplace_back();
    }
    Cluster& c = out.clusters[slot[root]];
    c.positions.push_back(i);
    c.letters.push_back(w[i]);
  }
  return out;
}

bool word_in_class(const InteractionGraph& g, const Word& w, const EdgeSet& f, std::size_t L, ClusterSize counting) {
  for (const Cluster& c : maximal_clusters(g, w).clusters) {
    const std::size_t size = counting == ClusterSize::multiplicity ? c.size() : c.distinct_size();
    if (size < L) continue;
    for (EdgeId e : c.letters)
      if (std::binary_search(f.begin(), f.end(), e)) return true;
  }
  return false;
}

Matrix word_operator(const LocalHamiltonian& h, const Word& w) {
  const InteractionGraph& g = h.graph();
  const Eigen::Index dim = full_dim(g);
  Matrix out = Matrix::Identity(dim, dim);
  for (EdgeId e : w) {
    if (e >= g.edge_count()) fail(ErrorKind::invalid_argument, "word letter outside the graph");
    out = out * embed(h.term(e), g).matrix();
  }
  return out;
}

double series_tail_bound(double beta, double J, std::size_t edge_count, std::size_t max_word_length) {
  const double x = std::abs(beta) * J * static_cast<double>(edge_count);
  const double k1 = static_cast<double>(max_word_length + 1);
  return std::exp(k1 * std::log(x) - std::lgamma(k1 + 1.0) + x);
}

TruncatedSeries omega_truncated(const LocalHamiltonian& h, double beta, const EdgeSet& f, std::size_t L,
                                const SeriesTruncation& trunc) {
  SplitSeries s = split_series(h, beta, f, L, trunc);
  return {std::move(s.in_class), s.tail};
}

TruncatedSeries cluster_proxy_state(const LocalHamiltonian& h, double beta, std::size_t L,
                                    const SeriesTruncation& trunc) {
  SplitSeries s = split_series(h, beta, all_edges(h.graph()), L, trunc);
  const Spectrum spec = hermitian_spectrum(assemble(h));
  const RealVector exponent = -beta * spec.eigenvalues;
  const double shift = exponent.maxCoeff();
  const double z = std::exp(shift) * (exponent.array() - shift).exp().sum();
  return {s.out_class / z, s.tail / z};
}

TruncatedSeries eta_truncated(const LocalHamiltonian& h, const EdgeSet& animal, double beta,
                              const SeriesTruncation& trunc) {
  const InteractionGraph& g = h.graph();
  for (EdgeId e : animal)
    if (e >= g.edge_count()) fail(ErrorKind::invalid_argument, "animal edge outside the graph");
  const std::size_t K = trunc.max_word_length;
  check_budget(animal.size(), K, trunc);
  const Eigen::Index dim = full_dim(g);
  TruncatedSeries out{Matrix::Zero(dim, dim), series_tail_bound(beta, h.local_strength(), animal.size(), K)};
  const Alphabet a = make_alphabet(h, animal);
  // A letter without a term makes every covering word vanish.
  if (a.edges.size() != animal.size() || animal.empty()) return out;
  const auto coeff = series_coefficients(beta, K);
  for_each_word(a, K, [&](const Word& w, const Matrix& p) {
    if (w.size() >= animal.size() && contains_all(w, animal)) out.value += coeff[w.size()] * p;
  });
  return out;
}

bool LemmaReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.pass; });
}

double LemmaReport::max_violation() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& c : checks) v = std::max(v, c.violation);
  return v;
}

LemmaCheck check_alternating_binomial(std::uint64_t seed, std::size_t max_k, Eigen::Index dim, bool zero_sequence) {
  if (max_k < 1) fail(ErrorKind::invalid_argument, "max_k must be at least 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Matrix> b(max_k + 1, Matrix::Zero(dim, dim));
  if (!zero_sequence)
    for (std::size_t k = 1; k <= max_k; ++k)
      for (Eigen::Index i = 0; i < dim * dim; ++i) b[k].data()[i] = cplx(normal(rng), normal(rng));

  double worst = 0.0;
  for (std::size_t K = 1; K <= max_k; ++K) {
    Matrix a_k = Matrix::Zero(dim, dim);
    for (std::size_t k = 1; k <= K; ++k) a_k += b[k];
    Matrix b_k = Matrix::Zero(dim, dim);
    for (std::size_t m = 1; m <= K; ++m) {
      const double sign = m % 2 == 0 ? 1.0 : -1.0;
      double binom = 1.0;  // C(m, m)
      for (std::size_t k = m; k <= K; ++k) {
        b_k -= sign * binom * b[k];
        binom = binom * static_cast<double>(k + 1) / static_cast<double>(k + 1 - m);
      }
    }
    worst = std::max(worst, (a_k - b_k).norm() / std::max(1.0, a_k.norm()));
  }
  const double tol = 1e-12;
  return {"alternating_binomial", worst <= tol, worst - tol,
          fmt::format("max relative |A_K - B_K| = {:.3e} for K <= {}", worst, max_k)};
}

LemmaCheck check_eta_series(double x, std::size_t max_letters, std::size_t max_word_length) {
  x = std::abs(x);
  double worst = -std::numeric_limits<double>::infinity();
  std::string detail;
  for (std::size_t n = 1; n <= max_letters; ++n) {
    if (std::pow(static_cast<double>(n), static_cast<double>(max_word_length)) > 1e8)
      fail(ErrorKind::resource_limit, "word enumeration too large");
    // count[l] = number of words of length l over n letters using every letter
    std::vector<double> count(max_word_length + 1, 0.0);
    std::vector<std::size_t> uses(n, 0);
    std::size_t covered = 0;
    auto recurse = [&](auto&& self, std::size_t depth) -> void {
      for (std::size_t i = 0; i < n; ++i) {
        if (uses[i]++ == 0) ++covered;
        if (covered == n) count[depth + 1] += 1.0;
        if (depth + 1 < max_word_length) self(self, depth + 1);
        if (--uses[i] == 0) --covered;
      }
    };
    if (max_word_length > 0) recurse(recurse, 0);

    double partial = 0.0;
    double term = 1.0;
    for (std::size_t l = 1; l <= max_word_length; ++l) {
      term *= x / static_cast<double>(l);
      partial += count[l] * term;
    }
    const double closed = std::pow(std::expm1(x), static_cast<double>(n));
    const double tail = series_tail_bound(x, 1.0, n, max_word_length);
    const double slack = 1e-14 * std::max(closed, 1e-300);
    const double v = std::max(partial - closed - slack, closed - partial - tail - slack);
    worst = std::max(worst, v);
    detail += fmt::format("|G|={}: partial={:.15g} closed={:.15g} tail={:.3e}; ", n, partial, closed, tail);
  }
  return {"eta_series", worst <= 0.0, worst, detail};
}

LemmaCheck check_rho_factorization(const LocalHamiltonian& h, double beta, const EdgeSet& animal,
                                   const SeriesTruncation& trunc) {
  const InteractionGraph& g = h.graph();
  if (animal.empty()) fail(ErrorKind::invalid_argument, "G must be nonempty");
  const std::size_t K = trunc.max_word_length;
  const EdgeExtension ext = edge_extension_and_boundary(g, animal);
  const EdgeSet outside = complement(g, ext.extension);
  const EdgeSet alphabet_edges = complement(g, ext.boundary);
  check_budget(alphabet_edges.size(), K, trunc);

  // Product form.
  const Spectrum outer = hermitian_spectrum(assemble_edges(h, outside));
  Matrix product = from_eigen(outer, (-beta * outer.eigenvalues).array().exp());
  const double a = std::abs(beta) * h.local_strength();
  double with_tails = 1.0;
  double without_tails = 1.0;
  for (const EdgeSet& component : connected_components(g, animal)) {
    const TruncatedSeries eta = eta_truncated(h, component, beta, trunc);
    product = product * eta.value;
    const double n = std::pow(std::expm1(a), static_cast<double>(component.size()));
    with_tails *= n + eta.tail_bound;
    without_tails *= n;
  }

  // Direct series over words avoiding the boundary and containing all of G.
  const Alphabet alphabet = make_alphabet(h, alphabet_edges);
  const Eigen::Index dim = product.rows();
  Matrix direct = Matrix::Zero(dim, dim);
  const auto coeff = series_coefficients(beta, K);
  for_each_word(alphabet, K, [&](const Word& w, const Matrix& p) {
    if (w.size() >= animal.size() && contains_all(w, animal)) direct += coeff[w.size()] * p;
  });

  const double direct_tail = series_tail_bound(beta, h.local_strength(), alphabet.edges.size(), K);
  const double outer_norm = std::exp(a * static_cast<double>(outside.size()));
  const double diff = schatten_norm(product - direct, schatten_infinity);
  const double tol = direct_tail + outer_norm * (with_tails - without_tails) + 1e-12 * std::max(1.0, direct.norm());
  std::string g_text;
  for (EdgeId e : animal) g_text += fmt::format("{}{}", g_text.empty() ? "" : ",", e);
  return {"rho_factorization", diff <= tol, diff - tol,
          fmt::format("G={{{}}}: |product - direct| = {:.3e}, allowance {:.3e}", g_text, diff, tol)};
}

LemmaCheck check_mfold_animals(const InteractionGraph& g, const EdgeSet& f, std::size_t L, double y,
                               std::size_t max_m) {
  const std::size_t n = g.edge_count();
  if (n > 20) fail(ErrorKind::resource_limit, "exhaustive animal enumeration needs at most 20 edges");
  if (!(y >= 0.0 && y < 1.0)) fail(ErrorKind::invalid_argument, "y must lie in [0, 1)");

  // sums[m] = sum of y^|G| over m-fold animals
  std::vector<double> sums(max_m + 1, 0.0);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    EdgeSet set;
    for (std::size_t e = 0; e < n; ++e)
      if (mask >> e & 1U) set.push_back(e);
    const auto components = connected_components(g, set);
    if (components.size() > max_m) continue;
    bool ok = true;
    for (const EdgeSet& c : components) {
      const bool touches_f =
          std::any_of(c.begin(), c.end(), [&](EdgeId e) { return std::binary_search(f.begin(), f.end(), e); });
      if (c.size() < L || !touches_f) {
        ok = false;
        break;
      }
    }
    if (ok) sums[components.size()] += std::pow(y, static_cast<double>(set.size()));
  }

  double worst = -std::numeric_limits<double>::infinity();
  std::string detail;
  double factorial = 1.0;
  for (std::size_t m = 1; m <= max_m; ++m) {
    factorial *= static_cast<double>(m);
    const double rhs = std::pow(sums[1], static_cast<double>(m)) / factorial;
    worst = std::max(worst, sums[m] - rhs * (1.0 + 1e-14));
    detail += fmt::format("m={}: lhs={:.12g} rhs={:.12g}; ", m, sums[m], rhs);
  }
  return {"mfold_animals", worst <= 0.0, worst, fmt::format("y={}: {}", y, detail)};
}

LemmaReport lemma_suite(const LocalHamiltonian& h, double beta, const SeriesTruncation& trunc, std::uint64_t seed) {
  const InteractionGraph& g = h.graph();
  check_budget(g.edge_count(), trunc.max_word_length, trunc);
  LemmaReport report;
  report.checks.push_back(check_alternating_binomial(seed, 8));
  report.checks.push_back(
      check_eta_series(std::abs(beta) * h.local_strength(), std::min<std::size_t>(3, trunc.edge_limit), trunc.max_word_length));

  LemmaCheck rho{"rho_factorization", true, -std::numeric_limits<double>::infinity(), ""};
  for (EdgeId e1 = 0; e1 < g.edge_count(); ++e1) {
    for (EdgeId e2 = e1; e2 < g.edge_count(); ++e2) {
      const EdgeSet animal = e1 == e2 ? EdgeSet{e1} : EdgeSet{e1, e2};
      const LemmaCheck c = check_rho_factorization(h, beta, animal, trunc);
      rho.pass = rho.pass && c.pass;
      if (c.violation > rho.violation) {
        rho.violation = c.violation;
        rho.detail = "worst " + c.detail;
      }
    }
  }
  report.checks.push_back(rho);

  LemmaCheck mfold{"mfold_animals", true, -std::numeric_limits<double>::infinity(), ""};
  for (double y : {0.1, 0.3}) {
    const LemmaCheck c = check_mfold_animals(g, all_edges(g), 1, y, 3);
    mfold.pass = mfold.pass && c.pass;
    mfold.violation = std::max(mfold.violation, c.violation);
    mfold.detail += c.detail;
  }
  report.checks.push_back(mfold);
  return report;
}

}  // namespace thermaloc
