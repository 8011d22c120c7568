#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thermaloc/hamiltonian.hpp"
#include "thermaloc/lattice.hpp"
#include "thermaloc/opalg.hpp"

namespace thermaloc {

/// Finite sequence of edges; repetition allowed, order significant.
using Word = std::vector<EdgeId>;

struct Cluster {
  std::vector<std::size_t> positions;  // ascending positions in the word
  Word letters;                        // letters at those positions, in word order
  std::size_t size() const noexcept { return letters.size(); }
  std::size_t distinct_size() const;
};

/// Maximal clusters of a word, ordered by first occurrence.
struct ClusterDecomposition {
  std::vector<Cluster> clusters;
};

/// How a cluster's size is measured: with letter multiplicity (default) or
/// as the number of distinct edges.
enum class ClusterSize { multiplicity, distinct };

/// Connected components of the letter occurrences under edge overlap.
/// Throws invalid_argument for letters outside the graph.
ClusterDecomposition maximal_clusters(const InteractionGraph& g, const Word& w);

/// True iff some maximal cluster contains a letter of F and has size >= L.
bool word_in_class(const InteractionGraph& g, const Word& w, const EdgeSet& f, std::size_t L,
                   ClusterSize counting = ClusterSize::multiplicity);

/// h(w) = h_{w_1} h_{w_2} ... on the full space; identity for the empty word.
Matrix word_operator(const LocalHamiltonian& h, const Word& w);

struct SeriesTruncation {
  std::size_t max_word_length = 10;
  ClusterSize counting = ClusterSize::multiplicity;
  std::size_t edge_limit = 5;
  std::size_t length_limit = 12;
};

/// (x |E|)^(K+1) e^(x |E|) / (K+1)! with x = |beta| J: operator-norm bound on
/// the sum over all words longer than K.
double series_tail_bound(double beta, double J, std::size_t edge_count, std::size_t max_word_length);

struct TruncatedSeries {
  Matrix value;
  double tail_bound = 0.0;  // operator norm
};

/// Omega = sum over words in the class (F, L) of (-beta)^|w| / |w|! h(w), up
/// to length K. Throws resource_limit beyond the truncation's edge or length
/// limits.
TruncatedSeries omega_truncated(const LocalHamiltonian& h, double beta, const EdgeSet& f, std::size_t L,
                                const SeriesTruncation& trunc);

/// rho(beta, L) = (1/Z) sum over words outside the class (F = E, L), up to
/// length K. The tail bound is divided by Z as well.
TruncatedSeries cluster_proxy_state(const LocalHamiltonian& h, double beta, std::size_t L,
                                    const SeriesTruncation& trunc);

/// eta(G) = sum over words on the letters of G that contain every letter of G.
TruncatedSeries eta_truncated(const LocalHamiltonian& h, const EdgeSet& animal, double beta,
                              const SeriesTruncation& trunc);

struct LemmaCheck {
  std::string name;
  bool pass = false;
  /// measured - allowed; the check passes iff this is <= 0.
  double violation = 0.0;
  std::string detail;
};

struct LemmaReport {
  std::vector<LemmaCheck> checks;
  bool pass() const;
  double max_violation() const;
};

/// A_K = sum_k b_k versus B_K = -sum_m (-1)^m sum_{k>=m} C(k,m) b_k for K up
/// to max_k, on seeded random complex dim x dim matrices. Tolerance 1e-12
/// relative.
LemmaCheck check_alternating_binomial(std::uint64_t seed, std::size_t max_k, Eigen::Index dim = 3,
                                      bool zero_sequence = false);

/// Enumerated partial sums of sum_{w in G*, G in w} x^|w| / |w|! against
/// (e^x - 1)^|G| for |G| = 1..max_letters, within the scalar tail.
LemmaCheck check_eta_series(double x, std::size_t max_letters, std::size_t max_word_length);

/// rho(G) = exp(-beta H on edges outside the extension of G) prod_j eta(G_j)
/// against the direct series over words avoiding the boundary of G.
LemmaCheck check_rho_factorization(const LocalHamiltonian& h, double beta, const EdgeSet& animal,
                                   const SeriesTruncation& trunc);

/// sum over m-fold animals of y^|G| <= (1/m!) (sum over animals of y^|G|)^m,
/// for animals of size >= L touching F, by exhaustive subset enumeration.
LemmaCheck check_mfold_animals(const InteractionGraph& g, const EdgeSet& f, std::size_t L, double y,
                               std::size_t max_m);

/// The four checks above on the given instance: (a) K = 8, (b) |G| <= 3 with
/// x = |beta| J, (c) every edge set of size 1 or 2, (d) F = E, L = 1,
/// y in {0.1, 0.3}, m <= 3.
LemmaReport lemma_suite(const LocalHamiltonian& h, double beta, const SeriesTruncation& trunc,
                        std::uint64_t seed = 1);

}  // namespace thermaloc
