#pragma once

#include <cstddef>
#include <optional>

#include "thermaloc/lattice.hpp"

namespace thermaloc::bounds {

struct BoundParams {
  double alpha;
  double J;
  double beta;
};

/// alpha e^|x| (e^|x| - 1)
double alpha_y(double x, double alpha);

/// ln[(1 + sqrt(1 + 4/alpha)) / 2] / (2J). Throws invalid_argument for
/// J <= 0 or alpha <= 0.
double beta_star(double alpha, double J);

/// 1 / |ln alpha_y(2|beta|J)|. Throws divergent_length when |beta| is within
/// 1e-12 (relative) of beta*.
double xi(double beta, double alpha, double J);

/// Minimum distance for the clustering bound. Throws out_of_regime for
/// |beta| >= beta* and invalid_argument for a < 1.
double l_zero(double beta, double a, double alpha, double J);

/// Clustering bound for operators whose supports have `a` boundary edges
/// and are `dist` apart. nullopt when dist < l_zero (bound inapplicable).
std::optional<double> clustering_rhs(double beta, double a, double dist, double norm_a, double norm_b, double alpha,
                                     double J);

/// 2 (exp(|dA| y^L / (1 - y)) - 1) with y = alpha_y(2 beta J), per unit
/// operator norms. Throws out_of_regime unless y < 1.
double clustering_rhs_tight(double beta, double boundary_a, double L, double alpha, double J);
double clustering_rhs_tight_from_alpha_y(double boundary_a, double L, double y);

/// Locality bound for S inside B; nullopt when dist < l_zero(beta, |dS|).
std::optional<double> locality_rhs(double beta, double boundary_s, double boundary_b, double dist, double alpha,
                                   double J);

/// |beta| J |dB| clustering_rhs_tight(beta, |dS|, dist): the locality bound
/// obtained from the intermediate covariance bound without linearising.
double locality_rhs_tight(double beta, double boundary_s, double boundary_b, double dist, double alpha, double J);

/// exp(|E| y^L / (1 - y)) - 1 with y = alpha_y(beta J). Throws out_of_regime
/// unless y < 1.
double mpo_error_bound(double edge_count, double L, double beta, double J, double alpha);
double mpo_error_bound_from_alpha_y(double edge_count, double L, double y);

/// Largest number of vertices within distance < L of a single vertex.
/// Throws invalid_argument for L < 1.
std::size_t n_of_l(const InteractionGraph& g, std::size_t L);

/// 2M (ln(C n / eps) / ln(1 / y))^D with y = alpha_y(beta J); the log_d of
/// the bond-dimension bound. M and C are supplied by the caller.
double tensor_size_bound(double n, double eps, double beta, double J, double alpha, int D, double M, double C);
double tensor_size_bound_from_alpha_y(double n, double eps, double y, int D, double M, double C);

/// Unwraps an optional bound; throws bound_inapplicable when empty.
double require_applicable(const std::optional<double>& bound);

}  // namespace thermaloc::bounds
