#include "thermaloc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <string>

#include "thermaloc/error.hpp"

namespace thermaloc::bounds {

namespace {

// e^{-dist/xi}, with xi = 0 at beta = 0 read as the limit.
double decay(double dist, double x) {
  if (x == 0.0) return dist > 0.0 ? 0.0 : 1.0;
  return std::exp(-dist / x);
}

// 1 - e^{-1/xi} = 1 - alpha_y(2|beta|J)
double gap(double beta, double alpha, double J) { return 1.0 - alpha_y(2.0 * std::abs(beta) * J, alpha); }

void require_below_critical(double beta, double alpha, double J) {
  if (!(std::abs(beta) < beta_star(alpha, J)))
    fail(ErrorKind::out_of_regime, "|beta| = " + std::to_string(std::abs(beta)) + " is not below beta*");
}

void require_subcritical_y(double y) {
  if (!(y >= 0.0 && y < 1.0)) fail(ErrorKind::out_of_regime, "alpha_y = " + std::to_string(y) + " is not below 1");
}

}  // namespace

double alpha_y(double x, double alpha) {
  const double ax = std::abs(x);
  return alpha * std::exp(ax) * std::expm1(ax);
}

double beta_star(double alpha, double J) {
  if (!(J > 0.0)) fail(ErrorKind::invalid_argument, "J must be positive");
  if (!(alpha > 0.0)) fail(ErrorKind::invalid_argument, "alpha must be positive");
  return std::log((1.0 + std::sqrt(1.0 + 4.0 / alpha)) / 2.0) / (2.0 * J);
}

double xi(double beta, double alpha, double J) {
  const double bs = beta_star(alpha, J);
  if (std::abs(std::abs(beta) - bs) <= 1e-12 * bs) fail(ErrorKind::divergent_length, "correlation length diverges at beta*");
  return 1.0 / std::abs(std::log(alpha_y(2.0 * std::abs(beta) * J, alpha)));
}

double l_zero(double beta, double a, double alpha, double J) {
  require_below_critical(beta, alpha, J);
  if (!(a >= 1.0)) fail(ErrorKind::invalid_argument, "boundary size must be at least 1");
  return xi(beta, alpha, J) * std::abs(std::log(std::log(3.0) * gap(beta, alpha, J) / a));
}

std::optional<double> clustering_rhs(double beta, double a, double dist, double norm_a, double norm_b, double alpha,
                                     double J) {
  if (dist < l_zero(beta, a, alpha, J)) return std::nullopt;
  const double x = xi(beta, alpha, J);
  return 4.0 * a * norm_a * norm_b / (std::log(3.0) * gap(beta, alpha, J)) * decay(dist, x);
}

double clustering_rhs_tight_from_alpha_y(double boundary_a, double L, double y) {
  require_subcritical_y(y);
  return 2.0 * std::expm1(boundary_a * std::pow(y, L) / (1.0 - y));
}

double clustering_rhs_tight(double beta, double boundary_a, double L, double alpha, double J) {
  return clustering_rhs_tight_from_alpha_y(boundary_a, L, alpha_y(2.0 * beta * J, alpha));
}

std::optional<double> locality_rhs(double beta, double boundary_s, double boundary_b, double dist, double alpha,
                                   double J) {
  if (dist < l_zero(beta, boundary_s, alpha, J)) return std::nullopt;
  if (beta == 0.0) return 0.0;
  const double v = 4.0 * boundary_s * boundary_b / std::log(3.0);
  return v * std::abs(beta) * J / gap(beta, alpha, J) * decay(dist, xi(beta, alpha, J));
}

double locality_rhs_tight(double beta, double boundary_s, double boundary_b, double dist, double alpha, double J) {
  return std::abs(beta) * J * boundary_b * clustering_rhs_tight(beta, boundary_s, dist, alpha, J);
}

double mpo_error_bound_from_alpha_y(double edge_count, double L, double y) {
  require_subcritical_y(y);
  return std::expm1(edge_count * std::pow(y, L) / (1.0 - y));
}

double mpo_error_bound(double edge_count, double L, double beta, double J, double alpha) {
  return mpo_error_bound_from_alpha_y(edge_count, L, alpha_y(beta * J, alpha));
}

std::size_t n_of_l(const InteractionGraph& g, std::size_t L) {
  if (L < 1) fail(ErrorKind::invalid_argument, "L must be at least 1");
  std::size_t best = 0;
  for (Vertex root : g.vertices()) {
    std::map<Vertex, std::size_t> depth{{root, 0}};
    std::deque<Vertex> queue{root};
    while (!queue.empty()) {
      const Vertex v = queue.front();
      queue.pop_front();
      const std::size_t d = depth[v];
      if (d + 1 >= L) continue;
      for (EdgeId e : g.incident(v))
        for (Vertex w : g.edge(e))
          if (depth.emplace(w, d + 1).second) queue.push_back(w);
    }
    best = std::max(best, depth.size());
  }
  return best;
}

double tensor_size_bound_from_alpha_y(double n, double eps, double y, int D, double M, double C) {
  require_subcritical_y(y);
  if (!(n > 0.0 && eps > 0.0 && C > 0.0 && M > 0.0) || D < 1)
    fail(ErrorKind::invalid_argument, "tensor size bound needs positive n, eps, C, M and D >= 1");
  return 2.0 * M * std::pow(std::log(C * n / eps) / std::log(1.0 / y), D);
}

double tensor_size_bound(double n, double eps, double beta, double J, double alpha, int D, double M, double C) {
  return tensor_size_bound_from_alpha_y(n, eps, alpha_y(beta * J, alpha), D, M, C);
}

double require_applicable(const std::optional<double>& bound) {
  if (!bound) fail(ErrorKind::bound_inapplicable, "distance is below the minimum distance L0");
  return *bound;
}

}  // namespace thermaloc::bounds
