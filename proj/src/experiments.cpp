#include "thermaloc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "thermaloc/bounds.hpp"
#include "thermaloc/cluster.hpp"
#include "thermaloc/error.hpp"
#include "thermaloc/random.hpp"
#include "thermaloc/thermal.hpp"

namespace thermaloc {

namespace {

using json = nlohmann::json;

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string join_vertices(const VertexSet& vs, const char* sep = "-") {
  std::string out;
  for (Vertex v : vs) out += (out.empty() ? "" : sep) + std::to_string(v);
  return out;
}

struct Outcome {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  bool pass = true;
  double max_violation = -std::numeric_limits<double>::infinity();
  std::size_t checked = 0;
  json extra = json::object();

  // Returns whether this check passed.
  bool record(double violation, double tolerance = 0.0) {
    ++checked;
    max_violation = std::max(max_violation, violation);
    const bool ok = violation <= tolerance;
    pass = pass && ok;
    return ok;
  }
};

std::uint64_t seed_of(const Config& cfg, const RunOptions& opts) {
  if (opts.seed) return *opts.seed;
  return static_cast<std::uint64_t>(cfg.get_int("seed", 1));
}

int s_order_of(const Config& cfg, const RunOptions& opts, const std::string& key, int fallback) {
  const int order = opts.quad_order ? *opts.quad_order : static_cast<int>(cfg.get_int(key, fallback));
  if (order < 2) fail(ErrorKind::config, "quadrature order must be at least 2");
  return order;
}

std::size_t trunc_k_of(const Config& cfg, const RunOptions& opts, const std::string& key, int fallback) {
  const long long k = opts.trunc_k ? *opts.trunc_k : cfg.get_int(key, fallback);
  if (k < 1) fail(ErrorKind::config, "truncation order must be positive");
  return static_cast<std::size_t>(k);
}

// `<prefix>.betas` (absolute) or `<prefix>.beta_fractions` (units of beta*).
std::vector<double> betas_of(const Config& cfg, const std::string& prefix, double beta_star) {
  if (cfg.has(prefix + ".betas")) return cfg.get_doubles(prefix + ".betas");
  if (cfg.has(prefix + ".beta_fractions")) {
    std::vector<double> out;
    for (double f : cfg.get_doubles(prefix + ".beta_fractions")) out.push_back(f * beta_star);
    return out;
  }
  fail(ErrorKind::config, "need " + prefix + ".betas or " + prefix + ".beta_fractions");
}

std::string system_of(const Config& cfg, const RunOptions& opts, const std::string& key) {
  const std::string sys = opts.system ? *opts.system : cfg.get_string(key, "spin");
  if (sys != "spin" && sys != "fermion") fail(ErrorKind::config, "system must be 'spin' or 'fermion', got '" + sys + "'");
  return sys;
}

// ---------------------------------------------------------------------------

Outcome verify_perturbation(const Config& cfg, const RunOptions& opts) {
  const auto qubits = cfg.get_int("perturbation.qubits", 3);
  const auto instances = cfg.get_int("perturbation.instances", 20);
  const std::vector<double> betas =
      cfg.has("perturbation.betas") ? cfg.get_doubles("perturbation.betas") : std::vector<double>{0.5, 1.0, 2.0};
  const int s_order = s_order_of(cfg, opts, "perturbation.s_order", 64);
  const double tol = cfg.get_double("perturbation.tolerance", 1e-8);
  const bool identical = cfg.get_bool("perturbation.identical", false);
  if (qubits < 1 || qubits > 10) fail(ErrorKind::config, "perturbation.qubits must lie in 1..10");
  if (instances < 1) fail(ErrorKind::config, "perturbation.instances must be positive");

  Outcome out;
  out.header = {"instance", "beta", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "tolerance", "pass"};
  std::mt19937_64 rng(seed_of(cfg, opts));
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  for (long long i = 0; i < instances; ++i) {
    const Matrix h0 = random_hermitian(dim, rng);
    const Matrix h = identical ? h0 : Matrix(random_hermitian(dim, rng));
    const Matrix a = random_hermitian(dim, rng);
    for (double beta : betas) {
      const FormulaCheck c = perturbation_check(h0, h, beta, a, s_order);
      const bool ok = out.record(c.residual - tol);
      out.rows.push_back({std::to_string(i), num(beta), num(c.lhs.real()), num(c.lhs.imag()), num(c.rhs.real()),
                          num(c.rhs.imag()), num(c.residual), num(tol), ok ? "true" : "false"});
    }
  }
  out.extra["s_order"] = s_order;
  return out;
}

Outcome verify_truncation(const Config& cfg, const RunOptions& opts) {
  const std::string system = system_of(cfg, opts, "truncation.system");
  const std::vector<double> betas = cfg.get_doubles("truncation.betas");
  const VertexSet region = cfg.get_vertices("truncation.region");
  const std::vector<std::string> observables = cfg.get_strings("truncation.observables");
  const int s_order = s_order_of(cfg, opts, "truncation.s_order", 64);
  const double tol = cfg.get_double("truncation.tolerance", 1e-8);

  Outcome out;
  out.header = {"system", "observable", "beta", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "tolerance", "pass"};
  auto add = [&](const std::string& obs, double beta, const FormulaCheck& c) {
    const bool ok = out.record(c.residual - tol);
    out.rows.push_back({system, obs, num(beta), num(c.lhs.real()), num(c.lhs.imag()), num(c.rhs.real()),
                        num(c.rhs.imag()), num(c.residual), num(tol), ok ? "true" : "false"});
  };
  if (system == "spin") {
    const InteractionGraph g = graph_from_config(cfg);
    const LocalHamiltonian h = spin_model_from_config(cfg, g);
    for (const auto& obs : observables) {
      const DenseOperator a = parse_pauli_string(obs);
      for (double beta : betas) add(obs, beta, truncation_check(h, region, beta, a, s_order));
    }
  } else {
    const FermionicHamiltonian h = fermion_model_from_config(cfg);
    for (const auto& obs : observables) {
      VertexSet support;
      const Matrix a = parse_fermion_observable(h.system(), obs, support);
      for (double beta : betas) add(obs, beta, truncation_check(h, region, beta, a, support, s_order));
    }
  }
  out.extra["s_order"] = s_order;
  out.extra["system"] = system;
  return out;
}

Outcome clustering_scan(const Config& cfg, const RunOptions&) {
  const InteractionGraph g = graph_from_config(cfg);
  const LocalHamiltonian h = spin_model_from_config(cfg, g);
  const double alpha = growth_from_config(cfg);
  const double J = h.local_strength();
  const double bstar = bounds::beta_star(alpha, J);
  const std::vector<double> betas = betas_of(cfg, "scan", bstar);
  const auto tau_points = cfg.get_int("scan.tau_points", 21);
  const double tol = cfg.get_double("scan.tolerance", 1e-12);
  const std::vector<std::string> paulis =
      cfg.has("scan.paulis") ? cfg.get_strings("scan.paulis") : std::vector<std::string>{"X", "Y", "Z"};
  if (tau_points < 2) fail(ErrorKind::config, "scan.tau_points must be at least 2");

  std::map<std::string, Matrix> pauli_matrices{{"X", pauli::X()}, {"Y", pauli::Y()}, {"Z", pauli::Z()}};
  for (const auto& p : paulis)
    if (!pauli_matrices.count(p)) fail(ErrorKind::config, "unknown Pauli '" + p + "' in scan.paulis");

  const VertexSet& sites = g.vertices();
  const std::vector<int> dims = g.dims_of(sites);
  auto spectrum = std::make_shared<const Spectrum>(hermitian_spectrum(assemble(h)));
  const ThermalState basis = ThermalState::gibbs(spectrum, 0.0);

  // Eigenbasis single-site operators are temperature independent.
  std::vector<std::vector<Matrix>> ops(sites.size());
  std::vector<std::size_t> boundary(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (const auto& p : paulis)
      ops[i].push_back(basis.local_to_eigenbasis(DenseOperator::on_site(sites[i], pauli_matrices[p]), sites, dims));
    boundary[i] = boundary_edges(g, {sites[i]}).size();
  }

  Outcome out;
  out.header = {"beta", "tau", "site_a", "site_b", "dist", "cov_abs", "rhs", "rhs_tight", "l_zero", "applicable"};
  double tight_violation = -std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  for (double beta : betas) {
    const ThermalState state = ThermalState::gibbs(spectrum, beta);
    const bool in_regime = std::abs(beta) < bstar;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      for (std::size_t j = i + 1; j < sites.size(); ++j) {
        const double dist = static_cast<double>(vertex_set_distance(g, {sites[i]}, {sites[j]}));
        const double a = static_cast<double>(std::min(boundary[i], boundary[j]));
        std::optional<double> l0, rhs, tight;
        if (in_regime && a >= 1.0) {
          l0 = bounds::l_zero(beta, a, alpha, J);
          rhs = bounds::clustering_rhs(beta, a, dist, 1.0, 1.0, alpha, J);
          tight = bounds::clustering_rhs_tight(beta, a, dist, alpha, J);
        }
        std::vector<double> cov_abs(static_cast<std::size_t>(tau_points), 0.0);
        for (const Matrix& oa : ops[i])
          for (const Matrix& ob : ops[j]) {
            const CovarianceContraction c(state, oa, ob);
            for (long long k = 0; k < tau_points; ++k) {
              const double tau = static_cast<double>(k) / static_cast<double>(tau_points - 1);
              cov_abs[static_cast<std::size_t>(k)] = std::max(cov_abs[static_cast<std::size_t>(k)], std::abs(c.at(tau)));
            }
          }
        for (long long k = 0; k < tau_points; ++k) {
          const double tau = static_cast<double>(k) / static_cast<double>(tau_points - 1);
          const double cv = cov_abs[static_cast<std::size_t>(k)];
          if (rhs && !out.record(cv - *rhs, tol)) ++violations;
          if (tight) tight_violation = std::max(tight_violation, cv - *tight);
          out.rows.push_back({num(beta), num(tau), std::to_string(sites[i]), std::to_string(sites[j]), num(dist), num(cv),
                              rhs ? num(*rhs) : "inapplicable", tight ? num(*tight) : "inapplicable",
                              l0 ? num(*l0) : "inapplicable", rhs ? "true" : "false"});
        }
      }
    }
  }
  if (std::isfinite(tight_violation) && tight_violation > tol) out.pass = false;
  out.extra["tight_max_violation"] = std::isfinite(tight_violation) ? json(tight_violation) : json(nullptr);
  out.extra["violations"] = violations;
  out.extra["alpha"] = alpha;
  out.extra["J"] = J;
  out.extra["beta_star"] = bstar;
  return out;
}

Outcome locality_scan(const Config& cfg, const RunOptions& opts) {
  const std::string system = system_of(cfg, opts, "locality.system");
  const VertexSet s = cfg.get_vertices("locality.s");
  const VertexSet b = cfg.get_vertices("locality.b");
  const double alpha = growth_from_config(cfg);
  const double tol = cfg.get_double("locality.tolerance", 1e-12);

  std::optional<LocalHamiltonian> spin;
  std::optional<FermionicHamiltonian> fermion;
  if (system == "spin") spin = spin_model_from_config(cfg, graph_from_config(cfg));
  else fermion = fermion_model_from_config(cfg);
  const InteractionGraph& g = spin ? spin->graph() : fermion->graph();
  const double J = spin ? spin->local_strength() : fermion->local_strength();
  const double bstar = bounds::beta_star(alpha, J);
  const std::vector<double> betas = betas_of(cfg, "locality", bstar);

  const EdgeSet boundary_b = boundary_edges(g, b);
  const double bs = static_cast<double>(boundary_edges(g, s).size());
  const double bb = static_cast<double>(boundary_b.size());
  const std::optional<double> dist =
      boundary_b.empty() ? std::nullopt : std::optional<double>(static_cast<double>(edge_set_distance(g, s, boundary_b)));

  Outcome out;
  out.header = {"system", "beta", "dist", "boundary_s", "boundary_b", "gap", "rhs", "rhs_tight", "l_zero", "applicable", "pass"};
  for (double beta : betas) {
    const double gap = spin ? locality_gap(*spin, s, b, beta) : locality_gap(*fermion, s, b, beta);
    std::optional<double> l0, rhs, tight;
    if (!dist) {
      rhs = tight = 0.0;  // nothing is cut
    } else if (std::abs(beta) < bstar && bs >= 1.0) {
      l0 = bounds::l_zero(beta, bs, alpha, J);
      rhs = bounds::locality_rhs(beta, bs, bb, *dist, alpha, J);
      tight = bounds::locality_rhs_tight(beta, bs, bb, *dist, alpha, J);
    }
    bool ok = true;
    if (rhs) ok = out.record(gap - *rhs, tol) && ok;
    if (tight) ok = out.record(gap - *tight, tol) && ok;
    out.rows.push_back({system, num(beta), dist ? num(*dist) : "none", num(bs), num(bb), num(gap),
                        rhs ? num(*rhs) : "inapplicable", tight ? num(*tight) : "inapplicable",
                        l0 ? num(*l0) : "inapplicable", rhs ? "true" : "false", ok ? "true" : "false"});
  }
  out.extra["alpha"] = alpha;
  out.extra["J"] = J;
  out.extra["beta_star"] = bstar;
  return out;
}

Outcome cone_surface(const Config& cfg, const RunOptions&) {
  const double alpha = growth_from_config(cfg);
  const double J = cfg.get_double("cone.J", 1.0);
  const double bstar = bounds::beta_star(alpha, J);
  const std::vector<double> fractions = cfg.get_doubles("cone.beta_fractions");
  const auto l_min = cfg.get_int("cone.l_min", 1);
  const auto l_max = cfg.get_int("cone.l_max", 30);
  const double bs = cfg.get_double("cone.boundary_s", 4.0);
  if (l_min < 0 || l_max < l_min) fail(ErrorKind::config, "need 0 <= cone.l_min <= cone.l_max");

  Outcome out;
  out.header = {"beta_fraction", "beta", "L", "boundary_s", "boundary_b", "xi", "l_zero", "rhs", "rhs_tight", "applicable"};
  for (double f : fractions) {
    const double beta = f * bstar;
    const bool in_regime = std::abs(beta) < bstar;
    for (long long L = l_min; L <= l_max; ++L) {
      // Diamond B of radius L around one site of the square lattice.
      const double bb = 8.0 * static_cast<double>(L) + 4.0;
      std::optional<double> x, l0, rhs, tight;
      if (in_regime) {
        x = bounds::xi(beta, alpha, J);
        l0 = bounds::l_zero(beta, bs, alpha, J);
        rhs = bounds::locality_rhs(beta, bs, bb, static_cast<double>(L), alpha, J);
        tight = bounds::locality_rhs_tight(beta, bs, bb, static_cast<double>(L), alpha, J);
      }
      if (rhs) out.record(*tight - *rhs, 1e-12 * std::max(1.0, *rhs));
      out.rows.push_back({num(f), num(beta), std::to_string(L), num(bs), num(bb), x ? num(*x) : "inapplicable",
                          l0 ? num(*l0) : "inapplicable", rhs ? num(*rhs) : "inapplicable",
                          tight ? num(*tight) : "inapplicable", rhs ? "true" : "false"});
    }
  }
  out.extra["alpha"] = alpha;
  out.extra["beta_star"] = bstar;
  return out;
}

Outcome mpo_error(const Config& cfg, const RunOptions& opts) {
  const InteractionGraph g = graph_from_config(cfg);
  const LocalHamiltonian h = spin_model_from_config(cfg, g);
  const double alpha = growth_from_config(cfg);
  const double J = h.local_strength();
  const std::vector<double> betas = betas_of(cfg, "mpo", bounds::beta_star(alpha, J));
  std::vector<std::size_t> ls;
  for (double l : cfg.get_doubles("mpo.L")) {
    if (l < 1 || l != std::floor(l)) fail(ErrorKind::config, "mpo.L entries must be positive integers");
    ls.push_back(static_cast<std::size_t>(l));
  }
  SeriesTruncation trunc;
  trunc.max_word_length = trunc_k_of(cfg, opts, "mpo.trunc_k", 12);
  if (cfg.get_string("mpo.cluster_size", "multiplicity") == "distinct") trunc.counting = ClusterSize::distinct;

  const Matrix full = assemble(h).matrix();
  const double dim = static_cast<double>(full.rows());
  const double edges = static_cast<double>(g.edge_count());
  EdgeSet all(g.edge_count());
  for (EdgeId e = 0; e < all.size(); ++e) all[e] = e;

  Outcome out;
  out.header = {"beta", "L", "alpha_y", "trace_distance", "mpo_bound", "proxy_tail", "omega_ratio", "omega_bound",
                "omega_tail", "applicable", "pass"};
  for (double beta : betas) {
    const ThermalState state = ThermalState::gibbs(full, beta);
    const Matrix rho = state.density();
    const double z = std::exp(state.log_partition());
    const double y = bounds::alpha_y(beta * J, alpha);
    for (std::size_t L : ls) {
      const TruncatedSeries proxy = cluster_proxy_state(h, beta, L, trunc);
      const TruncatedSeries omega = omega_truncated(h, beta, all, L, trunc);
      const double distance = schatten_norm(rho - proxy.value, 1.0);
      const double omega_ratio = schatten_norm(omega.value, 1.0) / z;
      const double proxy_tail = dim * proxy.tail_bound;
      const double omega_tail = dim * omega.tail_bound / z;
      std::optional<double> bound;
      if (y < 1.0) bound = bounds::mpo_error_bound_from_alpha_y(edges, static_cast<double>(L), y);
      bool ok = true;
      if (bound) {
        ok = out.record(distance - (*bound + proxy_tail)) && ok;
        ok = out.record(omega_ratio - (*bound + omega_tail)) && ok;
      }
      out.rows.push_back({num(beta), std::to_string(L), num(y), num(distance), bound ? num(*bound) : "inapplicable",
                          num(proxy_tail), num(omega_ratio), bound ? num(*bound) : "inapplicable", num(omega_tail),
                          bound ? "true" : "false", ok ? "true" : "false"});
    }
  }
  out.extra["trunc_k"] = trunc.max_word_length;
  out.extra["alpha"] = alpha;
  out.extra["J"] = J;
  return out;
}

Outcome animals(const Config& cfg, const RunOptions&) {
  const InteractionGraph g = graph_from_config(cfg);
  const double alpha = growth_from_config(cfg);
  const auto m_max = cfg.get_int("animals.m_max", 8);
  if (m_max < 1) fail(ErrorKind::config, "animals.m_max must be positive");
  EdgeSet roots;
  const std::string spec = cfg.get_string("animals.roots", "all");
  if (spec == "all") {
    for (EdgeId e = 0; e < g.edge_count(); ++e) roots.push_back(e);
  } else {
    for (double r : cfg.get_doubles("animals.roots")) {
      if (r < 0 || r >= static_cast<double>(g.edge_count())) fail(ErrorKind::config, "animals.roots index out of range");
      roots.push_back(static_cast<EdgeId>(r));
    }
  }
  AnimalLimits limits;
  limits.m_max = static_cast<std::size_t>(std::max<long long>(m_max, 10));

  Outcome out;
  out.header = {"root", "root_vertices", "m", "count", "alpha_pow_m", "pass"};
  std::vector<std::size_t> sup(static_cast<std::size_t>(m_max) + 1, 0);
  for (EdgeId root : roots) {
    for (long long m = 1; m <= m_max; ++m) {
      const std::size_t count = count_animals(g, root, static_cast<std::size_t>(m), limits);
      sup[static_cast<std::size_t>(m)] = std::max(sup[static_cast<std::size_t>(m)], count);
      const double bound = std::pow(alpha, static_cast<double>(m));
      const bool ok = out.record(static_cast<double>(count) - bound);
      out.rows.push_back({std::to_string(root), join_vertices(g.edge(root)), std::to_string(m), std::to_string(count),
                          num(bound), ok ? "true" : "false"});
    }
  }
  out.extra["a_m"] = json(std::vector<std::size_t>(sup.begin() + 1, sup.end()));
  out.extra["alpha"] = alpha;
  return out;
}

Outcome bounds_table(const Config& cfg, const RunOptions&) {
  std::vector<double> alphas;
  if (cfg.has("bounds.alphas")) {
    for (const auto& s : cfg.get_strings("bounds.alphas")) alphas.push_back(parse_scaled_number(s));
  } else {
    alphas.push_back(growth_from_config(cfg));
  }
  const double J = cfg.get_double("bounds.J", 1.0);
  const std::vector<double> fractions = cfg.has("bounds.beta_fractions") ? cfg.get_doubles("bounds.beta_fractions")
                                                                         : std::vector<double>{0.25, 0.5, 0.75};
  const double a = cfg.get_double("bounds.boundary_a", 2.0);

  Outcome out;
  out.header = {"alpha", "J", "beta_star", "critical_temperature", "beta_fraction", "beta", "alpha_y_2beta", "xi", "l_zero"};
  for (double alpha : alphas) {
    const double bstar = bounds::beta_star(alpha, J);
    out.record(std::abs(bounds::alpha_y(2.0 * bstar * J, alpha) - 1.0), 1e-12);
    for (double f : fractions) {
      const double beta = f * bstar;
      const double y2 = bounds::alpha_y(2.0 * beta * J, alpha);
      std::optional<double> x, l0;
      if (std::abs(beta) < bstar) {
        x = bounds::xi(beta, alpha, J);
        l0 = bounds::l_zero(beta, a, alpha, J);
        out.record(std::abs(std::exp(-1.0 / *x) - y2), 1e-12);
      }
      out.rows.push_back({num(alpha), num(J), num(bstar), num(1.0 / (bstar * J)), num(f), num(beta), num(y2),
                          x ? num(*x) : "inapplicable", l0 ? num(*l0) : "inapplicable"});
    }
  }
  // Exact critical temperature of the 2D Ising model, for comparison only.
  out.extra["ising_2d_exact_critical_temperature"] = 2.0 / std::log(1.0 + std::numbers::sqrt2);
  return out;
}

Outcome lemma_suite_cmd(const Config& cfg, const RunOptions& opts) {
  const InteractionGraph g = graph_from_config(cfg);
  const LocalHamiltonian h = spin_model_from_config(cfg, g);
  const double beta = cfg.get_double("lemma.beta", 0.1);
  SeriesTruncation trunc;
  trunc.max_word_length = trunc_k_of(cfg, opts, "lemma.trunc_k", 8);
  const LemmaReport report = lemma_suite(h, beta, trunc, seed_of(cfg, opts));

  Outcome out;
  out.header = {"check", "pass", "violation", "detail"};
  for (const auto& c : report.checks) {
    out.record(c.violation);
    out.rows.push_back({c.name, c.pass ? "true" : "false", num(c.violation), c.detail});
  }
  out.extra["trunc_k"] = trunc.max_word_length;
  return out;
}

using Runner = std::function<Outcome(const Config&, const RunOptions&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table{
      {"verify-perturbation", verify_perturbation}, {"verify-truncation", verify_truncation},
      {"clustering-scan", clustering_scan},         {"locality-scan", locality_scan},
      {"cone-surface", cone_surface},               {"mpo-error", mpo_error},
      {"animals", animals},                         {"bounds-table", bounds_table},
      {"lemma-suite", lemma_suite_cmd},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"verify-perturbation", "verify-truncation", "clustering-scan",
                                              "locality-scan",       "cone-surface",      "mpo-error",
                                              "animals",             "bounds-table",      "lemma-suite"};
  return names;
}

ExperimentSummary run_experiment(const std::string& name, const Config& cfg, const RunOptions& opts) {
  auto it = runners().find(name);
  if (it == runners().end()) fail(ErrorKind::config, "unknown subcommand '" + name + "'");
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome = it->second(cfg, opts);
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ExperimentSummary summary;
  summary.pass = outcome.pass;
  summary.max_violation = outcome.checked > 0 ? outcome.max_violation : 0.0;
  summary.runtime_s = runtime;
  summary.rows = outcome.rows.size();
  summary.checked_rows = outcome.checked;
  summary.extra = outcome.extra;

  std::filesystem::create_directories(opts.out_dir);
  summary.csv_path = opts.out_dir / (name + ".csv");
  summary.json_path = opts.out_dir / (name + ".json");
  {
    std::ofstream csv(summary.csv_path);
    if (!csv) fail(ErrorKind::config, "cannot write " + summary.csv_path.string());
    for (std::size_t i = 0; i < outcome.header.size(); ++i) csv << (i ? "," : "") << outcome.header[i];
    csv << '\n';
    for (const auto& row : outcome.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << csv_field(row[i]);
      csv << '\n';
    }
  }
  json j = outcome.extra;
  j["pass"] = summary.pass;
  j["max_violation"] = summary.max_violation;
  j["runtime_s"] = summary.runtime_s;
  j["rows"] = summary.rows;
  j["checked"] = summary.checked_rows;
  std::ofstream js(summary.json_path);
  if (!js) fail(ErrorKind::config, "cannot write " + summary.json_path.string());
  js << j.dump(2) << '\n';
  return summary;
}

InteractionGraph graph_from_config(const Config& cfg) {
  const std::string kind = cfg.get_string("graph.kind");
  const bool periodic = cfg.get_bool("graph.periodic", false);
  if (kind == "chain") return build_chain(static_cast<int>(cfg.get_int("graph.n")), periodic);
  if (kind == "square")
    return build_square_lattice(static_cast<int>(cfg.get_int("graph.rows")), static_cast<int>(cfg.get_int("graph.cols")),
                                periodic);
  if (kind == "file") {
    const std::filesystem::path path = cfg.base_dir() / cfg.get_string("graph.file");
    std::ifstream in(path);
    if (!in) fail(ErrorKind::config, "cannot open graph file " + path.string());
    try {
      return nlohmann::json::parse(in).get<InteractionGraph>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::config, "graph file " + path.string() + ": " + e.what());
    }
  }
  fail(ErrorKind::config, "graph.kind must be chain, square or file");
}

LocalHamiltonian spin_model_from_config(const Config& cfg, const InteractionGraph& g) {
  return standard_model(parse_model_kind(cfg.get_string("model.kind")), g, cfg.get_double("model.coupling", 1.0),
                        cfg.get_double("model.field", 0.0));
}

FermionicHamiltonian fermion_model_from_config(const Config& cfg) {
  auto sys = std::make_shared<const FermionicSystem>(static_cast<int>(cfg.get_int("fermion.modes")));
  return fermionic_chain(sys, cfg.get_double("fermion.hopping", 1.0), cfg.get_double("fermion.interaction", 0.0));
}

double growth_from_config(const Config& cfg) {
  const std::string kind = cfg.get_string("growth.kind");
  if (kind == "cubic") return growth_constant_bound(growth::Cubic{static_cast<int>(cfg.get_int("growth.dimension"))});
  if (kind == "spread_out")
    return growth_constant_bound(growth::SpreadOut{static_cast<int>(cfg.get_int("growth.dimension")),
                                                   static_cast<int>(cfg.get_int("growth.range"))});
  if (kind == "explicit") return growth_constant_bound(growth::Explicit{parse_scaled_number(cfg.get_string("growth.alpha"))});
  fail(ErrorKind::config, "growth.kind must be cubic, spread_out or explicit");
}

double parse_scaled_number(const std::string& text) {
  std::string body = text;
  double scale = 1.0;
  if (!body.empty() && body.back() == 'e') {
    body.pop_back();
    scale = std::numbers::e;
    if (body.empty()) body = "1";
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(body, &used);
    if (used == body.size()) return v * scale;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::config, "'" + text + "' is not a number");
}

Matrix parse_fermion_observable(const FermionicSystem& sys, const std::string& text, VertexSet& support) {
  auto mode = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used == s.size() && v >= 0 && v < sys.modes()) return v;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::config, "bad mode in fermionic observable '" + text + "'");
  };
  if (text.rfind("hop", 0) == 0) {
    const auto dash = text.find('-');
    if (dash == std::string::npos) fail(ErrorKind::config, "hopping observable needs the form hopX-Y");
    const int x = mode(text.substr(3, dash - 3));
    const int y = mode(text.substr(dash + 1));
    if (x == y) fail(ErrorKind::config, "hopping observable needs two distinct modes");
    support = make_vertex_set({x, y});
    const Matrix hop = sys.creation(x) * sys.annihilation(y);
    return hop + hop.adjoint();
  }
  if (text.rfind("n", 0) == 0) {
    const int x = mode(text.substr(1));
    support = {x};
    return sys.number(x);
  }
  fail(ErrorKind::config, "unknown fermionic observable '" + text + "' (use nX or hopX-Y)");
}

}  // namespace thermaloc
