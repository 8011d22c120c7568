#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thermaloc/config.hpp"
#include "thermaloc/fermions.hpp"
#include "thermaloc/hamiltonian.hpp"

namespace thermaloc {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> quad_order;
  std::optional<int> trunc_k;
  /// verify-truncation / locality-scan: "spin" or "fermion".
  std::optional<std::string> system;
};

struct ExperimentSummary {
  bool pass = true;
  double max_violation = 0.0;
  double runtime_s = 0.0;
  std::size_t rows = 0;
  std::size_t checked_rows = 0;
  std::filesystem::path csv_path;
  std::filesystem::path json_path;
  nlohmann::json extra = nlohmann::json::object();
};

const std::vector<std::string>& subcommand_names();

/// Runs one subcommand and writes <out>/<name>.csv and <out>/<name>.json.
/// Throws Error (config, invalid_argument, ...) on bad input.
ExperimentSummary run_experiment(const std::string& name, const Config& cfg, const RunOptions& opts);

/// Builders shared by the subcommands.
InteractionGraph graph_from_config(const Config& cfg);
LocalHamiltonian spin_model_from_config(const Config& cfg, const InteractionGraph& g);
FermionicHamiltonian fermion_model_from_config(const Config& cfg);
/// growth.kind = cubic | spread_out | explicit.
double growth_from_config(const Config& cfg);
/// Plain number or a multiple of Euler's number written as "4e".
double parse_scaled_number(const std::string& text);
/// "n3" (number operator) or "hop0-1" (f0^dag f1 + h.c.); returns the
/// Fock-space matrix and fills `support`.
Matrix parse_fermion_observable(const FermionicSystem& sys, const std::string& text, VertexSet& support);

}  // namespace thermaloc
