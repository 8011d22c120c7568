#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "thermaloc/config.hpp"
#include "thermaloc/error.hpp"
#include "thermaloc/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Thermal locality experiments: formula checks, bound scans and cluster-expansion tests"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> quad_order;
  std::optional<int> trunc_k;
  std::optional<std::string> system;

  for (const auto& name : thermaloc::subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key = value configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", seed, "seed for random instances");
    sub->add_option("--quad-order", quad_order, "Gauss-Legendre order for the s integral");
    sub->add_option("--trunc-k", trunc_k, "maximal word length in the cluster expansion");
    if (name == "verify-truncation" || name == "locality-scan")
      sub->add_option("system", system, "spin or fermion")->check(CLI::IsMember({"spin", "fermion"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const thermaloc::Config cfg = thermaloc::Config::load(config_path);
    thermaloc::RunOptions opts;
    opts.out_dir = out_dir;
    opts.seed = seed;
    opts.quad_order = quad_order;
    opts.trunc_k = trunc_k;
    opts.system = system;
    const thermaloc::ExperimentSummary s = thermaloc::run_experiment(name, cfg, opts);
    fmt::print("{}: {} ({} rows, {} checks, max_violation {:.3e}, {:.2f} s)\n", name, s.pass ? "pass" : "VIOLATIONS",
               s.rows, s.checked_rows, s.max_violation, s.runtime_s);
    fmt::print("  {}\n  {}\n", s.csv_path.string(), s.json_path.string());
    return s.pass ? 0 : 2;
  } catch (const thermaloc::Error& e) {
    std::cerr << "thermaloc " << name << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "thermaloc " << name << ": " << e.what() << '\n';
    return 1;
  }
}
