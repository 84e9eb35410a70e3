#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rsmd/harness.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"RSMD resource-allocation simulator"};
  app.require_subcommand(1);

  // run
  std::string spec_path;
  std::string out_dir = ".";
  std::string config_path;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  int workers = 0;
  auto* run = app.add_subcommand("run", "run a Monte Carlo experiment from a spec file");
  run->add_option("spec", spec_path, "experiment spec (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--out", out_dir, "output directory");
  run->add_option("-c,--config", config_path, "key=value network config overriding the spec's")
      ->check(CLI::ExistingFile);
  run->add_option("-s,--seed", seed_override, "base seed override")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("-w,--workers", workers, "worker threads (0 = all cores)");

  // summarize
  std::string rows_path;
  std::string reference = "RSMD";
  auto* summ = app.add_subcommand("summarize", "summarize a rows CSV");
  summ->add_option("rows", rows_path, "rows CSV produced by `run`")
      ->required()
      ->check(CLI::ExistingFile);
  summ->add_option("-r,--reference", reference, "reference scheme for the gain column");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      rsmd::ExperimentSpec spec = rsmd::load_experiment_spec(spec_path);
      if (!config_path.empty()) spec.base = rsmd::load_network_config(config_path);
      if (seed_set) spec.base_seed = seed_override;
      if (workers > 0) spec.workers = workers;

      fs::create_directories(out_dir);
      const auto rows = rsmd::run_experiment(spec);
      const fs::path csv = fs::path(out_dir) / "rows.csv";
      const fs::path sidecar = fs::path(out_dir) / "rows.spec.json";
      rsmd::write_rows_csv(rows, csv.string());
      rsmd::write_spec_sidecar(spec, sidecar.string());
      std::cout << "wrote " << rows.size() << " rows to " << csv.string() << "\n";
      std::cout << rsmd::format_summary(rsmd::summarize(rows, spec.schemes.front()));
    } else if (summ->parsed()) {
      const auto rows = rsmd::read_rows_csv(rows_path);
      std::cout << rsmd::format_summary(
          rsmd::summarize(rows, rsmd::scheme_from_name(reference)));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
