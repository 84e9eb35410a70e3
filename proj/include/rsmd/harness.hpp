#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsmd/baselines.hpp"

namespace rsmd {

enum class SweepVar { M, L, N, Ith, D };

const char* sweep_var_name(SweepVar v);
SweepVar sweep_var_from_name(const std::string& name);

// One Monte Carlo experiment: a sweep over one variable, every requested
// scheme run on identical channels per drop.
struct ExperimentSpec {
  NetworkConfig base;
  SweepVar var = SweepVar::M;
  std::vector<double> values;
  std::vector<Scheme> schemes = {Scheme::Rsmd};
  int num_drops = 100;
  std::uint64_t base_seed = 1;
  int workers = 0;  // 0: one per hardware thread
  PipelineOptions pipeline;
};

// Applies one sweep value to the base config (I_th values are in dBm; an N
// sweep keeps one CUE per RRB).
NetworkConfig apply_sweep(const NetworkConfig& base, SweepVar var, double value);

struct ResultRow {
  Scheme scheme = Scheme::Rsmd;
  double sweep_value = 0;
  int drop = 0;
  std::uint64_t seed = 0;
  bool feasible = true;
  double sum_rate = 0;
  double total_power = 0;
  double interference_margin = 0;  // mean over RRBs of (I_th - I_up) / I_th
  double clustering_objective = 0;
  bool converged = false;
  double runtime_ms = 0;
  std::uint64_t channel_hash = 0;
};

// Runs the full sweep; rows come back in (value, drop, scheme) order and are
// identical for any worker count.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);
std::vector<ResultRow> run_experiment_serial(const ExperimentSpec& spec);

// JSON experiment spec (schema documented in the README).
ExperimentSpec load_experiment_spec(const std::string& path);
ExperimentSpec parse_experiment_spec(const std::string& json_text);

constexpr int kResultSchemaVersion = 1;

void write_rows_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_rows_csv(const std::string& path);
// Reproducibility manifest next to the CSV.
void write_spec_sidecar(const ExperimentSpec& spec, const std::string& path);

struct SummaryRow {
  std::string scheme;
  double sweep_value = 0;
  int n = 0;
  double mean_sum_rate = 0;
  double ci95 = 0;              // half-width; 0 for a single row
  double mean_total_power = 0;
  double gain_vs_ref_pct = 0;   // (mean - ref_mean) / ref_mean * 100
};

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, Scheme reference);
std::string format_summary(const std::vector<SummaryRow>& rows);

}  // namespace rsmd
