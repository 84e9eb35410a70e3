// Times the two data-parallel kernels (utility-tensor build, Monte Carlo
// drops) against their serial reference implementations.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "rsmd/harness.hpp"

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main() {
  rsmd::NetworkConfig cfg;
  cfg.num_d2d_links = 16;
  cfg.num_errhs = 4;
  cfg.num_rrbs = 12;
  cfg.num_cues = 12;
  cfg.max_clusters_per_errh = 2;
  cfg.training_samples = 8;

  const auto topo = rsmd::generate_topology(cfg, 42);
  const auto channels = rsmd::sample_channels(topo, cfg, 43);
  std::vector<rsmd::ChannelRealization> training;
  for (int i = 0; i < cfg.training_samples; ++i)
    training.push_back(rsmd::sample_channels(topo, cfg, 100 + i));

  const auto stage1 = rsmd::form_clusters(cfg, training, rsmd::ClusteringMode::Pca);
  const auto members = rsmd::cluster_members(stage1.clusters);
  const auto solver = rsmd::make_rs_solver(cfg, channels, members);
  const int J = stage1.clusters.num_clusters();
  const rsmd::TensorEntryFn entry = [&](int j, int l, int n) {
    const auto out = solver(j, l, {n}, {0.0}, 50);
    return std::max(0.0, out.rrb[0].e2e);
  };

  std::printf("threads available: %d\n\n", omp_get_max_threads());

  auto t0 = Clock::now();
  const auto tensor_serial = rsmd::build_utility_tensor_serial(J, cfg.num_errhs, cfg.num_rrbs, entry);
  const double ts = seconds_since(t0);
  t0 = Clock::now();
  const auto tensor_par = rsmd::build_utility_tensor(J, cfg.num_errhs, cfg.num_rrbs, entry);
  const double tp = seconds_since(t0);
  const bool identical = tensor_serial.u == tensor_par.u;
  std::printf("utility tensor (%dx%dx%d): serial %.3fs  openmp %.3fs  speedup %.2fx  identical=%s\n",
              J, cfg.num_errhs, cfg.num_rrbs, ts, tp, ts / tp, identical ? "yes" : "NO");

  rsmd::ExperimentSpec spec;
  spec.base = cfg;
  spec.var = rsmd::SweepVar::M;
  spec.values = {16};
  spec.schemes = {rsmd::Scheme::Rsmd};
  spec.num_drops = 8;
  spec.base_seed = 7;

  t0 = Clock::now();
  const auto rows_serial = rsmd::run_experiment_serial(spec);
  const double ds = seconds_since(t0);
  t0 = Clock::now();
  const auto rows_par = rsmd::run_experiment(spec);
  const double dp = seconds_since(t0);
  bool same = rows_serial.size() == rows_par.size();
  for (std::size_t i = 0; same && i < rows_serial.size(); ++i)
    same = rows_serial[i].sum_rate == rows_par[i].sum_rate &&
           rows_serial[i].channel_hash == rows_par[i].channel_hash;
  std::printf("monte carlo (%d drops):      serial %.3fs  openmp %.3fs  speedup %.2fx  identical=%s\n",
              spec.num_drops, ds, dp, ds / dp, same ? "yes" : "NO");
  return identical && same ? 0 : 1;
}
