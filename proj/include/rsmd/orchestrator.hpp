#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rsmd/assignment.hpp"
#include "rsmd/clustering.hpp"
#include "rsmd/power_game.hpp"
#include "rsmd/pricing.hpp"
#include "rsmd/topology.hpp"

namespace rsmd {

enum class ClusteringMode { Pca, Exhaustive, GlobalCsi };

struct PipelineOptions {
  int stage2_tmax = 50;    // per-entry budget for the utility tensor
  int stage3_tmax = 200;   // full budget for the refinement solves
  int max_price_sweeps = 30;
  double i_th_rel_tol = 0.05;
  double mu_hi = 1e3;
  bool parallel = true;
  ClusteringMode clustering = ClusteringMode::Pca;
};

// Final eRRH/RRB assignment with the RRB prices.
struct AllocationState {
  std::vector<int> cluster_errh;  // x
  std::vector<int> rrb_cluster;   // y
  std::vector<double> prices;     // mu
};

// What one cluster's power solver reports back to the scheme-independent
// pipeline, per assigned RRB.
struct RrbOutcome {
  double e2e = 0;
  double power = 0;
  double i_du = 0;    // CBS interference from the CH DUs
  double i_errh = 0;  // CBS interference from the relay
};

struct ClusterSolveOutcome {
  double payoff = 0;
  bool converged = true;
  std::vector<RrbOutcome> rrb;
  std::vector<HopPowers> powers;
};

using ClusterSolverFn = std::function<ClusterSolveOutcome(
    int j, int l, const std::vector<int>& rrbs, const std::vector<double>& mu, int t_max)>;

struct RsmdResult {
  DeviceClusterSet clusters;
  AllocationState allocation;
  std::vector<std::vector<int>> cluster_rrbs;       // N_j per cluster
  std::vector<std::vector<HopPowers>> powers;       // aligned with cluster_rrbs
  double sum_rate = 0;
  double total_power = 0;
  std::vector<double> per_rrb_interference;
  bool converged = false;
  int price_sweeps = 0;
  long long message_count = 0;
  double clustering_objective = 0;
  std::vector<double> assignment_trace;
  int brs_non_converged = 0;
  int non_monotone_price_events = 0;
};

// Ordered members of every cluster; a singleton is (m, -1).
std::vector<std::pair<int, int>> cluster_members(const DeviceClusterSet& clusters);

// Channels plus CBS gains of one cluster on one (eRRH, RRB). The link with
// the better first-hop gain on this (l, n) is relabeled as link 1.
struct ClusterLinkView {
  ClusterChannels ch;
  double cbs_du1 = 0, cbs_du2 = 0, cbs_errh = 0;
};
ClusterLinkView cluster_link_view(const ChannelRealization& ch, const NetworkConfig& cfg,
                                  std::pair<int, int> members, int l, int n);

struct Stage1Result {
  DeviceClusterSet clusters;
  double objective = 0;
};
Stage1Result form_clusters(const NetworkConfig& cfg,
                           const std::vector<ChannelRealization>& training, ClusteringMode mode);

// The scheme-independent Stage-II/Stage-III pipeline: utility tensor at the
// initial prices, alternating assignment, then power/price sweeps until the
// interference constraint is met.
RsmdResult run_pipeline(const NetworkConfig& cfg, const DeviceClusterSet& clusters,
                        double clustering_objective, const ClusterSolverFn& solver,
                        const PipelineOptions& opts);

// The solver hook of the rate-splitting scheme.
ClusterSolverFn make_rs_solver(const NetworkConfig& cfg, const ChannelRealization& channels,
                               const std::vector<std::pair<int, int>>& members);

// Full three-stage run of the rate-splitting scheme.
RsmdResult run_rsmd(const NetworkConfig& cfg, const ChannelRealization& channels,
                    const std::vector<ChannelRealization>& training,
                    const PipelineOptions& opts = {});

struct StationarityReport {
  std::vector<double> utility_improvement;  // per cluster, at final prices
  std::vector<bool> cluster_pass;
  bool c5_ok = false;
  bool pass = false;
  std::vector<int> violating_rrbs;
};

// Followers' equilibrium check: a fresh best-response solve with a doubled
// budget must not improve any cluster's priced utility beyond tolerance, and
// a scaled-power perturbation must not help either; the leader's constraint
// must hold at the final prices.
StationarityReport check_stackelberg_stationarity(const RsmdResult& result,
                                                  const ChannelRealization& channels,
                                                  const NetworkConfig& cfg,
                                                  double tol = 1e-4);

}  // namespace rsmd
