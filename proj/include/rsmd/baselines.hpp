#pragma once

#include <array>
#include <string>
#include <vector>

#include "rsmd/orchestrator.hpp"

namespace rsmd {

enum class Scheme { Rsmd, PdNomaOpt, TinMulticast, FraWfPa, RsmdExhaustive, RsmdGlobalCsi };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// ---------------------------------------------------------------------------
// Generic per-RRB sum-of-ratios power problem, the quadratic-transform
// machinery shared by the PD-NOMA and TIN benchmark rate models. Every SINR
// is a fraction A = c * v[num_var] over B = sum_k den_coef[k] * v[k] +
// den_const, grouped into the two hops.
// ---------------------------------------------------------------------------

struct FpFraction {
  int hop = 1;  // 1: CH DUs -> eRRH, 2: eRRH -> CR DUs
  int num_var = 0;
  double num_coef = 0;
  std::vector<double> den_coef;  // one per variable
  double den_const = 0;
};

struct FpRrb {
  std::vector<FpFraction> fractions;
};

struct FpProblem {
  int n_vars = 0;
  std::vector<int> sigma_group;       // per variable: 0 strong DU, 1 weak DU, 2 eRRH
  std::array<double, 3> caps = {0, 0, 0};
  std::vector<FpRrb> rrbs;
  std::vector<double> prices;
};

struct FpResult {
  std::vector<std::vector<double>> v;  // [rrb][var]
  std::vector<double> lambda;          // per rrb
  std::vector<double> hop1_rate, hop2_rate;
  std::array<double, 3> sigma = {0, 0, 0};
  double payoff = 0;
  bool converged = false;
  int iterations = 0;
};

// Alternating closed-form updates with the interleaved balance bisection and
// C4 sub-gradient, mirroring the rate-splitting best response.
FpResult solve_fp(const FpProblem& prob, const BrsOptions& opts = {});

// Benchmark cluster solvers sharing the Stage-I/Stage-II pipeline.
ClusterSolverFn make_noma_solver(const NetworkConfig& cfg, const ChannelRealization& channels,
                                 const std::vector<std::pair<int, int>>& members);
ClusterSolverFn make_tin_solver(const NetworkConfig& cfg, const ChannelRealization& channels,
                                const std::vector<std::pair<int, int>>& members);

RsmdResult run_pd_noma_opt(const NetworkConfig& cfg, const ChannelRealization& channels,
                           const std::vector<ChannelRealization>& training,
                           const PipelineOptions& opts = {});
RsmdResult run_tin_multicast(const NetworkConfig& cfg, const ChannelRealization& channels,
                             const std::vector<ChannelRealization>& training,
                             const PipelineOptions& opts = {});

// Water-filling over parallel channels: maximizes sum of (1/2)log2(1 + p*g)
// minus the price charges subject to the power budget. Returns the powers.
std::vector<double> water_fill(const std::vector<double>& eff_gain,
                               const std::vector<double>& prices, double budget);

// Fixed resource allocation benchmark: no clustering, even RRB split among
// the supportable links, greedy eRRH matching, water-filling per hop, and the
// same price bisection against the interference threshold.
RsmdResult run_fra_wf(const NetworkConfig& cfg, const ChannelRealization& channels,
                      const PipelineOptions& opts = {});

// Harness dispatcher running any scheme on shared channels.
RsmdResult run_scheme(Scheme s, const NetworkConfig& cfg, const ChannelRealization& channels,
                      const std::vector<ChannelRealization>& training,
                      const PipelineOptions& opts = {});

}  // namespace rsmd
