#include "rsmd/orchestrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rsmd {

std::vector<std::pair<int, int>> cluster_members(const DeviceClusterSet& clusters) {
  std::vector<std::pair<int, int>> m = clusters.pairs;
  if (clusters.leftover >= 0) m.emplace_back(clusters.leftover, -1);
  return m;
}

ClusterLinkView cluster_link_view(const ChannelRealization& ch, const NetworkConfig& cfg,
                                  std::pair<int, int> members, int l, int n) {
  ClusterLinkView v;
  if (members.second < 0) {
    const int m = members.first;
    v.ch.single_link = true;
    v.ch.h1 = ch.hh(m, l, n);
    v.ch.g1 = ch.gg(m, l, n);
    v.ch.i_dn1 = cfg.cue_power * ch.cue_to_crdu(m, n);
    v.cbs_du1 = ch.du_to_cbs(m, n);
  } else {
    int a = members.first, b = members.second;
    if (ch.hh(b, l, n) > ch.hh(a, l, n)) std::swap(a, b);
    v.ch.h1 = ch.hh(a, l, n);
    v.ch.h2 = ch.hh(b, l, n);
    v.ch.g1 = ch.gg(a, l, n);
    v.ch.g2 = ch.gg(b, l, n);
    v.ch.i_dn1 = cfg.cue_power * ch.cue_to_crdu(a, n);
    v.ch.i_dn2 = cfg.cue_power * ch.cue_to_crdu(b, n);
    v.cbs_du1 = ch.du_to_cbs(a, n);
    v.cbs_du2 = ch.du_to_cbs(b, n);
  }
  v.ch.i_up = cfg.cue_power * ch.cue_to_errh(l, n);
  v.ch.noise = cfg.noise_power;
  v.cbs_errh = ch.errh_to_cbs(l, n);
  return v;
}

Stage1Result form_clusters(const NetworkConfig& cfg,
                           const std::vector<ChannelRealization>& training, ClusteringMode mode) {
  if (training.size() < 2)
    throw std::invalid_argument("form_clusters: need at least 2 training samples");
  const int M = cfg.num_d2d_links, L = cfg.num_errhs, N = cfg.num_rrbs;

  std::vector<FeatureMatrix> features(M);
  for (int m = 0; m < M; ++m) {
    std::vector<Mat> hs, gs;
    hs.reserve(training.size());
    gs.reserve(training.size());
    for (const ChannelRealization& t : training) {
      Mat h(L, N), g(L, N);
      for (int l = 0; l < L; ++l)
        for (int n = 0; n < N; ++n) {
          h(l, n) = t.hh(m, l, n);
          g(l, n) = t.gg(m, l, n);
        }
      hs.push_back(std::move(h));
      gs.push_back(std::move(g));
    }
    features[m] = mode == ClusteringMode::GlobalCsi
                      ? raw_features(hs.back(), gs.back())
                      : extract_features(hs, gs, cfg.pca_components);
  }

  Stage1Result r;
  r.clusters = mode == ClusteringMode::Exhaustive ? exhaustive_cluster(features, cfg.pca_weight)
                                                  : cluster_devices(features, cfg.pca_weight);
  r.objective = clustering_objective(r.clusters, features, cfg.pca_weight);
  return r;
}

ClusterSolverFn make_rs_solver(const NetworkConfig& cfg, const ChannelRealization& channels,
                               const std::vector<std::pair<int, int>>& members) {
  return [&cfg, &channels, members](int j, int l, const std::vector<int>& rrbs,
                                    const std::vector<double>& mu,
                                    int t_max) -> ClusterSolveOutcome {
    ClusterAllocationProblem prob;
    prob.errh = l;
    prob.rrbs = rrbs;
    prob.prices = mu;
    prob.p_max_du = cfg.p_max_du;
    prob.p_max_errh = cfg.errh_power_budget();
    std::vector<ClusterLinkView> views;
    views.reserve(rrbs.size());
    for (int n : rrbs) {
      views.push_back(cluster_link_view(channels, cfg, members[j], l, n));
      prob.channels.push_back(views.back().ch);
    }

    BrsOptions bo;
    bo.t_max = t_max;
    const BrsResult brs = solve_brs(prob, bo);

    ClusterSolveOutcome out;
    out.payoff = brs.payoff;
    out.converged = brs.converged;
    out.powers = brs.powers;
    out.rrb.resize(rrbs.size());
    for (std::size_t k = 0; k < rrbs.size(); ++k) {
      const HopPowers& pw = brs.powers[k];
      out.rrb[k].e2e = e2e_rate(pw, prob.channels[k]);
      out.rrb[k].power = pw.total();
      const UplinkInterference i =
          uplink_interference(pw, views[k].cbs_du1, views[k].cbs_du2, views[k].cbs_errh);
      out.rrb[k].i_du = i.du;
      out.rrb[k].i_errh = i.errh;
    }
    return out;
  };
}

RsmdResult run_pipeline(const NetworkConfig& cfg, const DeviceClusterSet& clusters,
                        double clustering_objective_value, const ClusterSolverFn& solver,
                        const PipelineOptions& opts) {
  const int J = clusters.num_clusters();
  const int L = cfg.num_errhs, N = cfg.num_rrbs;

  RsmdResult res;
  res.clusters = clusters;
  res.clustering_objective = clustering_objective_value;

  // Stage-II: per-(j, l, n) utilities at the initial prices. The CBS starts
  // all prices at zero, so the clipped utility is just the balanced E2E rate.
  const TensorEntryFn entry = [&](int j, int l, int n) {
    const ClusterSolveOutcome out = solver(j, l, {n}, {0.0}, opts.stage2_tmax);
    return std::max(0.0, out.rrb[0].e2e);
  };
  const UtilityTensor tensor = opts.parallel ? build_utility_tensor(J, L, N, entry)
                                             : build_utility_tensor_serial(J, L, N, entry);

  const AssignmentResult assign = alternate_assignment(tensor, cfg.max_clusters_per_errh);
  res.assignment_trace = assign.objective_trace;
  res.allocation.cluster_errh = assign.cluster_errh;
  res.allocation.rrb_cluster = assign.rrb_cluster;

  res.cluster_rrbs.assign(J, {});
  for (int n = 0; n < N; ++n) res.cluster_rrbs[assign.rrb_cluster[n]].push_back(n);

  // Stage-III: alternating follower solves and leader price bisection.
  PriceState prices = make_price_state(N, 0.0, opts.mu_hi);
  std::vector<ClusterSolveOutcome> sol(J);
  std::vector<double> probed_mu(N, 0.0);

  const InterferenceProbe probe = [&](const std::vector<double>& mu) {
    probed_mu = mu;
    const bool par = opts.parallel;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int j = 0; j < J; ++j) {
      std::vector<double> mu_j;
      mu_j.reserve(res.cluster_rrbs[j].size());
      for (int n : res.cluster_rrbs[j]) mu_j.push_back(mu[n]);
      sol[j] = solver(j, res.allocation.cluster_errh[j], res.cluster_rrbs[j], mu_j,
                      opts.stage3_tmax);
    }
    std::vector<double> i_up(N, 0.0);
    for (int j = 0; j < J; ++j)
      for (std::size_t k = 0; k < res.cluster_rrbs[j].size(); ++k)
        i_up[res.cluster_rrbs[j][k]] = std::max(sol[j].rrb[k].i_du, sol[j].rrb[k].i_errh);
    return i_up;
  };

  BisectOptions bopts;
  bopts.rel_tol = opts.i_th_rel_tol;
  bopts.max_sweeps = opts.max_price_sweeps;
  const BisectResult bis = bisect_prices(prices, probe, cfg.interference_threshold, bopts);

  res.allocation.prices = probed_mu;  // prices the final powers were solved at
  res.per_rrb_interference = bis.i_up;
  res.price_sweeps = bis.sweeps;
  res.converged = bis.converged;
  res.non_monotone_price_events = bis.non_monotone_events;
  res.message_count =
      static_cast<long long>(J) * L * N + static_cast<long long>(bis.sweeps) * N;

  res.powers.assign(J, {});
  for (int j = 0; j < J; ++j) {
    res.powers[j] = sol[j].powers;
    if (!sol[j].converged) ++res.brs_non_converged;
    for (const RrbOutcome& o : sol[j].rrb) {
      res.sum_rate += o.e2e;
      res.total_power += o.power;
    }
  }
  return res;
}

RsmdResult run_rsmd(const NetworkConfig& cfg, const ChannelRealization& channels,
                    const std::vector<ChannelRealization>& training, const PipelineOptions& opts) {
  cfg.validate();
  const Stage1Result stage1 = form_clusters(cfg, training, opts.clustering);
  const auto members = cluster_members(stage1.clusters);
  const ClusterSolverFn solver = make_rs_solver(cfg, channels, members);
  return run_pipeline(cfg, stage1.clusters, stage1.objective, solver, opts);
}

namespace {

// Priced utility of one cluster (rate minus the RRB price charge), the
// quantity a follower would deviate to improve.
double priced_utility(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers) {
  double util = 0.0;
  for (int k = 0; k < prob.size(); ++k)
    util += e2e_rate(powers[k], prob.channels[k]) - prob.prices[k] * powers[k].total();
  return util;
}

bool within_caps(const ClusterAllocationProblem& prob, const std::vector<HopPowers>& powers,
                 double slack) {
  double s1 = 0, s2 = 0, s3 = 0;
  for (const HopPowers& pw : powers) {
    s1 += pw.du_strong();
    s2 += pw.du_weak();
    s3 += pw.errh_total();
  }
  return s1 <= prob.p_max_du * slack && s2 <= prob.p_max_du * slack &&
         s3 <= prob.p_max_errh * slack;
}

}  // namespace

StationarityReport check_stackelberg_stationarity(const RsmdResult& result,
                                                  const ChannelRealization& channels,
                                                  const NetworkConfig& cfg, double tol) {
  const int J = result.clusters.num_clusters();
  const auto members = cluster_members(result.clusters);
  StationarityReport rep;
  rep.utility_improvement.assign(J, 0.0);
  rep.cluster_pass.assign(J, true);

  for (int j = 0; j < J; ++j) {
    ClusterAllocationProblem prob;
    prob.errh = result.allocation.cluster_errh[j];
    prob.rrbs = result.cluster_rrbs[j];
    prob.p_max_du = cfg.p_max_du;
    prob.p_max_errh = cfg.errh_power_budget();
    for (int n : prob.rrbs) {
      prob.channels.push_back(cluster_link_view(channels, cfg, members[j], prob.errh, n).ch);
      prob.prices.push_back(result.allocation.prices[n]);
    }
    const double base = priced_utility(prob, result.powers[j]);

    // fresh best response with a doubled budget
    BrsOptions bo;
    bo.t_max = 400;
    const BrsResult re = solve_brs(prob, bo);
    double improvement = 0.0;
    if (within_caps(prob, re.powers, 1.01))
      improvement = priced_utility(prob, re.powers) - base;

    // scaled-power perturbations must not help either
    for (double scale : {1.1, 0.9}) {
      std::vector<HopPowers> pert = result.powers[j];
      for (HopPowers& pw : pert) {
        pw.p11 *= scale;
        pw.p12 *= scale;
        pw.p2 *= scale;
        pw.qc *= scale;
        pw.q1 *= scale;
        pw.q2 *= scale;
      }
      if (within_caps(prob, pert, 1.01))
        improvement = std::max(improvement, priced_utility(prob, pert) - base);
    }

    rep.utility_improvement[j] = improvement;
    rep.cluster_pass[j] = improvement <= tol;
  }

  rep.c5_ok = true;
  for (int n = 0; n < cfg.num_rrbs; ++n)
    if (result.per_rrb_interference[n] >
        cfg.interference_threshold * (1.0 + 0.05) * (1.0 + 1e-9)) {
      rep.c5_ok = false;
      rep.violating_rrbs.push_back(n);
    }

  rep.pass = rep.c5_ok &&
             std::all_of(rep.cluster_pass.begin(), rep.cluster_pass.end(), [](bool b) { return b; });
  return rep;
}

}  // namespace rsmd
