#include "rsmd/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rsmd {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Rsmd: return "RSMD";
    case Scheme::PdNomaOpt: return "PD-NOMA/OPT";
    case Scheme::TinMulticast: return "TIN/Multicast";
    case Scheme::FraWfPa: return "FRA/WF-PA";
    case Scheme::RsmdExhaustive: return "RSMD+exhaustive-clustering";
    case Scheme::RsmdGlobalCsi: return "RSMD+globalCSI-clustering";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  for (Scheme s : {Scheme::Rsmd, Scheme::PdNomaOpt, Scheme::TinMulticast, Scheme::FraWfPa,
                   Scheme::RsmdExhaustive, Scheme::RsmdGlobalCsi})
    if (name == scheme_name(s)) return s;
  throw std::invalid_argument("unknown scheme: " + name);
}

// ---------------------------------------------------------------------------
// Generic quadratic-transform solver
// ---------------------------------------------------------------------------

namespace {

struct FpAux {
  std::vector<std::vector<double>> z;      // [rrb][fraction]
  std::vector<std::vector<double>> alpha;  // [rrb][fraction]
  std::vector<double> lambda, lam_lo, lam_hi;
  std::vector<int> streak;
};

double fp_a(const FpFraction& f, const std::vector<double>& v) { return f.num_coef * v[f.num_var]; }

double fp_b(const FpFraction& f, const std::vector<double>& v) {
  double b = f.den_const;
  for (std::size_t k = 0; k < f.den_coef.size(); ++k) b += f.den_coef[k] * v[k];
  return b;
}

double fp_omega(const FpFraction& f, double lambda) {
  return f.hop == 1 ? omega_first(lambda) : omega_second(lambda);
}

void fp_update_aux(const FpProblem& prob, const std::vector<std::vector<double>>& v, FpAux& aux) {
  for (std::size_t k = 0; k < prob.rrbs.size(); ++k) {
    const auto& fr = prob.rrbs[k].fractions;
    for (std::size_t f = 0; f < fr.size(); ++f) {
      const double a = fp_a(fr[f], v[k]);
      const double b = fp_b(fr[f], v[k]);
      aux.z[k][f] = a / b;
      aux.alpha[k][f] = std::sqrt(fp_omega(fr[f], aux.lambda[k]) * (1.0 + aux.z[k][f]) * a) / (a + b);
    }
  }
}

std::array<double, 3> fp_group_sums(const FpProblem& prob,
                                    const std::vector<std::vector<double>>& v) {
  std::array<double, 3> s = {0, 0, 0};
  for (const auto& vk : v)
    for (int i = 0; i < prob.n_vars; ++i) s[prob.sigma_group[i]] += vk[i];
  return s;
}

double fp_hop_rate(const FpRrb& rrb, const std::vector<double>& v, int hop) {
  double r = 0;
  for (const FpFraction& f : rrb.fractions)
    if (f.hop == hop) r += half_log2_1p(fp_a(f, v) / fp_b(f, v));
  return r;
}

double fp_payoff(const FpProblem& prob, const std::vector<std::vector<double>>& v,
                 const std::array<double, 3>& sigma) {
  double val = 0;
  for (std::size_t k = 0; k < prob.rrbs.size(); ++k) {
    val += std::min(fp_hop_rate(prob.rrbs[k], v[k], 1), fp_hop_rate(prob.rrbs[k], v[k], 2));
    val -= prob.prices[k] * std::accumulate(v[k].begin(), v[k].end(), 0.0);
  }
  const std::array<double, 3> s = fp_group_sums(prob, v);
  for (int g = 0; g < 3; ++g) val -= sigma[g] * s[g];
  return val;
}

}  // namespace

FpResult solve_fp(const FpProblem& prob, const BrsOptions& opts) {
  const int rrb_count = static_cast<int>(prob.rrbs.size());
  if (rrb_count == 0) throw std::invalid_argument("solve_fp: empty problem");

  FpResult res;
  res.v.assign(rrb_count, std::vector<double>(prob.n_vars, 0.0));
  for (auto& vk : res.v)
    for (int i = 0; i < prob.n_vars; ++i)
      vk[i] = prob.caps[prob.sigma_group[i]] / (3.0 * rrb_count);

  FpAux aux;
  aux.z.assign(rrb_count, {});
  aux.alpha.assign(rrb_count, {});
  for (int k = 0; k < rrb_count; ++k) {
    aux.z[k].assign(prob.rrbs[k].fractions.size(), 0.0);
    aux.alpha[k].assign(prob.rrbs[k].fractions.size(), 0.0);
  }
  aux.lambda.assign(rrb_count, 0.5);
  aux.lam_lo.assign(rrb_count, 0.0);
  aux.lam_hi.assign(rrb_count, 1.0);
  aux.streak.assign(rrb_count, 0);
  fp_update_aux(prob, res.v, aux);

  double prev = fp_payoff(prob, res.v, res.sigma);
  for (int t = 1; t <= opts.t_max; ++t) {
    res.iterations = t;
    // closed-form power update: stationarity of the quadratic surrogate in
    // each variable (the cross terms are linear, so per-variable exact)
    for (int k = 0; k < rrb_count; ++k) {
      const auto& fr = prob.rrbs[k].fractions;
      std::vector<double> nv(prob.n_vars, 0.0);
      for (int i = 0; i < prob.n_vars; ++i) {
        int own = -1;
        double den = prob.prices[k] + res.sigma[prob.sigma_group[i]];
        for (std::size_t f = 0; f < fr.size(); ++f) {
          const double asq = aux.alpha[k][f] * aux.alpha[k][f];
          if (fr[f].num_var == i) {
            own = static_cast<int>(f);
            den += asq * fr[f].num_coef;
          }
          if (i < static_cast<int>(fr[f].den_coef.size())) den += asq * fr[f].den_coef[i];
        }
        if (own < 0 || fr[own].num_coef == 0.0) continue;  // stream absent
        if (den <= 0.0) throw std::domain_error("solve_fp: zero denominator");
        const double w = fp_omega(fr[own], aux.lambda[k]);
        const double asq = aux.alpha[k][own] * aux.alpha[k][own];
        nv[i] = w * (1.0 + aux.z[k][own]) * asq * fr[own].num_coef / (den * den);
      }
      res.v[k] = std::move(nv);
    }

    fp_update_aux(prob, res.v, aux);

    for (int k = 0; k < rrb_count; ++k) {
      const double r1 = fp_hop_rate(prob.rrbs[k], res.v[k], 1);
      const double r2 = fp_hop_rate(prob.rrbs[k], res.v[k], 2);
      lambda_bisection_step(r1, r2, aux.lam_lo[k], aux.lam_hi[k], aux.lambda[k], aux.streak[k]);
    }

    const std::array<double, 3> s = fp_group_sums(prob, res.v);
    const double step = opts.sigma_step / t;
    for (int g = 0; g < 3; ++g)
      res.sigma[g] = std::max(0.0, res.sigma[g] + step * (s[g] - prob.caps[g]));

    const double cur = fp_payoff(prob, res.v, res.sigma);
    const std::array<double, 3> sums = fp_group_sums(prob, res.v);
    const bool caps_ok = sums[0] <= prob.caps[0] * opts.cap_slack &&
                         sums[1] <= prob.caps[1] * opts.cap_slack &&
                         sums[2] <= prob.caps[2] * opts.cap_slack;
    if (std::abs(cur - prev) <= opts.payoff_tol && caps_ok) {
      res.converged = true;
      prev = cur;
      break;
    }
    prev = cur;
  }
  res.payoff = prev;
  res.lambda = aux.lambda;
  res.hop1_rate.resize(rrb_count);
  res.hop2_rate.resize(rrb_count);
  for (int k = 0; k < rrb_count; ++k) {
    res.hop1_rate[k] = fp_hop_rate(prob.rrbs[k], res.v[k], 1);
    res.hop2_rate[k] = fp_hop_rate(prob.rrbs[k], res.v[k], 2);
  }
  return res;
}

// ---------------------------------------------------------------------------
// PD-NOMA and TIN cluster solvers
// ---------------------------------------------------------------------------

namespace {

// variable layout shared by both benchmarks:
//   NOMA: 0 strong-DU stream, 1 weak-DU stream, 2 strong private, 3 weak private
//   TIN:  0 strong-DU stream, 1 weak-DU stream, 2 multicast stream
FpRrb noma_rrb(const ClusterChannels& ch) {
  FpRrb r;
  const double ic = ch.i_up + ch.noise;
  const int dl_weak = common_message_receiver(ch);  // smaller effective gain
  const double g_w = dl_weak == 1 ? ch.g1 : ch.g2;
  const double g_s = dl_weak == 1 ? ch.g2 : ch.g1;
  const double idn_w = dl_weak == 1 ? ch.i_dn1 : ch.i_dn2;
  const double idn_s = dl_weak == 1 ? ch.i_dn2 : ch.i_dn1;
  // uplink: strong decoded first under the weak's interference
  r.fractions.push_back({1, 0, ch.h1, {0, ch.h2, 0, 0}, ic});
  r.fractions.push_back({1, 1, ch.h2, {0, 0, 0, 0}, ic});
  // downlink: the weak message is decoded under the strong's interference,
  // the strong decodes its own after SIC
  r.fractions.push_back({2, 3, g_w, {0, 0, g_w, 0}, idn_w + ch.noise});
  r.fractions.push_back({2, 2, g_s, {0, 0, 0, 0}, idn_s + ch.noise});
  return r;
}

FpRrb tin_rrb(const ClusterChannels& ch) {
  FpRrb r;
  const double ic = ch.i_up + ch.noise;
  const int kap = common_message_receiver(ch);
  const double g_k = kap == 1 ? ch.g1 : ch.g2;
  const double idn_k = kap == 1 ? ch.i_dn1 : ch.i_dn2;
  r.fractions.push_back({1, 0, ch.h1, {0, ch.h2, 0}, ic});
  r.fractions.push_back({1, 1, ch.h2, {ch.h1, 0, 0}, ic});
  r.fractions.push_back({2, 2, g_k, {0, 0, 0}, idn_k + ch.noise});
  return r;
}

ClusterSolverFn make_fp_solver(const NetworkConfig& cfg, const ChannelRealization& channels,
                               std::vector<std::pair<int, int>> members, bool noma) {
  return [&cfg, &channels, members, noma](int j, int l, const std::vector<int>& rrbs,
                                          const std::vector<double>& mu,
                                          int t_max) -> ClusterSolveOutcome {
    FpProblem prob;
    prob.n_vars = noma ? 4 : 3;
    prob.sigma_group = noma ? std::vector<int>{0, 1, 2, 2} : std::vector<int>{0, 1, 2};
    prob.caps = {cfg.p_max_du, cfg.p_max_du, cfg.errh_power_budget()};
    prob.prices = mu;
    std::vector<ClusterLinkView> views;
    std::vector<int> dl_weak;
    for (int n : rrbs) {
      views.push_back(cluster_link_view(channels, cfg, members[j], l, n));
      prob.rrbs.push_back(noma ? noma_rrb(views.back().ch) : tin_rrb(views.back().ch));
      dl_weak.push_back(common_message_receiver(views.back().ch));
    }

    BrsOptions bo;
    bo.t_max = t_max;
    const FpResult fp = solve_fp(prob, bo);

    ClusterSolveOutcome out;
    out.payoff = fp.payoff;
    out.converged = fp.converged;
    out.rrb.resize(rrbs.size());
    out.powers.resize(rrbs.size());
    for (std::size_t k = 0; k < rrbs.size(); ++k) {
      HopPowers& pw = out.powers[k];
      pw.p11 = fp.v[k][0];
      pw.p2 = fp.v[k][1];
      if (noma) {
        // private streams only; map back through the downlink ordering
        const double q_s = fp.v[k][2], q_w = fp.v[k][3];
        pw.q1 = dl_weak[k] == 1 ? q_s : q_w;  // link-1 message
        pw.q2 = dl_weak[k] == 1 ? q_w : q_s;
      } else {
        pw.qc = fp.v[k][2];  // single multicast stream
      }
      out.rrb[k].e2e = std::min(fp.hop1_rate[k], fp.hop2_rate[k]);
      out.rrb[k].power = pw.total();
      const UplinkInterference i =
          uplink_interference(pw, views[k].cbs_du1, views[k].cbs_du2, views[k].cbs_errh);
      out.rrb[k].i_du = i.du;
      out.rrb[k].i_errh = i.errh;
    }
    return out;
  };
}

}  // namespace

ClusterSolverFn make_noma_solver(const NetworkConfig& cfg, const ChannelRealization& channels,
                                 const std::vector<std::pair<int, int>>& members) {
  return make_fp_solver(cfg, channels, members, true);
}

ClusterSolverFn make_tin_solver(const NetworkConfig& cfg, const ChannelRealization& channels,
                                const std::vector<std::pair<int, int>>& members) {
  return make_fp_solver(cfg, channels, members, false);
}

RsmdResult run_pd_noma_opt(const NetworkConfig& cfg, const ChannelRealization& channels,
                           const std::vector<ChannelRealization>& training,
                           const PipelineOptions& opts) {
  cfg.validate();
  const Stage1Result s1 = form_clusters(cfg, training, opts.clustering);
  const auto members = cluster_members(s1.clusters);
  return run_pipeline(cfg, s1.clusters, s1.objective, make_noma_solver(cfg, channels, members),
                      opts);
}

RsmdResult run_tin_multicast(const NetworkConfig& cfg, const ChannelRealization& channels,
                             const std::vector<ChannelRealization>& training,
                             const PipelineOptions& opts) {
  cfg.validate();
  const Stage1Result s1 = form_clusters(cfg, training, opts.clustering);
  const auto members = cluster_members(s1.clusters);
  return run_pipeline(cfg, s1.clusters, s1.objective, make_tin_solver(cfg, channels, members),
                      opts);
}

// ---------------------------------------------------------------------------
// FRA/WF-PA
// ---------------------------------------------------------------------------

std::vector<double> water_fill(const std::vector<double>& eff_gain,
                               const std::vector<double>& prices, double budget) {
  const std::size_t n = eff_gain.size();
  if (prices.size() != n) throw std::invalid_argument("water_fill: misaligned inputs");
  const double inv2ln2 = 1.0 / (2.0 * std::log(2.0));

  auto alloc = [&](double nu) {
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double price = prices[k] + nu;
      p[k] = price > 0 ? std::max(0.0, inv2ln2 / price - 1.0 / eff_gain[k]) : budget * 2;
    }
    return p;
  };
  auto total = [&](const std::vector<double>& p) {
    return std::accumulate(p.begin(), p.end(), 0.0);
  };

  std::vector<double> p = alloc(0.0);
  const bool priced_everywhere =
      std::all_of(prices.begin(), prices.end(), [](double m) { return m > 0; });
  if (priced_everywhere && total(p) <= budget) return p;  // cap slack, nu = 0

  double lo = 0.0, hi = inv2ln2 * n / budget + 1.0;
  while (total(alloc(hi)) > budget) hi *= 2.0;
  for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
    const double nu = 0.5 * (lo + hi);
    if (total(alloc(nu)) > budget)
      lo = nu;
    else
      hi = nu;
  }
  return alloc(hi);
}

RsmdResult run_fra_wf(const NetworkConfig& cfg, const ChannelRealization& channels,
                      const PipelineOptions& opts) {
  cfg.validate();
  const int M = cfg.num_d2d_links, L = cfg.num_errhs, N = cfg.num_rrbs;
  const int n_r = cfg.max_clusters_per_errh;
  // the scheme can relay at most L*N_R links and serve at most N
  const int active = std::min({M, N, L * n_r});

  RsmdResult res;
  res.cluster_rrbs.assign(active, {});
  res.allocation.rrb_cluster.assign(N, 0);
  for (int n = 0; n < N; ++n) {
    res.allocation.rrb_cluster[n] = n % active;
    res.cluster_rrbs[n % active].push_back(n);
  }

  // greedy many-to-one eRRH matching on mean first-hop gain
  auto mean_gain = [&](int m, int l) {
    double s = 0;
    for (int n = 0; n < N; ++n) s += channels.hh(m, l, n);
    return s / N;
  };
  std::vector<int> order(active);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> best_gain(active);
  for (int m = 0; m < active; ++m) {
    double b = 0;
    for (int l = 0; l < L; ++l) b = std::max(b, mean_gain(m, l));
    best_gain[m] = b;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return best_gain[a] > best_gain[b]; });
  std::vector<int> capacity(L, n_r);
  res.allocation.cluster_errh.assign(active, -1);
  for (int m : order) {
    int pick = -1;
    for (int l = 0; l < L; ++l)
      if (capacity[l] > 0 && (pick < 0 || mean_gain(m, l) > mean_gain(m, pick))) pick = l;
    res.allocation.cluster_errh[m] = pick;
    --capacity[pick];
  }

  // followers: independent two-hop water-filling per link under the prices
  std::vector<std::vector<HopPowers>> powers(active);
  std::vector<std::vector<double>> e2e(active);
  std::vector<double> probed_mu(N, 0.0);
  const InterferenceProbe probe = [&](const std::vector<double>& mu) {
    probed_mu = mu;
    const bool par = opts.parallel;
#pragma omp parallel for schedule(dynamic) if (par)
    for (int m = 0; m < active; ++m) {
      const int l = res.allocation.cluster_errh[m];
      const auto& rrbs = res.cluster_rrbs[m];
      std::vector<double> g1(rrbs.size()), g2(rrbs.size()), mu_m(rrbs.size());
      for (std::size_t k = 0; k < rrbs.size(); ++k) {
        const int n = rrbs[k];
        g1[k] = channels.hh(m, l, n) / (cfg.cue_power * channels.cue_to_errh(l, n) + cfg.noise_power);
        g2[k] = channels.gg(m, l, n) / (cfg.cue_power * channels.cue_to_crdu(m, n) + cfg.noise_power);
        mu_m[k] = mu[n];
      }
      const std::vector<double> p = water_fill(g1, mu_m, cfg.p_max_du);
      const std::vector<double> q = water_fill(g2, mu_m, cfg.errh_power_budget());
      powers[m].assign(rrbs.size(), {});
      e2e[m].assign(rrbs.size(), 0.0);
      for (std::size_t k = 0; k < rrbs.size(); ++k) {
        powers[m][k].p11 = p[k];
        powers[m][k].qc = q[k];
        e2e[m][k] = std::min(half_log2_1p(p[k] * g1[k]), half_log2_1p(q[k] * g2[k]));
      }
    }
    std::vector<double> i_up(N, 0.0);
    for (int m = 0; m < active; ++m)
      for (std::size_t k = 0; k < res.cluster_rrbs[m].size(); ++k) {
        const int n = res.cluster_rrbs[m][k];
        const int l = res.allocation.cluster_errh[m];
        const double i1 = powers[m][k].p11 * channels.du_to_cbs(m, n);
        const double i2 = powers[m][k].qc * channels.errh_to_cbs(l, n);
        i_up[n] = std::max(i1, i2);
      }
    return i_up;
  };

  PriceState prices = make_price_state(N, 0.0, opts.mu_hi);
  BisectOptions bopts;
  bopts.rel_tol = opts.i_th_rel_tol;
  bopts.max_sweeps = opts.max_price_sweeps;
  const BisectResult bis = bisect_prices(prices, probe, cfg.interference_threshold, bopts);

  res.allocation.prices = probed_mu;  // prices the final powers were solved at
  res.per_rrb_interference = bis.i_up;
  res.price_sweeps = bis.sweeps;
  res.converged = bis.converged;
  res.non_monotone_price_events = bis.non_monotone_events;
  res.message_count = static_cast<long long>(bis.sweeps) * N;
  res.powers = powers;
  for (int m = 0; m < active; ++m)
    for (std::size_t k = 0; k < res.cluster_rrbs[m].size(); ++k) {
      res.sum_rate += e2e[m][k];
      res.total_power += powers[m][k].total();
    }
  return res;
}

RsmdResult run_scheme(Scheme s, const NetworkConfig& cfg, const ChannelRealization& channels,
                      const std::vector<ChannelRealization>& training,
                      const PipelineOptions& opts) {
  PipelineOptions o = opts;
  switch (s) {
    case Scheme::Rsmd:
      return run_rsmd(cfg, channels, training, o);
    case Scheme::RsmdExhaustive:
      o.clustering = ClusteringMode::Exhaustive;
      return run_rsmd(cfg, channels, training, o);
    case Scheme::RsmdGlobalCsi:
      o.clustering = ClusteringMode::GlobalCsi;
      return run_rsmd(cfg, channels, training, o);
    case Scheme::PdNomaOpt:
      return run_pd_noma_opt(cfg, channels, training, o);
    case Scheme::TinMulticast:
      return run_tin_multicast(cfg, channels, training, o);
    case Scheme::FraWfPa:
      return run_fra_wf(cfg, channels, o);
  }
  throw std::invalid_argument("run_scheme: bad scheme");
}

}  // namespace rsmd
