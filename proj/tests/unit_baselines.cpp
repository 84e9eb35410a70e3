#include <doctest.h>

#include <cmath>
#include <random>

#include "rsmd/baselines.hpp"

using namespace rsmd;

namespace {

NetworkConfig small_config() {
  NetworkConfig cfg;
  cfg.num_d2d_links = 6;
  cfg.num_errhs = 2;
  cfg.num_rrbs = 6;
  cfg.num_cues = 6;
  cfg.max_clusters_per_errh = 2;
  cfg.training_samples = 4;
  cfg.pca_components = 2;
  return cfg;
}

struct Instance {
  NetworkTopology topo;
  ChannelRealization channels;
  std::vector<ChannelRealization> training;
};

Instance make_instance(const NetworkConfig& cfg, std::uint64_t seed) {
  Instance in;
  in.topo = generate_topology(cfg, seed);
  in.channels = sample_channels(in.topo, cfg, mix_seed(seed, 1));
  for (int i = 0; i < cfg.training_samples; ++i)
    in.training.push_back(sample_channels(in.topo, cfg, mix_seed(seed, 2 + i)));
  return in;
}

ClusterChannels symmetric_downlink(double h1, double h2, double g) {
  ClusterChannels ch;
  ch.h1 = h1;
  ch.h2 = h2;
  ch.g1 = ch.g2 = g;
  ch.noise = 1.0;
  return ch;
}

}  // namespace

TEST_CASE("scheme names round-trip") {
  for (Scheme s : {Scheme::Rsmd, Scheme::PdNomaOpt, Scheme::TinMulticast, Scheme::FraWfPa,
                   Scheme::RsmdExhaustive, Scheme::RsmdGlobalCsi})
    CHECK(scheme_from_name(scheme_name(s)) == s);
  CHECK_THROWS_AS(scheme_from_name("bogus"), std::invalid_argument);
}

TEST_CASE("NOMA first hop attains the MAC sum capacity") {
  // with full SIC the two uplink rates telescope for any powers
  std::mt19937_64 rng(71);
  std::exponential_distribution<double> ex(1.0);
  for (int t = 0; t < 100; ++t) {
    const double h1 = ex(rng) + 0.2, h2 = ex(rng) + 0.1, ic = 0.5 + ex(rng);
    const double ps = ex(rng), pw = ex(rng);
    const double r1 = half_log2_1p(ps * h1 / (pw * h2 + ic));
    const double r2 = half_log2_1p(pw * h2 / ic);
    const double mac = half_log2_1p((ps * h1 + pw * h2) / ic);
    CHECK(std::abs(r1 + r2 - mac) <= 1e-10 * std::max(1.0, mac));
  }
}

TEST_CASE("RS and NOMA coincide on a symmetric two-user downlink") {
  // equal second-hop gains: both schemes reach the broadcast sum capacity,
  // so with the first hop and caps shared the balanced E2E rates agree
  ClusterAllocationProblem rs_prob;
  rs_prob.rrbs = {0};
  rs_prob.prices = {0.0};
  rs_prob.p_max_du = 1.0;
  rs_prob.p_max_errh = 1.0;
  rs_prob.channels = {symmetric_downlink(3.0, 2.0, 1.5)};
  const BrsResult rs = solve_brs(rs_prob);

  FpProblem noma;
  noma.n_vars = 4;
  noma.sigma_group = {0, 1, 2, 2};
  noma.caps = {1.0, 1.0, 1.0};
  noma.prices = {0.0};
  const ClusterChannels& ch = rs_prob.channels[0];
  FpRrb rrb;
  rrb.fractions.push_back({1, 0, ch.h1, {0, ch.h2, 0, 0}, ch.noise});
  rrb.fractions.push_back({1, 1, ch.h2, {0, 0, 0, 0}, ch.noise});
  rrb.fractions.push_back({2, 3, ch.g2, {0, 0, ch.g2, 0}, ch.noise});
  rrb.fractions.push_back({2, 2, ch.g1, {0, 0, 0, 0}, ch.noise});
  noma.rrbs = {rrb};
  const FpResult fp = solve_fp(noma);

  const double rs_e2e = e2e_rate(rs.powers[0], ch);
  const double noma_e2e = std::min(fp.hop1_rate[0], fp.hop2_rate[0]);
  CHECK(rs_e2e == doctest::Approx(noma_e2e).epsilon(0.02));
}

TEST_CASE("TIN reductions") {
  SUBCASE("one active CH DU gives the single-user rate") {
    ClusterChannels ch;
    ch.single_link = true;
    ch.h1 = 2.0;
    ch.g1 = 1.0;
    ch.noise = 1.0;
    // a lone transmitter sees no intra-cluster interference under TIN
    const double p = 0.7;
    const double r_tin = half_log2_1p(p * ch.h1 / ch.noise);
    const double r_single = half_log2_1p(p * ch.h1 / ch.noise);
    CHECK(r_tin == doctest::Approx(r_single));
  }

  SUBCASE("multicast rate is pinned by the weaker receiver") {
    ClusterChannels ch;
    ch.h1 = ch.h2 = 1.0;
    ch.g1 = 50.0;
    ch.g2 = 0.5;
    ch.noise = 1.0;
    CHECK(common_message_receiver(ch) == 2);
    // the multicast fraction must use g2
    HopPowers pw;
    pw.qc = 1.0;
    const SecondHopRates r = second_hop_rates(pw, ch);
    CHECK(r.rc == doctest::Approx(half_log2_1p(1.0 * 0.5 / 1.0)));
  }
}

TEST_CASE("benchmark pipelines run and keep C4") {
  NetworkConfig cfg = small_config();
  const Instance in = make_instance(cfg, 29);

  for (Scheme s : {Scheme::PdNomaOpt, Scheme::TinMulticast}) {
    const RsmdResult r = run_scheme(s, cfg, in.channels, in.training, {});
    CHECK(r.sum_rate > 0.0);
    for (int j = 0; j < r.clusters.num_clusters(); ++j) {
      double du_strong = 0, du_weak = 0, errh = 0;
      for (const HopPowers& pw : r.powers[j]) {
        du_strong += pw.du_strong();
        du_weak += pw.du_weak();
        errh += pw.errh_total();
      }
      CHECK(du_strong <= cfg.p_max_du * 1.01);
      CHECK(du_weak <= cfg.p_max_du * 1.01);
      CHECK(errh <= cfg.errh_power_budget() * 1.01);
    }
    if (r.converged)
      for (double i : r.per_rrb_interference)
        CHECK(i <= cfg.interference_threshold * 1.05 * (1 + 1e-9));
  }
}

TEST_CASE("RS dominates NOMA per cluster subproblem") {
  NetworkConfig cfg = small_config();
  const Instance in = make_instance(cfg, 31);
  const auto s1 = form_clusters(cfg, in.training, ClusteringMode::Pca);
  const auto members = cluster_members(s1.clusters);
  const auto rs = make_rs_solver(cfg, in.channels, members);
  const auto noma = make_noma_solver(cfg, in.channels, members);
  for (int j = 0; j < s1.clusters.num_clusters(); ++j)
    for (int n = 0; n < 3; ++n) {
      const auto a = rs(j, 0, {n}, {0.0}, 300);
      const auto b = noma(j, 0, {n}, {0.0}, 300);
      CHECK(a.rrb[0].e2e >= b.rrb[0].e2e - 5e-3);
    }
}

TEST_CASE("water filling") {
  SUBCASE("budget and KKT water level") {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(0.2, 4.0);
    for (int t = 0; t < 50; ++t) {
      std::vector<double> g(4), mu(4);
      for (int k = 0; k < 4; ++k) {
        g[k] = u(rng);
        mu[k] = 0.05 * u(rng);
      }
      const double budget = 0.8;
      const auto p = water_fill(g, mu, budget);
      double total = 0;
      for (double v : p) total += v;
      CHECK(total <= budget * (1 + 1e-9));

      // marginal utilities of active channels agree to 1e-6
      const double inv2ln2 = 1.0 / (2.0 * std::log(2.0));
      double level = -1;
      for (int k = 0; k < 4; ++k) {
        if (p[k] <= 0) continue;
        const double marg = inv2ln2 * g[k] / (1 + p[k] * g[k]) - mu[k];
        if (level < 0)
          level = marg;
        else
          CHECK(std::abs(marg - level) <= 1e-6 * std::max(1.0, level));
      }
    }
  }

  SUBCASE("slack budget with positive prices needs no water level") {
    const auto p = water_fill({2.0, 1.0}, {1.0, 1.0}, 100.0);
    const double inv2ln2 = 1.0 / (2.0 * std::log(2.0));
    CHECK(p[0] == doctest::Approx(std::max(0.0, inv2ln2 / 1.0 - 0.5)));
  }
}

TEST_CASE("FRA link activation and saturation") {
  NetworkConfig cfg = small_config();  // L*N_R = 4 < N = 6

  SUBCASE("supportable links only") {
    const Instance in = make_instance(cfg, 37);
    const RsmdResult r = run_fra_wf(cfg, in.channels);
    CHECK(static_cast<int>(r.cluster_rrbs.size()) == 4);  // min(M, N, L*N_R)
    int covered = 0;
    for (const auto& rrbs : r.cluster_rrbs) covered += static_cast<int>(rrbs.size());
    CHECK(covered == cfg.num_rrbs);
    CHECK(r.sum_rate > 0.0);
  }

  SUBCASE("one RRB per link when M equals N") {
    NetworkConfig even = cfg;
    even.num_d2d_links = 4;
    even.num_rrbs = 4;
    even.num_cues = 4;
    const Instance in = make_instance(even, 41);
    const RsmdResult r = run_fra_wf(even, in.channels);
    for (const auto& rrbs : r.cluster_rrbs) CHECK(rrbs.size() == 1);
  }

  SUBCASE("eRRH capacity respected") {
    const Instance in = make_instance(cfg, 43);
    const RsmdResult r = run_fra_wf(cfg, in.channels);
    std::vector<int> per_errh(cfg.num_errhs, 0);
    for (int l : r.allocation.cluster_errh) ++per_errh[l];
    for (int l = 0; l < cfg.num_errhs; ++l) CHECK(per_errh[l] <= cfg.max_clusters_per_errh);
  }
}
