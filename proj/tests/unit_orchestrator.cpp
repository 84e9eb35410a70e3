#include <doctest.h>

#include <cmath>

#include "rsmd/orchestrator.hpp"

using namespace rsmd;

namespace {

NetworkConfig tiny_config() {
  NetworkConfig cfg;
  cfg.num_d2d_links = 2;
  cfg.num_errhs = 1;
  cfg.num_rrbs = 2;
  cfg.num_cues = 2;
  cfg.max_clusters_per_errh = 1;
  cfg.training_samples = 3;
  cfg.pca_components = 2;
  return cfg;
}

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

}  // namespace

TEST_CASE("cluster link view ordering") {
  NetworkConfig cfg = tiny_config();
  const Instance in = make_instance(cfg, 3);
  const ClusterLinkView v = cluster_link_view(in.channels, cfg, {0, 1}, 0, 0);
  CHECK(v.ch.h1 >= v.ch.h2);
  CHECK(v.ch.noise == cfg.noise_power);
  CHECK(v.ch.i_up == doctest::Approx(cfg.cue_power * in.channels.cue_to_errh(0, 0)));

  const ClusterLinkView s = cluster_link_view(in.channels, cfg, {1, -1}, 0, 1);
  CHECK(s.ch.single_link);
  CHECK(s.ch.h2 == 0.0);
  CHECK(s.cbs_du2 == 0.0);
}

TEST_CASE("degenerate drop: one cluster, one eRRH, slack threshold") {
  NetworkConfig cfg = tiny_config();
  cfg.interference_threshold = 1.0;  // effectively unconstrained
  const Instance in = make_instance(cfg, 7);
  const RsmdResult r = run_rsmd(cfg, in.channels, in.training);
  CHECK(r.converged);
  CHECK(r.price_sweeps == 1);
  CHECK(r.clusters.pairs.size() == 1);
  CHECK(r.allocation.rrb_cluster == std::vector<int>{0, 0});
  for (double mu : r.allocation.prices) CHECK(mu == 0.0);
  CHECK(r.sum_rate > 0.0);
  CHECK(r.message_count == 1 * 1 * 2 + 1 * 2);
}

TEST_CASE("near-zero threshold forces silence") {
  NetworkConfig cfg = tiny_config();
  cfg.interference_threshold = 1e-30;
  const Instance in = make_instance(cfg, 7);
  const RsmdResult r = run_rsmd(cfg, in.channels, in.training);
  CHECK(r.total_power <= 1e-2);
  CHECK(r.sum_rate <= 1.0);
}

TEST_CASE("pipeline determinism across worker counts") {
  NetworkConfig cfg = small_config();
  const Instance in = make_instance(cfg, 11);
  PipelineOptions par;
  par.parallel = true;
  PipelineOptions ser;
  ser.parallel = false;
  const RsmdResult a = run_rsmd(cfg, in.channels, in.training, par);
  const RsmdResult b = run_rsmd(cfg, in.channels, in.training, ser);
  CHECK(a.sum_rate == b.sum_rate);
  CHECK(a.total_power == b.total_power);
  CHECK(a.allocation.rrb_cluster == b.allocation.rrb_cluster);
  CHECK(a.allocation.prices == b.allocation.prices);
}

TEST_CASE("full run invariants at a binding threshold") {
  NetworkConfig cfg = small_config();
  cfg.interference_threshold = dbm_to_watts(-80.0);
  const Instance in = make_instance(cfg, 13);
  const RsmdResult r = run_rsmd(cfg, in.channels, in.training);

  // C2/C3 structure
  std::vector<int> per_errh(cfg.num_errhs, 0), held(r.clusters.num_clusters(), 0);
  for (int l : r.allocation.cluster_errh) ++per_errh[l];
  for (int l = 0; l < cfg.num_errhs; ++l) CHECK(per_errh[l] <= cfg.max_clusters_per_errh);
  for (int j : r.allocation.rrb_cluster) ++held[j];
  for (int j = 0; j < r.clusters.num_clusters(); ++j) CHECK(held[j] >= 1);

  // stage isolation: the refinement never reassigns
  for (int j = 0; j < r.clusters.num_clusters(); ++j)
    for (int n : r.cluster_rrbs[j]) CHECK(r.allocation.rrb_cluster[n] == j);

  // C5 within tolerance when converged
  if (r.converged)
    for (double i : r.per_rrb_interference)
      CHECK(i <= cfg.interference_threshold * 1.05 * (1 + 1e-9));

  // message accounting
  const long long jln = static_cast<long long>(r.clusters.num_clusters()) * cfg.num_errhs *
                        cfg.num_rrbs;
  CHECK(r.message_count == jln + static_cast<long long>(r.price_sweeps) * cfg.num_rrbs);

  // assignment objective trace non-decreasing
  for (std::size_t i = 1; i < r.assignment_trace.size(); ++i)
    CHECK(r.assignment_trace[i] >= r.assignment_trace[i - 1] - 1e-12);
}

TEST_CASE("stackelberg stationarity of a converged run") {
  NetworkConfig cfg = small_config();
  const Instance in = make_instance(cfg, 17);
  const RsmdResult r = run_rsmd(cfg, in.channels, in.training);
  REQUIRE(r.converged);
  const StationarityReport rep = check_stackelberg_stationarity(r, in.channels, cfg);
  CHECK(rep.c5_ok);
  int passed = 0;
  for (bool b : rep.cluster_pass) passed += b ? 1 : 0;
  CHECK(passed == static_cast<int>(rep.cluster_pass.size()));
  CHECK(rep.pass);
}

TEST_CASE("odd link count leaves a singleton cluster in the pipeline") {
  NetworkConfig cfg = small_config();
  cfg.num_d2d_links = 5;
  const Instance in = make_instance(cfg, 19);
  const RsmdResult r = run_rsmd(cfg, in.channels, in.training);
  CHECK(r.clusters.leftover >= 0);
  CHECK(r.clusters.num_clusters() == 3);
  CHECK(r.sum_rate > 0.0);
  // the singleton's weak-side streams stay dark
  const int j_single = r.clusters.num_clusters() - 1;
  for (const HopPowers& pw : r.powers[j_single]) {
    CHECK(pw.p2 == 0.0);
    CHECK(pw.q2 == 0.0);
  }
}

TEST_CASE("clustering modes") {
  NetworkConfig cfg = small_config();
  const Instance in = make_instance(cfg, 23);
  PipelineOptions ex;
  ex.clustering = ClusteringMode::Exhaustive;
  const RsmdResult r_ex = run_rsmd(cfg, in.channels, in.training, ex);
  PipelineOptions pca;
  const RsmdResult r_pca = run_rsmd(cfg, in.channels, in.training, pca);
  // the exhaustive pairing optimizes the clustering objective
  CHECK(r_ex.clustering_objective <= r_pca.clustering_objective + 1e-12);

  PipelineOptions gc;
  gc.clustering = ClusteringMode::GlobalCsi;
  const RsmdResult r_gc = run_rsmd(cfg, in.channels, in.training, gc);
  CHECK(r_gc.sum_rate > 0.0);
}
