#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rsmd/util.hpp"

namespace rsmd {

// Static configuration of a single F-RAN drop. Powers are stored in watts;
// the interference threshold and noise floor are configured in dBm and
// converted to linear watts at load time.
struct NetworkConfig {
  int num_d2d_links = 50;        // M
  int num_errhs = 10;            // L
  int num_rrbs = 36;             // N
  int num_cues = 36;             // C, one CUE per RRB
  int max_clusters_per_errh = 5; // N_R
  double p_max_du = 0.5;         // W, per CH DU
  double p_max_errh = 0.5;       // W, per eRRH
  double cue_power = 0.5;        // W, fixed uplink power per CUE
  double interference_threshold = dbm_to_watts(-80.0);  // W
  double noise_power = dbm_to_watts(-174.0);            // W

  // mean link distances in meters
  double mean_dist_errh_chdu = 100.0;
  double mean_dist_errh_crdu = 100.0;
  double mean_dist_errh_cbs = 200.0;
  double mean_dist_chdu_cbs = 200.0;
  double mean_dist_errh_cue = 160.0;
  double mean_dist_cue_crdu = 230.0;

  int pca_components = 4;    // d
  double pca_weight = 0.5;   // w
  int training_samples = 20; // I
  std::uint64_t rng_seed = 1;

  int num_clusters() const { return (num_d2d_links + 1) / 2; }
  // C4 budget of one eRRH per served cluster
  double errh_power_budget() const { return p_max_errh / max_clusters_per_errh; }

  // Throws std::invalid_argument on an infeasible configuration.
  void validate() const;
};

// Parses the documented key=value config format ('#' starts a comment).
NetworkConfig load_network_config(const std::string& path);
NetworkConfig parse_network_config(const std::string& text);

// Node geometry of one drop: every transmitter-receiver distance consumed by
// sample_channels, in meters.
struct NetworkTopology {
  std::vector<std::vector<double>> dist_chdu_errh;  // [M][L]
  std::vector<std::vector<double>> dist_crdu_errh;  // [M][L]
  std::vector<std::vector<double>> dist_cue_errh;   // [C][L]
  std::vector<std::vector<double>> dist_cue_crdu;   // [C][M]
  std::vector<double> dist_chdu_cbs;                // [M]
  std::vector<double> dist_errh_cbs;                // [L]
  std::vector<int> cue_rrb_map;                     // [C] -> RRB
};

// All squared channel-gain magnitudes of one fading realization.
struct ChannelRealization {
  int M = 0, L = 0, N = 0;
  std::vector<double> h;          // CH DU m -> eRRH l, RRB n
  std::vector<double> g;          // eRRH l -> CR DU m, RRB n
  std::vector<double> h_cue;      // CUE of RRB n -> eRRH l
  std::vector<double> g_cue;      // CUE of RRB n -> CR DU m
  std::vector<double> h_cbs_du;   // CH DU m -> CBS, RRB n
  std::vector<double> h_cbs_errh; // eRRH l -> CBS, RRB n

  double hh(int m, int l, int n) const { return h[(static_cast<std::size_t>(m) * L + l) * N + n]; }
  double gg(int m, int l, int n) const { return g[(static_cast<std::size_t>(m) * L + l) * N + n]; }
  double cue_to_errh(int l, int n) const { return h_cue[static_cast<std::size_t>(l) * N + n]; }
  double cue_to_crdu(int m, int n) const { return g_cue[static_cast<std::size_t>(m) * N + n]; }
  double du_to_cbs(int m, int n) const { return h_cbs_du[static_cast<std::size_t>(m) * N + n]; }
  double errh_to_cbs(int l, int n) const { return h_cbs_errh[static_cast<std::size_t>(l) * N + n]; }

  std::uint64_t content_hash() const;
};

// 3GPP path loss, distance in kilometers. Throws std::domain_error for a
// non-positive distance.
double path_loss_db(double distance_km);
// Linear power attenuation for a distance in meters.
double path_loss_linear(double distance_m);

// Distances drawn from Poisson(mean) in integer meters, clamped at >= 1 m.
// Deterministic for a fixed (config, seed).
NetworkTopology generate_topology(const NetworkConfig& cfg, std::uint64_t seed);

// Squared gain = path-loss attenuation x unit-mean exponential fade, i.i.d.
// across RRBs and node pairs. Deterministic per seed.
ChannelRealization sample_channels(const NetworkTopology& topo, const NetworkConfig& cfg,
                                   std::uint64_t seed);

}  // namespace rsmd
