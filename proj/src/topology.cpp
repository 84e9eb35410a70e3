#include "rsmd/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rsmd {

void NetworkConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("NetworkConfig: " + msg); };
  if (num_d2d_links < 2) fail("num_d2d_links must be >= 2");
  if (num_errhs < 1) fail("num_errhs must be >= 1");
  if (num_rrbs < 1) fail("num_rrbs must be >= 1");
  if (max_clusters_per_errh < 1) fail("max_clusters_per_errh must be >= 1");
  if (p_max_du <= 0 || p_max_errh <= 0 || cue_power <= 0) fail("powers must be positive");
  if (interference_threshold <= 0) fail("interference_threshold must be positive");
  if (noise_power <= 0) fail("noise_power must be positive");
  if (!(pca_weight > 0.0 && pca_weight < 1.0)) fail("pca_weight must lie in (0, 1)");
  if (pca_components < 1 || pca_components > num_rrbs) fail("pca_components must lie in [1, N]");
  if (training_samples < 2) fail("training_samples must be >= 2");
  if (num_cues != num_rrbs) fail("num_cues must equal num_rrbs (one CUE per RRB)");
  const int clusters = num_clusters();
  if (clusters > num_errhs * max_clusters_per_errh)
    fail("ceil(M/2) exceeds L*N_R (C2 infeasible)");
  if (clusters > num_rrbs) fail("ceil(M/2) exceeds N (C3 infeasible)");
  for (double d : {mean_dist_errh_chdu, mean_dist_errh_crdu, mean_dist_errh_cbs,
                   mean_dist_chdu_cbs, mean_dist_errh_cue, mean_dist_cue_crdu})
    if (d <= 0) fail("mean distances must be positive");
}

namespace {

const std::map<std::string, int NetworkConfig::*>& int_keys() {
  static const std::map<std::string, int NetworkConfig::*> k = {
      {"num_d2d_links", &NetworkConfig::num_d2d_links},
      {"num_errhs", &NetworkConfig::num_errhs},
      {"num_rrbs", &NetworkConfig::num_rrbs},
      {"num_cues", &NetworkConfig::num_cues},
      {"max_clusters_per_errh", &NetworkConfig::max_clusters_per_errh},
      {"pca_components", &NetworkConfig::pca_components},
      {"training_samples", &NetworkConfig::training_samples},
  };
  return k;
}

const std::map<std::string, double NetworkConfig::*>& double_keys() {
  static const std::map<std::string, double NetworkConfig::*> k = {
      {"p_max_du_watts", &NetworkConfig::p_max_du},
      {"p_max_errh_watts", &NetworkConfig::p_max_errh},
      {"cue_power_watts", &NetworkConfig::cue_power},
      {"mean_dist_errh_chdu_m", &NetworkConfig::mean_dist_errh_chdu},
      {"mean_dist_errh_crdu_m", &NetworkConfig::mean_dist_errh_crdu},
      {"mean_dist_errh_cbs_m", &NetworkConfig::mean_dist_errh_cbs},
      {"mean_dist_chdu_cbs_m", &NetworkConfig::mean_dist_chdu_cbs},
      {"mean_dist_errh_cue_m", &NetworkConfig::mean_dist_errh_cue},
      {"mean_dist_cue_crdu_m", &NetworkConfig::mean_dist_cue_crdu},
      {"pca_weight", &NetworkConfig::pca_weight},
  };
  return k;
}

}  // namespace

NetworkConfig parse_network_config(const std::string& text) {
  NetworkConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string val = line.substr(eq + 1);
    auto strip = [](std::string s) {
      const auto b2 = s.find_first_not_of(" \t");
      const auto e2 = s.find_last_not_of(" \t");
      return b2 == std::string::npos ? std::string() : s.substr(b2, e2 - b2 + 1);
    };
    key = strip(key);
    val = strip(val);
    try {
      if (auto it = int_keys().find(key); it != int_keys().end()) {
        cfg.*(it->second) = std::stoi(val);
      } else if (auto dt = double_keys().find(key); dt != double_keys().end()) {
        cfg.*(dt->second) = std::stod(val);
      } else if (key == "interference_threshold_dbm") {
        cfg.interference_threshold = dbm_to_watts(std::stod(val));
      } else if (key == "noise_power_dbm") {
        cfg.noise_power = dbm_to_watts(std::stod(val));
      } else if (key == "rng_seed") {
        cfg.rng_seed = std::stoull(val);
      } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  cfg.validate();
  return cfg;
}

NetworkConfig load_network_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_network_config(buf.str());
}

double path_loss_db(double distance_km) {
  if (distance_km <= 0.0) throw std::domain_error("path_loss_db: distance must be positive");
  return 131.1 + 42.8 * std::log10(distance_km);
}

double path_loss_linear(double distance_m) {
  return db_to_linear(-path_loss_db(distance_m * 1e-3));
}

namespace {

double draw_distance(std::mt19937_64& rng, double mean_m) {
  std::poisson_distribution<int> dist(mean_m);
  return std::max(1, dist(rng));
}

std::vector<std::vector<double>> draw_table(std::mt19937_64& rng, int rows, int cols, double mean) {
  std::vector<std::vector<double>> t(rows, std::vector<double>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t[i][j] = draw_distance(rng, mean);
  return t;
}

}  // namespace

NetworkTopology generate_topology(const NetworkConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(mix_seed(seed, 0x70b0));
  NetworkTopology t;
  const int M = cfg.num_d2d_links, L = cfg.num_errhs, C = cfg.num_cues;
  t.dist_chdu_errh = draw_table(rng, M, L, cfg.mean_dist_errh_chdu);
  t.dist_crdu_errh = draw_table(rng, M, L, cfg.mean_dist_errh_crdu);
  t.dist_cue_errh = draw_table(rng, C, L, cfg.mean_dist_errh_cue);
  t.dist_cue_crdu = draw_table(rng, C, M, cfg.mean_dist_cue_crdu);
  t.dist_chdu_cbs.resize(M);
  for (int m = 0; m < M; ++m) t.dist_chdu_cbs[m] = draw_distance(rng, cfg.mean_dist_chdu_cbs);
  t.dist_errh_cbs.resize(L);
  for (int l = 0; l < L; ++l) t.dist_errh_cbs[l] = draw_distance(rng, cfg.mean_dist_errh_cbs);
  t.cue_rrb_map.resize(C);
  for (int c = 0; c < C; ++c) t.cue_rrb_map[c] = c;
  return t;
}

ChannelRealization sample_channels(const NetworkTopology& topo, const NetworkConfig& cfg,
                                   std::uint64_t seed) {
  const int M = cfg.num_d2d_links, L = cfg.num_errhs, N = cfg.num_rrbs;
  if (static_cast<int>(topo.dist_chdu_errh.size()) != M ||
      static_cast<int>(topo.dist_chdu_errh.at(0).size()) != L)
    throw std::invalid_argument("sample_channels: topology inconsistent with config");

  std::mt19937_64 rng(mix_seed(seed, 0xc4a2));
  std::exponential_distribution<double> fade(1.0);

  ChannelRealization ch;
  ch.M = M;
  ch.L = L;
  ch.N = N;
  ch.h.resize(static_cast<std::size_t>(M) * L * N);
  ch.g.resize(static_cast<std::size_t>(M) * L * N);
  ch.h_cue.resize(static_cast<std::size_t>(L) * N);
  ch.g_cue.resize(static_cast<std::size_t>(M) * N);
  ch.h_cbs_du.resize(static_cast<std::size_t>(M) * N);
  ch.h_cbs_errh.resize(static_cast<std::size_t>(L) * N);

  auto gain = [&](double dist_m) { return path_loss_linear(dist_m) * fade(rng); };

  for (int m = 0; m < M; ++m)
    for (int l = 0; l < L; ++l)
      for (int n = 0; n < N; ++n) {
        ch.h[(static_cast<std::size_t>(m) * L + l) * N + n] = gain(topo.dist_chdu_errh[m][l]);
        ch.g[(static_cast<std::size_t>(m) * L + l) * N + n] = gain(topo.dist_crdu_errh[m][l]);
      }

  // CUE of RRB n is topo.cue_rrb_map^{-1}(n); the map is the identity here,
  // kept explicit so the indexing stays honest if that ever changes.
  std::vector<int> cue_of_rrb(N, -1);
  for (std::size_t c = 0; c < topo.cue_rrb_map.size(); ++c) cue_of_rrb.at(topo.cue_rrb_map[c]) = static_cast<int>(c);

  for (int l = 0; l < L; ++l)
    for (int n = 0; n < N; ++n)
      ch.h_cue[static_cast<std::size_t>(l) * N + n] = gain(topo.dist_cue_errh[cue_of_rrb[n]][l]);
  for (int m = 0; m < M; ++m)
    for (int n = 0; n < N; ++n)
      ch.g_cue[static_cast<std::size_t>(m) * N + n] = gain(topo.dist_cue_crdu[cue_of_rrb[n]][m]);
  for (int m = 0; m < M; ++m)
    for (int n = 0; n < N; ++n)
      ch.h_cbs_du[static_cast<std::size_t>(m) * N + n] = gain(topo.dist_chdu_cbs[m]);
  for (int l = 0; l < L; ++l)
    for (int n = 0; n < N; ++n)
      ch.h_cbs_errh[static_cast<std::size_t>(l) * N + n] = gain(topo.dist_errh_cbs[l]);
  return ch;
}

std::uint64_t ChannelRealization::content_hash() const {
  std::uint64_t s = fnv1a(h);
  s = fnv1a(g, s);
  s = fnv1a(h_cue, s);
  s = fnv1a(g_cue, s);
  s = fnv1a(h_cbs_du, s);
  s = fnv1a(h_cbs_errh, s);
  return s;
}

}  // namespace rsmd
