#include "rsmd/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>
#include <omp.h>

namespace rsmd {

const char* sweep_var_name(SweepVar v) {
  switch (v) {
    case SweepVar::M: return "M";
    case SweepVar::L: return "L";
    case SweepVar::N: return "N";
    case SweepVar::Ith: return "I_th_dbm";
    case SweepVar::D: return "d";
  }
  return "?";
}

SweepVar sweep_var_from_name(const std::string& name) {
  for (SweepVar v : {SweepVar::M, SweepVar::L, SweepVar::N, SweepVar::Ith, SweepVar::D})
    if (name == sweep_var_name(v)) return v;
  throw std::invalid_argument("unknown sweep variable: " + name);
}

NetworkConfig apply_sweep(const NetworkConfig& base, SweepVar var, double value) {
  NetworkConfig cfg = base;
  switch (var) {
    case SweepVar::M: cfg.num_d2d_links = static_cast<int>(value); break;
    case SweepVar::L: cfg.num_errhs = static_cast<int>(value); break;
    case SweepVar::N:
      cfg.num_rrbs = static_cast<int>(value);
      cfg.num_cues = cfg.num_rrbs;  // one CUE per RRB
      break;
    case SweepVar::Ith: cfg.interference_threshold = dbm_to_watts(value); break;
    case SweepVar::D: cfg.pca_components = static_cast<int>(value); break;
  }
  return cfg;
}

namespace {

struct DropTask {
  int value_index;
  int drop;
};

std::vector<ResultRow> run_drop(const ExperimentSpec& spec, const NetworkConfig& cfg,
                                double value, int drop, bool parallel_inner) {
  const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(drop);
  std::vector<ResultRow> rows;

  NetworkConfig cfg_checked = cfg;
  try {
    cfg_checked.validate();
  } catch (const std::invalid_argument&) {
    for (Scheme s : spec.schemes) {
      ResultRow r;
      r.scheme = s;
      r.sweep_value = value;
      r.drop = drop;
      r.seed = seed;
      r.feasible = false;
      rows.push_back(r);
    }
    return rows;
  }

  const NetworkTopology topo = generate_topology(cfg_checked, seed);
  const ChannelRealization channels =
      sample_channels(topo, cfg_checked, mix_seed(seed, 1));
  std::vector<ChannelRealization> training;
  training.reserve(cfg_checked.training_samples);
  for (int i = 0; i < cfg_checked.training_samples; ++i)
    training.push_back(sample_channels(topo, cfg_checked, mix_seed(seed, 2 + i)));

  PipelineOptions popts = spec.pipeline;
  popts.parallel = parallel_inner;

  for (Scheme s : spec.schemes) {
    ResultRow r;
    r.scheme = s;
    r.sweep_value = value;
    r.drop = drop;
    r.seed = seed;
    r.channel_hash = channels.content_hash();
    const auto t0 = std::chrono::steady_clock::now();
    const RsmdResult out = run_scheme(s, cfg_checked, channels, training, popts);
    const auto t1 = std::chrono::steady_clock::now();
    r.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    r.sum_rate = out.sum_rate;
    r.total_power = out.total_power;
    r.converged = out.converged;
    r.clustering_objective = out.clustering_objective;
    double margin = 0;
    for (double i : out.per_rrb_interference)
      margin += (cfg_checked.interference_threshold - i) / cfg_checked.interference_threshold;
    r.interference_margin =
        out.per_rrb_interference.empty() ? 0 : margin / out.per_rrb_interference.size();
    rows.push_back(r);
  }
  return rows;
}

std::vector<ResultRow> run_all(const ExperimentSpec& spec, bool parallel) {
  std::vector<DropTask> tasks;
  for (int vi = 0; vi < static_cast<int>(spec.values.size()); ++vi)
    for (int d = 0; d < spec.num_drops; ++d) tasks.push_back({vi, d});

  std::vector<std::vector<ResultRow>> per_task(tasks.size());
  const int n_tasks = static_cast<int>(tasks.size());

  if (parallel) {
    // Drops are the outer parallel loop; the per-drop pipelines run serial
    // inside so results never depend on the worker count.
#pragma omp parallel for schedule(dynamic) num_threads(spec.workers > 0 ? spec.workers : omp_get_max_threads())
    for (int t = 0; t < n_tasks; ++t) {
      const NetworkConfig cfg =
          apply_sweep(spec.base, spec.var, spec.values[tasks[t].value_index]);
      per_task[t] =
          run_drop(spec, cfg, spec.values[tasks[t].value_index], tasks[t].drop, false);
    }
  } else {
    for (int t = 0; t < n_tasks; ++t) {
      const NetworkConfig cfg =
          apply_sweep(spec.base, spec.var, spec.values[tasks[t].value_index]);
      per_task[t] =
          run_drop(spec, cfg, spec.values[tasks[t].value_index], tasks[t].drop, false);
    }
  }

  std::vector<ResultRow> rows;
  for (auto& part : per_task)
    for (ResultRow& r : part) rows.push_back(r);
  return rows;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) { return run_all(spec, true); }
std::vector<ResultRow> run_experiment_serial(const ExperimentSpec& spec) {
  return run_all(spec, false);
}

// ---------------------------------------------------------------------------
// Spec and result files
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json config_to_json(const NetworkConfig& c) {
  return json{{"num_d2d_links", c.num_d2d_links},
              {"num_errhs", c.num_errhs},
              {"num_rrbs", c.num_rrbs},
              {"num_cues", c.num_cues},
              {"max_clusters_per_errh", c.max_clusters_per_errh},
              {"p_max_du_watts", c.p_max_du},
              {"p_max_errh_watts", c.p_max_errh},
              {"cue_power_watts", c.cue_power},
              {"interference_threshold_dbm", watts_to_dbm(c.interference_threshold)},
              {"noise_power_dbm", watts_to_dbm(c.noise_power)},
              {"mean_dist_errh_chdu_m", c.mean_dist_errh_chdu},
              {"mean_dist_errh_crdu_m", c.mean_dist_errh_crdu},
              {"mean_dist_errh_cbs_m", c.mean_dist_errh_cbs},
              {"mean_dist_chdu_cbs_m", c.mean_dist_chdu_cbs},
              {"mean_dist_errh_cue_m", c.mean_dist_errh_cue},
              {"mean_dist_cue_crdu_m", c.mean_dist_cue_crdu},
              {"pca_components", c.pca_components},
              {"pca_weight", c.pca_weight},
              {"training_samples", c.training_samples},
              {"rng_seed", c.rng_seed}};
}

NetworkConfig config_from_json(const json& j) {
  NetworkConfig c;
  c.num_d2d_links = j.value("num_d2d_links", c.num_d2d_links);
  c.num_errhs = j.value("num_errhs", c.num_errhs);
  c.num_rrbs = j.value("num_rrbs", c.num_rrbs);
  c.num_cues = j.value("num_cues", c.num_rrbs);
  c.max_clusters_per_errh = j.value("max_clusters_per_errh", c.max_clusters_per_errh);
  c.p_max_du = j.value("p_max_du_watts", c.p_max_du);
  c.p_max_errh = j.value("p_max_errh_watts", c.p_max_errh);
  c.cue_power = j.value("cue_power_watts", c.cue_power);
  if (j.contains("interference_threshold_dbm"))
    c.interference_threshold = dbm_to_watts(j["interference_threshold_dbm"].get<double>());
  if (j.contains("noise_power_dbm"))
    c.noise_power = dbm_to_watts(j["noise_power_dbm"].get<double>());
  c.mean_dist_errh_chdu = j.value("mean_dist_errh_chdu_m", c.mean_dist_errh_chdu);
  c.mean_dist_errh_crdu = j.value("mean_dist_errh_crdu_m", c.mean_dist_errh_crdu);
  c.mean_dist_errh_cbs = j.value("mean_dist_errh_cbs_m", c.mean_dist_errh_cbs);
  c.mean_dist_chdu_cbs = j.value("mean_dist_chdu_cbs_m", c.mean_dist_chdu_cbs);
  c.mean_dist_errh_cue = j.value("mean_dist_errh_cue_m", c.mean_dist_errh_cue);
  c.mean_dist_cue_crdu = j.value("mean_dist_cue_crdu_m", c.mean_dist_cue_crdu);
  c.pca_components = j.value("pca_components", c.pca_components);
  c.pca_weight = j.value("pca_weight", c.pca_weight);
  c.training_samples = j.value("training_samples", c.training_samples);
  c.rng_seed = j.value("rng_seed", c.rng_seed);
  return c;
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& json_text) {
  const json j = json::parse(json_text);
  ExperimentSpec s;
  if (j.contains("config")) s.base = config_from_json(j["config"]);
  s.var = sweep_var_from_name(j.value("sweep_variable", "M"));
  if (j.contains("sweep_values"))
    s.values = j["sweep_values"].get<std::vector<double>>();
  else
    s.values = {static_cast<double>(s.base.num_d2d_links)};
  if (j.contains("schemes")) {
    s.schemes.clear();
    for (const auto& name : j["schemes"]) s.schemes.push_back(scheme_from_name(name));
    if (s.schemes.empty()) throw std::invalid_argument("experiment spec: empty schemes");
  }
  s.num_drops = j.value("num_drops", 100);
  s.base_seed = j.value("base_seed", static_cast<std::uint64_t>(1));
  s.workers = j.value("workers", 0);
  if (s.num_drops < 1) throw std::invalid_argument("experiment spec: num_drops must be >= 1");
  if (s.values.empty()) throw std::invalid_argument("experiment spec: empty sweep_values");
  return s;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open experiment spec: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_experiment_spec(buf.str());
}

void write_rows_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  f << "schema_version,scheme,sweep_value,drop,seed,feasible,sum_rate,total_power,"
       "interference_margin,clustering_objective,converged,runtime_ms,channel_hash\n";
  f << std::setprecision(17);
  for (const ResultRow& r : rows)
    f << kResultSchemaVersion << ',' << scheme_name(r.scheme) << ',' << r.sweep_value << ','
      << r.drop << ',' << r.seed << ',' << (r.feasible ? 1 : 0) << ',' << r.sum_rate << ','
      << r.total_power << ',' << r.interference_margin << ',' << r.clustering_objective << ','
      << (r.converged ? 1 : 0) << ',' << r.runtime_ms << ',' << r.channel_hash << '\n';
}

std::vector<ResultRow> read_rows_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open rows file: " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty rows file: " + path);
  std::vector<ResultRow> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    auto next = [&]() {
      if (!std::getline(ss, field, ',')) throw std::runtime_error("short row in " + path);
      return field;
    };
    ResultRow r;
    const int ver = std::stoi(next());
    if (ver != kResultSchemaVersion) throw std::runtime_error("unsupported schema version");
    r.scheme = scheme_from_name(next());
    r.sweep_value = std::stod(next());
    r.drop = std::stoi(next());
    r.seed = std::stoull(next());
    r.feasible = std::stoi(next()) != 0;
    r.sum_rate = std::stod(next());
    r.total_power = std::stod(next());
    r.interference_margin = std::stod(next());
    r.clustering_objective = std::stod(next());
    r.converged = std::stoi(next()) != 0;
    r.runtime_ms = std::stod(next());
    r.channel_hash = std::stoull(next());
    rows.push_back(r);
  }
  return rows;
}

void write_spec_sidecar(const ExperimentSpec& spec, const std::string& path) {
  json j;
  j["schema_version"] = kResultSchemaVersion;
  j["config"] = config_to_json(spec.base);
  j["sweep_variable"] = sweep_var_name(spec.var);
  j["sweep_values"] = spec.values;
  std::vector<std::string> names;
  for (Scheme s : spec.schemes) names.emplace_back(scheme_name(s));
  j["schemes"] = names;
  j["num_drops"] = spec.num_drops;
  j["base_seed"] = spec.base_seed;
  j["workers"] = spec.workers;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open sidecar file: " + path);
  f << j.dump(2) << '\n';
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, Scheme reference) {
  if (rows.empty()) throw std::invalid_argument("summarize: no rows");
  std::map<std::pair<double, std::string>, std::vector<const ResultRow*>> groups;
  for (const ResultRow& r : rows)
    if (r.feasible) groups[{r.sweep_value, scheme_name(r.scheme)}].push_back(&r);

  std::map<double, double> ref_mean;
  for (const auto& [key, g] : groups) {
    if (key.second != scheme_name(reference)) continue;
    double m = 0;
    for (const ResultRow* r : g) m += r->sum_rate;
    ref_mean[key.first] = m / g.size();
  }

  std::vector<SummaryRow> out;
  for (const auto& [key, g] : groups) {
    SummaryRow s;
    s.sweep_value = key.first;
    s.scheme = key.second;
    s.n = static_cast<int>(g.size());
    for (const ResultRow* r : g) {
      s.mean_sum_rate += r->sum_rate;
      s.mean_total_power += r->total_power;
    }
    s.mean_sum_rate /= s.n;
    s.mean_total_power /= s.n;
    double var = 0;
    for (const ResultRow* r : g) {
      const double d = r->sum_rate - s.mean_sum_rate;
      var += d * d;
    }
    s.ci95 = s.n > 1 ? 1.96 * std::sqrt(var / (s.n - 1) / s.n) : 0.0;
    if (auto it = ref_mean.find(key.first); it != ref_mean.end() && it->second != 0)
      s.gain_vs_ref_pct = (s.mean_sum_rate - it->second) / it->second * 100.0;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return a.sweep_value != b.sweep_value ? a.sweep_value < b.sweep_value : a.scheme < b.scheme;
  });
  return out;
}

std::string format_summary(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(28) << "scheme" << std::right << std::setw(12) << "value"
     << std::setw(8) << "n" << std::setw(14) << "mean_rate" << std::setw(12) << "ci95"
     << std::setw(14) << "mean_power" << std::setw(12) << "gain_%" << '\n';
  os << std::fixed;
  for (const SummaryRow& r : rows)
    os << std::left << std::setw(28) << r.scheme << std::right << std::setw(12)
       << std::setprecision(3) << r.sweep_value << std::setw(8) << r.n << std::setw(14)
       << std::setprecision(4) << r.mean_sum_rate << std::setw(12) << r.ci95 << std::setw(14)
       << std::setprecision(5) << r.mean_total_power << std::setw(12) << std::setprecision(2)
       << r.gain_vs_ref_pct << '\n';
  return os.str();
}

}  // namespace rsmd
