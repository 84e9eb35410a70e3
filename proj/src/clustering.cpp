#include "rsmd/clustering.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace rsmd {

double feature_distance(const FeatureMatrix& a, const FeatureMatrix& b, double w) {
  if (w < 0.0 || w > 1.0) throw std::invalid_argument("feature_distance: w outside [0, 1]");
  return w * frobenius_distance(a.b2, b.b2) + (1.0 - w) * frobenius_distance(a.b1, b.b1);
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat distance_matrix(const std::vector<FeatureMatrix>& features, double w) {
  const int m = static_cast<int>(features.size());
  Mat d(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) d(i, j) = d(j, i) = feature_distance(features[i], features[j], w);
  return d;
}

double pair_distance(const Mat& d, const std::pair<int, int>& p) { return d(p.first, p.second); }

// Swap pass: applies cross-swaps between cluster pairs while any strictly
// reduces the summed pair distance. Terminates because that sum strictly
// decreases with each applied swap.
void swap_to_fixed_point(std::vector<std::pair<int, int>>& pairs, const Mat& d) {
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t j = 0; j < pairs.size(); ++j)
      for (std::size_t k = j + 1; k < pairs.size(); ++k) {
        auto& [m, mk] = pairs[j];
        auto& [m2, mk2] = pairs[k];
        const double cur = d(m, mk) + d(m2, mk2);
        if (d(m, mk2) + d(m2, mk) < cur) {
          std::swap(mk, mk2);
          improved = true;
        } else if (d(m, m2) + d(mk, mk2) < cur) {
          std::swap(mk, m2);
          improved = true;
        }
      }
  }
}

void normalize(DeviceClusterSet& cs) {
  for (auto& p : cs.pairs)
    if (p.first > p.second) std::swap(p.first, p.second);
  std::sort(cs.pairs.begin(), cs.pairs.end());
}

}  // namespace

DeviceClusterSet cluster_devices(const std::vector<FeatureMatrix>& features, double w) {
  const int m_total = static_cast<int>(features.size());
  if (m_total < 2) throw std::invalid_argument("cluster_devices: need at least 2 links");
  const Mat d = distance_matrix(features, w);

  std::vector<int> pool(m_total);
  for (int i = 0; i < m_total; ++i) pool[i] = i;

  DeviceClusterSet cs;
  while (pool.size() >= 2) {
    // nearest neighbour and clustering cost of every unclustered link
    std::vector<int> nearest(pool.size());
    std::vector<double> cost(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const int m = pool[i];
      int best = -1;
      for (int k : pool)
        if (k != m && (best < 0 || d(m, k) < d(m, best))) best = k;
      nearest[i] = best;
      double second = kInf;  // +inf when only the nearest neighbour remains
      for (int k : pool)
        if (k != m && k != best) second = std::min(second, d(m, k));
      cost[i] = second - d(m, best);
    }
    std::size_t pick = 0;
    for (std::size_t i = 1; i < pool.size(); ++i)
      if (cost[i] > cost[pick]) pick = i;

    const int a = pool[pick], b = nearest[pick];
    cs.pairs.emplace_back(std::min(a, b), std::max(a, b));
    pool.erase(std::remove_if(pool.begin(), pool.end(), [&](int x) { return x == a || x == b; }),
               pool.end());
  }
  if (!pool.empty()) cs.leftover = pool.front();

  swap_to_fixed_point(cs.pairs, d);
  normalize(cs);
  return cs;
}

namespace {

void enumerate_matchings(std::vector<int>& pool, std::vector<std::pair<int, int>>& current,
                         int leftover, const Mat& d, double& best_obj, DeviceClusterSet& best) {
  if (pool.size() < 2) {
    double obj = 0.0;
    for (const auto& p : current) obj = std::max(obj, pair_distance(d, p));
    if (obj < best_obj) {
      best_obj = obj;
      best.pairs = current;
      best.leftover = pool.empty() ? leftover : pool.front();
    }
    return;
  }
  const int a = pool.front();
  for (std::size_t i = 1; i < pool.size(); ++i) {
    const int b = pool[i];
    std::vector<int> rest;
    rest.reserve(pool.size() - 2);
    for (std::size_t k = 1; k < pool.size(); ++k)
      if (k != i) rest.push_back(pool[k]);
    current.emplace_back(a, b);
    enumerate_matchings(rest, current, leftover, d, best_obj, best);
    current.pop_back();
  }
  if (pool.size() % 2 == 1 && leftover < 0) {  // odd count: a may be the leftover
    std::vector<int> rest(pool.begin() + 1, pool.end());
    enumerate_matchings(rest, current, a, d, best_obj, best);
  }
}

}  // namespace

DeviceClusterSet exhaustive_cluster(const std::vector<FeatureMatrix>& features, double w) {
  const int m_total = static_cast<int>(features.size());
  if (m_total < 2) throw std::invalid_argument("exhaustive_cluster: need at least 2 links");
  if (m_total > 12)
    throw std::invalid_argument("exhaustive_cluster: refusing M > 12 (double-factorial growth)");
  const Mat d = distance_matrix(features, w);

  std::vector<int> pool(m_total);
  for (int i = 0; i < m_total; ++i) pool[i] = i;
  std::vector<std::pair<int, int>> current;
  DeviceClusterSet best;
  double best_obj = kInf;
  enumerate_matchings(pool, current, -1, d, best_obj, best);
  normalize(best);
  return best;
}

bool is_pareto_efficient(const DeviceClusterSet& clusters,
                         const std::vector<FeatureMatrix>& features, double w) {
  const Mat d = distance_matrix(features, w);
  const auto& pairs = clusters.pairs;
  for (std::size_t j = 0; j < pairs.size(); ++j)
    for (std::size_t k = j + 1; k < pairs.size(); ++k) {
      const auto [m, mk] = pairs[j];
      const auto [m2, mk2] = pairs[k];
      const double cur = d(m, mk) + d(m2, mk2);
      if (d(m, mk2) + d(m2, mk) < cur) return false;
      if (d(m, m2) + d(mk, mk2) < cur) return false;
    }
  return true;
}

double clustering_objective(const DeviceClusterSet& clusters,
                            const std::vector<FeatureMatrix>& features, double w) {
  double obj = 0.0;
  for (const auto& p : clusters.pairs)
    obj = std::max(obj, feature_distance(features[p.first], features[p.second], w));
  return obj;
}

}  // namespace rsmd
