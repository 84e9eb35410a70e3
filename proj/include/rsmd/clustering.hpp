#pragma once

#include <utility>
#include <vector>

#include "rsmd/pca.hpp"

namespace rsmd {

// Partition of the D2D links into disjoint pairs, plus one leftover singleton
// when M is odd.
struct DeviceClusterSet {
  std::vector<std::pair<int, int>> pairs;
  int leftover = -1;

  int num_clusters() const { return static_cast<int>(pairs.size()) + (leftover >= 0 ? 1 : 0); }
};

// Weighted feature distance: w on the CR DU side, (1-w) on the CH DU side.
// Accepts w in [0, 1]; the clustering entry points enforce the open interval.
double feature_distance(const FeatureMatrix& a, const FeatureMatrix& b, double w);

// Greedy max-cost pairing followed by a pairwise-swap pass iterated to a
// fixed point; the result carries no improving cross-swap.
DeviceClusterSet cluster_devices(const std::vector<FeatureMatrix>& features, double w);

// Enumerates every perfect matching and returns one minimizing the largest
// pair distance. Guarded to M <= 12.
DeviceClusterSet exhaustive_cluster(const std::vector<FeatureMatrix>& features, double w);

// True iff no pair of clusters admits a cross-swap that strictly reduces
// their summed pair distance.
bool is_pareto_efficient(const DeviceClusterSet& clusters,
                         const std::vector<FeatureMatrix>& features, double w);

// The min-max objective value of a pairing (largest pair distance).
double clustering_objective(const DeviceClusterSet& clusters,
                            const std::vector<FeatureMatrix>& features, double w);

}  // namespace rsmd
