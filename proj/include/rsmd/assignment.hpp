#pragma once

#include <functional>
#include <vector>

#include "rsmd/util.hpp"

namespace rsmd {

// Clipped per-cluster utilities over every (eRRH, RRB) candidate.
struct UtilityTensor {
  int J = 0, L = 0, N = 0;
  std::vector<double> u;

  UtilityTensor() = default;
  UtilityTensor(int j, int l, int n)
      : J(j), L(l), N(n), u(static_cast<std::size_t>(j) * l * n, 0.0) {}

  double& at(int j, int l, int n) { return u[(static_cast<std::size_t>(j) * L + l) * N + n]; }
  double at(int j, int l, int n) const { return u[(static_cast<std::size_t>(j) * L + l) * N + n]; }
};

// entry(j, l, n) must return the already clipped utility of cluster j on
// eRRH l and RRB n; independent entries, so the parallel build is bit-equal
// to the serial reference.
using TensorEntryFn = std::function<double(int j, int l, int n)>;

UtilityTensor build_utility_tensor(int J, int L, int N, const TensorEntryFn& entry);
UtilityTensor build_utility_tensor_serial(int J, int L, int N, const TensorEntryFn& entry);

// eRRH of each cluster given the RRB ownership map; exact via the Hungarian
// algorithm on the N_R-replicated eRRH slots.
std::vector<int> solve_x_given_y(const UtilityTensor& u, const std::vector<int>& rrb_cluster,
                                 int n_r);

// RRB ownership given the eRRH assignment: per-RRB argmax followed by the
// coverage repair pass (a starved cluster steals from a donor holding two or
// more RRBs, minimizing the donor's loss).
std::vector<int> solve_y_given_x(const UtilityTensor& u, const std::vector<int>& cluster_errh);

double assignment_objective(const UtilityTensor& u, const std::vector<int>& cluster_errh,
                            const std::vector<int>& rrb_cluster);

struct AssignmentResult {
  std::vector<int> cluster_errh;  // x: cluster -> eRRH
  std::vector<int> rrb_cluster;   // y: RRB -> cluster
  double objective = 0.0;
  // objective after each x-step and y-step, recorded from the first full
  // alternation onward
  std::vector<double> objective_trace;
  int iterations = 0;
};

// Alternating Hungarian / argmax optimization from a round-robin initial
// ownership; stops at a fixed point or when an alternation stops improving.
AssignmentResult alternate_assignment(const UtilityTensor& u, int n_r, int t_max = 50);

}  // namespace rsmd
