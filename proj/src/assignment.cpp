#include "rsmd/assignment.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "rsmd/hungarian.hpp"

namespace rsmd {

UtilityTensor build_utility_tensor_serial(int J, int L, int N, const TensorEntryFn& entry) {
  UtilityTensor t(J, L, N);
  for (int j = 0; j < J; ++j)
    for (int l = 0; l < L; ++l)
      for (int n = 0; n < N; ++n) t.at(j, l, n) = entry(j, l, n);
  return t;
}

UtilityTensor build_utility_tensor(int J, int L, int N, const TensorEntryFn& entry) {
  UtilityTensor t(J, L, N);
  const int total = J * L * N;
#pragma omp parallel for schedule(dynamic, 8)
  for (int idx = 0; idx < total; ++idx) {
    const int j = idx / (L * N);
    const int l = (idx / N) % L;
    const int n = idx % N;
    t.u[idx] = entry(j, l, n);
  }
  return t;
}

std::vector<int> solve_x_given_y(const UtilityTensor& u, const std::vector<int>& rrb_cluster,
                                 int n_r) {
  const int J = u.J, L = u.L, N = u.N;
  const int slots = L * n_r;
  if (J > slots) throw std::invalid_argument("solve_x_given_y: more clusters than eRRH slots");
  if (static_cast<int>(rrb_cluster.size()) != N)
    throw std::invalid_argument("solve_x_given_y: bad ownership map");

  // aggregated utility of cluster j served by eRRH l over its current RRBs
  Mat agg(L, J);
  for (int n = 0; n < N; ++n) {
    const int j = rrb_cluster[n];
    if (j < 0) continue;
    for (int l = 0; l < L; ++l) agg(l, j) += u.at(j, l, n);
  }

  // replicate every eRRH n_r times and pad with zero-utility dummy clusters
  Mat weight(slots, slots);
  for (int s = 0; s < slots; ++s) {
    const int l = s / n_r;
    for (int j = 0; j < J; ++j) weight(s, j) = agg(l, j);
  }
  const std::vector<int> slot_col = hungarian_max_weight(weight);

  std::vector<int> cluster_errh(J, -1);
  for (int s = 0; s < slots; ++s)
    if (slot_col[s] >= 0 && slot_col[s] < J) cluster_errh[slot_col[s]] = s / n_r;
  return cluster_errh;
}

std::vector<int> solve_y_given_x(const UtilityTensor& u, const std::vector<int>& cluster_errh) {
  const int J = u.J, N = u.N;
  if (N < J) throw std::invalid_argument("solve_y_given_x: fewer RRBs than clusters");

  auto gain = [&](int n, int j) { return u.at(j, cluster_errh[j], n); };

  std::vector<int> rrb_cluster(N, 0);
  for (int n = 0; n < N; ++n) {
    int best = 0;
    for (int j = 1; j < J; ++j)
      if (gain(n, j) > gain(n, best)) best = j;  // ties stay at the lowest index
    rrb_cluster[n] = best;
  }

  // repair: every cluster must keep at least one RRB
  std::vector<int> held(J, 0);
  for (int n = 0; n < N; ++n) ++held[rrb_cluster[n]];
  for (int j = 0; j < J; ++j) {
    if (held[j] > 0) continue;
    int take = -1;
    for (int n = 0; n < N; ++n) {
      const int donor = rrb_cluster[n];
      if (held[donor] < 2) continue;
      if (take < 0) {
        take = n;
        continue;
      }
      const double loss = gain(n, donor), best_loss = gain(take, rrb_cluster[take]);
      if (loss < best_loss || (loss == best_loss && gain(n, j) > gain(take, j))) take = n;
    }
    if (take < 0) throw std::runtime_error("solve_y_given_x: repair found no donor");
    --held[rrb_cluster[take]];
    rrb_cluster[take] = j;
    ++held[j];
  }
  return rrb_cluster;
}

double assignment_objective(const UtilityTensor& u, const std::vector<int>& cluster_errh,
                            const std::vector<int>& rrb_cluster) {
  double v = 0.0;
  for (int n = 0; n < u.N; ++n) {
    const int j = rrb_cluster[n];
    if (j >= 0) v += u.at(j, cluster_errh[j], n);
  }
  return v;
}

AssignmentResult alternate_assignment(const UtilityTensor& u, int n_r, int t_max) {
  const int J = u.J, N = u.N;
  if (J > u.L * n_r) throw std::invalid_argument("alternate_assignment: C2 infeasible");
  if (N < J) throw std::invalid_argument("alternate_assignment: C3 infeasible");

  AssignmentResult res;
  std::vector<int> y(N);
  for (int n = 0; n < N; ++n) y[n] = n % J;  // round-robin deal
  std::vector<int> x;
  double v = -std::numeric_limits<double>::infinity();

  for (int t = 1; t <= t_max; ++t) {
    res.iterations = t;
    std::vector<int> x_new = solve_x_given_y(u, y, n_r);
    const double after_x = assignment_objective(u, x_new, y);
    std::vector<int> y_new = solve_y_given_x(u, x_new);
    const double after_y = assignment_objective(u, x_new, y_new);

    if (t == 1) {
      // the first repair pass runs before objective tracking starts
      x = std::move(x_new);
      y = std::move(y_new);
      v = after_y;
      res.objective_trace.push_back(after_y);
      continue;
    }

    res.objective_trace.push_back(after_x);
    if (after_y < after_x) {
      // a repair dented the objective: keep the improved x, the previous y
      x = std::move(x_new);
      v = after_x;
      break;
    }
    res.objective_trace.push_back(after_y);
    const bool fixed_point = after_y == v && y_new == y && x_new == x;
    const bool stalled = after_y == v;
    x = std::move(x_new);
    y = std::move(y_new);
    v = after_y;
    if (fixed_point || stalled) break;
  }

  res.cluster_errh = std::move(x);
  res.rrb_cluster = std::move(y);
  res.objective = v;
  return res;
}

}  // namespace rsmd
