#include "rsmd/hungarian.hpp"

#include <limits>
#include <stdexcept>

namespace rsmd {

std::vector<int> hungarian_min_cost(const Mat& cost) {
  if (cost.rows != cost.cols) throw std::invalid_argument("hungarian: matrix not square");
  const int n = cost.rows;
  const double inf = std::numeric_limits<double>::infinity();

  // Shortest augmenting paths with dual potentials, 1-indexed with column 0
  // as the virtual start.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (match[j] >= 1) row_to_col[match[j] - 1] = j - 1;
  return row_to_col;
}

std::vector<int> hungarian_max_weight(const Mat& weight) {
  Mat cost(weight.rows, weight.cols);
  for (std::size_t i = 0; i < weight.a.size(); ++i) cost.a[i] = -weight.a[i];
  return hungarian_min_cost(cost);
}

}  // namespace rsmd
