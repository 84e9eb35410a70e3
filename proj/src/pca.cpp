#include "rsmd/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rsmd {

Mat compute_acv(const std::vector<Mat>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("compute_acv: need at least 2 samples");
  const int rows = samples[0].rows, cols = samples[0].cols;
  for (const Mat& s : samples)
    if (s.rows != rows || s.cols != cols)
      throw std::invalid_argument("compute_acv: inconsistent sample shapes");

  Mat mean(rows, cols);
  for (const Mat& s : samples)
    for (std::size_t i = 0; i < s.a.size(); ++i) mean.a[i] += s.a[i];
  for (double& v : mean.a) v /= static_cast<double>(samples.size());

  Mat acv(cols, cols);
  for (const Mat& s : samples) {
    // accumulate (S - mean)^T (S - mean)
    for (int r = 0; r < rows; ++r)
      for (int i = 0; i < cols; ++i) {
        const double di = s(r, i) - mean(r, i);
        if (di == 0.0) continue;
        for (int j = 0; j < cols; ++j) acv(i, j) += di * (s(r, j) - mean(r, j));
      }
  }
  for (double& v : acv.a) v /= static_cast<double>(samples.size());
  return acv;
}

EigenDecomposition jacobi_eigen(Mat sym, double tol) {
  if (sym.rows != sym.cols) throw std::invalid_argument("jacobi_eigen: matrix not square");
  const int n = sym.rows;
  Mat v(n, n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * sym(i, j) * sym(i, j);
    return std::sqrt(s);
  };
  const double scale = std::max(frobenius_norm(sym), 1e-300);

  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps && off_norm() > tol * scale; ++sweep) {
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = sym(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (sym(q, q) - sym(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = sym(k, p), akq = sym(k, q);
          sym(k, p) = c * akp - s * akq;
          sym(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = sym(p, k), aqk = sym(q, k);
          sym(p, k) = c * apk - s * aqk;
          sym(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sym(a, a) > sym(b, b); });

  EigenDecomposition e;
  e.values.resize(n);
  e.vectors = Mat(n, n);
  for (int k = 0; k < n; ++k) {
    e.values[k] = sym(order[k], order[k]);
    for (int i = 0; i < n; ++i) e.vectors(i, k) = v(i, order[k]);
  }
  return e;
}

namespace {

Mat project(const Mat& sample, const Mat& eigvecs, int d) {
  Mat b(sample.rows, d);
  for (int i = 0; i < sample.rows; ++i)
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (int j = 0; j < sample.cols; ++j) s += sample(i, j) * eigvecs(j, k);
      b(i, k) = s;
    }
  return b;
}

}  // namespace

FeatureMatrix extract_features(const std::vector<Mat>& samples_h,
                               const std::vector<Mat>& samples_g, int d) {
  if (samples_h.empty() || samples_h[0].cols < d)
    throw std::invalid_argument("extract_features: d exceeds the number of RRBs");
  const EigenDecomposition eh = jacobi_eigen(compute_acv(samples_h));
  const EigenDecomposition eg = jacobi_eigen(compute_acv(samples_g));
  FeatureMatrix f;
  f.b1 = project(samples_h.back(), eh.vectors, d);
  f.b2 = project(samples_g.back(), eg.vectors, d);
  return f;
}

FeatureMatrix raw_features(const Mat& h, const Mat& g) { return FeatureMatrix{h, g}; }

}  // namespace rsmd
