#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace rsmd {

// Small dense row-major matrix. Everything in this project is N <= 64, so no
// attempt is made at being clever.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

inline double frobenius_distance(const Mat& x, const Mat& y) {
  if (!x.same_shape(y)) throw std::invalid_argument("frobenius_distance: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    const double d = x.a[i] - y.a[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double frobenius_norm(const Mat& x) {
  double s = 0.0;
  for (double v : x.a) s += v * v;
  return std::sqrt(s);
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// FNV-1a over raw bytes; used to fingerprint channel realizations so the
// harness can assert that paired schemes saw identical channels.
inline std::uint64_t fnv1a(const void* data, std::size_t len,
                           std::uint64_t h = 1469598103934665603ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::uint64_t fnv1a(const std::vector<double>& v, std::uint64_t h = 1469598103934665603ULL) {
  return v.empty() ? h : fnv1a(v.data(), v.size() * sizeof(double), h);
}

// Derives independent stream seeds from (base, tag) with splitmix64 so that
// topology, channel and training draws never share a generator state.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace rsmd
