#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "rsmd/pca.hpp"

using namespace rsmd;

namespace {

Mat random_mat(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(r, c);
  for (double& v : m.a) v = g(rng);
  return m;
}

Mat random_symmetric(int n, std::mt19937_64& rng) {
  Mat m = random_mat(n, n, rng);
  Mat s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

// Closed-form eigenvalues of a symmetric 3x3 matrix via the characteristic
// polynomial (trigonometric solution); independent of the Jacobi path.
std::array<double, 3> eig3_characteristic(const Mat& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = (a(0, 0) + a(1, 1) + a(2, 2)) / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Mat b(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = (a(i, j) - (i == j ? q : 0.0)) / p;
  const double detb =
      b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
      b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
      b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double r = std::clamp(detb / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  return {e1, e2, e3};  // descending
}

}  // namespace

TEST_CASE("auto-covariance") {
  std::mt19937_64 rng(21);

  SUBCASE("identical samples give the zero matrix") {
    const Mat h = random_mat(4, 3, rng);
    const Mat s = compute_acv({h, h, h});
    for (double v : s.a) CHECK(std::abs(v) < 1e-14);
  }

  SUBCASE("symmetry") {
    std::vector<Mat> samples;
    for (int i = 0; i < 5; ++i) samples.push_back(random_mat(4, 3, rng));
    const Mat s = compute_acv(samples);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(s(i, j) == s(j, i));
  }

  SUBCASE("two antisymmetric samples") {
    const Mat h = random_mat(4, 3, rng);
    Mat neg = h;
    for (double& v : neg.a) v = -v;
    const Mat s = compute_acv({h, neg});
    // zero mean, so S = H^T H
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double want = 0;
        for (int r = 0; r < 4; ++r) want += h(r, i) * h(r, j);
        CHECK(s(i, j) == doctest::Approx(want).epsilon(1e-12));
      }
  }

  SUBCASE("insufficient data") {
    CHECK_THROWS_AS(compute_acv({random_mat(2, 2, rng)}), std::invalid_argument);
  }
}

TEST_CASE("jacobi eigendecomposition") {
  std::mt19937_64 rng(22);

  SUBCASE("residual bound") {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng() % 7);
      const Mat s = random_symmetric(n, rng);
      const EigenDecomposition e = jacobi_eigen(s);
      const double norm = frobenius_norm(s);
      for (int k = 0; k < n; ++k) {
        double resid = 0;
        for (int i = 0; i < n; ++i) {
          double sv = 0;
          for (int j = 0; j < n; ++j) sv += s(i, j) * e.vectors(j, k);
          const double d = sv - e.values[k] * e.vectors(i, k);
          resid += d * d;
        }
        CHECK(std::sqrt(resid) <= 1e-8 * norm);
      }
      for (int k = 1; k < n; ++k) CHECK(e.values[k - 1] >= e.values[k]);
    }
  }

  SUBCASE("3x3 eigenvalues match the characteristic polynomial") {
    for (int trial = 0; trial < 50; ++trial) {
      const Mat s = random_symmetric(3, rng);
      const EigenDecomposition e = jacobi_eigen(s);
      const auto want = eig3_characteristic(s);
      const double scale = std::max(1.0, frobenius_norm(s));
      for (int k = 0; k < 3; ++k) CHECK(std::abs(e.values[k] - want[k]) <= 1e-8 * scale);
    }
  }

  SUBCASE("rank-1 covariance") {
    // samples proportional to a fixed rank-1 matrix
    Mat base = random_mat(4, 3, rng);
    std::vector<Mat> samples;
    for (double c : {1.0, 2.0, -1.0, 0.5}) {
      Mat s = base;
      for (double& v : s.a) v *= c;
      samples.push_back(s);
    }
    const EigenDecomposition e = jacobi_eigen(compute_acv(samples));
    CHECK(e.values[0] > 0);
    for (int k = 1; k < 3; ++k) CHECK(std::abs(e.values[k]) <= 1e-8 * e.values[0]);
  }
}

TEST_CASE("feature extraction") {
  std::mt19937_64 rng(23);
  std::vector<Mat> hs, gs;
  for (int i = 0; i < 6; ++i) {
    hs.push_back(random_mat(4, 3, rng));
    gs.push_back(random_mat(4, 3, rng));
  }

  SUBCASE("full projection preserves the Frobenius norm") {
    const FeatureMatrix f = extract_features(hs, gs, 3);
    CHECK(frobenius_norm(f.b1) == doctest::Approx(frobenius_norm(hs.back())).epsilon(1e-10));
    CHECK(frobenius_norm(f.b2) == doctest::Approx(frobenius_norm(gs.back())).epsilon(1e-10));
  }

  SUBCASE("feature shape") {
    const FeatureMatrix f = extract_features(hs, gs, 2);
    CHECK(f.b1.rows == 4);
    CHECK(f.b1.cols == 2);
  }

  SUBCASE("d too large") {
    CHECK_THROWS_AS(extract_features(hs, gs, 4), std::invalid_argument);
  }
}
