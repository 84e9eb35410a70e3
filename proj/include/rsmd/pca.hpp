#pragma once

#include <vector>

#include "rsmd/util.hpp"

namespace rsmd {

// Low-dimensional clustering features of one D2D link: the latest channel
// matrices projected onto the leading eigenvectors of their auto-covariances.
struct FeatureMatrix {
  Mat b1;  // L x d, CH DU side
  Mat b2;  // L x d, CR DU side
};

// Sample auto-covariance of a list of equally shaped L x N matrices,
// (1/I) * sum (H - Hbar)^T (H - Hbar). Throws on fewer than two samples.
Mat compute_acv(const std::vector<Mat>& samples);

// Eigenpairs of a symmetric matrix, sorted by decreasing eigenvalue.
// Cyclic Jacobi rotations; tol bounds the final off-diagonal Frobenius norm
// relative to the input norm.
struct EigenDecomposition {
  std::vector<double> values;
  Mat vectors;  // column k is the eigenvector of values[k]
};
EigenDecomposition jacobi_eigen(Mat sym, double tol = 1e-10);

// 2D-PCA features: eigendecompose each side's ACV and project the most
// recent sample onto the top-d eigenvectors.
FeatureMatrix extract_features(const std::vector<Mat>& samples_h,
                               const std::vector<Mat>& samples_g, int d);

// Identity-projection features (the full channel matrices); the global-CSI
// clustering baseline.
FeatureMatrix raw_features(const Mat& h, const Mat& g);

}  // namespace rsmd
