#ifndef SGPCA_THRESHOLD_HPP
#define SGPCA_THRESHOLD_HPP

#include <Eigen/Dense>

namespace sgpca {

enum class SparsityMode { ElementWise, GroupWise };

// Fraction q of nonzero entries (element mode) or nonzero rows (group mode)
// allowed in the loading matrix; q = 1 disables thresholding.
struct SparsityLevel {
  double q = 1.0;
  SparsityMode mode = SparsityMode::ElementWise;
};

// Cardinality realised by a sparsity fraction: floor(q * count), at least 1.
Eigen::Index keep_count(double q, Eigen::Index count);

// Keep the k = floor(q_e * p * r) entries of largest |value|, zero the rest.
// Ties at the cutoff magnitude are resolved toward the smaller row-major
// index, which makes the operator deterministic.
Eigen::MatrixXd quantile_threshold_elem(const Eigen::MatrixXd& s, double q_e);

// Row-wise version: keep the k = floor(q_g * p) rows of largest Euclidean
// norm, zero the remaining rows entirely. Same tie rule, on row indices.
Eigen::MatrixXd quantile_threshold_group(const Eigen::MatrixXd& s, double q_g);

Eigen::MatrixXd quantile_threshold(const Eigen::MatrixXd& s,
                                   const SparsityLevel& level);

// Keep exactly the top-k rows by norm (used by progressive screening, where
// the quota is an absolute row count rather than a fraction).
Eigen::MatrixXd keep_top_rows(const Eigen::MatrixXd& s, Eigen::Index k);

}  // namespace sgpca

#endif  // SGPCA_THRESHOLD_HPP
