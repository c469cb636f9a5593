#include "sgpca/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sgpca {

namespace {

void check_q(double q) {
  if (!(q > 0.0 && q <= 1.0))
    throw std::invalid_argument("sparsity level q must lie in (0, 1]");
}

// Indices of the k largest scores; ties broken toward the smaller index.
std::vector<Eigen::Index> top_k(const std::vector<double>& score,
                                Eigen::Index k) {
  std::vector<Eigen::Index> idx(score.size());
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(),
                    [&score](Eigen::Index a, Eigen::Index b) {
                      if (score[a] != score[b]) return score[a] > score[b];
                      return a < b;
                    });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

}  // namespace

Eigen::Index keep_count(double q, Eigen::Index count) {
  check_q(q);
  // The tiny slack keeps products like 0.3 * 10 from flooring one below the
  // intended cardinality.
  const auto k = static_cast<Eigen::Index>(
      std::floor(q * static_cast<double>(count) + 1e-9));
  return std::max<Eigen::Index>(1, std::min(k, count));
}

Eigen::MatrixXd quantile_threshold_elem(const Eigen::MatrixXd& s, double q_e) {
  const Eigen::Index p = s.rows(), r = s.cols();
  const Eigen::Index k = keep_count(q_e, p * r);
  if (k >= p * r) return s;
  // Scores in row-major order so the tie rule matches the documented one.
  std::vector<double> score(static_cast<std::size_t>(p * r));
  for (Eigen::Index i = 0; i < p; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      score[static_cast<std::size_t>(i * r + j)] = std::abs(s(i, j));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, r);
  for (Eigen::Index lin : top_k(score, k))
    out(lin / r, lin % r) = s(lin / r, lin % r);
  return out;
}

Eigen::MatrixXd quantile_threshold_group(const Eigen::MatrixXd& s,
                                         double q_g) {
  const Eigen::Index k = keep_count(q_g, s.rows());
  return keep_top_rows(s, k);
}

Eigen::MatrixXd keep_top_rows(const Eigen::MatrixXd& s, Eigen::Index k) {
  const Eigen::Index p = s.rows();
  if (k < 1) throw std::invalid_argument("keep_top_rows: k must be >= 1");
  if (k >= p) return s;
  std::vector<double> score(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i)
    score[static_cast<std::size_t>(i)] = s.row(i).norm();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(p, s.cols());
  for (Eigen::Index i : top_k(score, k)) out.row(i) = s.row(i);
  return out;
}

Eigen::MatrixXd quantile_threshold(const Eigen::MatrixXd& s,
                                   const SparsityLevel& level) {
  return level.mode == SparsityMode::ElementWise
             ? quantile_threshold_elem(s, level.q)
             : quantile_threshold_group(s, level.q);
}

}  // namespace sgpca
