#include "sgpca/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgpca {

double theta_error(const Eigen::MatrixXd& theta_hat,
                   const Eigen::MatrixXd& theta_star) {
  if (theta_hat.rows() != theta_star.rows() ||
      theta_hat.cols() != theta_star.cols())
    throw std::invalid_argument("theta_error: shape mismatch");
  const double np =
      static_cast<double>(theta_hat.rows()) * theta_hat.cols();
  return 1000.0 * (theta_hat - theta_star).squaredNorm() / np;
}

double saturated_nll(const MaskedMatrix& data, const Family& family) {
  const Eigen::MatrixXd& x = data.values();
  const Eigen::MatrixXd& h = data.mask();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < data.cols(); ++j)
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (h(i, j) == 0.0) continue;
      const double v = x(i, j);
      switch (family.kind()) {
        case FamilyKind::Gaussian:
          acc += -0.5 * v * v;
          break;
        case FamilyKind::Bernoulli: {
          if (v == 0.0 || v == 1.0) break;  // limit contribution is 0
          if (!(v > 0.0 && v < 1.0))
            throw std::domain_error(
                "saturated_nll: Bernoulli value outside [0, 1]");
          const double t = std::log(v / (1.0 - v));
          acc += -(v * t - stable_softplus(t));
          break;
        }
        case FamilyKind::Poisson: {
          if (v == 0.0) break;  // limit contribution is 0
          if (!(v > 0.0))
            throw std::domain_error("saturated_nll: negative Poisson value");
          acc += -(v * std::log(v) - v);
          break;
        }
        case FamilyKind::ExponentialGamma: {
          if (!(v > 0.0))
            throw std::domain_error(
                "saturated_nll: nonpositive Exponential/Gamma value");
          acc += 1.0 + std::log(v);
          break;
        }
      }
    }
  return acc;
}

double deviance(const MaskedMatrix& data, const Family& family,
                const Eigen::MatrixXd& theta_hat) {
  return 2.0 * (masked_nll(data, family, theta_hat) -
                saturated_nll(data, family));
}

namespace {

// Orthonormal basis of the column space, trimmed to numerical rank.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0)
    throw std::invalid_argument("canonical angle: zero matrix input");
  const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                     std::numeric_limits<double>::epsilon() * sv(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

double max_canonical_angle(const Eigen::MatrixXd& s_hat,
                           const Eigen::MatrixXd& q_star) {
  if (s_hat.rows() != q_star.rows())
    throw std::invalid_argument("canonical angle: row count mismatch");
  const Eigen::MatrixXd u1 = orthonormal_basis(s_hat);
  const Eigen::MatrixXd u2 = orthonormal_basis(q_star);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(u1.transpose() * u2);
  const Eigen::VectorXd& cosines = svd.singularValues();
  double c = cosines(cosines.size() - 1);  // smallest cosine, largest angle
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

namespace {

struct SupportCounts {
  long truth_nonzero = 0;
  long truth_zero = 0;
  long missed = 0;
  long false_positive = 0;
};

void tally(bool truth_nz, bool est_nz, SupportCounts& c) {
  if (truth_nz) {
    ++c.truth_nonzero;
    if (!est_nz) ++c.missed;
  } else {
    ++c.truth_zero;
    if (est_nz) ++c.false_positive;
  }
}

// Greedy max-|cosine| column matching: est column index for each truth
// column, or -1 when the estimate has fewer columns.
std::vector<Eigen::Index> match_columns(const Eigen::MatrixXd& s_hat,
                                        const Eigen::MatrixXd& q_star) {
  const Eigen::Index rh = s_hat.cols(), rt = q_star.cols();
  Eigen::MatrixXd sim(rh, rt);
  for (Eigen::Index a = 0; a < rh; ++a)
    for (Eigen::Index b = 0; b < rt; ++b) {
      const double den = s_hat.col(a).norm() * q_star.col(b).norm();
      sim(a, b) = den > 0.0
                      ? std::abs(s_hat.col(a).dot(q_star.col(b))) / den
                      : 0.0;
    }
  std::vector<Eigen::Index> match(static_cast<std::size_t>(rt), -1);
  std::vector<bool> used_est(static_cast<std::size_t>(rh), false);
  std::vector<bool> used_truth(static_cast<std::size_t>(rt), false);
  const Eigen::Index pairs = std::min(rh, rt);
  for (Eigen::Index it = 0; it < pairs; ++it) {
    double best = -1.0;
    Eigen::Index ba = -1, bb = -1;
    for (Eigen::Index a = 0; a < rh; ++a) {
      if (used_est[static_cast<std::size_t>(a)]) continue;
      for (Eigen::Index b = 0; b < rt; ++b) {
        if (used_truth[static_cast<std::size_t>(b)]) continue;
        if (sim(a, b) > best) {
          best = sim(a, b);
          ba = a;
          bb = b;
        }
      }
    }
    match[static_cast<std::size_t>(bb)] = ba;
    used_est[static_cast<std::size_t>(ba)] = true;
    used_truth[static_cast<std::size_t>(bb)] = true;
  }
  return match;
}

}  // namespace

std::pair<double, double> selection_rates(const Eigen::MatrixXd& s_hat,
                                          const Eigen::MatrixXd& q_star,
                                          SparsityMode mode) {
  if (s_hat.rows() != q_star.rows())
    throw std::invalid_argument("selection_rates: row count mismatch");
  if (q_star.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("selection_rates: true loadings are all zero");

  SupportCounts c;
  if (mode == SparsityMode::GroupWise) {
    for (Eigen::Index i = 0; i < q_star.rows(); ++i)
      tally(q_star.row(i).squaredNorm() > 0.0,
            s_hat.row(i).squaredNorm() > 0.0, c);
  } else {
    const std::vector<Eigen::Index> match = match_columns(s_hat, q_star);
    for (Eigen::Index b = 0; b < q_star.cols(); ++b) {
      const Eigen::Index a = match[static_cast<std::size_t>(b)];
      for (Eigen::Index i = 0; i < q_star.rows(); ++i)
        tally(q_star(i, b) != 0.0, a >= 0 && s_hat(i, a) != 0.0, c);
    }
  }
  const double mr = c.truth_nonzero > 0
                        ? static_cast<double>(c.missed) / c.truth_nonzero
                        : 0.0;
  const double fp = c.truth_zero > 0
                        ? static_cast<double>(c.false_positive) / c.truth_zero
                        : 0.0;
  return {mr, fp};
}

double trimmed_mean(std::vector<double> values, double trim) {
  if (values.empty())
    throw std::invalid_argument("trimmed_mean: empty input");
  if (!(trim >= 0.0 && trim < 0.5))
    throw std::invalid_argument("trimmed_mean: trim must lie in [0, 0.5)");
  std::sort(values.begin(), values.end());
  const auto cut = static_cast<std::size_t>(
      std::floor(trim * static_cast<double>(values.size())));
  double acc = 0.0;
  for (std::size_t i = cut; i < values.size() - cut; ++i) acc += values[i];
  return acc / static_cast<double>(values.size() - 2 * cut);
}

}  // namespace sgpca
