#ifndef SGPCA_METRICS_HPP
#define SGPCA_METRICS_HPP

#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sgpca/data.hpp"
#include "sgpca/family.hpp"
#include "sgpca/threshold.hpp"

namespace sgpca {

struct EvalResult {
  double theta_error = std::numeric_limits<double>::quiet_NaN();
  double deviance = std::numeric_limits<double>::quiet_NaN();
  double deviance_ratio = std::numeric_limits<double>::quiet_NaN();
  double max_canonical_angle_deg = std::numeric_limits<double>::quiet_NaN();
  double miss_rate = std::numeric_limits<double>::quiet_NaN();
  double false_positive_rate = std::numeric_limits<double>::quiet_NaN();
};

// 1000 ||Θ̂ − Θ*||_F² / (n p).
double theta_error(const Eigen::MatrixXd& theta_hat,
                   const Eigen::MatrixXd& theta_star);

// Masked NLL of the saturated model (each observed cell fitted by its own
// value). Boundary cells — Bernoulli x in {0,1}, Poisson x = 0 — use the
// finite limit of x g(x) − b(g(x)), which is 0 in both cases.
double saturated_nll(const MaskedMatrix& data, const Family& family);

// 2 (l(X; Θ̂) − l(X; Θ_S)) with Θ_S the saturated parameters.
double deviance(const MaskedMatrix& data, const Family& family,
                const Eigen::MatrixXd& theta_hat);

// Largest principal angle (degrees) between the column spaces; each side is
// orthonormalized to its numerical rank first, so inputs of different width
// compare the smaller space against the larger.
double max_canonical_angle(const Eigen::MatrixXd& s_hat,
                           const Eigen::MatrixXd& q_star);

// (miss rate, false positive rate) of the estimated support against the true
// one. Element mode aligns columns by greedy max-|cosine| matching before
// comparing entries; group mode compares row supports.
std::pair<double, double> selection_rates(const Eigen::MatrixXd& s_hat,
                                          const Eigen::MatrixXd& q_star,
                                          SparsityMode mode);

// Mean after dropping floor(trim*m) values at each end.
double trimmed_mean(std::vector<double> values, double trim);

}  // namespace sgpca

#endif  // SGPCA_METRICS_HPP
