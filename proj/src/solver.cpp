#include "sgpca/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sgpca/rng.hpp"

namespace sgpca {

void SolverConfig::validate_base() const {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (max_outer < 1 || max_inner < 1)
    throw std::invalid_argument("iteration caps must be >= 1");
  if (eps_outer < 0.0 || eps_inner < 0.0)
    throw std::invalid_argument("tolerances must be nonnegative");
  if (!(sparsity.q > 0.0 && sparsity.q <= 1.0))
    throw std::invalid_argument("sparsity level q must lie in (0, 1]");
  if (refit_q_e < 0.0 || refit_q_e > 1.0)
    throw std::invalid_argument("refit q_e must lie in [0, 1]");
  if (step_policy == StepPolicy::Fixed && !(fixed_tau > 0.0))
    throw std::invalid_argument("fixed step policy requires tau > 0");
}

void SolverConfig::validate(const Family& family) const {
  validate_base();
  if (step_policy == StepPolicy::Universal && !family.universal_step()) {
    throw std::invalid_argument(
        "no universal step size exists for family '" + family.name() +
        "'; use the line-search or fixed step policy");
  }
}

Eigen::MatrixXd xi_update(const MaskedMatrix& data, const Family& family,
                          const Eigen::MatrixXd& theta_prev, double rho_k) {
  if (!(rho_k > 0.0)) throw std::invalid_argument("rho must be positive");
  return theta_prev - (1.0 / rho_k) * grad_theta(data, family, theta_prev);
}

Eigen::VectorXd alpha_step(const Eigen::MatrixXd& xi, const Eigen::MatrixXd& v,
                           const Eigen::MatrixXd& s) {
  if (v.rows() != xi.rows() || s.rows() != xi.cols() || v.cols() != s.cols())
    throw std::invalid_argument("alpha_step: shape mismatch");
  const double n = static_cast<double>(xi.rows());
  return (xi - v * s.transpose()).colwise().sum().transpose() / n;
}

Eigen::MatrixXd s_candidate(const Eigen::MatrixXd& xi,
                            const Eigen::VectorXd& alpha,
                            const Eigen::MatrixXd& v) {
  if (alpha.size() != xi.cols() || v.rows() != xi.rows())
    throw std::invalid_argument("s_candidate: shape mismatch");
  return xi.transpose() * v - alpha * v.colwise().sum();
}

Eigen::MatrixXd s_step(const Eigen::MatrixXd& xi, const Eigen::VectorXd& alpha,
                       const Eigen::MatrixXd& v,
                       const SparsityLevel& sparsity) {
  return quantile_threshold(s_candidate(xi, alpha, v), sparsity);
}

Eigen::MatrixXd v_step(const Eigen::MatrixXd& xi, const Eigen::VectorXd& alpha,
                       const Eigen::MatrixXd& s, std::mt19937_64& rng,
                       bool* completed) {
  if (alpha.size() != xi.cols() || s.rows() != xi.cols())
    throw std::invalid_argument("v_step: shape mismatch");
  const Eigen::Index n = xi.rows();
  const Eigen::Index r = s.cols();
  // (Ξ − 1ₙαᵀ)S without forming the rank-one update explicitly.
  Eigen::MatrixXd m = xi * s;
  m.noalias() -= Eigen::VectorXd::Ones(n) * (alpha.transpose() * s);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double tol = static_cast<double>(std::max(n, r)) *
                     std::numeric_limits<double>::epsilon() *
                     (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index effective = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol && sv(i) > 0.0) ++effective;

  Eigen::MatrixXd p = svd.matrixU();
  if (effective < r) {
    // Pad the null directions with a seeded orthonormal completion so that
    // VᵀV = I always holds.
    if (completed) *completed = true;
    Eigen::MatrixXd b(n, r);
    b.leftCols(effective) = p.leftCols(effective);
    b.rightCols(r - effective) = gaussian_matrix(rng, n, r - effective);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
    // Householder may flip signs of the leading block; keep the singular
    // directions exactly as computed.
    q.leftCols(effective) = p.leftCols(effective);
    p = q;
  }
  return p * svd.matrixV().transpose();
}

namespace {

double block_change(const FactorModel& a, const FactorModel& b) {
  const double da = (a.alpha - b.alpha).cwiseAbs().maxCoeff();
  const double ds = (a.S - b.S).cwiseAbs().maxCoeff();
  const double dv = (a.V - b.V).cwiseAbs().maxCoeff();
  return std::max({da, ds, dv});
}

}  // namespace

FactorModel inner_loop(const Eigen::MatrixXd& xi, const FactorModel& init,
                       const SolverConfig& cfg, std::mt19937_64& rng,
                       bool* completed) {
  FactorModel cur = init;
  for (int t = 1; t <= cfg.max_inner; ++t) {
    const FactorModel prev = cur;
    cur.alpha = alpha_step(xi, cur.V, cur.S);
    cur.S = s_step(xi, cur.alpha, cur.V, cfg.sparsity);
    cur.V = v_step(xi, cur.alpha, cur.S, rng, completed);
    if (block_change(cur, prev) <= cfg.eps_inner) break;
  }
  return cur;
}

void canonicalize_signs(FactorModel& model) {
  for (Eigen::Index j = 0; j < model.S.cols(); ++j) {
    Eigen::Index imax = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < model.S.rows(); ++i) {
      const double a = std::abs(model.S(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (best > 0.0 && model.S(imax, j) < 0.0) {
      model.S.col(j) = -model.S.col(j);
      model.V.col(j) = -model.V.col(j);
    }
  }
}

}  // namespace sgpca
