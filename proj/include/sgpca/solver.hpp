#ifndef SGPCA_SOLVER_HPP
#define SGPCA_SOLVER_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sgpca/data.hpp"
#include "sgpca/family.hpp"
#include "sgpca/threshold.hpp"

namespace sgpca {

enum class StepPolicy { Universal, Fixed, LineSearch };

struct SolverConfig {
  Eigen::Index rank = 1;
  SparsityLevel sparsity{};
  int max_outer = 500;
  int max_inner = 50;
  double eps_outer = 1e-6;
  double eps_inner = 1e-6;
  StepPolicy step_policy = StepPolicy::Universal;
  double fixed_tau = 0.0;  // used when step_policy == Fixed
  std::uint64_t seed = 0;

  // Element-wise sparsity applied in a refit stage after progressive
  // screening (0 disables the refit).
  double refit_q_e = 0.0;

  // Optional observer invoked after every accepted outer iterate; used by
  // tests to check per-iterate feasibility. Not part of the fit result.
  std::function<void(int k, const FactorModel&, const Eigen::MatrixXd& theta)>
      on_outer_iterate;

  // Everything except the step policy/family combination.
  void validate_base() const;
  // validate_base plus the policy check: Universal requires a family with a
  // finite curvature bound.
  void validate(const Family& family) const;
};

// One accepted outer iteration of the accelerated solver, recorded when
// AccelConfig::record_diagnostics is set. Enough to re-verify the line-search
// inequality from scratch.
struct AccelIterate {
  int k = 0;
  double theta_k = 0.0;  // momentum weight
  double tau = 0.0;      // accepted step size
  int n_ls = 0;          // backtracks consumed
  double tau0 = 0.0;     // step size the backtracking started from
  bool accepted = false;
  Eigen::MatrixXd y;          // momentum point the gradient was taken at
  Eigen::MatrixXd theta_new;  // accepted iterate
};

struct FitReport {
  FactorModel model;
  // Masked NLL after each outer iteration; entry 0 is the (feasibility-
  // projected) initial point.
  std::vector<double> objective_trace;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> support;  // nonzeros of S
  std::vector<Eigen::Index> row_support;  // rows of S with a nonzero
  double wall_time_sec = 0.0;
  // The Procrustes step hit a rank-deficient cross-product and padded V with
  // an orthonormal completion.
  bool procrustes_completed = false;
  // Backtracking hit its cap without an acceptable step.
  bool line_search_failed = false;
  // A universal/fixed step left the family domain or overflowed; the report
  // carries the iterates up to the failure.
  bool diverged = false;
  std::vector<AccelIterate> accel_trace;
  // Active original-column sets over time when progressive screening ran.
  std::vector<std::vector<Eigen::Index>> active_history;

  double final_objective() const { return objective_trace.back(); }
};

// Gradient-step target Ξ = Θ + (1/ρ)(H∘X − H∘g⁻¹(Θ)).
Eigen::MatrixXd xi_update(const MaskedMatrix& data, const Family& family,
                          const Eigen::MatrixXd& theta_prev, double rho_k);

// Closed-form intercept: α = (1/n)(Ξᵀ − SVᵀ)1ₙ.
Eigen::VectorXd alpha_step(const Eigen::MatrixXd& xi, const Eigen::MatrixXd& v,
                           const Eigen::MatrixXd& s);

// Loading candidate (Ξᵀ − α1ₙᵀ)V before thresholding.
Eigen::MatrixXd s_candidate(const Eigen::MatrixXd& xi,
                            const Eigen::VectorXd& alpha,
                            const Eigen::MatrixXd& v);

// Quantile-thresholded loading update.
Eigen::MatrixXd s_step(const Eigen::MatrixXd& xi, const Eigen::VectorXd& alpha,
                       const Eigen::MatrixXd& v, const SparsityLevel& sparsity);

// Procrustes rotation: V = PQᵀ from the thin SVD (Ξ − 1ₙαᵀ)S = PDQᵀ. When
// the cross-product is rank-deficient the missing directions are drawn from
// a seeded orthonormal completion and *completed is set.
Eigen::MatrixXd v_step(const Eigen::MatrixXd& xi, const Eigen::VectorXd& alpha,
                       const Eigen::MatrixXd& s, std::mt19937_64& rng,
                       bool* completed = nullptr);

// Block-coordinate descent on ½‖1ₙαᵀ + VSᵀ − Ξ‖² over (α, S, V), cycling
// α → S → V until max_inner cycles or all block changes fall below
// eps_inner in max-norm.
FactorModel inner_loop(const Eigen::MatrixXd& xi, const FactorModel& init,
                       const SolverConfig& cfg, std::mt19937_64& rng,
                       bool* completed = nullptr);

struct AccelConfig;

// The full outer loop: Ξ update with ρ = 1/τ, inner BCD, Θ update, stopping
// on max_outer or (‖ΔΘ‖_max ≤ ε and |Δf| ≤ ε). τ comes from the step
// policy; Universal requires a family with a finite curvature bound. For the
// LineSearch policy, backtracking parameters come from line_search (defaults
// when null): the step is accepted once the loss stops increasing.
FitReport fit(const MaskedMatrix& data, const Family& family,
              const SolverConfig& cfg, const FactorModel& init,
              const AccelConfig* line_search = nullptr);

// Flip (V column, S column) pairs so the largest-|S| entry of each column is
// positive; Θ is unchanged. Applied to every reported model.
void canonicalize_signs(FactorModel& model);

}  // namespace sgpca

#endif  // SGPCA_SOLVER_HPP
