#ifndef SGPCA_ACCEL_HPP
#define SGPCA_ACCEL_HPP

#include <vector>

#include <Eigen/Dense>

#include "sgpca/solver.hpp"

namespace sgpca {

enum class Tau0Policy { InverseMaxAbs, Fixed };

// Nesterov-style acceleration with backtracking line search, for families
// without a universal step size.
struct AccelConfig {
  double eta = 0.5;       // backtracking factor, 0 < eta < 1
  int max_backtracks = 10;
  Tau0Policy tau0_policy = Tau0Policy::InverseMaxAbs;
  double tau0_fixed = 0.0;
  // Start each outer iteration's backtracking from the last accepted step
  // instead of resetting to tau0.
  bool warm_start_tau = false;
  bool record_diagnostics = false;

  void validate() const;
};

enum class ScreenMode { Outer, Inner, Product };

// Sigmoidal dimension-screening schedule: the row quota decays from p toward
// ceil(q_g * p) as Q(T) = 2p / (1 + exp(a*T)), with T driven by the outer
// iteration, the inner iteration, or their product. active_set holds the
// surviving original column indices; once a column leaves it never returns.
struct ScreenSchedule {
  double a = 0.05;  // decay speed, recommended range [0.01, 0.1]
  ScreenMode t_mode = ScreenMode::Outer;
  double q_g = 1.0;  // target fraction of surviving rows
  std::vector<Eigen::Index> active_set;

  void validate() const;
};

// Momentum weight: 1 for k in {1,2}, 2/(k+2) afterwards.
double momentum_weight(int k);

// Row quota at inner step t of outer step k for an original dimension count
// p: max(ceil(q_g*p), floor(2p/(1+exp(a*T)))). Callers clamp to the current
// active count.
Eigen::Index screen_quota(int t, int k, const ScreenSchedule& sched,
                          Eigen::Index p);

struct ScreenStepResult {
  Eigen::MatrixXd s;                       // compacted loading matrix
  Eigen::VectorXd alpha;                   // compacted intercept
  MaskedMatrix data;                       // active-column data
  std::vector<Eigen::Index> active;        // surviving original indices
  std::vector<Eigen::Index> kept_local;    // surviving positions, old frame
};

// One screening step: group-threshold the S-step candidate down to `quota`
// rows, drop the zeroed rows from S, alpha and the active data columns, and
// compose the original-index bookkeeping.
ScreenStepResult progressive_screen_step(const Eigen::MatrixXd& s_candidate,
                                         const Eigen::VectorXd& alpha,
                                         const MaskedMatrix& data_active,
                                         Eigen::Index quota,
                                         const ScreenSchedule& sched);

// Accelerated outer loop (momentum + line search) around the same inner BCD.
FitReport fit_accelerated(const MaskedMatrix& data, const Family& family,
                          const SolverConfig& cfg, const AccelConfig& acc,
                          const FactorModel& init);

// Group-wise fit with the S-step replaced by progressive screening, followed
// by an optional element-wise refit on the surviving columns (enabled via
// SolverConfig::refit_q_e). Uses the plain outer loop for Universal/Fixed
// step policies and the accelerated one for LineSearch. The reported model
// is mapped back to full coordinates with zero rows for screened-out
// columns.
FitReport fit_progressive(const MaskedMatrix& data, const Family& family,
                          const SolverConfig& cfg, const AccelConfig& acc,
                          const ScreenSchedule& sched, const FactorModel& init);

}  // namespace sgpca

#endif  // SGPCA_ACCEL_HPP
