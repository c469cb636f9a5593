#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>

#include "sgpca/accel.hpp"
#include "sgpca/rng.hpp"

// The outer loops of the solver family: the plain majorize-minimize loop
// (universal/fixed step or monotone backtracking), the accelerated loop with
// momentum and line search, and the progressive-screening variants of both.
// They share the inner block-coordinate cycle through run_inner below.

namespace sgpca {

void AccelConfig::validate() const {
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("backtracking factor eta must lie in (0, 1)");
  if (max_backtracks < 1)
    throw std::invalid_argument("max_backtracks must be >= 1");
  if (tau0_policy == Tau0Policy::Fixed && !(tau0_fixed > 0.0))
    throw std::invalid_argument("fixed tau0 must be positive");
}

void ScreenSchedule::validate() const {
  if (!(a >= 0.01 && a <= 0.1))
    throw std::invalid_argument("screening decay a must lie in [0.01, 0.1]");
  if (!(q_g > 0.0 && q_g <= 1.0))
    throw std::invalid_argument("screening target q_g must lie in (0, 1]");
}

double momentum_weight(int k) {
  if (k < 1) throw std::invalid_argument("momentum_weight: k must be >= 1");
  if (k <= 2) return 1.0;
  return 2.0 / (static_cast<double>(k) + 2.0);
}

Eigen::Index screen_quota(int t, int k, const ScreenSchedule& sched,
                          Eigen::Index p) {
  if (t < 0 || k < 0)
    throw std::invalid_argument("screen_quota: iteration counters");
  double big_t = 0.0;
  switch (sched.t_mode) {
    case ScreenMode::Outer:
      big_t = static_cast<double>(k);
      break;
    case ScreenMode::Inner:
      big_t = static_cast<double>(t);
      break;
    case ScreenMode::Product:
      big_t = static_cast<double>(k) * static_cast<double>(t);
      break;
  }
  const double decayed =
      std::floor(2.0 * static_cast<double>(p) / (1.0 + std::exp(sched.a * big_t)));
  const auto target = static_cast<Eigen::Index>(
      std::ceil(sched.q_g * static_cast<double>(p) - 1e-9));
  Eigen::Index quota =
      std::max(std::max<Eigen::Index>(target, 1),
               static_cast<Eigen::Index>(decayed));
  return std::min(quota, p);
}

ScreenStepResult progressive_screen_step(const Eigen::MatrixXd& s_candidate,
                                         const Eigen::VectorXd& alpha,
                                         const MaskedMatrix& data_active,
                                         Eigen::Index quota,
                                         const ScreenSchedule& sched) {
  const Eigen::Index d = s_candidate.rows();
  if (alpha.size() != d || data_active.cols() != d)
    throw std::invalid_argument("progressive_screen_step: shape mismatch");
  if (quota > d)
    throw std::invalid_argument("progressive_screen_step: quota exceeds d");
  quota = std::max<Eigen::Index>(1, quota);

  std::vector<Eigen::Index> active = sched.active_set;
  if (active.empty()) {
    active.resize(static_cast<std::size_t>(d));
    std::iota(active.begin(), active.end(), Eigen::Index{0});
  }
  if (static_cast<Eigen::Index>(active.size()) != d)
    throw std::invalid_argument("progressive_screen_step: active set size");

  const Eigen::MatrixXd thresholded = keep_top_rows(s_candidate, quota);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < d; ++i)
    if (thresholded.row(i).squaredNorm() > 0.0) kept.push_back(i);
  if (kept.empty()) {
    // All-zero candidate; fall back to the tie rule's choice.
    for (Eigen::Index i = 0; i < quota; ++i) kept.push_back(i);
  }

  ScreenStepResult out{
      Eigen::MatrixXd(static_cast<Eigen::Index>(kept.size()),
                      s_candidate.cols()),
      Eigen::VectorXd(static_cast<Eigen::Index>(kept.size())),
      data_active.select_columns(kept),
      {},
      kept};
  out.active.reserve(kept.size());
  for (std::size_t a = 0; a < kept.size(); ++a) {
    out.s.row(static_cast<Eigen::Index>(a)) = thresholded.row(kept[a]);
    out.alpha(static_cast<Eigen::Index>(a)) = alpha(kept[a]);
    out.active.push_back(active[static_cast<std::size_t>(kept[a])]);
  }
  return out;
}

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();

double block_change(const FactorModel& a, const FactorModel& b) {
  return std::max({(a.alpha - b.alpha).cwiseAbs().maxCoeff(),
                   (a.S - b.S).cwiseAbs().maxCoeff(),
                   (a.V - b.V).cwiseAbs().maxCoeff()});
}

// Masked NLL that reports domain violations and overflow as +inf, for use
// inside line searches where such a candidate is simply rejected.
double nll_or_inf(const MaskedMatrix& data, const Family& family,
                  const MatrixXd& theta) {
  try {
    const double v = masked_nll(data, family, theta);
    return std::isfinite(v) ? v : kInf;
  } catch (const std::domain_error&) {
    return kInf;
  }
}

double inverse_max_abs(const MaskedMatrix& data) {
  const double m = data.max_abs_value();
  return m > 0.0 ? 1.0 / m : 1.0;
}

void shrink_columns(MatrixXd& m, const std::vector<Index>& keep) {
  MatrixXd out(m.rows(), static_cast<Index>(keep.size()));
  for (std::size_t a = 0; a < keep.size(); ++a)
    out.col(static_cast<Index>(a)) = m.col(keep[a]);
  m = std::move(out);
}

// Live screening state: the active original-column indices, the data
// restricted to them, and frozen intercepts for eliminated columns.
struct ScreenCtx {
  explicit ScreenCtx(MaskedMatrix d) : data(std::move(d)) {}

  Index p_orig = 0;
  Index target = 0;
  ScreenSchedule sched;   // active_set carries the live index list
  MaskedMatrix data;
  VectorXd alpha_frozen;  // p_orig
  std::vector<std::vector<Index>> history;

  Index d() const { return static_cast<Index>(sched.active_set.size()); }
  bool at_target() const { return d() <= target; }
};

struct InnerOut {
  FactorModel model;
  bool procrustes_completed = false;
  bool shrunk = false;
};

// One inner BCD pass: alpha step, thresholded (or screened) S step,
// Procrustes V step, repeated until max_inner or stationarity. When a
// screening step eliminates columns, xi and every follower matrix drop the
// same columns so outer-level bookkeeping stays aligned.
InnerOut run_inner(MatrixXd& xi, const FactorModel& start,
                   const SolverConfig& cfg, int outer_k, ScreenCtx* sc,
                   std::mt19937_64& rng,
                   const std::vector<MatrixXd*>& followers) {
  InnerOut out;
  FactorModel cur = start;
  for (int t = 1; t <= cfg.max_inner; ++t) {
    const FactorModel prev = cur;
    cur.alpha = alpha_step(xi, cur.V, cur.S);
    const MatrixXd cand = s_candidate(xi, cur.alpha, cur.V);
    bool dims_changed = false;
    if (sc) {
      const Index d = cand.rows();
      const Index quota =
          std::min(screen_quota(t, outer_k, sc->sched, sc->p_orig), d);
      ScreenStepResult step =
          progressive_screen_step(cand, cur.alpha, sc->data, quota, sc->sched);
      if (static_cast<Index>(step.kept_local.size()) < d) {
        std::vector<char> keep(static_cast<std::size_t>(d), 0);
        for (Index j : step.kept_local) keep[static_cast<std::size_t>(j)] = 1;
        for (Index j = 0; j < d; ++j)
          if (!keep[static_cast<std::size_t>(j)])
            sc->alpha_frozen(sc->sched.active_set[static_cast<std::size_t>(j)]) =
                cur.alpha(j);
        sc->data = step.data;
        sc->sched.active_set = step.active;
        sc->history.push_back(step.active);
        cur.alpha = step.alpha;
        cur.S = step.s;
        shrink_columns(xi, step.kept_local);
        for (MatrixXd* f : followers) shrink_columns(*f, step.kept_local);
        dims_changed = true;
        out.shrunk = true;
      } else {
        cur.S = step.s;
      }
    } else {
      cur.S = quantile_threshold(cand, cfg.sparsity);
    }
    cur.V = v_step(xi, cur.alpha, cur.S, rng, &out.procrustes_completed);
    if (!dims_changed && block_change(cur, prev) <= cfg.eps_inner) break;
  }
  out.model = std::move(cur);
  return out;
}

struct EngineSetup {
  FactorModel model;
  std::optional<ScreenCtx> sc;
};

EngineSetup prepare(const MaskedMatrix& data, const SolverConfig& cfg,
                    const ScreenSchedule* sched, const FactorModel& init) {
  init.validate(data.rows(), data.cols());
  if (cfg.rank != init.rank())
    throw std::invalid_argument("config rank does not match the initial model");
  EngineSetup setup;
  setup.model = init;
  if (!sched) {
    // Project the initial loading matrix onto the cardinality constraint so
    // the recorded objective is the constrained one from step zero.
    setup.model.S = quantile_threshold(setup.model.S, cfg.sparsity);
    return setup;
  }
  sched->validate();
  ScreenCtx ctx(data);
  ctx.p_orig = data.cols();
  ctx.sched = *sched;
  if (ctx.sched.active_set.empty()) {
    ctx.sched.active_set.resize(static_cast<std::size_t>(data.cols()));
    std::iota(ctx.sched.active_set.begin(), ctx.sched.active_set.end(),
              Index{0});
  } else {
    for (Index c : ctx.sched.active_set)
      if (c < 0 || c >= data.cols())
        throw std::invalid_argument("screening active set index out of range");
    ctx.data = data.select_columns(ctx.sched.active_set);
    const Index d = ctx.d();
    VectorXd alpha(d);
    MatrixXd s(d, init.rank());
    for (Index a = 0; a < d; ++a) {
      alpha(a) = init.alpha(ctx.sched.active_set[static_cast<std::size_t>(a)]);
      s.row(a) = init.S.row(ctx.sched.active_set[static_cast<std::size_t>(a)]);
    }
    setup.model.alpha = std::move(alpha);
    setup.model.S = std::move(s);
  }
  ctx.target = std::min(
      data.cols(),
      std::max<Index>(1, static_cast<Index>(std::ceil(
                             ctx.sched.q_g *
                                 static_cast<double>(ctx.p_orig) -
                             1e-9))));
  ctx.alpha_frozen = init.alpha;
  ctx.history.push_back(ctx.sched.active_set);
  setup.sc = std::move(ctx);
  return setup;
}

void fill_support(FitReport& rep) {
  rep.support.clear();
  rep.row_support.clear();
  const MatrixXd& s = rep.model.S;
  for (Index i = 0; i < s.rows(); ++i) {
    bool any = false;
    for (Index j = 0; j < s.cols(); ++j)
      if (s(i, j) != 0.0) {
        rep.support.emplace_back(i, j);
        any = true;
      }
    if (any) rep.row_support.push_back(i);
  }
}

void finalize(FitReport& rep, FactorModel model,
              const std::optional<ScreenCtx>& sc,
              std::chrono::steady_clock::time_point started) {
  if (sc) {
    FactorModel full;
    full.alpha = sc->alpha_frozen;
    full.V = model.V;
    full.S = MatrixXd::Zero(sc->p_orig, model.rank());
    for (std::size_t a = 0; a < sc->sched.active_set.size(); ++a) {
      const Index orig = sc->sched.active_set[a];
      full.alpha(orig) = model.alpha(static_cast<Index>(a));
      full.S.row(orig) = model.S.row(static_cast<Index>(a));
    }
    model = std::move(full);
    rep.active_history = sc->history;
  }
  canonicalize_signs(model);
  rep.model = std::move(model);
  fill_support(rep);
  rep.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
}

FitReport run_plain(const MaskedMatrix& data_full, const Family& family,
                    const SolverConfig& cfg, const AccelConfig* ls,
                    const ScreenSchedule* sched, const FactorModel& init) {
  const auto started = std::chrono::steady_clock::now();
  cfg.validate(family);
  if (ls) ls->validate();
  const double eta = ls ? ls->eta : 0.5;
  const int max_bt = ls ? ls->max_backtracks : 10;

  EngineSetup setup = prepare(data_full, cfg, sched, init);
  FactorModel model = std::move(setup.model);
  std::optional<ScreenCtx> sc = std::move(setup.sc);
  auto current_data = [&]() -> const MaskedMatrix& {
    return sc ? sc->data : data_full;
  };

  std::mt19937_64 rng = make_rng(cfg.seed, "procrustes");
  MatrixXd theta = model.theta();
  double f = masked_nll(current_data(), family, theta);

  FitReport rep;
  rep.objective_trace.push_back(f);
  double tau_accepted = 0.0;
  bool converged = false;
  int executed = 0;

  for (int k = 1; k <= cfg.max_outer; ++k) {
    executed = k;
    MatrixXd theta_new;
    double f_new = kInf;
    double f_prev_cmp = f;

    if (cfg.step_policy != StepPolicy::LineSearch) {
      const double tau = cfg.step_policy == StepPolicy::Universal
                             ? *family.universal_step()
                             : cfg.fixed_tau;
      try {
        MatrixXd xi = theta - tau * grad_theta(current_data(), family, theta);
        InnerOut inner =
            run_inner(xi, model, cfg, k, sc ? &*sc : nullptr, rng, {&theta});
        rep.procrustes_completed |= inner.procrustes_completed;
        if (inner.shrunk)
          f_prev_cmp = masked_nll(current_data(), family, theta);
        model = std::move(inner.model);
        theta_new = model.theta();
        f_new = masked_nll(current_data(), family, theta_new);
      } catch (const std::domain_error&) {
        rep.diverged = true;
      }
      if (!rep.diverged && !std::isfinite(f_new)) rep.diverged = true;
      if (rep.diverged) {
        executed = k - 1;
        break;
      }
    } else {
      // Monotone backtracking: shrink tau until the candidate does not
      // increase the loss.
      double tau0 = ls && ls->tau0_policy == Tau0Policy::Fixed
                        ? ls->tau0_fixed
                        : inverse_max_abs(current_data());
      if (ls && ls->warm_start_tau && tau_accepted > 0.0)
        tau0 = tau_accepted / eta;
      const MatrixXd grad = grad_theta(current_data(), family, theta);
      double tau = tau0;
      bool accepted = false;
      for (int n_ls = 0; n_ls <= max_bt; ++n_ls, tau *= eta) {
        FactorModel m_c = model;
        std::optional<ScreenCtx> sc_c = sc;
        MatrixXd theta_c = theta;
        MatrixXd xi = theta_c - tau * grad;
        InnerOut inner = run_inner(xi, m_c, cfg, k, sc_c ? &*sc_c : nullptr,
                                   rng, {&theta_c});
        const MaskedMatrix& d_c = sc_c ? sc_c->data : data_full;
        m_c = std::move(inner.model);
        const MatrixXd cand_theta = m_c.theta();
        const double cand_f = nll_or_inf(d_c, family, cand_theta);
        double prev_f = f;
        if (inner.shrunk) prev_f = nll_or_inf(d_c, family, theta_c);
        if (cand_f <= prev_f + 1e-12 * (1.0 + std::abs(prev_f))) {
          rep.procrustes_completed |= inner.procrustes_completed;
          model = std::move(m_c);
          sc = std::move(sc_c);
          theta = std::move(theta_c);
          theta_new = cand_theta;
          f_new = cand_f;
          f_prev_cmp = prev_f;
          tau_accepted = tau;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        rep.line_search_failed = true;
        executed = k - 1;
      }
    }
    if (rep.line_search_failed) break;
    rep.objective_trace.push_back(f_new);
    if (cfg.on_outer_iterate) cfg.on_outer_iterate(k, model, theta_new);
    const double dtheta = (theta_new - theta).cwiseAbs().maxCoeff();
    const double df = std::abs(f_new - f_prev_cmp);
    theta = std::move(theta_new);
    f = f_new;
    const bool schedule_done = !sc || sc->at_target();
    if (schedule_done && dtheta <= cfg.eps_outer && df <= cfg.eps_outer) {
      converged = true;
      break;
    }
  }

  rep.iterations = executed;
  rep.converged = converged;
  finalize(rep, std::move(model), sc, started);
  return rep;
}

FitReport run_accel(const MaskedMatrix& data_full, const Family& family,
                    const SolverConfig& cfg, const AccelConfig& acc,
                    const ScreenSchedule* sched, const FactorModel& init) {
  const auto started = std::chrono::steady_clock::now();
  acc.validate();
  cfg.validate_base();

  EngineSetup setup = prepare(data_full, cfg, sched, init);
  FactorModel model = std::move(setup.model);
  std::optional<ScreenCtx> sc = std::move(setup.sc);

  std::mt19937_64 rng = make_rng(cfg.seed, "procrustes");
  MatrixXd theta = model.theta();
  MatrixXd nu = theta;
  double f = masked_nll(sc ? sc->data : data_full, family, theta);

  FitReport rep;
  rep.objective_trace.push_back(f);
  double tau_accepted = 0.0;
  bool converged = false;
  int executed = 0;

  for (int k = 1; k <= cfg.max_outer; ++k) {
    executed = k;
    const double theta_k = momentum_weight(k);
    bool accepted = false;
    MatrixXd theta_committed_prev;
    double f_prev_cmp = f;

    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) nu = theta;  // momentum restart after a failed search
      const MaskedMatrix& d_cur = sc ? sc->data : data_full;
      const MatrixXd y = (1.0 - theta_k) * theta + theta_k * nu;
      MatrixXd grad_y;
      double f_y;
      try {
        grad_y = grad_theta(d_cur, family, y);
        f_y = masked_nll(d_cur, family, y);
      } catch (const std::domain_error&) {
        continue;  // restart with the momentum reset
      }
      if (!std::isfinite(f_y)) continue;

      double tau0 = acc.tau0_policy == Tau0Policy::Fixed
                        ? acc.tau0_fixed
                        : inverse_max_abs(d_cur);
      if (acc.warm_start_tau && tau_accepted > 0.0)
        tau0 = tau_accepted / acc.eta;
      double tau = tau0;
      for (int n_ls = 1; n_ls <= acc.max_backtracks; ++n_ls) {
        tau *= acc.eta;
        FactorModel m_c = model;
        std::optional<ScreenCtx> sc_c = sc;
        MatrixXd theta_c = theta;
        MatrixXd nu_c = nu;
        MatrixXd y_c = y;
        MatrixXd grad_c = grad_y;
        MatrixXd xi = nu_c - (tau / theta_k) * grad_c;
        InnerOut inner = run_inner(xi, m_c, cfg, k, sc_c ? &*sc_c : nullptr,
                                   rng, {&theta_c, &nu_c, &y_c, &grad_c});
        const MaskedMatrix& d_c = sc_c ? sc_c->data : data_full;
        m_c = std::move(inner.model);
        const MatrixXd nu_new = m_c.theta();
        const MatrixXd theta_new =
            (1.0 - theta_k) * theta_c + theta_k * nu_new;
        const double f_new = nll_or_inf(d_c, family, theta_new);
        double f_y_c = f_y;
        double f_prev = f;
        if (inner.shrunk) {
          f_y_c = nll_or_inf(d_c, family, y_c);
          f_prev = nll_or_inf(d_c, family, theta_c);
        }
        const MatrixXd diff = theta_new - y_c;
        const double bound = f_y_c + grad_c.cwiseProduct(diff).sum() +
                             theta_k / (2.0 * tau) * diff.squaredNorm();
        const bool ls_ok =
            f_new <= bound + 1e-12 * (1.0 + std::abs(f_y_c));
        const bool descent_ok =
            f_new <= f_prev + 1e-12 * (1.0 + std::abs(f_prev));
        if (std::isfinite(f_new) && ls_ok && descent_ok) {
          rep.procrustes_completed |= inner.procrustes_completed;
          if (acc.record_diagnostics) {
            AccelIterate it;
            it.k = k;
            it.theta_k = theta_k;
            it.tau = tau;
            it.n_ls = n_ls;
            it.tau0 = tau0;
            it.accepted = true;
            it.y = y_c;
            it.theta_new = theta_new;
            rep.accel_trace.push_back(std::move(it));
          }
          model = std::move(m_c);
          sc = std::move(sc_c);
          theta_committed_prev = std::move(theta_c);
          nu = nu_new;
          theta = theta_new;
          f_prev_cmp = f_prev;
          f = f_new;
          tau_accepted = tau;
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      rep.line_search_failed = true;
      executed = k - 1;
      break;
    }

    rep.objective_trace.push_back(f);
    if (cfg.on_outer_iterate) cfg.on_outer_iterate(k, model, theta);
    const double dtheta =
        (theta - theta_committed_prev).cwiseAbs().maxCoeff();
    const double df = std::abs(f - f_prev_cmp);
    const bool schedule_done = !sc || sc->at_target();
    if (schedule_done && dtheta <= cfg.eps_outer && df <= cfg.eps_outer) {
      converged = true;
      break;
    }
  }

  rep.iterations = executed;
  rep.converged = converged;
  finalize(rep, std::move(model), sc, started);
  return rep;
}

}  // namespace

FitReport fit(const MaskedMatrix& data, const Family& family,
              const SolverConfig& cfg, const FactorModel& init,
              const AccelConfig* line_search) {
  return run_plain(data, family, cfg, line_search, nullptr, init);
}

FitReport fit_accelerated(const MaskedMatrix& data, const Family& family,
                          const SolverConfig& cfg, const AccelConfig& acc,
                          const FactorModel& init) {
  return run_accel(data, family, cfg, acc, nullptr, init);
}

FitReport fit_progressive(const MaskedMatrix& data, const Family& family,
                          const SolverConfig& cfg, const AccelConfig& acc,
                          const ScreenSchedule& sched,
                          const FactorModel& init) {
  const auto started = std::chrono::steady_clock::now();
  if (cfg.sparsity.mode != SparsityMode::GroupWise)
    throw std::invalid_argument(
        "progressive screening requires group-wise sparsity");
  FitReport rep = cfg.step_policy == StepPolicy::LineSearch
                      ? run_accel(data, family, cfg, acc, &sched, init)
                      : run_plain(data, family, cfg, &acc, &sched, init);

  if (cfg.refit_q_e > 0.0 && cfg.refit_q_e < 1.0 + 1e-12 &&
      !rep.line_search_failed) {
    // Element-wise refit on the surviving columns, warm-started from the
    // screened model.
    const std::vector<Eigen::Index>& active = rep.active_history.back();
    const MaskedMatrix sub = data.select_columns(active);
    const Eigen::Index d = static_cast<Eigen::Index>(active.size());
    FactorModel warm;
    warm.V = rep.model.V;
    warm.alpha = Eigen::VectorXd(d);
    warm.S = Eigen::MatrixXd(d, rep.model.rank());
    for (Eigen::Index a = 0; a < d; ++a) {
      warm.alpha(a) = rep.model.alpha(active[static_cast<std::size_t>(a)]);
      warm.S.row(a) = rep.model.S.row(active[static_cast<std::size_t>(a)]);
    }
    SolverConfig refit_cfg = cfg;
    refit_cfg.sparsity = SparsityLevel{cfg.refit_q_e, SparsityMode::ElementWise};
    refit_cfg.refit_q_e = 0.0;
    FitReport second =
        cfg.step_policy == StepPolicy::LineSearch
            ? run_accel(sub, family, refit_cfg, acc, nullptr, warm)
            : run_plain(sub, family, refit_cfg, &acc, nullptr, warm);

    FactorModel merged;
    merged.alpha = rep.model.alpha;
    merged.V = second.model.V;
    merged.S = Eigen::MatrixXd::Zero(data.cols(), rep.model.rank());
    for (Eigen::Index a = 0; a < d; ++a) {
      merged.alpha(active[static_cast<std::size_t>(a)]) =
          second.model.alpha(a);
      merged.S.row(active[static_cast<std::size_t>(a)]) = second.model.S.row(a);
    }
    rep.model = std::move(merged);
    rep.objective_trace.insert(rep.objective_trace.end(),
                               second.objective_trace.begin() + 1,
                               second.objective_trace.end());
    rep.iterations += second.iterations;
    rep.converged = second.converged;
    rep.procrustes_completed |= second.procrustes_completed;
    rep.line_search_failed |= second.line_search_failed;
    rep.accel_trace.insert(rep.accel_trace.end(), second.accel_trace.begin(),
                           second.accel_trace.end());
    rep.support.clear();
    rep.row_support.clear();
    for (Eigen::Index i = 0; i < rep.model.S.rows(); ++i) {
      bool any = false;
      for (Eigen::Index j = 0; j < rep.model.S.cols(); ++j)
        if (rep.model.S(i, j) != 0.0) {
          rep.support.emplace_back(i, j);
          any = true;
        }
      if (any) rep.row_support.push_back(i);
    }
  }
  rep.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return rep;
}

}  // namespace sgpca
