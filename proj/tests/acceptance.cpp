// Acceptance suite: one checkable criterion per section, one PASS/FAIL line
// each. Run all criteria with no arguments or a single criterion by number.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sgpca/accel.hpp"
#include "sgpca/metrics.hpp"
#include "sgpca/multistart.hpp"
#include "sgpca/rng.hpp"
#include "sgpca/sim.hpp"
#include "sgpca/solver.hpp"
#include "test_support.hpp"

using namespace sgpca;
using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream log;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << "    failed: " << what << "\n";
    }
  }
  void note(const std::string& what) { log << "    " << what << "\n"; }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

MaskedMatrix center_columns(const MaskedMatrix& data) {
  MatrixXd values = data.values();
  for (Index j = 0; j < data.cols(); ++j) {
    const double count = data.mask().col(j).sum();
    if (count == 0.0) continue;
    const double mean = values.col(j).sum() / count;
    for (Index i = 0; i < data.rows(); ++i)
      if (data.mask()(i, j) != 0.0) values(i, j) -= mean;
  }
  return MaskedMatrix(std::move(values), data.mask());
}

double ey_residual(const MatrixXd& x, Index r) {
  Eigen::JacobiSVD<MatrixXd> svd(x);
  double acc = 0.0;
  for (Index i = r; i < svd.singularValues().size(); ++i)
    acc += svd.singularValues()(i) * svd.singularValues()(i);
  return acc;
}

// ---- criterion 1: universal-step descent ---------------------------------

void criterion_descent(Check& c) {
  std::mt19937_64 rng(101);
  for (FamilyKind kind : {FamilyKind::Gaussian, FamilyKind::Bernoulli}) {
    Family fam(kind);
    for (int rep = 0; rep < 50; ++rep) {
      auto inst = sgpca_test::random_instance(rng, kind, 30, 20, 3, 0.10);
      SolverConfig cfg;
      cfg.rank = 3;
      cfg.sparsity = {0.4, SparsityMode::ElementWise};
      cfg.max_outer = 60;
      cfg.eps_outer = 1e-9;
      const FitReport r = fit(inst.data, fam, cfg,
                              random_init(30, 20, 3, 1000 + rep));
      for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
        c.expect(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-10,
                 fam.name() + " trace increased at step " + std::to_string(i));
    }
  }
}

// ---- criterion 2: Eckart-Young oracle -------------------------------------

void criterion_eckart_young(Check& c) {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const Index n = 40, p = 25, r = 5;
    VectorXd d(r);
    d << 10.0, 8.0, 6.0, 5.0, 4.0;
    MatrixXd x = gaussian_matrix(rng, n, r) * d.asDiagonal() *
                     random_orthonormal(rng, p, r).transpose() +
                 0.5 * gaussian_matrix(rng, n, p);
    MaskedMatrix data = center_columns(MaskedMatrix::fully_observed(x));

    SolverConfig cfg;
    cfg.rank = r;
    cfg.sparsity = {1.0, SparsityMode::ElementWise};
    cfg.max_outer = 100;
    cfg.max_inner = 300;
    cfg.eps_outer = 1e-11;
    cfg.eps_inner = 1e-13;
    const FitReport rep_fit = fit(data, Family(FamilyKind::Gaussian), cfg,
                                  random_init(n, p, r, 2000 + rep));
    const double loss =
        2.0 * rep_fit.final_objective() + data.values().squaredNorm();
    const double oracle = ey_residual(data.values(), r);
    const double rel = std::abs(loss - oracle) / std::max(1.0, oracle);
    worst = std::max(worst, rel);
    c.expect(rel <= 1e-6, "relative gap " + num(rel) +
                              " above 1e-6 on repetition " +
                              std::to_string(rep));
  }
  c.note("worst relative gap to the truncated-SVD optimum: " + num(worst));
}

// ---- criterion 3: gradient correctness ------------------------------------

void criterion_gradients(Check& c) {
  std::mt19937_64 rng(303);
  for (FamilyKind kind : {FamilyKind::Gaussian, FamilyKind::Bernoulli,
                          FamilyKind::Poisson}) {
    Family fam(kind);
    for (int rep = 0; rep < 20; ++rep) {
      const Index n = 4 + static_cast<Index>(rng() % 5);
      const Index p = 4 + static_cast<Index>(rng() % 5);
      const Index r = 1 + static_cast<Index>(rng() % 3);
      auto inst = sgpca_test::random_instance(rng, kind, n, p, r);
      const Gradients an = gradients(inst.data, fam, inst.model);
      const auto fd = sgpca_test::fd_gradients(inst.data, fam, inst.model);
      c.expect(sgpca_test::rel_error(an.s, fd.s) <= 1e-5,
               fam.name() + " S-gradient off on repetition " +
                   std::to_string(rep));
      c.expect(sgpca_test::rel_error(an.v, fd.v) <= 1e-5,
               fam.name() + " V-gradient off");
      c.expect(sgpca_test::rel_error(an.alpha, fd.alpha) <= 1e-5,
               fam.name() + " alpha-gradient off");
    }
  }
}

// ---- criterion 4: per-iterate feasibility ---------------------------------

void criterion_feasibility(Check& c) {
  std::mt19937_64 rng(404);
  int iterates = 0;

  auto observer = [&](Index cap_elems, Index cap_rows, Index r) {
    return [&, cap_elems, cap_rows, r](int, const FactorModel& m,
                                       const MatrixXd&) {
      ++iterates;
      Index nnz = 0, rows = 0;
      for (Index i = 0; i < m.S.rows(); ++i) {
        bool any = false;
        for (Index j = 0; j < m.S.cols(); ++j)
          if (m.S(i, j) != 0.0) {
            ++nnz;
            any = true;
          }
        rows += any;
      }
      if (cap_elems > 0)
        c.expect(nnz <= cap_elems, "element support above floor(qe*p*r)");
      if (cap_rows > 0)
        c.expect(rows <= cap_rows, "row support above floor(qg*p)");
      c.expect((m.V.transpose() * m.V -
                MatrixXd::Identity(r, r)).norm() <= 1e-8,
               "V drifted from orthonormality");
    };
  };

  {  // Gaussian, element-wise, masked
    auto inst = sgpca_test::random_instance(rng, FamilyKind::Gaussian, 25, 15,
                                            2, 0.15);
    SolverConfig cfg;
    cfg.rank = 2;
    cfg.sparsity = {0.3, SparsityMode::ElementWise};
    cfg.max_outer = 40;
    cfg.on_outer_iterate = observer(keep_count(0.3, 15 * 2), 0, 2);
    fit(inst.data, Family(FamilyKind::Gaussian), cfg,
        random_init(25, 15, 2, 1));
  }
  {  // Bernoulli, group-wise
    auto inst = sgpca_test::random_instance(rng, FamilyKind::Bernoulli, 25, 15,
                                            2, 0.10);
    SolverConfig cfg;
    cfg.rank = 2;
    cfg.sparsity = {0.4, SparsityMode::GroupWise};
    cfg.max_outer = 40;
    cfg.on_outer_iterate = observer(0, keep_count(0.4, 15), 2);
    fit(inst.data, Family(FamilyKind::Bernoulli), cfg,
        random_init(25, 15, 2, 2));
  }
  {  // Poisson, accelerated, element-wise
    auto inst = sgpca_test::random_instance(rng, FamilyKind::Poisson, 20, 12,
                                            1, 0.10);
    SolverConfig cfg;
    cfg.rank = 1;
    cfg.sparsity = {0.5, SparsityMode::ElementWise};
    cfg.max_outer = 50;
    cfg.on_outer_iterate = observer(keep_count(0.5, 12), 0, 1);
    fit_accelerated(inst.data, Family(FamilyKind::Poisson), cfg, AccelConfig{},
                    random_init(20, 12, 1, 3));
  }
  c.expect(iterates > 30, "too few iterates observed");
  c.note("checked " + std::to_string(iterates) + " outer iterates");
}

// ---- criterion 5: setting (a) support recovery ----------------------------

void criterion_setting_a(Check& c) {
  std::vector<double> mrs, fps, errs;
  for (int rep = 0; rep < 20; ++rep) {
    SimSpec spec;
    spec.family = Family(FamilyKind::Gaussian);
    spec.n = 100;
    spec.p = 200;
    spec.r_star = 1;
    spec.q_star = 0.01;
    spec.q_mode = SparsityMode::ElementWise;
    spec.lambdas = VectorXd::Constant(1, 10.0);
    spec.seed = derive_seed(505, "sim", rep);
    const SimData sim = generate_data(spec);

    SolverConfig cfg;
    cfg.rank = 1;
    cfg.sparsity = {0.01, SparsityMode::ElementWise};
    cfg.max_outer = 300;
    cfg.eps_outer = 1e-6;
    MultiStartConfig ms = default_multistart(FamilyKind::Gaussian);
    ms.seed = derive_seed(505, "fit", rep);
    const FitReport fr = multi_start_fit(
        sim.x, spec.family, cfg, ms,
        [](const MaskedMatrix& d, const Family& f, const SolverConfig& cc,
           const FactorModel& m) { return fit(d, f, cc, m); });

    const auto [mr, fp] =
        selection_rates(fr.model.S, sim.truth.q, SparsityMode::ElementWise);
    mrs.push_back(mr);
    fps.push_back(fp);
    errs.push_back(theta_error(fr.model.theta(), sim.truth.theta_star));
  }
  const double mr = trimmed_mean(mrs, 0.1);
  const double fp = trimmed_mean(fps, 0.1);
  const double err = trimmed_mean(errs, 0.1);
  c.note("trimmed means: MR " + num(100.0 * mr) + "%, FP " +
         num(100.0 * fp) + "%, theta-error " + num(err));
  c.expect(mr == 0.0, "trimmed-mean miss rate above 0");
  c.expect(fp == 0.0, "trimmed-mean false positive rate above 0");
  c.expect(err <= 1.0, "trimmed-mean theta-error above 1.0");
  if (err > 1.0)
    c.note(
        "theta-error floor: the model estimates p intercepts plus n*r scores "
        "plus k loadings against unit-variance noise, so "
        "E||dTheta||_F^2 ~= p + n r + k = 302 and the scaled metric cannot "
        "fall below ~15 at n=100, p=200; the <= 1.0 bound is unreachable at "
        "these pinned settings (see the support-recovery claims, which do "
        "hold).");
}

// ---- criterion 6: Bernoulli beats Gaussian on Bernoulli data --------------

void criterion_family_choice(Check& c) {
  std::vector<double> bern_angle, gauss_angle;
  for (int rep = 0; rep < 20; ++rep) {
    SimSpec spec;
    spec.family = Family(FamilyKind::Bernoulli);
    spec.n = 100;
    spec.p = 200;
    spec.r_star = 1;
    spec.q_star = 0.05;
    spec.q_mode = SparsityMode::ElementWise;
    spec.lambdas = VectorXd::Constant(1, 10.0);
    spec.seed = derive_seed(606, "sim", rep);
    const SimData sim = generate_data(spec);

    auto run_fit = [&](FamilyKind kind) {
      SolverConfig cfg;
      cfg.rank = 1;
      cfg.sparsity = {0.05, SparsityMode::ElementWise};
      cfg.max_outer = 200;
      cfg.eps_outer = 1e-5;
      cfg.eps_inner = 1e-5;
      MultiStartConfig ms = default_multistart(kind);
      ms.seed = derive_seed(606, "fit", rep);
      return multi_start_fit(
          sim.x, Family(kind), cfg, ms,
          [](const MaskedMatrix& d, const Family& f, const SolverConfig& cc,
             const FactorModel& m) { return fit(d, f, cc, m); });
    };
    bern_angle.push_back(
        max_canonical_angle(run_fit(FamilyKind::Bernoulli).model.S,
                            sim.truth.q));
    gauss_angle.push_back(
        max_canonical_angle(run_fit(FamilyKind::Gaussian).model.S,
                            sim.truth.q));
  }
  const double bern = trimmed_mean(bern_angle, 0.1);
  const double gauss = trimmed_mean(gauss_angle, 0.1);
  c.note("trimmed-mean max canonical angle: bernoulli " + num(bern) +
         " deg vs gaussian " + num(gauss) + " deg");
  c.expect(bern <= gauss,
           "Bernoulli-family fit did not beat the Gaussian fit on angle");
}

// ---- criterion 7: progressive screening selectivity ------------------------

void criterion_screening(Check& c) {
  int clean = 0;
  const Index n = 100, p = 300, r = 3;
  for (int rep = 0; rep < 20; ++rep) {
    SimSpec spec;
    spec.family = Family(FamilyKind::Gaussian);
    spec.n = n;
    spec.p = p;
    spec.r_star = r;
    spec.q_star = 3.0 / (static_cast<double>(p) * r);  // three spike columns
    spec.q_mode = SparsityMode::ElementWise;
    spec.lambdas = VectorXd::Constant(r, 20.0);
    spec.seed = derive_seed(707, "sim", rep);
    const SimData sim = generate_data(spec);
    std::vector<Index> truth_rows;
    for (Index i = 0; i < p; ++i)
      if (sim.truth.q.row(i).norm() > 0.0) truth_rows.push_back(i);

    SolverConfig cfg;
    cfg.rank = r;
    cfg.sparsity = {0.02, SparsityMode::GroupWise};  // screen to <= 6 columns
    cfg.max_outer = 160;
    cfg.eps_outer = 1e-7;
    cfg.refit_q_e = 1.0 / 6.0;  // keep floor(18/6) = 3 entries in the refit
    ScreenSchedule sched;
    sched.q_g = 0.02;
    sched.a = 0.05;
    const FitReport fr =
        fit_progressive(sim.x, spec.family, cfg, AccelConfig{}, sched,
                        random_init(n, p, r, derive_seed(707, "init", rep)));

    bool no_nuisance = true;
    for (Index row : fr.row_support)
      if (std::find(truth_rows.begin(), truth_rows.end(), row) ==
          truth_rows.end())
        no_nuisance = false;
    c.expect(static_cast<Index>(fr.active_history.back().size()) <= 6,
             "screened set larger than the quota target");
    if (no_nuisance && !fr.row_support.empty()) ++clean;
  }
  c.note(std::to_string(clean) + " of 20 runs selected zero nuisance columns");
  c.expect(clean >= 18, "fewer than 18 of 20 clean runs");
}

// ---- criterion 8: Poisson line-search soundness ----------------------------

void criterion_line_search(Check& c) {
  std::mt19937_64 rng(808);
  Family fam(FamilyKind::Poisson);
  for (int rep = 0; rep < 20; ++rep) {
    auto inst = sgpca_test::random_instance(rng, FamilyKind::Poisson, 20, 12,
                                            1, 0.10);
    SolverConfig cfg;
    cfg.rank = 1;
    cfg.sparsity = {0.5, SparsityMode::ElementWise};
    cfg.max_outer = 80;
    AccelConfig acc;
    acc.record_diagnostics = true;
    const FitReport fr = fit_accelerated(inst.data, fam, cfg, acc,
                                         random_init(20, 12, 1, 3000 + rep));
    for (std::size_t i = 1; i < fr.objective_trace.size(); ++i)
      c.expect(fr.objective_trace[i] <= fr.objective_trace[i - 1] + 1e-8,
               "objective increased on repetition " + std::to_string(rep));
    c.expect(!fr.accel_trace.empty(), "no accepted iterates recorded");
    for (const AccelIterate& it : fr.accel_trace) {
      const double f_new = masked_nll(inst.data, fam, it.theta_new);
      const double f_y = masked_nll(inst.data, fam, it.y);
      const MatrixXd g = grad_theta(inst.data, fam, it.y);
      const MatrixXd diff = it.theta_new - it.y;
      const double bound = f_y + g.cwiseProduct(diff).sum() +
                           it.theta_k / (2.0 * it.tau) * diff.squaredNorm();
      c.expect(f_new <= bound + 1e-9 * std::max(1.0, std::abs(bound)),
               "line-search inequality violated at k=" + std::to_string(it.k));
    }
  }
}

// ---- criterion 9: masking invariance ---------------------------------------

void criterion_masking(Check& c) {
  std::mt19937_64 rng(909);
  for (FamilyKind kind : {FamilyKind::Gaussian, FamilyKind::Bernoulli}) {
    const Index n = 20, p = 12, r = 2;
    auto inst = sgpca_test::random_instance(rng, kind, n, p, r, 0.25);
    MatrixXd tampered = inst.data.values();
    for (Index j = 0; j < p; ++j)
      for (Index i = 0; i < n; ++i)
        if (!inst.data.observed(i, j)) tampered(i, j) = 1e6 + i + j;
    MaskedMatrix other(tampered, inst.data.mask());

    SolverConfig cfg;
    cfg.rank = r;
    cfg.sparsity = {0.4, SparsityMode::ElementWise};
    cfg.max_outer = 30;
    const FactorModel init = random_init(n, p, r, 4000);
    const FitReport a = fit(inst.data, Family(kind), cfg, init);
    const FitReport b = fit(other, Family(kind), cfg, init);
    c.expect((a.model.S - b.model.S).cwiseAbs().maxCoeff() == 0.0,
             "S differs after masked-cell perturbation");
    c.expect((a.model.V - b.model.V).cwiseAbs().maxCoeff() == 0.0,
             "V differs after masked-cell perturbation");
    c.expect((a.model.alpha - b.model.alpha).cwiseAbs().maxCoeff() == 0.0,
             "alpha differs after masked-cell perturbation");
    c.expect(a.objective_trace == b.objective_trace,
             "objective trace differs after masked-cell perturbation");
  }
}

// ---- criterion 10: metric unit suite ---------------------------------------

void criterion_metrics(Check& c) {
  // Canonical 45-degree construction.
  MatrixXd a(3, 2), b(3, 2);
  a << 1, 0, 0, 1, 0, 0;
  b << 1, 0, 0, 1.0 / std::sqrt(2.0), 0, 1.0 / std::sqrt(2.0);
  c.expect(std::abs(max_canonical_angle(a, b) - 45.0) <= 1e-10,
           "45-degree construction");
  MatrixXd e1(2, 1), e2(2, 1);
  e1 << 1, 0;
  e2 << 0, 1;
  c.expect(std::abs(max_canonical_angle(e1, e2) - 90.0) <= 1e-12,
           "orthogonal spaces");
  c.expect(max_canonical_angle(e1, e1) <= 1e-6, "identical spaces");

  // Gaussian deviance-Frobenius identity under masking.
  std::mt19937_64 rng(1010);
  const MatrixXd x = gaussian_matrix(rng, 6, 5);
  MatrixXd h(6, 5);
  for (Index j = 0; j < 5; ++j)
    for (Index i = 0; i < 6; ++i) h(i, j) = uniform01(rng) < 0.3 ? 0.0 : 1.0;
  MaskedMatrix data(x, h);
  const MatrixXd theta = gaussian_matrix(rng, 6, 5);
  const double dev = deviance(data, Family(FamilyKind::Gaussian), theta);
  const double frob =
      (data.mask().array() * (data.values() - theta).array().square()).sum();
  c.expect(std::abs(dev - frob) <= 1e-10, "deviance-Frobenius identity");

  // Theta-error examples.
  c.expect(theta_error(MatrixXd::Ones(2, 2), MatrixXd::Zero(2, 2)) == 1000.0,
           "theta_error unit case");
  c.expect(theta_error(MatrixXd::Zero(3, 3), MatrixXd::Zero(3, 3)) == 0.0,
           "theta_error zero case");

  // Trimmed means.
  c.expect(trimmed_mean({0.0, 1.0, 2.0, 3.0, 100.0}, 0.2) == 2.0,
           "trimmed mean drops one value each side");
  c.expect(trimmed_mean({1.0, 2.0, 3.0, 4.0}, 0.0) == 2.5,
           "trim 0 is the plain mean");
  c.expect(trimmed_mean({5.5, 5.5, 5.5}, 0.25) == 5.5, "constant list");

  // Selection rates.
  MatrixXd truth(4, 1), est(4, 1);
  truth << 1, 2, 0, 0;
  est << 0, 1, 1, 0;
  const auto [mr, fp] = selection_rates(est, truth, SparsityMode::ElementWise);
  c.expect(mr == 0.5 && fp == 0.5, "selection hand case");
  const auto zero = selection_rates(MatrixXd::Zero(4, 1), truth,
                                    SparsityMode::ElementWise);
  c.expect(zero.first == 1.0 && zero.second == 0.0, "all-zero estimate");

  // Bernoulli boundary deviance convention.
  MatrixXd xb(1, 2);
  xb << 0.0, 1.0;
  c.expect(saturated_nll(MaskedMatrix::fully_observed(xb),
                         Family(FamilyKind::Bernoulli)) == 0.0,
           "Bernoulli saturated limit");
}

struct Criterion {
  int id;
  std::string title;
  double time_limit_sec;
  std::function<void(Check&)> body;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "universal-step descent (Gaussian tau=1, Bernoulli tau=4)", 30.0,
       criterion_descent},
      {2, "Eckart-Young oracle at q_e=1 (centered Gaussian)", 20.0,
       criterion_eckart_young},
      {3, "analytic gradients match finite differences", 10.0,
       criterion_gradients},
      {4, "cardinality and orthonormality hold at every iterate", 30.0,
       criterion_feasibility},
      {5, "setting (a) support recovery at desk scale", 120.0,
       criterion_setting_a},
      {6, "Bernoulli fit beats Gaussian fit on Bernoulli data", 180.0,
       criterion_family_choice},
      {7, "progressive screening selects no nuisance columns", 120.0,
       criterion_screening},
      {8, "Poisson line-search audit and monotone traces", 60.0,
       criterion_line_search},
      {9, "masked cells cannot influence the fit", 5.0, criterion_masking},
      {10, "metric unit suite", 5.0, criterion_metrics},
  };
  return list;
}

bool run_criterion(const Criterion& cr) {
  Check check;
  const auto started = std::chrono::steady_clock::now();
  try {
    cr.body(check);
  } catch (const std::exception& e) {
    check.ok = false;
    check.log << "    exception: " << e.what() << "\n";
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  if (elapsed > cr.time_limit_sec) {
    check.ok = false;
    check.log << "    runtime " << elapsed << " s above the "
              << cr.time_limit_sec << " s budget\n";
  }
  std::cout << (check.ok ? "[PASS]" : "[FAIL]") << " criterion " << cr.id
            << ": " << cr.title << " (" << elapsed << " s)\n"
            << check.log.str();
  return check.ok;
}

}  // namespace

int main(int argc, char** argv) {
  int failures = 0;
  if (argc > 1) {
    const int want = std::atoi(argv[1]);
    bool found = false;
    for (const Criterion& cr : criteria())
      if (cr.id == want) {
        found = true;
        failures += run_criterion(cr) ? 0 : 1;
      }
    if (!found) {
      std::cerr << "unknown criterion " << argv[1] << "\n";
      return 2;
    }
  } else {
    for (const Criterion& cr : criteria()) failures += run_criterion(cr) ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
