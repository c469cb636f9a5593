// Command-line frontend: fit / simulate / eval / bench around the sgpca
// library. Exit codes: 0 success, 1 input/parse problems, 2 configuration
// problems, 3 numerical failure (outputs written as far as available).

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sgpca/accel.hpp"
#include "sgpca/csv.hpp"
#include "sgpca/metrics.hpp"
#include "sgpca/multistart.hpp"
#include "sgpca/rng.hpp"
#include "sgpca/sim.hpp"
#include "sgpca/solver.hpp"

namespace fs = std::filesystem;
using namespace sgpca;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

MaskedMatrix load_data(const std::string& path, bool header) {
  try {
    CsvMatrix csv = read_matrix_csv(path, header);
    return MaskedMatrix(std::move(csv.values), std::move(csv.mask));
  } catch (const std::exception& e) {
    throw CliError(1, std::string("input error: ") + e.what());
  }
}

Eigen::MatrixXd load_dense(const std::string& path, bool header = false) {
  try {
    CsvMatrix csv = read_matrix_csv(path, header);
    if (csv.any_missing)
      throw std::runtime_error(path + ": missing values not allowed here");
    return csv.values;
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    throw CliError(1, std::string("input error: ") + e.what());
  }
}

// Observed-entry column means subtracted in place (Gaussian centering).
MaskedMatrix center_columns(const MaskedMatrix& data) {
  Eigen::MatrixXd values = data.values();
  const Eigen::MatrixXd& mask = data.mask();
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const double count = mask.col(j).sum();
    if (count == 0.0) continue;
    const double mean = values.col(j).sum() / count;
    for (Eigen::Index i = 0; i < data.rows(); ++i)
      if (mask(i, j) != 0.0) values(i, j) -= mean;
  }
  return MaskedMatrix(std::move(values), mask);
}

FactorModel svd_warm_start(const MaskedMatrix& data, Eigen::Index r) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      data.values(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  FactorModel m;
  m.alpha = Eigen::VectorXd::Zero(data.cols());
  m.V = svd.matrixU().leftCols(r);
  m.S = svd.matrixV().leftCols(r) * svd.singularValues().head(r).asDiagonal();
  return m;
}

// Gamma natural parameters must stay negative, so the random start anchors
// alpha at the link of the observed column means and shrinks S until the
// factor part cannot push theta across zero.
FactorModel gamma_init(const MaskedMatrix& data, Eigen::Index r,
                       std::uint64_t seed) {
  FactorModel m = random_init(data.rows(), data.cols(), r, seed);
  double min_abs_alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const double count = data.mask().col(j).sum();
    const double mean =
        count > 0.0 ? data.values().col(j).sum() / count : 1.0;
    m.alpha(j) = -1.0 / std::max(mean, 1e-8);
    min_abs_alpha = std::min(min_abs_alpha, -m.alpha(j));
  }
  const double reach = (m.V * m.S.transpose()).cwiseAbs().maxCoeff();
  const double limit = 0.5 * min_abs_alpha;
  if (reach > limit) m.S *= limit / reach;
  return m;
}

void write_trace_csv(const std::string& path,
                     const std::vector<double>& trace) {
  std::ofstream out(path);
  for (double f : trace) out << format_double(f) << '\n';
}

void write_support_csv(const std::string& path, const FitReport& rep,
                       SparsityMode mode) {
  std::ofstream out(path);
  if (mode == SparsityMode::GroupWise) {
    for (Eigen::Index i : rep.row_support) out << i << '\n';
  } else {
    for (const auto& [i, j] : rep.support) out << i << ',' << j << '\n';
  }
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------- fit ----

struct FitArgs {
  std::string input;
  std::string out_dir;
  std::string family = "gaussian";
  Eigen::Index rank = 0;
  double qe = 1.0;
  bool qe_given = false;
  double qg = 1.0;
  bool qg_given = false;
  bool center = false;
  bool header = false;
  bool accelerate = false;
  double eta = 0.5;
  int backtracks = 10;
  bool warm_start_tau = false;
  bool screen = false;
  double screen_a = 0.05;
  std::string screen_mode = "outer";
  std::string step = "auto";
  double tau = 0.0;
  int max_outer = 500;
  int max_inner = 50;
  double eps_outer = 1e-6;
  double eps_inner = 1e-6;
  std::uint64_t seed = 0;
  int starts = 1;
  int survivors = 0;  // 0 = family default, clamped to starts
  int warmup = 2;
  bool emit_theta = false;
  bool svd_init = false;
};

ScreenMode parse_screen_mode(const std::string& s) {
  if (s == "outer") return ScreenMode::Outer;
  if (s == "inner") return ScreenMode::Inner;
  if (s == "product") return ScreenMode::Product;
  throw CliError(2, "unknown --screen-mode '" + s + "'");
}

int cmd_fit(const FitArgs& a) {
  const auto started = std::chrono::steady_clock::now();
  const Family family = Family::parse(a.family);
  MaskedMatrix data = load_data(a.input, a.header);
  try {
    data.validate_support(family);
  } catch (const std::exception& e) {
    throw CliError(1, std::string("input error: ") + e.what());
  }
  if (a.center) {
    if (family.kind() != FamilyKind::Gaussian)
      throw CliError(2, "--center applies to the gaussian family only");
    data = center_columns(data);
  }

  SolverConfig cfg;
  cfg.rank = a.rank;
  cfg.max_outer = a.max_outer;
  cfg.max_inner = a.max_inner;
  cfg.eps_outer = a.eps_outer;
  cfg.eps_inner = a.eps_inner;
  cfg.seed = a.seed;

  ScreenSchedule sched;
  if (a.screen) {
    if (!a.qg_given)
      throw CliError(2, "--screen needs a group sparsity level --qg");
    cfg.sparsity = SparsityLevel{a.qg, SparsityMode::GroupWise};
    cfg.refit_q_e = a.qe_given ? a.qe : 0.0;
    sched.a = a.screen_a;
    sched.t_mode = parse_screen_mode(a.screen_mode);
    sched.q_g = a.qg;
  } else if (a.qg_given) {
    if (a.qe_given) throw CliError(2, "give either --qe or --qg, not both");
    cfg.sparsity = SparsityLevel{a.qg, SparsityMode::GroupWise};
  } else {
    cfg.sparsity = SparsityLevel{a.qe, SparsityMode::ElementWise};
  }

  if (a.step == "universal") {
    cfg.step_policy = StepPolicy::Universal;
  } else if (a.step == "fixed") {
    cfg.step_policy = StepPolicy::Fixed;
    cfg.fixed_tau = a.tau;
  } else if (a.step == "linesearch") {
    cfg.step_policy = StepPolicy::LineSearch;
  } else if (a.step == "auto") {
    cfg.step_policy = family.universal_step() ? StepPolicy::Universal
                                              : StepPolicy::LineSearch;
  } else {
    throw CliError(2, "unknown --step '" + a.step + "'");
  }
  if (a.accelerate) cfg.step_policy = StepPolicy::LineSearch;

  AccelConfig acc;
  acc.eta = a.eta;
  acc.max_backtracks = a.backtracks;
  acc.warm_start_tau = a.warm_start_tau;

  const FitFunction fit_fn = [&](const MaskedMatrix& d, const Family& f,
                                 const SolverConfig& c, const FactorModel& m) {
    if (a.screen) return fit_progressive(d, f, c, acc, sched, m);
    if (a.accelerate) return fit_accelerated(d, f, c, acc, m);
    return fit(d, f, c, m, &acc);
  };

  const bool gamma = family.kind() == FamilyKind::ExponentialGamma;
  const InitFunction init_fn =
      gamma ? InitFunction([&data](Eigen::Index, Eigen::Index, Eigen::Index r,
                                   std::uint64_t seed) {
        return gamma_init(data, r, seed);
      })
            : InitFunction();

  FitReport rep = [&]() {
    try {
      const FactorModel init =
          a.svd_init
              ? svd_warm_start(data, cfg.rank)
              : (gamma ? gamma_init(data, cfg.rank,
                                    derive_seed(a.seed, "start", 0))
                       : random_init(data.rows(), data.cols(), cfg.rank,
                                     derive_seed(a.seed, "start", 0)));
      if (a.starts <= 1) return fit_fn(data, family, cfg, init);
      MultiStartConfig ms;
      ms.m1 = a.starts;
      ms.m2 = a.survivors > 0
                  ? std::min(a.survivors, a.starts)
                  : std::min(a.starts, default_multistart(family.kind()).m2);
      ms.n1 = a.warmup;
      ms.seed = a.seed;
      return multi_start_fit(data, family, cfg, ms, fit_fn, init_fn);
    } catch (const CliError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw CliError(2, std::string("configuration error: ") + e.what());
    } catch (const std::exception& e) {
      throw CliError(3, std::string("numerical failure: ") + e.what());
    }
  }();

  fs::create_directories(a.out_dir);
  const fs::path out(a.out_dir);
  write_matrix_csv((out / "alpha.csv").string(), rep.model.alpha);
  write_matrix_csv((out / "V.csv").string(), rep.model.V);
  write_matrix_csv((out / "S.csv").string(), rep.model.S);
  if (a.emit_theta)
    write_matrix_csv((out / "theta.csv").string(), rep.model.theta());
  write_trace_csv((out / "objective_trace.csv").string(), rep.objective_trace);
  write_support_csv((out / "support.csv").string(), rep, cfg.sparsity.mode);

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  {
    std::ofstream mf(out / "manifest.txt");
    mf << "# sgpca fit manifest\n";
    mf << "# version=" << kVersion << "\n";
    mf << "# input_hash=" << file_hash_hex(a.input) << "\n";
    mf << "# wall_time_sec=" << format_double(wall) << "\n";
    mf << "# converged=" << bool_str(rep.converged) << "\n";
    mf << "# iterations=" << rep.iterations << "\n";
    mf << "# final_objective=" << format_double(rep.final_objective()) << "\n";
    mf << "input=" << a.input << "\n";
    mf << "family=" << a.family << "\n";
    mf << "rank=" << a.rank << "\n";
    if (a.qe_given || !a.qg_given) mf << "qe=" << format_double(a.qe) << "\n";
    if (a.qg_given) mf << "qg=" << format_double(a.qg) << "\n";
    if (a.center) mf << "center=true\n";
    if (a.header) mf << "header=true\n";
    if (a.accelerate) mf << "accelerate=true\n";
    if (a.screen) {
      mf << "screen=true\n";
      mf << "screen-a=" << format_double(a.screen_a) << "\n";
      mf << "screen-mode=" << a.screen_mode << "\n";
    }
    mf << "step=" << a.step << "\n";
    if (a.step == "fixed") mf << "tau=" << format_double(a.tau) << "\n";
    mf << "eta=" << format_double(a.eta) << "\n";
    mf << "backtracks=" << a.backtracks << "\n";
    if (a.warm_start_tau) mf << "warm-start-tau=true\n";
    mf << "max-outer=" << a.max_outer << "\n";
    mf << "max-inner=" << a.max_inner << "\n";
    mf << "eps-outer=" << format_double(a.eps_outer) << "\n";
    mf << "eps-inner=" << format_double(a.eps_inner) << "\n";
    mf << "seed=" << a.seed << "\n";
    mf << "starts=" << a.starts << "\n";
    mf << "survivors=" << a.survivors << "\n";
    mf << "warmup=" << a.warmup << "\n";
    if (a.emit_theta) mf << "emit-theta=true\n";
    if (a.svd_init) mf << "svd-init=true\n";
  }

  if (rep.diverged || rep.line_search_failed) {
    std::cerr << "numerical failure: "
              << (rep.diverged ? "iterates left the family domain"
                               : "line search stalled at the minimum step")
              << "; partial results written to " << a.out_dir << "\n";
    return 3;
  }
  std::cout << "fit: " << (rep.converged ? "converged" : "iteration cap")
            << " after " << rep.iterations << " iterations, objective "
            << format_double(rep.final_objective()) << ", support "
            << rep.support.size() << " entries / " << rep.row_support.size()
            << " rows, " << format_double(wall) << " s\n";
  return 0;
}

// ----------------------------------------------------------- simulate ----

struct SimArgs {
  std::string out_dir;
  std::string family = "gaussian";
  std::string setting;
  Eigen::Index n = 100;
  Eigen::Index p = 200;
  Eigen::Index r_star = 0;
  double q_star = 0.0;
  bool group = false;
  std::vector<double> lambdas;
  double missing = 0.0;
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimArgs& a) {
  const Family family = Family::parse(a.family);
  SimSpec spec;
  spec.family = family;
  spec.n = a.n;
  spec.p = a.p;
  spec.missing_rate = a.missing;
  spec.seed = a.seed;

  if (!a.setting.empty()) {
    if (a.setting.size() != 1)
      throw CliError(2, "--setting must be one of a, b, c");
    const SettingPreset preset = setting_preset(a.setting[0], family.kind());
    spec.r_star = preset.r_star;
    spec.q_star = preset.q_star;
    spec.q_mode = preset.q_mode;
  }
  if (a.r_star > 0) spec.r_star = a.r_star;
  if (a.q_star > 0.0) spec.q_star = a.q_star;
  if (a.group) spec.q_mode = SparsityMode::GroupWise;
  if (a.setting.empty() && a.r_star == 0)
    throw CliError(2, "give --setting or an explicit --r-star");

  spec.lambdas =
      a.lambdas.empty()
          ? Eigen::VectorXd::Constant(spec.r_star,
                                      default_lambda(family.kind()))
          : to_vector(a.lambdas);
  if (spec.lambdas.size() == 1 && spec.r_star > 1)
    spec.lambdas = Eigen::VectorXd::Constant(spec.r_star, spec.lambdas(0));

  SimData sim = [&]() {
    try {
      return generate_data(spec);
    } catch (const std::invalid_argument& e) {
      throw CliError(2, std::string("configuration error: ") + e.what());
    }
  }();
  if (sim.theta_clipped)
    std::cerr << "warning: Poisson natural parameters clipped at 30 to avoid "
                 "overflow\n";

  fs::create_directories(a.out_dir);
  const fs::path out(a.out_dir);
  write_masked_csv((out / "X.csv").string(), sim.x);
  write_matrix_csv((out / "Theta.csv").string(), sim.truth.theta_star);
  write_matrix_csv((out / "Q.csv").string(), sim.truth.q);
  {
    std::ofstream mf(out / "manifest.txt");
    mf << "# sgpca simulate manifest\n";
    mf << "# version=" << kVersion << "\n";
    mf << "family=" << a.family << "\n";
    if (!a.setting.empty()) mf << "setting=" << a.setting << "\n";
    mf << "n=" << spec.n << "\n";
    mf << "p=" << spec.p << "\n";
    mf << "r-star=" << spec.r_star << "\n";
    mf << "q-star=" << format_double(spec.q_star) << "\n";
    if (spec.q_mode == SparsityMode::GroupWise) mf << "group=true\n";
    mf << "lambda=";
    for (Eigen::Index i = 0; i < spec.lambdas.size(); ++i)
      mf << (i ? " " : "") << format_double(spec.lambdas(i));
    mf << "\n";
    mf << "missing=" << format_double(spec.missing_rate) << "\n";
    mf << "seed=" << spec.seed << "\n";
  }
  std::cout << "simulate: wrote " << spec.n << "x" << spec.p << " " << a.family
            << " data to " << a.out_dir << "\n";
  return 0;
}

// --------------------------------------------------------------- eval ----

struct EvalArgs {
  std::string s_hat;
  std::string q_star;
  std::string theta_hat;
  std::string theta_star;
  std::string x;
  std::string family = "gaussian";
  std::string mode = "elem";
  bool header = false;
  double ref_deviance = 0.0;
  std::string out = "-";
};

std::string metric_str(double v) {
  return std::isnan(v) ? "NA" : format_double(v);
}

EvalResult evaluate(const EvalArgs& a) {
  EvalResult res;
  if (!a.theta_hat.empty() && !a.theta_star.empty())
    res.theta_error =
        theta_error(load_dense(a.theta_hat), load_dense(a.theta_star));
  if (!a.theta_hat.empty() && !a.x.empty()) {
    const Family family = Family::parse(a.family);
    MaskedMatrix data = load_data(a.x, a.header);
    res.deviance = deviance(data, family, load_dense(a.theta_hat));
    res.deviance_ratio =
        a.ref_deviance != 0.0 ? res.deviance / a.ref_deviance : 1.0;
  }
  if (!a.s_hat.empty() && !a.q_star.empty()) {
    const Eigen::MatrixXd s_hat = load_dense(a.s_hat);
    const Eigen::MatrixXd q_star = load_dense(a.q_star);
    res.max_canonical_angle_deg = max_canonical_angle(s_hat, q_star);
    const SparsityMode mode = a.mode == "group" ? SparsityMode::GroupWise
                                                : SparsityMode::ElementWise;
    std::tie(res.miss_rate, res.false_positive_rate) =
        selection_rates(s_hat, q_star, mode);
  }
  return res;
}

void write_eval_csv(std::ostream& os, const EvalResult& r) {
  os << "theta_error,deviance,deviance_ratio,max_canonical_angle_deg,"
        "miss_rate,false_positive_rate\n";
  os << metric_str(r.theta_error) << ',' << metric_str(r.deviance) << ','
     << metric_str(r.deviance_ratio) << ','
     << metric_str(r.max_canonical_angle_deg) << ',' << metric_str(r.miss_rate)
     << ',' << metric_str(r.false_positive_rate) << '\n';
}

int cmd_eval(const EvalArgs& a) {
  EvalResult res = [&]() {
    try {
      return evaluate(a);
    } catch (const CliError&) {
      throw;
    } catch (const std::exception& e) {
      throw CliError(1, std::string("eval error: ") + e.what());
    }
  }();
  if (a.out == "-") {
    write_eval_csv(std::cout, res);
  } else {
    std::ofstream out(a.out);
    if (!out) throw CliError(1, "cannot write '" + a.out + "'");
    write_eval_csv(out, res);
  }
  return 0;
}

// -------------------------------------------------------------- bench ----

struct BenchArgs {
  std::string setting = "a";
  std::string family = "gaussian";
  int reps = 20;
  double trim = 0.1;
  std::uint64_t seed = 0;
  Eigen::Index n = 100;
  Eigen::Index p = 200;
  std::string mode = "auto";
  Eigen::Index rank = 0;
  double q_star = 0.0;
  double qe = 0.0;
  double qg = 0.0;
  int starts = 0;
  int survivors = 0;
  int warmup = 2;
  std::string out = "-";
};

int cmd_bench(const BenchArgs& a) {
  const Family family = Family::parse(a.family);
  if (family.kind() == FamilyKind::ExponentialGamma)
    throw CliError(2, "bench supports gaussian, bernoulli and poisson");
  if (a.setting.size() != 1) throw CliError(2, "--setting must be a, b or c");
  SettingPreset preset = setting_preset(a.setting[0], family.kind());
  if (a.q_star > 0.0) preset.q_star = a.q_star;
  if (a.reps < 1) throw CliError(2, "--reps must be >= 1");

  // Sparsity levels of the reference experiments: q* for setting (a), four
  // times q* for (b), twice q* for (c).
  const double factor = a.setting[0] == 'a'   ? 1.0
                        : a.setting[0] == 'b' ? 4.0
                                              : 2.0;
  SparsityMode fit_mode = preset.q_mode;
  if (a.mode == "elem")
    fit_mode = SparsityMode::ElementWise;
  else if (a.mode == "group")
    fit_mode = SparsityMode::GroupWise;
  else if (a.mode != "auto")
    throw CliError(2, "--mode must be auto|elem|group");

  SolverConfig cfg;
  cfg.rank = a.rank > 0 ? a.rank : preset.r_star;
  double q_fit = std::min(1.0, factor * preset.q_star);
  if (fit_mode == SparsityMode::ElementWise && a.qe > 0.0) q_fit = a.qe;
  if (fit_mode == SparsityMode::GroupWise && a.qg > 0.0) q_fit = a.qg;
  cfg.sparsity = SparsityLevel{q_fit, fit_mode};
  cfg.max_outer = 300;
  cfg.eps_outer = 1e-5;
  cfg.eps_inner = 1e-5;
  const bool accelerate = !family.universal_step().has_value();
  cfg.step_policy = accelerate ? StepPolicy::LineSearch : StepPolicy::Universal;

  MultiStartConfig ms = default_multistart(family.kind());
  if (a.starts > 0) ms.m1 = a.starts;
  if (a.survivors > 0) ms.m2 = a.survivors;
  ms.m2 = std::min(ms.m2, ms.m1);
  ms.n1 = a.warmup;

  const AccelConfig acc;
  const FitFunction fit_fn = [&](const MaskedMatrix& d, const Family& f,
                                 const SolverConfig& c, const FactorModel& m) {
    if (accelerate) return fit_accelerated(d, f, c, acc, m);
    return fit(d, f, c, m);
  };

  std::vector<double> v_theta, v_dev, v_angle, v_mr, v_fp, v_time;
  int failed = 0;
  for (int rep_i = 0; rep_i < a.reps; ++rep_i) {
    try {
      SimSpec spec;
      spec.family = family;
      spec.n = a.n;
      spec.p = a.p;
      spec.r_star = preset.r_star;
      spec.q_star = preset.q_star;
      spec.q_mode = preset.q_mode;
      spec.lambdas = Eigen::VectorXd::Constant(preset.r_star,
                                               default_lambda(family.kind()));
      spec.seed = derive_seed(a.seed, "bench.sim", rep_i);
      const SimData sim = generate_data(spec);

      MultiStartConfig run_ms = ms;
      run_ms.seed = derive_seed(a.seed, "bench.fit", rep_i);
      const FitReport fitres =
          multi_start_fit(sim.x, family, cfg, run_ms, fit_fn);

      v_theta.push_back(
          theta_error(fitres.model.theta(), sim.truth.theta_star));
      v_dev.push_back(deviance(sim.x, family, fitres.model.theta()));
      v_angle.push_back(max_canonical_angle(fitres.model.S, sim.truth.q));
      const auto [mr, fp] =
          selection_rates(fitres.model.S, sim.truth.q, fit_mode);
      v_mr.push_back(100.0 * mr);
      v_fp.push_back(100.0 * fp);
      v_time.push_back(fitres.wall_time_sec);
    } catch (const std::exception& e) {
      ++failed;
      std::cerr << "bench: repetition " << rep_i << " failed: " << e.what()
                << "\n";
    }
  }
  if (v_theta.empty()) throw CliError(3, "bench: every repetition failed");

  std::ostringstream row;
  row << "setting,family,mode,reps,failed,theta_error,deviance,angle_deg,"
         "mr_pct,fp_pct,time_sec\n";
  row << a.setting << ',' << a.family << ','
      << (fit_mode == SparsityMode::GroupWise ? "group" : "elem") << ','
      << a.reps << ',' << failed << ','
      << format_double(trimmed_mean(v_theta, a.trim)) << ','
      << format_double(trimmed_mean(v_dev, a.trim)) << ','
      << format_double(trimmed_mean(v_angle, a.trim)) << ','
      << format_double(trimmed_mean(v_mr, a.trim)) << ','
      << format_double(trimmed_mean(v_fp, a.trim)) << ','
      << format_double(trimmed_mean(v_time, a.trim)) << '\n';
  if (a.out == "-") {
    std::cout << row.str();
  } else {
    std::ofstream out(a.out);
    if (!out) throw CliError(1, "cannot write '" + a.out + "'");
    out << row.str();
  }
  return 0;
}

// Expand `--config FILE` into explicit --key=value tokens right after the
// subcommand, skipping keys already given on the command line so explicit
// flags win. FILE holds one key=value per line; '#' starts a comment; the
// value "true" marks a flag.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string config_path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i),
                 args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw CliError(1, "cannot open config '" + config_path + "'");
  std::vector<std::string> from_file;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty()) continue;
    bool given = false;
    for (std::size_t i = 1; i < args.size(); ++i)
      if (args[i] == "--" + key || args[i].rfind("--" + key + "=", 0) == 0)
        given = true;
    if (given) continue;
    if (value == "true")
      from_file.push_back("--" + key);
    else if (value != "false")
      from_file.push_back("--" + key + "=" + value);
  }
  // Insert after program name and subcommand.
  const std::size_t at = args.size() >= 2 ? 2 : args.size();
  args.insert(args.begin() + static_cast<long>(at), from_file.begin(),
              from_file.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse generalized PCA: exponential-family low-rank fits "
               "with quantile-thresholded sparse loadings"};
  app.require_subcommand(1);

  FitArgs fa;
  CLI::App* fit_cmd =
      app.add_subcommand("fit", "fit a sparse low-rank model to a CSV matrix");
  static std::string config_sink;
  fit_cmd->add_option("--config", config_sink,
                      "key=value config file (explicit flags win)");
  fit_cmd->add_option("--input", fa.input, "data CSV (NA/empty = missing)")
      ->required();
  fit_cmd->add_option("--out", fa.out_dir, "output directory")->required();
  fit_cmd->add_option("--family", fa.family, "gaussian|bernoulli|poisson|gamma");
  fit_cmd->add_option("--rank", fa.rank, "factorization rank r")->required();
  CLI::Option* qe_opt =
      fit_cmd->add_option("--qe", fa.qe, "element-wise nonzero fraction");
  CLI::Option* qg_opt =
      fit_cmd->add_option("--qg", fa.qg, "row-wise nonzero fraction");
  fit_cmd->add_flag("--center", fa.center,
                    "subtract observed column means (gaussian)");
  fit_cmd->add_flag("--header", fa.header, "input has a header row");
  fit_cmd->add_flag("--accelerate", fa.accelerate,
                    "momentum + line-search solver");
  fit_cmd->add_option("--eta", fa.eta, "backtracking factor");
  fit_cmd->add_option("--backtracks", fa.backtracks, "line-search cap");
  fit_cmd->add_flag("--warm-start-tau", fa.warm_start_tau,
                    "resume line search from the last accepted step");
  fit_cmd->add_flag("--screen", fa.screen, "progressive dimension screening");
  fit_cmd->add_option("--screen-a", fa.screen_a, "screening decay speed");
  fit_cmd->add_option("--screen-mode", fa.screen_mode, "outer|inner|product");
  fit_cmd->add_option("--step", fa.step, "auto|universal|fixed|linesearch");
  fit_cmd->add_option("--tau", fa.tau, "step size for --step fixed");
  fit_cmd->add_option("--max-outer", fa.max_outer, "outer iteration cap");
  fit_cmd->add_option("--max-inner", fa.max_inner, "inner iteration cap");
  fit_cmd->add_option("--eps-outer", fa.eps_outer, "outer tolerance");
  fit_cmd->add_option("--eps-inner", fa.eps_inner, "inner tolerance");
  fit_cmd->add_option("--seed", fa.seed, "master seed");
  fit_cmd->add_option("--starts", fa.starts, "multi-start count m1");
  fit_cmd->add_option("--survivors", fa.survivors,
                      "second-stage count m2 (0 = family default)");
  fit_cmd->add_option("--warmup", fa.warmup, "short-run iterations n1");
  fit_cmd->add_flag("--emit-theta", fa.emit_theta, "also write theta.csv");
  fit_cmd->add_flag("--svd-init", fa.svd_init,
                    "initialize from a truncated SVD instead of random");

  SimArgs sa;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "generate spiked-model synthetic data");
  sim_cmd->add_option("--config", config_sink,
                      "key=value config file (explicit flags win)");
  sim_cmd->add_option("--out", sa.out_dir, "output directory")->required();
  sim_cmd->add_option("--family", sa.family, "gaussian|bernoulli|poisson");
  sim_cmd->add_option("--setting", sa.setting, "scenario a|b|c");
  sim_cmd->add_option("--n", sa.n, "rows");
  sim_cmd->add_option("--p", sa.p, "columns");
  sim_cmd->add_option("--r-star", sa.r_star, "true rank");
  sim_cmd->add_option("--q-star", sa.q_star, "true nonzero fraction");
  sim_cmd->add_flag("--group", sa.group, "row-sparse true loadings");
  sim_cmd->add_option("--lambda", sa.lambdas, "signal strengths");
  sim_cmd->add_option("--missing", sa.missing, "missing rate in [0,1)");
  sim_cmd->add_option("--seed", sa.seed, "master seed");

  EvalArgs ea;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "score an estimate against the truth");
  eval_cmd->add_option("--config", config_sink,
                      "key=value config file (explicit flags win)");
  eval_cmd->add_option("--s-hat", ea.s_hat, "estimated loading matrix CSV");
  eval_cmd->add_option("--q-star", ea.q_star, "true loading matrix CSV");
  eval_cmd->add_option("--theta-hat", ea.theta_hat, "estimated theta CSV");
  eval_cmd->add_option("--theta-star", ea.theta_star, "true theta CSV");
  eval_cmd->add_option("--x", ea.x, "data CSV for the deviance");
  eval_cmd->add_option("--family", ea.family, "family for the deviance");
  eval_cmd->add_option("--mode", ea.mode, "elem|group support scoring");
  eval_cmd->add_flag("--header", ea.header, "the data CSV has a header row");
  eval_cmd->add_option("--ref-deviance", ea.ref_deviance,
                       "reference deviance for the ratio");
  eval_cmd->add_option("--out", ea.out, "output CSV path or - for stdout");

  BenchArgs ba;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "simulate/fit/eval repetitions with a trimmed-mean summary");
  bench_cmd->add_option("--config", config_sink,
                      "key=value config file (explicit flags win)");
  bench_cmd->add_option("--setting", ba.setting, "scenario a|b|c")->required();
  bench_cmd->add_option("--family", ba.family, "gaussian|bernoulli|poisson")
      ->required();
  bench_cmd->add_option("--reps", ba.reps, "repetitions");
  bench_cmd->add_option("--trim", ba.trim, "trimmed-mean fraction");
  bench_cmd->add_option("--seed", ba.seed, "master seed");
  bench_cmd->add_option("--n", ba.n, "rows");
  bench_cmd->add_option("--p", ba.p, "columns");
  bench_cmd->add_option("--mode", ba.mode, "auto|elem|group");
  bench_cmd->add_option("--rank", ba.rank, "fit rank (0 = true rank)");
  bench_cmd->add_option("--q-star", ba.q_star,
                        "true sparsity override (desk-scale n/p)");
  bench_cmd->add_option("--qe", ba.qe, "element sparsity override");
  bench_cmd->add_option("--qg", ba.qg, "group sparsity override");
  bench_cmd->add_option("--starts", ba.starts, "multi-start m1 override");
  bench_cmd->add_option("--survivors", ba.survivors, "m2 override");
  bench_cmd->add_option("--warmup", ba.warmup, "short-run iterations n1");
  bench_cmd->add_option("--out", ba.out, "summary CSV path or -");

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(std::move(reversed));
  } catch (const CliError& e) {
    std::cerr << "sgpca: " << e.what() << "\n";
    return e.code;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    fa.qe_given = qe_opt->count() > 0;
    fa.qg_given = qg_opt->count() > 0;
    if (fit_cmd->parsed()) return cmd_fit(fa);
    if (sim_cmd->parsed()) return cmd_simulate(sa);
    if (eval_cmd->parsed()) return cmd_eval(ea);
    if (bench_cmd->parsed()) return cmd_bench(ba);
  } catch (const CliError& e) {
    std::cerr << "sgpca: " << e.what() << "\n";
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "sgpca: configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sgpca: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
