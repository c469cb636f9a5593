#include "sgpca/multistart.hpp"

#include <sstream>
#include <stdexcept>
#include <vector>

#include "sgpca/rng.hpp"

namespace sgpca {

void MultiStartConfig::validate() const {
  if (m1 < 1) throw std::invalid_argument("multistart: m1 must be >= 1");
  if (m2 < 1 || m2 > m1)
    throw std::invalid_argument("multistart: need 1 <= m2 <= m1");
  if (n1 < 1) throw std::invalid_argument("multistart: n1 must be >= 1");
}

MultiStartConfig default_multistart(FamilyKind family) {
  MultiStartConfig ms;
  switch (family) {
    case FamilyKind::Gaussian:
      ms.m1 = 10;
      ms.m2 = 2;
      break;
    case FamilyKind::Bernoulli:
      ms.m1 = 20;
      ms.m2 = 3;
      break;
    case FamilyKind::Poisson:
    case FamilyKind::ExponentialGamma:
      ms.m1 = 30;
      ms.m2 = 5;
      break;
  }
  return ms;
}

FactorModel random_init(Eigen::Index n, Eigen::Index p, Eigen::Index r,
                        std::uint64_t seed) {
  if (r < 1 || r > std::min(n, p))
    throw std::invalid_argument("random_init: rank out of range");
  FactorModel m;
  m.alpha = Eigen::VectorXd::Zero(p);
  std::mt19937_64 rng_v = make_rng(seed, "init.v");
  m.V = random_orthonormal(rng_v, n, r);
  std::mt19937_64 rng_s = make_rng(seed, "init.s");
  m.S = 0.1 * gaussian_matrix(rng_s, p, r);
  return m;
}

FitReport multi_start_fit(const MaskedMatrix& data, const Family& family,
                          const SolverConfig& cfg, const MultiStartConfig& ms,
                          const FitFunction& fit_fn,
                          const InitFunction& init_fn) {
  ms.validate();

  struct Candidate {
    int index;
    double objective;
    FactorModel model;
  };
  std::vector<Candidate> survivors;
  std::vector<std::string> failures;

  const InitFunction make_init =
      init_fn ? init_fn
              : InitFunction([](Eigen::Index n, Eigen::Index p, Eigen::Index r,
                                std::uint64_t seed) {
                  return random_init(n, p, r, seed);
                });
  SolverConfig warmup_cfg = cfg;
  warmup_cfg.max_outer = ms.n1;
  for (int i = 0; i < ms.m1; ++i) {
    const FactorModel init = make_init(
        data.rows(), data.cols(), cfg.rank, derive_seed(ms.seed, "start", i));
    try {
      FitReport short_run = fit_fn(data, family, warmup_cfg, init);
      survivors.push_back(
          {i, short_run.final_objective(), std::move(short_run.model)});
    } catch (const std::exception& e) {
      failures.push_back("start " + std::to_string(i) + ": " + e.what());
    }
  }
  if (survivors.empty()) {
    std::ostringstream os;
    os << "multi-start: all " << ms.m1 << " warmup runs failed:";
    for (const auto& f : failures) os << "\n  " << f;
    throw std::runtime_error(os.str());
  }

  std::stable_sort(survivors.begin(), survivors.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.objective != b.objective)
                       return a.objective < b.objective;
                     return a.index < b.index;
                   });
  const std::size_t keep =
      std::min<std::size_t>(survivors.size(), static_cast<std::size_t>(ms.m2));

  bool have_best = false;
  FitReport best;
  int best_index = -1;
  for (std::size_t c = 0; c < keep; ++c) {
    try {
      FitReport full = fit_fn(data, family, cfg, survivors[c].model);
      if (!have_best ||
          full.final_objective() < best.final_objective() ||
          (full.final_objective() == best.final_objective() &&
           survivors[c].index < best_index)) {
        best = std::move(full);
        best_index = survivors[c].index;
        have_best = true;
      }
    } catch (const std::exception& e) {
      failures.push_back("continuation of start " +
                         std::to_string(survivors[c].index) + ": " + e.what());
    }
  }
  if (!have_best) {
    std::ostringstream os;
    os << "multi-start: all continuations failed:";
    for (const auto& f : failures) os << "\n  " << f;
    throw std::runtime_error(os.str());
  }
  return best;
}

}  // namespace sgpca
