#include "sgpca/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "sgpca/rng.hpp"

namespace sgpca {

void SimSpec::validate() const {
  if (n < 1 || p < 1) throw std::invalid_argument("sim: n, p must be >= 1");
  if (r_star < 1 || r_star > std::min(n, p))
    throw std::invalid_argument("sim: r_star must lie in [1, min(n,p)]");
  if (!(q_star > 0.0 && q_star <= 1.0))
    throw std::invalid_argument("sim: q_star must lie in (0, 1]");
  if (lambdas.size() != r_star)
    throw std::invalid_argument("sim: need one lambda per factor");
  for (Eigen::Index i = 0; i < lambdas.size(); ++i)
    if (!(lambdas(i) > 0.0))
      throw std::invalid_argument("sim: lambdas must be strictly positive");
  if (!(missing_rate >= 0.0 && missing_rate < 1.0))
    throw std::invalid_argument("sim: missing rate must lie in [0, 1)");
}

Eigen::MatrixXd generate_loadings(Eigen::Index p, Eigen::Index r_star,
                                  double q_star, SparsityMode q_mode,
                                  std::uint64_t seed) {
  if (r_star < 1 || r_star > p)
    throw std::invalid_argument("generate_loadings: rank out of range");
  if (!(q_star > 0.0 && q_star <= 1.0))
    throw std::invalid_argument("generate_loadings: q_star out of range");
  std::mt19937_64 rng = make_rng(seed, "sim.q");

  if (q_star == 1.0) return random_orthonormal(rng, p, r_star);

  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(p, r_star);
  if (q_mode == SparsityMode::ElementWise) {
    const auto total = static_cast<Eigen::Index>(
        std::floor(q_star * static_cast<double>(p * r_star) + 1e-9));
    if (total < r_star)
      throw std::invalid_argument(
          "generate_loadings: sparsity too strict for the requested rank");
    if (total > p)
      throw std::invalid_argument(
          "generate_loadings: disjoint element supports need q*p*r <= p");
    // Disjoint consecutive blocks; columns are orthogonal by construction.
    Eigen::Index offset = 0;
    for (Eigen::Index j = 0; j < r_star; ++j) {
      Eigen::Index size = total / r_star + (j < total % r_star ? 1 : 0);
      Eigen::VectorXd block(size);
      for (Eigen::Index i = 0; i < size; ++i) block(i) = std_normal(rng);
      block.normalize();
      q.block(offset, j, size, 1) = block;
      offset += size;
    }
  } else {
    const auto rows = static_cast<Eigen::Index>(
        std::floor(q_star * static_cast<double>(p) + 1e-9));
    if (rows < r_star)
      throw std::invalid_argument(
          "generate_loadings: need at least r nonzero rows for orthonormality");
    q.topRows(rows) = random_orthonormal(rng, rows, r_star);
  }
  return q;
}

SimData generate_data(const SimSpec& spec) {
  spec.validate();
  const Eigen::MatrixXd q = generate_loadings(spec.p, spec.r_star, spec.q_star,
                                              spec.q_mode, spec.seed);
  std::mt19937_64 rng_p = make_rng(spec.seed, "sim.p");
  const Eigen::MatrixXd scores =
      gaussian_matrix(rng_p, spec.n, spec.r_star);
  Eigen::MatrixXd theta =
      scores * spec.lambdas.asDiagonal() * q.transpose();

  bool clipped = false;
  if (spec.family.kind() == FamilyKind::Poisson) {
    for (Eigen::Index j = 0; j < theta.cols(); ++j)
      for (Eigen::Index i = 0; i < theta.rows(); ++i)
        if (theta(i, j) > 30.0) {
          theta(i, j) = 30.0;
          clipped = true;
        }
  }

  std::mt19937_64 rng_x = make_rng(spec.seed, "sim.noise");
  Eigen::MatrixXd x(spec.n, spec.p);
  for (Eigen::Index j = 0; j < spec.p; ++j)
    for (Eigen::Index i = 0; i < spec.n; ++i) {
      const double t = theta(i, j);
      switch (spec.family.kind()) {
        case FamilyKind::Gaussian:
          x(i, j) = t + std_normal(rng_x);
          break;
        case FamilyKind::Bernoulli:
          x(i, j) = bernoulli(rng_x, stable_sigmoid(t)) ? 1.0 : 0.0;
          break;
        case FamilyKind::Poisson:
          x(i, j) = static_cast<double>(poisson(rng_x, std::exp(t)));
          break;
        case FamilyKind::ExponentialGamma:
          throw std::invalid_argument(
              "simulation supports gaussian, bernoulli and poisson only");
      }
    }

  std::mt19937_64 rng_h = make_rng(spec.seed, "sim.mask");
  Eigen::MatrixXd mask(spec.n, spec.p);
  for (Eigen::Index j = 0; j < spec.p; ++j)
    for (Eigen::Index i = 0; i < spec.n; ++i)
      mask(i, j) = bernoulli(rng_h, 1.0 - spec.missing_rate) ? 1.0 : 0.0;

  return SimData{MaskedMatrix(std::move(x), std::move(mask)),
                 SimTruth{std::move(theta), q, scores}, clipped};
}

SettingPreset setting_preset(char setting, FamilyKind family) {
  switch (setting) {
    case 'a':
      return {1, family == FamilyKind::Bernoulli ? 0.05 : 0.01,
              SparsityMode::ElementWise};
    case 'b':
      return {4, 0.08, SparsityMode::ElementWise};
    case 'c':
      return {4, 0.20, SparsityMode::GroupWise};
    default:
      throw std::invalid_argument("setting must be a, b or c");
  }
}

double default_lambda(FamilyKind family) {
  return family == FamilyKind::Poisson ? 2.0 : 10.0;
}

}  // namespace sgpca
