#ifndef SGPCA_TEST_SUPPORT_HPP
#define SGPCA_TEST_SUPPORT_HPP

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "sgpca/data.hpp"
#include "sgpca/family.hpp"
#include "sgpca/rng.hpp"

namespace sgpca_test {

// Natural parameter ranges where every family is comfortably in-domain and
// well conditioned for finite differences.
inline double random_theta(std::mt19937_64& rng, sgpca::FamilyKind kind) {
  const double u = sgpca::uniform01(rng);
  switch (kind) {
    case sgpca::FamilyKind::Gaussian:
      return -10.0 + 20.0 * u;
    case sgpca::FamilyKind::Bernoulli:
      return -8.0 + 16.0 * u;
    case sgpca::FamilyKind::Poisson:
      return -8.0 + 16.0 * u;
    case sgpca::FamilyKind::ExponentialGamma:
      return -10.0 + 9.9 * u;  // [-10, -0.1]
  }
  return 0.0;
}

// Small random fitting instance: a model with in-domain Θ and data sampled
// from the family's support.
struct Instance {
  sgpca::MaskedMatrix data;
  sgpca::FactorModel model;
};

inline Instance random_instance(std::mt19937_64& rng, sgpca::FamilyKind kind,
                                Eigen::Index n, Eigen::Index p, Eigen::Index r,
                                double missing = 0.2) {
  sgpca::FactorModel m;
  const bool gamma = kind == sgpca::FamilyKind::ExponentialGamma;
  m.alpha = Eigen::VectorXd(p);
  for (Eigen::Index j = 0; j < p; ++j)
    m.alpha(j) = gamma ? -2.0 - sgpca::uniform01(rng)
                       : (sgpca::uniform01(rng) - 0.5);
  m.V = sgpca::random_orthonormal(rng, n, r);
  m.S = 0.5 * sgpca::gaussian_matrix(rng, p, r);
  const Eigen::MatrixXd theta = m.theta();

  Eigen::MatrixXd x(n, p), h(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = theta(i, j);
      switch (kind) {
        case sgpca::FamilyKind::Gaussian:
          x(i, j) = t + sgpca::std_normal(rng);
          break;
        case sgpca::FamilyKind::Bernoulli:
          x(i, j) = sgpca::bernoulli(rng, sgpca::stable_sigmoid(t)) ? 1.0 : 0.0;
          break;
        case sgpca::FamilyKind::Poisson:
          x(i, j) = static_cast<double>(
              sgpca::poisson(rng, std::exp(std::min(t, 4.0))));
          break;
        case sgpca::FamilyKind::ExponentialGamma:
          x(i, j) = sgpca::exponential(rng, -std::min(t, -0.1));
          break;
      }
      h(i, j) = sgpca::uniform01(rng) < missing ? 0.0 : 1.0;
    }
  return Instance{sgpca::MaskedMatrix(std::move(x), std::move(h)),
                  std::move(m)};
}

// Central finite differences of the masked NLL in every coordinate of
// (alpha, S, V); the independent oracle for the analytic gradients.
struct FdGradients {
  Eigen::VectorXd alpha;
  Eigen::MatrixXd s;
  Eigen::MatrixXd v;
};

inline FdGradients fd_gradients(const sgpca::MaskedMatrix& data,
                                const sgpca::Family& family,
                                const sgpca::FactorModel& model,
                                double h = 1e-5) {
  auto value = [&](const sgpca::FactorModel& m) {
    return sgpca::masked_nll(data, family, m.theta());
  };
  FdGradients out;
  out.alpha.resize(model.alpha.size());
  for (Eigen::Index i = 0; i < model.alpha.size(); ++i) {
    sgpca::FactorModel up = model, dn = model;
    up.alpha(i) += h;
    dn.alpha(i) -= h;
    out.alpha(i) = (value(up) - value(dn)) / (2.0 * h);
  }
  out.s.resize(model.S.rows(), model.S.cols());
  for (Eigen::Index j = 0; j < model.S.cols(); ++j)
    for (Eigen::Index i = 0; i < model.S.rows(); ++i) {
      sgpca::FactorModel up = model, dn = model;
      up.S(i, j) += h;
      dn.S(i, j) -= h;
      out.s(i, j) = (value(up) - value(dn)) / (2.0 * h);
    }
  out.v.resize(model.V.rows(), model.V.cols());
  for (Eigen::Index j = 0; j < model.V.cols(); ++j)
    for (Eigen::Index i = 0; i < model.V.rows(); ++i) {
      sgpca::FactorModel up = model, dn = model;
      up.V(i, j) += h;
      dn.V(i, j) -= h;
      out.v(i, j) = (value(up) - value(dn)) / (2.0 * h);
    }
  return out;
}

// Max-norm relative agreement used by the gradient checks.
inline double rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(1.0, std::max(a.cwiseAbs().maxCoeff(),
                                              b.cwiseAbs().maxCoeff()));
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace sgpca_test

#endif  // SGPCA_TEST_SUPPORT_HPP
