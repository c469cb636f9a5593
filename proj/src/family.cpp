#include "sgpca/family.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sgpca {

namespace {

[[noreturn]] void throw_domain(const std::string& what, Eigen::Index i,
                               Eigen::Index j, double value) {
  std::ostringstream os;
  os << what << " at entry (" << i << "," << j << "): value " << value;
  throw std::domain_error(os.str());
}

bool is_integerish(double x) {
  return std::isfinite(x) && x == std::floor(x);
}

}  // namespace

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double stable_softplus(double x) {
  // log(1 + e^x) without overflow for large |x|.
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

Family::Family(FamilyKind kind, double dispersion)
    : kind_(kind), dispersion_(dispersion) {
  if (!(dispersion > 0.0))
    throw std::invalid_argument("family dispersion must be positive");
  switch (kind_) {
    case FamilyKind::Gaussian:
      name_ = "gaussian";
      break;
    case FamilyKind::Bernoulli:
      name_ = "bernoulli";
      dispersion_ = 1.0;
      break;
    case FamilyKind::Poisson:
      name_ = "poisson";
      dispersion_ = 1.0;
      break;
    case FamilyKind::ExponentialGamma:
      name_ = "gamma";
      break;
  }
}

Family Family::parse(const std::string& name) {
  if (name == "gaussian") return Family(FamilyKind::Gaussian);
  if (name == "bernoulli") return Family(FamilyKind::Bernoulli);
  if (name == "poisson") return Family(FamilyKind::Poisson);
  if (name == "gamma") return Family(FamilyKind::ExponentialGamma);
  throw std::invalid_argument(
      "unknown family '" + name +
      "' (expected gaussian|bernoulli|poisson|gamma)");
}

double Family::link_scalar(double mu) const {
  switch (kind_) {
    case FamilyKind::Gaussian:
      return mu;
    case FamilyKind::Bernoulli:
      return std::log(mu / (1.0 - mu));
    case FamilyKind::Poisson:
      return std::log(mu);
    case FamilyKind::ExponentialGamma:
      return -1.0 / mu;
  }
  return 0.0;
}

double Family::inv_link_scalar(double theta) const {
  switch (kind_) {
    case FamilyKind::Gaussian:
      return theta;
    case FamilyKind::Bernoulli:
      return stable_sigmoid(theta);
    case FamilyKind::Poisson:
      return std::exp(theta);
    case FamilyKind::ExponentialGamma:
      return -1.0 / theta;
  }
  return 0.0;
}

double Family::log_partition_scalar(double theta) const {
  switch (kind_) {
    case FamilyKind::Gaussian:
      return 0.5 * theta * theta;
    case FamilyKind::Bernoulli:
      return stable_softplus(theta);
    case FamilyKind::Poisson:
      return std::exp(theta);
    case FamilyKind::ExponentialGamma:
      return -std::log(-theta);
  }
  return 0.0;
}

double Family::curvature_scalar(double theta) const {
  switch (kind_) {
    case FamilyKind::Gaussian:
      return 1.0;
    case FamilyKind::Bernoulli: {
      const double s = stable_sigmoid(theta);
      return s * (1.0 - s);
    }
    case FamilyKind::Poisson:
      return std::exp(theta);
    case FamilyKind::ExponentialGamma:
      return 1.0 / (theta * theta);
  }
  return 0.0;
}

bool Family::mean_in_domain(double mu) const {
  switch (kind_) {
    case FamilyKind::Gaussian:
      return std::isfinite(mu);
    case FamilyKind::Bernoulli:
      return mu > 0.0 && mu < 1.0;
    case FamilyKind::Poisson:
    case FamilyKind::ExponentialGamma:
      return mu > 0.0 && std::isfinite(mu);
  }
  return false;
}

bool Family::theta_in_domain(double theta) const {
  if (!std::isfinite(theta)) return false;
  if (kind_ == FamilyKind::ExponentialGamma) return theta < 0.0;
  return true;
}

bool Family::value_in_support(double x) const {
  switch (kind_) {
    case FamilyKind::Gaussian:
      return std::isfinite(x);
    case FamilyKind::Bernoulli:
      return x == 0.0 || x == 1.0;
    case FamilyKind::Poisson:
      return is_integerish(x) && x >= 0.0;
    case FamilyKind::ExponentialGamma:
      return std::isfinite(x) && x > 0.0;
  }
  return false;
}

void Family::check_theta(const Eigen::MatrixXd& theta) const {
  for (Eigen::Index j = 0; j < theta.cols(); ++j)
    for (Eigen::Index i = 0; i < theta.rows(); ++i)
      if (!theta_in_domain(theta(i, j)))
        throw_domain(name_ + ": natural parameter outside domain", i, j,
                     theta(i, j));
}

Eigen::MatrixXd Family::link(const Eigen::MatrixXd& mu) const {
  Eigen::MatrixXd out(mu.rows(), mu.cols());
  for (Eigen::Index j = 0; j < mu.cols(); ++j)
    for (Eigen::Index i = 0; i < mu.rows(); ++i) {
      if (!mean_in_domain(mu(i, j)))
        throw_domain(name_ + ": mean outside domain", i, j, mu(i, j));
      out(i, j) = link_scalar(mu(i, j));
    }
  return out;
}

Eigen::MatrixXd Family::inv_link(const Eigen::MatrixXd& theta) const {
  check_theta(theta);
  Eigen::MatrixXd out(theta.rows(), theta.cols());
  for (Eigen::Index j = 0; j < theta.cols(); ++j)
    for (Eigen::Index i = 0; i < theta.rows(); ++i)
      out(i, j) = inv_link_scalar(theta(i, j));
  return out;
}

Eigen::MatrixXd Family::log_partition(const Eigen::MatrixXd& theta) const {
  check_theta(theta);
  Eigen::MatrixXd out(theta.rows(), theta.cols());
  for (Eigen::Index j = 0; j < theta.cols(); ++j)
    for (Eigen::Index i = 0; i < theta.rows(); ++i)
      out(i, j) = log_partition_scalar(theta(i, j));
  return out;
}

Eigen::MatrixXd Family::curvature(const Eigen::MatrixXd& theta) const {
  check_theta(theta);
  Eigen::MatrixXd out(theta.rows(), theta.cols());
  for (Eigen::Index j = 0; j < theta.cols(); ++j)
    for (Eigen::Index i = 0; i < theta.rows(); ++i)
      out(i, j) = curvature_scalar(theta(i, j));
  return out;
}

double Family::curvature_bound() const {
  switch (kind_) {
    case FamilyKind::Gaussian:
      return 1.0;
    case FamilyKind::Bernoulli:
      return 0.25;
    case FamilyKind::Poisson:
    case FamilyKind::ExponentialGamma:
      return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

std::optional<double> Family::universal_step() const {
  switch (kind_) {
    case FamilyKind::Gaussian:
      return 1.0;
    case FamilyKind::Bernoulli:
      return 4.0;
    case FamilyKind::Poisson:
    case FamilyKind::ExponentialGamma:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace sgpca
