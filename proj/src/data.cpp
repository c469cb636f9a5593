#include "sgpca/data.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace sgpca {

MaskedMatrix::MaskedMatrix(Eigen::MatrixXd values, Eigen::MatrixXd mask)
    : values_(std::move(values)), mask_(std::move(mask)) {
  if (values_.rows() != mask_.rows() || values_.cols() != mask_.cols())
    throw std::invalid_argument("MaskedMatrix: values/mask shape mismatch");
  if (values_.rows() == 0 || values_.cols() == 0)
    throw std::invalid_argument("MaskedMatrix: empty matrix");
  for (Eigen::Index j = 0; j < mask_.cols(); ++j)
    for (Eigen::Index i = 0; i < mask_.rows(); ++i) {
      const double h = mask_(i, j);
      if (h != 0.0 && h != 1.0) {
        std::ostringstream os;
        os << "MaskedMatrix: mask entry (" << i << "," << j
           << ") must be 0 or 1, got " << h;
        throw std::invalid_argument(os.str());
      }
      if (h == 0.0) values_(i, j) = 0.0;
    }
}

MaskedMatrix MaskedMatrix::fully_observed(Eigen::MatrixXd values) {
  Eigen::MatrixXd ones =
      Eigen::MatrixXd::Ones(values.rows(), values.cols());
  return MaskedMatrix(std::move(values), std::move(ones));
}

MaskedMatrix MaskedMatrix::from_values_with_nan(const Eigen::MatrixXd& raw) {
  Eigen::MatrixXd values = raw;
  Eigen::MatrixXd mask = Eigen::MatrixXd::Ones(raw.rows(), raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j)
    for (Eigen::Index i = 0; i < raw.rows(); ++i)
      if (std::isnan(raw(i, j))) {
        values(i, j) = 0.0;
        mask(i, j) = 0.0;
      }
  return MaskedMatrix(std::move(values), std::move(mask));
}

Eigen::Index MaskedMatrix::observed_count() const {
  return static_cast<Eigen::Index>(mask_.sum());
}

void MaskedMatrix::validate_support(const Family& family) const {
  for (Eigen::Index j = 0; j < cols(); ++j)
    for (Eigen::Index i = 0; i < rows(); ++i) {
      if (mask_(i, j) == 0.0) continue;
      if (!family.value_in_support(values_(i, j))) {
        std::ostringstream os;
        os << family.name() << ": observed value at (" << i << "," << j
           << ") = " << values_(i, j) << " outside the distribution support";
        throw std::domain_error(os.str());
      }
    }
}

MaskedMatrix MaskedMatrix::select_columns(
    const std::vector<Eigen::Index>& cols) const {
  Eigen::MatrixXd v(rows(), static_cast<Eigen::Index>(cols.size()));
  Eigen::MatrixXd m(rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t a = 0; a < cols.size(); ++a) {
    v.col(static_cast<Eigen::Index>(a)) = values_.col(cols[a]);
    m.col(static_cast<Eigen::Index>(a)) = mask_.col(cols[a]);
  }
  return MaskedMatrix(std::move(v), std::move(m));
}

Eigen::MatrixXd FactorModel::theta() const {
  Eigen::MatrixXd t = V * S.transpose();
  t.rowwise() += alpha.transpose();
  return t;
}

void FactorModel::validate(Eigen::Index n, Eigen::Index p, double tol) const {
  if (alpha.size() != p) throw std::invalid_argument("FactorModel: alpha size");
  if (V.rows() != n || S.rows() != p || V.cols() != S.cols())
    throw std::invalid_argument("FactorModel: V/S shape mismatch");
  const Eigen::Index r = V.cols();
  if (r < 1 || r > std::min(n, p))
    throw std::invalid_argument("FactorModel: rank must be in [1, min(n,p)]");
  const double dev =
      (V.transpose() * V - Eigen::MatrixXd::Identity(r, r)).norm();
  if (dev > tol) {
    std::ostringstream os;
    os << "FactorModel: V is not orthonormal (||VtV - I||_F = " << dev << ")";
    throw std::invalid_argument(os.str());
  }
}

double masked_nll(const MaskedMatrix& data, const Family& family,
                  const Eigen::MatrixXd& theta) {
  if (theta.rows() != data.rows() || theta.cols() != data.cols())
    throw std::invalid_argument("masked_nll: theta shape mismatch");
  const Eigen::MatrixXd& x = data.values();
  const Eigen::MatrixXd& h = data.mask();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < theta.cols(); ++j)
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
      if (h(i, j) == 0.0) continue;
      const double t = theta(i, j);
      if (!family.theta_in_domain(t)) {
        std::ostringstream os;
        os << family.name() << ": natural parameter outside domain at ("
           << i << "," << j << "): value " << t;
        throw std::domain_error(os.str());
      }
      acc += -x(i, j) * t + family.log_partition_scalar(t);
    }
  return acc;
}

Eigen::MatrixXd grad_theta(const MaskedMatrix& data, const Family& family,
                           const Eigen::MatrixXd& theta) {
  if (theta.rows() != data.rows() || theta.cols() != data.cols())
    throw std::invalid_argument("grad_theta: theta shape mismatch");
  const Eigen::MatrixXd& x = data.values();
  const Eigen::MatrixXd& h = data.mask();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(theta.rows(), theta.cols());
  for (Eigen::Index j = 0; j < theta.cols(); ++j)
    for (Eigen::Index i = 0; i < theta.rows(); ++i) {
      if (h(i, j) == 0.0) continue;
      const double t = theta(i, j);
      if (!family.theta_in_domain(t)) {
        std::ostringstream os;
        os << family.name() << ": natural parameter outside domain at ("
           << i << "," << j << "): value " << t;
        throw std::domain_error(os.str());
      }
      g(i, j) = -x(i, j) + family.inv_link_scalar(t);
    }
  return g;
}

Gradients gradients(const MaskedMatrix& data, const Family& family,
                    const FactorModel& model) {
  if (model.alpha.size() != data.cols() || model.V.rows() != data.rows() ||
      model.S.rows() != data.cols() || model.V.cols() != model.S.cols())
    throw std::invalid_argument("gradients: model/data shape mismatch");
  const Eigen::MatrixXd g = grad_theta(data, family, model.theta());
  Gradients out;
  out.s = g.transpose() * model.V;
  out.v = g * model.S;
  out.alpha = g.colwise().sum().transpose();
  return out;
}

}  // namespace sgpca
