#ifndef SGPCA_DATA_HPP
#define SGPCA_DATA_HPP

#include <vector>

#include <Eigen/Dense>

#include "sgpca/family.hpp"

namespace sgpca {

// Data matrix with a binary observation mask. Storage is canonical: entries
// where the mask is 0 are stored as 0, so the stored values matrix already
// equals H∘X and the masked inner product needs no extra Hadamard product.
class MaskedMatrix {
 public:
  // mask entries must be 0 or 1; values at masked positions are zeroed.
  MaskedMatrix(Eigen::MatrixXd values, Eigen::MatrixXd mask);

  static MaskedMatrix fully_observed(Eigen::MatrixXd values);
  // NaN entries mark missing values.
  static MaskedMatrix from_values_with_nan(const Eigen::MatrixXd& raw);

  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }
  const Eigen::MatrixXd& values() const { return values_; }
  const Eigen::MatrixXd& mask() const { return mask_; }
  bool observed(Eigen::Index i, Eigen::Index j) const {
    return mask_(i, j) != 0.0;
  }
  Eigen::Index observed_count() const;
  double max_abs_value() const { return values_.cwiseAbs().maxCoeff(); }

  // Throws if any observed value lies outside the family's support.
  void validate_support(const Family& family) const;

  // Restriction to a subset of columns (screening).
  MaskedMatrix select_columns(const std::vector<Eigen::Index>& cols) const;

 private:
  Eigen::MatrixXd values_;
  Eigen::MatrixXd mask_;
};

// The factored natural parameter Θ = 1ₙαᵀ + VSᵀ: a per-variable intercept,
// an orthonormal score frame V, and a (possibly sparse) loading matrix S.
struct FactorModel {
  Eigen::VectorXd alpha;  // p
  Eigen::MatrixXd V;      // n x r, orthonormal columns
  Eigen::MatrixXd S;      // p x r

  Eigen::Index rank() const { return V.cols(); }
  Eigen::MatrixXd theta() const;

  // Shape consistency and VᵀV = I within tol (Frobenius).
  void validate(Eigen::Index n, Eigen::Index p, double tol = 1e-8) const;
};

struct Gradients {
  Eigen::MatrixXd s;      // p x r
  Eigen::MatrixXd v;      // n x r
  Eigen::VectorXd alpha;  // p
};

// Masked negative log-likelihood -<H∘X, Θ> + <H, b(Θ)>, up to the constant
// log h(X). Masked entries contribute exactly zero; b is only evaluated at
// observed entries so masked positions may hold out-of-domain Θ values.
double masked_nll(const MaskedMatrix& data, const Family& family,
                  const Eigen::MatrixXd& theta);

// -(H∘X) + H∘g⁻¹(Θ): the gradient of the masked loss in Θ.
Eigen::MatrixXd grad_theta(const MaskedMatrix& data, const Family& family,
                           const Eigen::MatrixXd& theta);

Gradients gradients(const MaskedMatrix& data, const Family& family,
                    const FactorModel& model);

}  // namespace sgpca

#endif  // SGPCA_DATA_HPP
