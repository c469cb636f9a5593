#ifndef SGPCA_FAMILY_HPP
#define SGPCA_FAMILY_HPP

#include <limits>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace sgpca {

enum class FamilyKind { Gaussian, Bernoulli, Poisson, ExponentialGamma };

// One exponential-family distribution under its canonical link: the link g,
// its inverse b' (derivative of the log-partition b), the curvature b'', and
// the supremum of b'' when finite. All matrix operations are element-wise and
// pure; domain violations throw std::domain_error naming the offending entry.
class Family {
 public:
  explicit Family(FamilyKind kind, double dispersion = 1.0);

  FamilyKind kind() const { return kind_; }
  double dispersion() const { return dispersion_; }
  const std::string& name() const { return name_; }

  static Family parse(const std::string& name);

  // Scalar forms. The unchecked variants assume the argument is in-domain.
  double link_scalar(double mu) const;
  double inv_link_scalar(double theta) const;
  double log_partition_scalar(double theta) const;
  double curvature_scalar(double theta) const;

  bool mean_in_domain(double mu) const;
  bool theta_in_domain(double theta) const;
  // True when x is a value the distribution can produce (e.g. {0,1} for
  // Bernoulli, nonnegative integers for Poisson).
  bool value_in_support(double x) const;

  Eigen::MatrixXd link(const Eigen::MatrixXd& mu) const;
  Eigen::MatrixXd inv_link(const Eigen::MatrixXd& theta) const;
  Eigen::MatrixXd log_partition(const Eigen::MatrixXd& theta) const;
  Eigen::MatrixXd curvature(const Eigen::MatrixXd& theta) const;

  // sup of b'' over the natural-parameter domain; +inf when unbounded.
  double curvature_bound() const;

  // Largest step size with guaranteed descent: 1 for Gaussian, 4 for
  // Bernoulli, none for Poisson and Exponential/Gamma.
  std::optional<double> universal_step() const;

 private:
  void check_theta(const Eigen::MatrixXd& theta) const;

  FamilyKind kind_;
  double dispersion_;
  std::string name_;
};

// Numerically stable sigmoid and softplus, used by the Bernoulli branch and
// exposed for reuse in simulation.
double stable_sigmoid(double x);
double stable_softplus(double x);

}  // namespace sgpca

#endif  // SGPCA_FAMILY_HPP
