#ifndef SGPCA_SIM_HPP
#define SGPCA_SIM_HPP

#include <cstdint>

#include <Eigen/Dense>

#include "sgpca/data.hpp"
#include "sgpca/family.hpp"
#include "sgpca/threshold.hpp"

namespace sgpca {

// Spiked-model synthetic data: g(E[X]) = P D Qᵀ with i.i.d. standard normal
// scores P, diagonal signal strengths D, and a sparse orthonormal loading
// matrix Q, sampled entrywise under the requested family and masked at the
// requested missing rate.
struct SimSpec {
  Eigen::Index n = 100;
  Eigen::Index p = 200;
  Eigen::Index r_star = 1;
  double q_star = 0.01;
  SparsityMode q_mode = SparsityMode::ElementWise;
  Eigen::VectorXd lambdas;  // length r_star, strictly positive
  Family family{FamilyKind::Gaussian};
  double missing_rate = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimTruth {
  Eigen::MatrixXd theta_star;  // n x p natural parameters
  Eigen::MatrixXd q;           // p x r sparse orthonormal loadings
  Eigen::MatrixXd p_scores;    // n x r
};

struct SimData {
  MaskedMatrix x;
  SimTruth truth;
  // Poisson natural parameters were clipped at 30 to avoid overflow.
  bool theta_clipped = false;
};

// Sparse orthonormal loadings. Element mode places disjoint consecutive
// support blocks per column (floor(q*p*r) nonzeros in total); group mode
// confines all columns to the first floor(q*p) rows and orthonormalizes
// within. q = 1 falls back to a dense QR frame.
Eigen::MatrixXd generate_loadings(Eigen::Index p, Eigen::Index r_star,
                                  double q_star, SparsityMode q_mode,
                                  std::uint64_t seed);

SimData generate_data(const SimSpec& spec);

// The three benchmark scenarios; Bernoulli uses a denser loading vector in
// setting (a).
struct SettingPreset {
  Eigen::Index r_star;
  double q_star;
  SparsityMode q_mode;
};
SettingPreset setting_preset(char setting, FamilyKind family);

// Signal strength keeping the natural parameters in a numerically stable
// range: 10 for Gaussian/Bernoulli, 2 for Poisson.
double default_lambda(FamilyKind family);

}  // namespace sgpca

#endif  // SGPCA_SIM_HPP
