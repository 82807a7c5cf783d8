#pragma once

#include <doctest.h>

#include <Eigen/Dense>
#include <functional>

#include "gibbs_spectra/core.hpp"

namespace fixtures {

inline void check_error(gibbs_spectra::ErrorCode expected, const std::function<void()>& body) {
  try {
    body();
    FAIL_CHECK("expected error " << gibbs_spectra::to_string(expected));
  } catch (const gibbs_spectra::Error& e) {
    CHECK(e.code() == expected);
  }
}

// [[0.4, 0.1], [0.1, 0.4]]: conditionals (0.8, 0.2), marginal chain
// [[0.68, 0.32], [0.32, 0.68]], rates rho_d = 0.36 and rho_r(1/2) = 0.8.
inline gibbs_spectra::FiniteJointDistribution correlated_2x2() {
  Eigen::MatrixXd p(2, 2);
  p << 0.4, 0.1, 0.1, 0.4;
  return gibbs_spectra::validate_joint(p);
}

inline gibbs_spectra::FiniteJointDistribution uniform_2x2() {
  return gibbs_spectra::validate_joint(Eigen::MatrixXd::Constant(2, 2, 0.25));
}

// Rank-one table: X and Y independent.
inline gibbs_spectra::FiniteJointDistribution product_2x3() {
  Eigen::VectorXd px(2), py(3);
  px << 0.3, 0.7;
  py << 0.2, 0.5, 0.3;
  return gibbs_spectra::validate_joint(Eigen::MatrixXd(px * py.transpose()));
}

inline gibbs_spectra::FiniteJointDistribution diagonal_2x2() {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 2);
  p(0, 0) = 0.5;
  p(1, 1) = 0.5;
  return gibbs_spectra::validate_joint(p);
}

}  // namespace fixtures
