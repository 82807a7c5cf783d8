#include "gibbs_spectra/kernels.hpp"

#include <cmath>

#include "gibbs_spectra/tolerances.hpp"

namespace gibbs_spectra {

std::string StateSpace::label(int s) const {
  if (is_product_) {
    const auto [x, y] = decode(s);
    return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
  }
  return std::to_string(s);
}

TransitionKernel make_kernel(StateSpace states, Eigen::MatrixXd P, Eigen::VectorXd stationary,
                             bool reversible) {
  TransitionKernel kernel{states, std::move(P), std::move(stationary), reversible};
  validate_kernel(kernel);
  return kernel;
}

void validate_kernel(const TransitionKernel& kernel) {
  const int n = kernel.states.size();
  if (kernel.P.rows() != n || kernel.P.cols() != n || kernel.stationary.size() != n) {
    fail(ErrorCode::DimensionMismatch, "kernel tables must match the state space");
  }
  if (kernel.P.minCoeff() < 0.0 || kernel.stationary.minCoeff() < 0.0) {
    fail(ErrorCode::NegativeEntry, "kernel tables must be nonnegative");
  }
  for (int s = 0; s < n; ++s) {
    if (std::abs(kernel.P.row(s).sum() - 1.0) > tol::kConstruction) {
      fail(ErrorCode::SumNotOne, "kernel row " + std::to_string(s) + " sums to " +
                                     std::to_string(kernel.P.row(s).sum()));
    }
  }
  if (std::abs(kernel.stationary.sum() - 1.0) > tol::kConstruction) {
    fail(ErrorCode::SumNotOne, "stationary vector sums to " + std::to_string(kernel.stationary.sum()));
  }
  const Eigen::VectorXd left = kernel.P.transpose() * kernel.stationary;
  if ((left - kernel.stationary).cwiseAbs().maxCoeff() > tol::kConstruction) {
    fail(ErrorCode::DomainError, "claimed stationary vector is not invariant");
  }
  if (kernel.reversible) {
    for (int s = 0; s < n; ++s) {
      for (int t = s + 1; t < n; ++t) {
        const double forward = kernel.stationary(s) * kernel.P(s, t);
        const double backward = kernel.stationary(t) * kernel.P(t, s);
        if (std::abs(forward - backward) > tol::kConstruction) {
          fail(ErrorCode::DomainError, "detailed balance fails at pair (" + std::to_string(s) + "," +
                                           std::to_string(t) + ")");
        }
      }
    }
  }
}

TransitionKernel restrict_to_support(const TransitionKernel& kernel) {
  std::vector<int> keep;
  for (int s = 0; s < kernel.size(); ++s) {
    if (kernel.stationary(s) > 0.0) keep.push_back(s);
  }
  const int m = static_cast<int>(keep.size());
  if (m == kernel.size()) return kernel;
  Eigen::MatrixXd P(m, m);
  Eigen::VectorXd pi(m);
  for (int i = 0; i < m; ++i) {
    pi(i) = kernel.stationary(keep[i]);
    for (int j = 0; j < m; ++j) P(i, j) = kernel.P(keep[i], keep[j]);
  }
  // Stationarity forbids transitions from the support into null states, so
  // the restricted rows remain stochastic.
  const Axis axis = kernel.states.is_product() ? Axis::X : kernel.states.axis();
  return make_kernel(StateSpace::single(axis, m), std::move(P), std::move(pi), kernel.reversible);
}

ConditionalFamily conditionals(const FiniteJointDistribution& joint) {
  const Eigen::VectorXd px = joint.marginal_x();
  const Eigen::VectorXd py = joint.marginal_y();
  if (px.minCoeff() <= 0.0 || py.minCoeff() <= 0.0) {
    fail(ErrorCode::ZeroMarginal, "conditionals need strictly positive marginals");
  }
  ConditionalFamily cond{joint.nx, joint.ny, joint.p, joint.p};
  for (int y = 0; y < joint.ny; ++y) cond.x_given_y.col(y) /= py(y);
  for (int x = 0; x < joint.nx; ++x) cond.y_given_x.row(x) /= px(x);
  return cond;
}

MhStepFamily mh_step(const ConditionalFamily& cond, const ProposalFamily& proposal, Axis target_axis) {
  if (proposal.axis != target_axis) {
    fail(ErrorCode::AxisMismatch, std::string("proposal updates ") + to_string(proposal.axis) +
                                      " but the target conditional is over " + to_string(target_axis));
  }
  if (proposal.nx != cond.nx || proposal.ny != cond.ny) {
    fail(ErrorCode::DimensionMismatch, "proposal and conditional dimensions differ");
  }
  const int nx = cond.nx;
  const int ny = cond.ny;
  const int n_axis = target_axis == Axis::X ? nx : ny;
  MhStepFamily step{target_axis, nx, ny, Eigen::MatrixXd::Zero(nx * ny, n_axis)};

  // target(v | x, y): the conditional the update must leave invariant.
  const auto target = [&](int v, int x, int y) {
    return target_axis == Axis::X ? cond.x_given_y(v, y) : cond.y_given_x(x, v);
  };
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      const int row = x * ny + y;
      const int current = target_axis == Axis::X ? x : y;
      double off_mass = 0.0;
      for (int v = 0; v < n_axis; ++v) {
        if (v == current) continue;
        const double q_forward = proposal.q(row, v);
        if (q_forward == 0.0) continue;  // never proposed, ratio never evaluated
        const int row_back = target_axis == Axis::X ? v * ny + y : x * ny + v;
        const double num = target(v, x, y) * proposal.q(row_back, current);
        const double den = target(current, x, y) * q_forward;
        const double accept = num >= den ? 1.0 : num / den;
        step.Q(row, v) = q_forward * accept;
        off_mass += step.Q(row, v);
      }
      // Self mass as the complement keeps rows summing to 1 exactly.
      step.Q(row, current) = std::max(0.0, 1.0 - off_mass);
    }
  }

  // Detailed balance with respect to the targeted conditional.
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      const int row = x * ny + y;
      const int current = target_axis == Axis::X ? x : y;
      for (int v = 0; v < n_axis; ++v) {
        if (v == current) continue;
        const int row_back = target_axis == Axis::X ? v * ny + y : x * ny + v;
        const double forward = target(current, x, y) * step.Q(row, v);
        const double backward = target(v, x, y) * step.Q(row_back, current);
        if (std::abs(forward - backward) > tol::kConstruction) {
          fail(ErrorCode::DomainError, "MH step violates detailed balance");
        }
      }
    }
  }
  return step;
}

namespace {

Eigen::VectorXd flatten(const FiniteJointDistribution& joint) {
  Eigen::VectorXd pi(joint.nx * joint.ny);
  for (int x = 0; x < joint.nx; ++x) {
    for (int y = 0; y < joint.ny; ++y) pi(x * joint.ny + y) = joint.p(x, y);
  }
  return pi;
}

}  // namespace

TransitionKernel dg_kernel(const FiniteJointDistribution& joint) {
  const ConditionalFamily cond = conditionals(joint);
  const int nx = joint.nx, ny = joint.ny, n = nx * ny;
  Eigen::MatrixXd P(n, n);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      for (int xp = 0; xp < nx; ++xp) {
        for (int yp = 0; yp < ny; ++yp) {
          P(x * ny + y, xp * ny + yp) = cond.y_given_x(x, yp) * cond.x_given_y(xp, yp);
        }
      }
    }
  }
  return make_kernel(StateSpace::product(nx, ny), std::move(P), flatten(joint), false);
}

TransitionKernel rg_kernel(const FiniteJointDistribution& joint, const SelectionProbability& r) {
  const ConditionalFamily cond = conditionals(joint);
  const int nx = joint.nx, ny = joint.ny, n = nx * ny;
  const double rv = r.value();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      const int s = x * ny + y;
      for (int xp = 0; xp < nx; ++xp) P(s, xp * ny + y) += rv * cond.x_given_y(xp, y);
      for (int yp = 0; yp < ny; ++yp) P(s, x * ny + yp) += (1.0 - rv) * cond.y_given_x(x, yp);
    }
  }
  return make_kernel(StateSpace::product(nx, ny), std::move(P), flatten(joint), true);
}

TransitionKernel dc_kernel(const FiniteJointDistribution& joint, const ProposalFamily& q2) {
  const ConditionalFamily cond = conditionals(joint);
  const MhStepFamily mh = mh_step(cond, q2, Axis::X);
  const int nx = joint.nx, ny = joint.ny, n = nx * ny;
  Eigen::MatrixXd P(n, n);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      for (int xp = 0; xp < nx; ++xp) {
        for (int yp = 0; yp < ny; ++yp) {
          P(x * ny + y, xp * ny + yp) = cond.y_given_x(x, yp) * mh.Q(mh.row_index(x, yp), xp);
        }
      }
    }
  }
  return make_kernel(StateSpace::product(nx, ny), std::move(P), flatten(joint), false);
}

TransitionKernel rc_kernel(const FiniteJointDistribution& joint, const ProposalFamily& q2,
                           const SelectionProbability& r) {
  const ConditionalFamily cond = conditionals(joint);
  const MhStepFamily mh = mh_step(cond, q2, Axis::X);
  const int nx = joint.nx, ny = joint.ny, n = nx * ny;
  const double rv = r.value();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      const int s = x * ny + y;
      for (int xp = 0; xp < nx; ++xp) P(s, xp * ny + y) += rv * mh.Q(mh.row_index(x, y), xp);
      for (int yp = 0; yp < ny; ++yp) P(s, x * ny + yp) += (1.0 - rv) * cond.y_given_x(x, yp);
    }
  }
  return make_kernel(StateSpace::product(nx, ny), std::move(P), flatten(joint), true);
}

TransitionKernel dcmm_kernel(const FiniteJointDistribution& joint, const ProposalFamily& q1,
                             const ProposalFamily& q2) {
  const ConditionalFamily cond = conditionals(joint);
  const MhStepFamily p1 = mh_step(cond, q1, Axis::Y);
  const MhStepFamily p2 = mh_step(cond, q2, Axis::X);
  const int nx = joint.nx, ny = joint.ny, n = nx * ny;
  Eigen::MatrixXd P(n, n);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      for (int xp = 0; xp < nx; ++xp) {
        for (int yp = 0; yp < ny; ++yp) {
          P(x * ny + y, xp * ny + yp) = p1.Q(p1.row_index(x, y), yp) * p2.Q(p2.row_index(x, yp), xp);
        }
      }
    }
  }
  return make_kernel(StateSpace::product(nx, ny), std::move(P), flatten(joint), false);
}

TransitionKernel rcmm_kernel(const FiniteJointDistribution& joint, const ProposalFamily& q1,
                             const ProposalFamily& q2, const SelectionProbability& r) {
  const ConditionalFamily cond = conditionals(joint);
  const MhStepFamily p1 = mh_step(cond, q1, Axis::Y);
  const MhStepFamily p2 = mh_step(cond, q2, Axis::X);
  const int nx = joint.nx, ny = joint.ny, n = nx * ny;
  const double rv = r.value();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      const int s = x * ny + y;
      for (int xp = 0; xp < nx; ++xp) P(s, xp * ny + y) += rv * p2.Q(p2.row_index(x, y), xp);
      for (int yp = 0; yp < ny; ++yp) P(s, x * ny + yp) += (1.0 - rv) * p1.Q(p1.row_index(x, y), yp);
    }
  }
  return make_kernel(StateSpace::product(nx, ny), std::move(P), flatten(joint), true);
}

TransitionKernel marginal_x_kernel(const FiniteJointDistribution& joint) {
  const ConditionalFamily cond = conditionals(joint);
  Eigen::MatrixXd P(joint.nx, joint.nx);
  for (int x = 0; x < joint.nx; ++x) {
    for (int xp = 0; xp < joint.nx; ++xp) {
      double sum = 0.0;
      for (int y = 0; y < joint.ny; ++y) sum += cond.y_given_x(x, y) * cond.x_given_y(xp, y);
      P(x, xp) = sum;
    }
  }
  return make_kernel(StateSpace::single(Axis::X, joint.nx), std::move(P), joint.marginal_x(), true);
}

TransitionKernel marginal_y_kernel(const FiniteJointDistribution& joint) {
  const ConditionalFamily cond = conditionals(joint);
  Eigen::MatrixXd P(joint.ny, joint.ny);
  for (int y = 0; y < joint.ny; ++y) {
    for (int yp = 0; yp < joint.ny; ++yp) {
      double sum = 0.0;
      for (int x = 0; x < joint.nx; ++x) sum += cond.x_given_y(x, y) * cond.y_given_x(x, yp);
      P(y, yp) = sum;
    }
  }
  return make_kernel(StateSpace::single(Axis::Y, joint.ny), std::move(P), joint.marginal_y(), true);
}

TransitionKernel marginal_xm_kernel(const FiniteJointDistribution& joint, const ProposalFamily& q2) {
  const ConditionalFamily cond = conditionals(joint);
  const MhStepFamily mh = mh_step(cond, q2, Axis::X);
  Eigen::MatrixXd P(joint.nx, joint.nx);
  for (int x = 0; x < joint.nx; ++x) {
    for (int xp = 0; xp < joint.nx; ++xp) {
      double sum = 0.0;
      for (int y = 0; y < joint.ny; ++y) sum += cond.y_given_x(x, y) * mh.Q(mh.row_index(x, y), xp);
      P(x, xp) = sum;
    }
  }
  return make_kernel(StateSpace::single(Axis::X, joint.nx), std::move(P), joint.marginal_x(), true);
}

ProposalFamily exact_conditional_proposal(const FiniteJointDistribution& joint, Axis axis) {
  const ConditionalFamily cond = conditionals(joint);
  const int n_axis = axis == Axis::X ? joint.nx : joint.ny;
  Eigen::MatrixXd q(joint.nx * joint.ny, n_axis);
  for (int x = 0; x < joint.nx; ++x) {
    for (int y = 0; y < joint.ny; ++y) {
      const int row = x * joint.ny + y;
      for (int v = 0; v < n_axis; ++v) {
        q(row, v) = axis == Axis::X ? cond.x_given_y(v, y) : cond.y_given_x(x, v);
      }
    }
  }
  return validate_proposal(axis, joint.nx, joint.ny, q);
}

}  // namespace gibbs_spectra
