#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "gibbs_spectra/core.hpp"

namespace gibbs_spectra {

// Index set a kernel acts on: either the product space {0..nx-1} x {0..ny-1}
// flattened row-major (s = x*ny + y), or a single component's states.
class StateSpace {
public:
  static StateSpace product(int nx, int ny) { return StateSpace(nx, ny, Axis::X, true); }
  static StateSpace single(Axis axis, int n) {
    return StateSpace(axis == Axis::X ? n : 1, axis == Axis::X ? 1 : n, axis, false);
  }

  int size() const { return nx_ * ny_; }
  bool is_product() const { return is_product_; }
  Axis axis() const { return axis_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  int encode(int x, int y) const { return x * ny_ + y; }
  std::pair<int, int> decode(int s) const { return {s / ny_, s % ny_}; }
  std::string label(int s) const;

  bool operator==(const StateSpace& other) const = default;

private:
  StateSpace(int nx, int ny, Axis axis, bool is_product)
      : nx_(nx), ny_(ny), axis_(axis), is_product_(is_product) {}
  int nx_;
  int ny_;
  Axis axis_;
  bool is_product_;
};

// A square stochastic matrix together with its stationary distribution and a
// reversibility claim.  make_kernel enforces row sums, stationarity, and
// (when claimed) detailed balance at construction.
struct TransitionKernel {
  StateSpace states;
  Eigen::MatrixXd P;
  Eigen::VectorXd stationary;
  bool reversible = false;

  int size() const { return states.size(); }
};

TransitionKernel make_kernel(StateSpace states, Eigen::MatrixXd P, Eigen::VectorXd stationary,
                             bool reversible);

// Re-runs the construction checks; used on kernels read back from files.
void validate_kernel(const TransitionKernel& kernel);

// Drops states with zero stationary mass.  Exact for rate computations: a
// stationary chain never moves from the support into a null state, and the
// L2 space only sees the support.
TransitionKernel restrict_to_support(const TransitionKernel& kernel);

// Full conditionals of a joint, stored in the joint's shape: x_given_y's
// columns are the pmfs over X, y_given_x's rows are the pmfs over Y.
struct ConditionalFamily {
  int nx = 0;
  int ny = 0;
  Eigen::MatrixXd x_given_y;  // (x, y) -> pi(x | y)
  Eigen::MatrixXd y_given_x;  // (x, y) -> pi(y | x)
};

ConditionalFamily conditionals(const FiniteJointDistribution& joint);

// One-component Metropolis-Hastings transition rows, rejection mass folded
// into the current state.  Q.row(x*ny + y) is the pmf over the updated
// component's next value.
struct MhStepFamily {
  Axis axis = Axis::X;
  int nx = 0;
  int ny = 0;
  Eigen::MatrixXd Q;

  int row_index(int x, int y) const { return x * ny + y; }
};

MhStepFamily mh_step(const ConditionalFamily& cond, const ProposalFamily& proposal, Axis target_axis);

// Deterministic-scan Gibbs: refresh Y from pi(.|x), then X from pi(.|y').
TransitionKernel dg_kernel(const FiniteJointDistribution& joint);

// Random-scan Gibbs: with probability r refresh X, else refresh Y.
TransitionKernel rg_kernel(const FiniteJointDistribution& joint, const SelectionProbability& r);

// Deterministic-scan CMH: Gibbs refresh of Y, then MH update of X.
TransitionKernel dc_kernel(const FiniteJointDistribution& joint, const ProposalFamily& q2);

// Random-scan CMH: with probability r MH-update X, else refresh Y.
TransitionKernel rc_kernel(const FiniteJointDistribution& joint, const ProposalFamily& q2,
                           const SelectionProbability& r);

// Deterministic-scan CMH with MH updates on both components.
TransitionKernel dcmm_kernel(const FiniteJointDistribution& joint, const ProposalFamily& q1,
                             const ProposalFamily& q2);

// Random-scan CMH with MH updates on both components.
TransitionKernel rcmm_kernel(const FiniteJointDistribution& joint, const ProposalFamily& q1,
                             const ProposalFamily& q2, const SelectionProbability& r);

// X-marginal chain of the deterministic-scan Gibbs sampler.
TransitionKernel marginal_x_kernel(const FiniteJointDistribution& joint);

// Y-marginal chain of the deterministic-scan Gibbs sampler.
TransitionKernel marginal_y_kernel(const FiniteJointDistribution& joint);

// X-marginal chain of the deterministic-scan CMH sampler.
TransitionKernel marginal_xm_kernel(const FiniteJointDistribution& joint, const ProposalFamily& q2);

// Proposal equal to the targeted full conditional; acceptance is then
// identically 1 and the CMH kernels reduce to their Gibbs counterparts.
ProposalFamily exact_conditional_proposal(const FiniteJointDistribution& joint, Axis axis);

}  // namespace gibbs_spectra
