#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "gibbs_spectra/errors.hpp"
#include "gibbs_spectra/rng.hpp"

namespace gibbs_spectra {

enum class Axis { X, Y };

inline const char* to_string(Axis axis) { return axis == Axis::X ? "X" : "Y"; }

// A joint pmf over {0..nx-1} x {0..ny-1}.  Row index is the X state, column
// index the Y state.  Construct through validate_joint or a generator; every
// instance satisfies Assumption 1 (at least two X states and two Y states
// carry positive marginal mass) and sums to 1 exactly up to one rounding.
struct FiniteJointDistribution {
  int nx = 0;
  int ny = 0;
  Eigen::MatrixXd p;  // nx x ny

  Eigen::VectorXd marginal_x() const { return p.rowwise().sum(); }
  Eigen::VectorXd marginal_y() const { return p.colwise().sum().transpose(); }
  bool strictly_positive() const { return p.minCoeff() > 0.0; }
};

// Conditional proposal table for one component: q.row(x*ny + y) is the
// proposal pmf over the proposed component's states given the current (x, y).
struct ProposalFamily {
  Axis axis = Axis::X;
  int nx = 0;
  int ny = 0;
  Eigen::MatrixXd q;  // (nx*ny) x (axis == X ? nx : ny)

  int proposed_states() const { return axis == Axis::X ? nx : ny; }
  int row_index(int x, int y) const { return x * ny + y; }
};

// Mixing weight of the random-scan coin, constrained to (0, 1).
class SelectionProbability {
public:
  explicit SelectionProbability(double r) : r_(r) {
    if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::DomainError, "selection probability must lie in (0,1)");
  }
  double value() const { return r_; }

private:
  double r_;
};

// Validates a raw table: rejects negative entries, total mass drifting more
// than 1e-9 from 1, and Assumption 1 violations.  Accepted tables are
// renormalized to total mass exactly 1.
FiniteJointDistribution validate_joint(const std::vector<std::vector<double>>& raw);
FiniteJointDistribution validate_joint(const Eigen::MatrixXd& raw);

// One Dirichlet draw over the nx*ny cells.  The vector overload requires
// length nx*ny (row-major cell order).
FiniteJointDistribution gen_dirichlet_joint(int nx, int ny, double concentration, std::uint64_t seed);
FiniteJointDistribution gen_dirichlet_joint(int nx, int ny, const std::vector<double>& concentration,
                                            std::uint64_t seed);
FiniteJointDistribution gen_dirichlet_joint(Rng& rng, int nx, int ny,
                                            const std::vector<double>& concentration);

// Joint drawn from a Dirichlet whose concentration entries are themselves
// i.i.d. uniform on [0.5, 2.0] from the same stream.  Documented default for
// "random concentration parameters"; override by drawing your own vector.
FiniteJointDistribution gen_random_concentration_joint(Rng& rng, int nx, int ny);

// Seeded corpus of flat-Dirichlet joints; instance i uses a sub-seed drawn
// from the master stream, so corpus members are independent of count.
std::vector<FiniteJointDistribution> dirichlet_corpus(int count, int nx, int ny, double concentration,
                                                      std::uint64_t seed);

// Independence proposal: q(.|x,y) equals the axis marginal for every (x, y).
// Satisfies Condition 1 (or 2) with C = max over the support of the ratio
// of conditional to marginal.
ProposalFamily gen_independence_proposal(const FiniteJointDistribution& joint, Axis axis);

// Proposes uniformly over the axis states other than the current one; the
// 2-state case is the periodic counterexample proposal.
ProposalFamily gen_swap_proposal(const FiniteJointDistribution& joint, Axis axis);

// Drops X states with zero row mass and Y states with zero column mass,
// remapping indices.  x_map/y_map give the kept original indices in order.
struct SupportRestriction {
  FiniteJointDistribution joint;
  std::vector<int> x_map;
  std::vector<int> y_map;
};
SupportRestriction restrict_support(const FiniteJointDistribution& joint);

// Construction check shared by proposal builders and file loading.
ProposalFamily validate_proposal(Axis axis, int nx, int ny, const Eigen::MatrixXd& q);

}  // namespace gibbs_spectra
