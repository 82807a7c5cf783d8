#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "gibbs_spectra/spectral.hpp"
#include "gibbs_spectra/tolerances.hpp"

namespace gibbs_spectra {

struct VerificationReport {
  std::string claim;
  std::string inputs;
  std::vector<std::pair<std::string, double>> computed;
  bool pass = false;
  double tolerance = 0.0;
  std::string details;
};

// Supremum of a conditional-to-proposal density ratio over its support,
// which is at least 1 when finite.  infinite is set when some positive
// conditional mass is never proposed.
struct ConditionConstant {
  double value = 1.0;
  bool infinite = false;
  // (proposed state, current state of the same axis, conditioning state)
  std::array<int, 3> argmax{0, 0, 0};
};

// rho_r as a function of rho_d and the selection probability:
// (1 + sqrt(1 - 4 r (1-r) (1 - rho_d))) / 2.
double theorem1_rhs(double rho_d, double r);

// Deterministic- and random-scan rates of one instance next to the formula
// value; the building block of the rate-relationship checks and plots.
struct RatePoint {
  double rho_d = 0.0;
  double rho_r = 0.0;
  double formula = 0.0;
};
RatePoint theorem1_point(const FiniteJointDistribution& joint, double r);

// Checks the deterministic-/random-scan rate identity on one instance.
VerificationReport verify_theorem1(const FiniteJointDistribution& joint, double r, double tolerance);

// Lower bounds rho_r >= max{1-r+r g2, r+(1-r) g2} with g2 the squared
// maximal correlation, rho_r >= rho_d^(r(1-r)), and the iteration-exchange
// exponent k* = log rho_d / log rho_r >= 1/(r(1-r)) where defined.
VerificationReport lemma4_and_young_bounds(const FiniteJointDistribution& joint, double r);

// sup over (x', x, y) of pi(x'|y) / q2(x'|x,y).
ConditionConstant condition_c(const FiniteJointDistribution& joint, const ProposalFamily& q2);

// sup over (y', x, y) of pi(y'|x) / q1(y'|x,y).
ConditionConstant condition_c1(const FiniteJointDistribution& joint, const ProposalFamily& q1);

// Entrywise minorization checks: Q >= pi_X|Y / C, PXM >= PX / C,
// PRM >= PR / C, and with q1 also P1 >= pi_Y|X / C1 and the two-MH
// random-scan kernel >= PRM / C1.
VerificationReport verify_minorizations(const FiniteJointDistribution& joint, const ProposalFamily* q1,
                                        const ProposalFamily& q2, double r);

// Uniform 2x2 joint with the always-move proposal on X; the
// deterministic-scan CMH chain it induces is periodic.
std::pair<FiniteJointDistribution, ProposalFamily> build_counterexample();

// Asserts the counterexample's known rates: rho(PDM) = 1,
// rho(PRM) = max{|1-2r|, r}, and an infinite condition constant.
VerificationReport verify_counterexample(const std::vector<double>& r_values = {0.25, 0.5});

// Norm-power identities of the deterministic-scan chains:
// ||PD^n||^(1/(n-1/2)) constant and equal to ||PX|| = ||PY|| for n = 1..n_max,
// and with q2 the sandwich ||PDM^n||^(1/(n-1)) <= rho(PXM) <= ||PDM^n||^(1/n).
VerificationReport verify_norm_power_identities(const FiniteJointDistribution& joint,
                                                const ProposalFamily* q2, int n_max = 5);

// Squared maximal correlation against the marginal-chain rate.
VerificationReport verify_maximal_correlation_identity(const FiniteJointDistribution& joint);

// One qualitative implication: when the premise sampler is geometrically
// ergodic the conclusion sampler must be too, possibly gated on a finite
// condition constant.
enum class ImplicationGate { None, C, C1, CAndC1 };

struct ImplicationRule {
  SamplerKind premise;
  SamplerKind conclusion;
  ImplicationGate gate;
};

// The solid and dashed implication arrows among the six samplers; no rule
// has the two-MH deterministic-scan chain as a premise.
const std::vector<ImplicationRule>& implication_rules();

// Computes every rate available from the supplied proposals, classifies
// geometric ergodicity at the threshold, and checks the implication arrows.
// Dashed arrows are skipped (not failed) when their gate constant is
// infinite.
VerificationReport qualitative_audit(const FiniteJointDistribution& joint, const ProposalFamily* q1,
                                     const ProposalFamily* q2, double r,
                                     double geo_threshold = tol::kGeometricThreshold);

// Geometric ergodicity of the random-scan samplers must not depend on the
// selection probability.
VerificationReport selection_robustness(const FiniteJointDistribution& joint, const ProposalFamily* q2,
                                        const std::vector<double>& r_values,
                                        double geo_threshold = tol::kGeometricThreshold);

}  // namespace gibbs_spectra
