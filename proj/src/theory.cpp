#include "gibbs_spectra/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace gibbs_spectra {

namespace {

std::string describe(const FiniteJointDistribution& joint) {
  return std::to_string(joint.nx) + "x" + std::to_string(joint.ny) + " joint";
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

// Verifiers restrict product-space norms to the stationary support, which is
// exact and keeps instances with zero-mass cells (but valid marginals)
// checkable.
RateInputs with_restriction(RateInputs inputs) {
  inputs.restrict_support = true;
  return inputs;
}

double rate_of(SamplerKind kind, const FiniteJointDistribution& joint, const ProposalFamily* q1,
               const ProposalFamily* q2, std::optional<double> r) {
  return convergence_rate(kind, joint, with_restriction({.q1 = q1, .q2 = q2, .r = r})).rate;
}

}  // namespace

double theorem1_rhs(double rho_d, double r) {
  if (!(rho_d >= 0.0 && rho_d <= 1.0)) fail(ErrorCode::DomainError, "rho_d must lie in [0,1]");
  if (!(r > 0.0 && r < 1.0)) fail(ErrorCode::DomainError, "r must lie in (0,1)");
  const double arg = std::max(0.0, 1.0 - 4.0 * r * (1.0 - r) * (1.0 - rho_d));
  return (1.0 + std::sqrt(arg)) / 2.0;
}

RatePoint theorem1_point(const FiniteJointDistribution& joint, double r) {
  RatePoint point;
  point.rho_d = rate_of(SamplerKind::Dg, joint, nullptr, nullptr, std::nullopt);
  point.rho_r = rate_of(SamplerKind::Rg, joint, nullptr, nullptr, r);
  point.formula = theorem1_rhs(point.rho_d, r);
  return point;
}

VerificationReport verify_theorem1(const FiniteJointDistribution& joint, double r, double tolerance) {
  const RatePoint point = theorem1_point(joint, r);
  const double err = std::abs(point.rho_r - point.formula);

  VerificationReport report;
  report.claim = "theorem1";
  report.inputs = describe(joint) + ", r=" + fmt(r);
  report.computed = {
      {"rho_d", point.rho_d}, {"rho_r", point.rho_r}, {"formula", point.formula}, {"abs_err", err}};
  report.tolerance = tolerance;
  report.pass = err < tolerance;
  report.details = "|rho_r - rhs(rho_d)| = " + fmt(err);
  return report;
}

VerificationReport lemma4_and_young_bounds(const FiniteJointDistribution& joint, double r) {
  const double gamma_bar = maximal_correlation(joint);
  const double g2 = gamma_bar * gamma_bar;
  const double rho_d = rate_of(SamplerKind::Dg, joint, nullptr, nullptr, std::nullopt);
  const double rho_r = rate_of(SamplerKind::Rg, joint, nullptr, nullptr, r);

  const double bound1 = 1.0 - r + r * g2;
  const double bound2 = r + (1.0 - r) * g2;
  const double young = std::pow(rho_d, r * (1.0 - r));

  VerificationReport report;
  report.claim = "lemma4-young";
  report.inputs = describe(joint) + ", r=" + fmt(r);
  report.tolerance = tol::kInequalitySlack;
  bool pass = rho_r - std::max(bound1, bound2) >= -tol::kInequalitySlack &&
              rho_r - young >= -tol::kInequalitySlack;
  report.computed = {{"rho_d", rho_d},   {"rho_r", rho_r}, {"gamma_bar_sq", g2},
                     {"bound_x", bound1}, {"bound_y", bound2}, {"young", young}};

  // Endpoint rates land within solver noise of {0,1}; k* is undefined there.
  const bool k_star_defined = rho_d > tol::kEquality && rho_d < 1.0 - tol::kEquality &&
                              rho_r > tol::kEquality && rho_r < 1.0 - tol::kEquality;
  if (k_star_defined) {
    const double k_star = std::log(rho_d) / std::log(rho_r);
    const double k_floor = 1.0 / (r * (1.0 - r));
    report.computed.emplace_back("k_star", k_star);
    report.computed.emplace_back("k_floor", k_floor);
    pass = pass && k_star >= k_floor - 1e-9;
    report.details = "k* = " + fmt(k_star) + " >= " + fmt(k_floor);
  } else {
    report.details = "k* undefined (degenerate rate); inequality checks only";
  }
  report.pass = pass;
  return report;
}

namespace {

ConditionConstant condition_sup(const Eigen::MatrixXd& conditional_over_axis,
                                const ProposalFamily& proposal) {
  // conditional_over_axis(v, c): target mass of axis state v given
  // conditioning state c; proposal rows are (x*ny + y).
  ConditionConstant constant;
  constant.value = 0.0;
  const int n_axis = proposal.proposed_states();
  for (int x = 0; x < proposal.nx; ++x) {
    for (int y = 0; y < proposal.ny; ++y) {
      const int row = proposal.row_index(x, y);
      const int conditioning = proposal.axis == Axis::X ? y : x;
      const int current = proposal.axis == Axis::X ? x : y;
      for (int v = 0; v < n_axis; ++v) {
        const double target = conditional_over_axis(v, conditioning);
        if (target <= 0.0) continue;
        const double q = proposal.q(row, v);
        if (q == 0.0) {
          constant.infinite = true;
          constant.value = std::numeric_limits<double>::infinity();
          constant.argmax = {v, current, conditioning};
          return constant;
        }
        const double ratio = target / q;
        if (ratio > constant.value) {
          constant.value = ratio;
          constant.argmax = {v, current, conditioning};
        }
      }
    }
  }
  return constant;
}

}  // namespace

ConditionConstant condition_c(const FiniteJointDistribution& joint, const ProposalFamily& q2) {
  if (q2.axis != Axis::X) fail(ErrorCode::AxisMismatch, "condition C applies to the X-axis proposal");
  const ConditionalFamily cond = conditionals(joint);
  return condition_sup(cond.x_given_y, q2);  // x_given_y(v, y) = pi(v | y)
}

ConditionConstant condition_c1(const FiniteJointDistribution& joint, const ProposalFamily& q1) {
  if (q1.axis != Axis::Y) fail(ErrorCode::AxisMismatch, "condition C1 applies to the Y-axis proposal");
  const ConditionalFamily cond = conditionals(joint);
  return condition_sup(cond.y_given_x.transpose(), q1);  // (v, x) = pi(v | x)
}

VerificationReport verify_minorizations(const FiniteJointDistribution& joint, const ProposalFamily* q1,
                                        const ProposalFamily& q2, double r) {
  const ConditionConstant c = condition_c(joint, q2);
  if (c.infinite) fail(ErrorCode::InfiniteConditionConstant, "condition C fails for q2");
  const double inv_c = 1.0 / c.value;
  const ConditionalFamily cond = conditionals(joint);
  const SelectionProbability selection(r);

  VerificationReport report;
  report.claim = "minorizations";
  report.inputs = describe(joint) + ", r=" + fmt(r) + (q1 ? ", with q1" : "");
  report.tolerance = tol::kInequalitySlack;
  report.computed.emplace_back("C", c.value);

  // Q(x'|x,y) >= pi(x'|y) / C.
  const MhStepFamily mh = mh_step(cond, q2, Axis::X);
  double slack_q = std::numeric_limits<double>::infinity();
  for (int x = 0; x < joint.nx; ++x) {
    for (int y = 0; y < joint.ny; ++y) {
      for (int xp = 0; xp < joint.nx; ++xp) {
        slack_q = std::min(slack_q, mh.Q(mh.row_index(x, y), xp) - inv_c * cond.x_given_y(xp, y));
      }
    }
  }
  report.computed.emplace_back("slack_mh_vs_conditional", slack_q);

  // PXM >= PX / C and PRM >= PR / C.
  const auto slack_between = [](const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, double scale) {
    return (lhs - scale * rhs).minCoeff();
  };
  const double slack_xm =
      slack_between(marginal_xm_kernel(joint, q2).P, marginal_x_kernel(joint).P, inv_c);
  const TransitionKernel prm = rc_kernel(joint, q2, selection);
  const double slack_rm = slack_between(prm.P, rg_kernel(joint, selection).P, inv_c);
  report.computed.emplace_back("slack_pxm_vs_px", slack_xm);
  report.computed.emplace_back("slack_prm_vs_pr", slack_rm);

  double worst = std::min({slack_q, slack_xm, slack_rm});

  if (q1 != nullptr) {
    const ConditionConstant c1 = condition_c1(joint, *q1);
    if (c1.infinite) fail(ErrorCode::InfiniteConditionConstant, "condition C1 fails for q1");
    const double inv_c1 = 1.0 / c1.value;
    report.computed.emplace_back("C1", c1.value);

    // P1(y'|x,y) >= pi(y'|x) / C1.
    const MhStepFamily p1 = mh_step(cond, *q1, Axis::Y);
    double slack_p1 = std::numeric_limits<double>::infinity();
    for (int x = 0; x < joint.nx; ++x) {
      for (int y = 0; y < joint.ny; ++y) {
        for (int yp = 0; yp < joint.ny; ++yp) {
          slack_p1 = std::min(slack_p1, p1.Q(p1.row_index(x, y), yp) - inv_c1 * cond.y_given_x(x, yp));
        }
      }
    }
    report.computed.emplace_back("slack_p1_vs_conditional", slack_p1);

    const double slack_dcmm =
        slack_between(dcmm_kernel(joint, *q1, q2).P, dc_kernel(joint, q2).P, inv_c1);
    const double slack_rcmm = slack_between(rcmm_kernel(joint, *q1, q2, selection).P, prm.P, inv_c1);
    report.computed.emplace_back("slack_dcmm_vs_dcm", slack_dcmm);
    report.computed.emplace_back("slack_rcmm_vs_prm", slack_rcmm);
    worst = std::min({worst, slack_p1, slack_dcmm, slack_rcmm});
  }

  report.pass = worst >= -tol::kInequalitySlack;
  report.details = "worst entrywise slack " + fmt(worst);
  return report;
}

std::pair<FiniteJointDistribution, ProposalFamily> build_counterexample() {
  FiniteJointDistribution joint = validate_joint(Eigen::MatrixXd::Constant(2, 2, 0.25));
  ProposalFamily swap = gen_swap_proposal(joint, Axis::X);
  return {std::move(joint), std::move(swap)};
}

VerificationReport verify_counterexample(const std::vector<double>& r_values) {
  const auto [joint, swap] = build_counterexample();

  VerificationReport report;
  report.claim = "counterexample";
  report.inputs = "uniform 2x2 joint, always-move X proposal";
  report.tolerance = tol::kEquality;

  const double rho_dm = rate_of(SamplerKind::Dc, joint, nullptr, &swap, std::nullopt);
  const double rho_dm_radius = l0_spectral_radius(dc_kernel(joint, swap));
  report.computed = {{"rho_dm", rho_dm}, {"rho_dm_spectral_radius", rho_dm_radius}};
  bool pass = std::abs(rho_dm - 1.0) <= 1e-12 && std::abs(rho_dm_radius - 1.0) <= 1e-12;

  for (double r : r_values) {
    const double rho_rm = rate_of(SamplerKind::Rc, joint, nullptr, &swap, r);
    const double expected = std::max(std::abs(1.0 - 2.0 * r), r);
    report.computed.emplace_back("rho_rm[r=" + fmt(r) + "]", rho_rm);
    pass = pass && std::abs(rho_rm - expected) <= tol::kEquality;
  }

  const ConditionConstant c = condition_c(joint, swap);
  report.computed.emplace_back("C_infinite", c.infinite ? 1.0 : 0.0);
  pass = pass && c.infinite;

  report.pass = pass;
  report.details = "periodic DC chain: rate 1, RC rate max{|1-2r|, r}, C infinite";
  return report;
}

VerificationReport verify_norm_power_identities(const FiniteJointDistribution& joint,
                                                const ProposalFamily* q2, int n_max) {
  if (n_max < 1) fail(ErrorCode::DomainError, "n_max must be at least 1");

  VerificationReport report;
  report.claim = "norm-power-identities";
  report.inputs = describe(joint) + ", n_max=" + std::to_string(n_max);
  report.tolerance = tol::kRelativeSequence;

  const double norm_px = l0_operator_norm(marginal_x_kernel(joint));
  const double norm_py = l0_operator_norm(marginal_y_kernel(joint));
  // Independent route to the same rate: eigenvalue modulus of the
  // product-space chain rather than the marginal-chain singular value.
  const TransitionKernel product = restrict_to_support(dg_kernel(joint));
  const double rho_d = l0_spectral_radius(product);
  report.computed = {{"rho_d", rho_d}, {"norm_px", norm_px}, {"norm_py", norm_py}};

  const auto powers = norm_power_sequence(product, n_max);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [n, norm] : powers) {
    const double root = std::pow(norm, 1.0 / (n - 0.5));
    report.computed.emplace_back("root_dg[" + std::to_string(n) + "]", root);
    lo = std::min(lo, root);
    hi = std::max(hi, root);
  }
  const double spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
  report.computed.emplace_back("root_spread_rel", spread);

  bool pass = spread <= tol::kRelativeSequence && std::abs(rho_d - norm_px) <= tol::kEquality &&
              std::abs(norm_px - norm_py) <= tol::kEquality;

  if (q2 != nullptr) {
    const double rho_xm = l0_operator_norm(marginal_xm_kernel(joint, *q2));
    report.computed.emplace_back("rho_xm", rho_xm);
    const auto powers_dm = norm_power_sequence(restrict_to_support(dc_kernel(joint, *q2)), n_max);
    for (const auto& [n, norm] : powers_dm) {
      if (n < 2) continue;
      const double lower = std::pow(norm, 1.0 / (n - 1.0));
      const double upper = std::pow(norm, 1.0 / n);
      report.computed.emplace_back("sandwich_lo[" + std::to_string(n) + "]", lower);
      report.computed.emplace_back("sandwich_hi[" + std::to_string(n) + "]", upper);
      pass = pass && lower <= rho_xm + tol::kEquality && rho_xm <= upper + tol::kEquality;
    }
  }

  report.pass = pass;
  report.details = "roots spread " + fmt(spread);
  return report;
}

VerificationReport verify_maximal_correlation_identity(const FiniteJointDistribution& joint) {
  const double gamma_bar = maximal_correlation(joint);
  const double rho_d = rate_of(SamplerKind::Dg, joint, nullptr, nullptr, std::nullopt);
  const double err = std::abs(gamma_bar * gamma_bar - rho_d);

  VerificationReport report;
  report.claim = "maximal-correlation";
  report.inputs = describe(joint);
  report.computed = {{"gamma_bar", gamma_bar}, {"gamma_bar_sq", gamma_bar * gamma_bar}, {"rho_d", rho_d}};
  report.tolerance = tol::kEquality;
  report.pass = err <= tol::kEquality;
  report.details = "|gamma_bar^2 - rho_d| = " + fmt(err);
  return report;
}

const std::vector<ImplicationRule>& implication_rules() {
  using K = SamplerKind;
  using G = ImplicationGate;
  static const std::vector<ImplicationRule> rules = {
      // Solid arrows, including the transitive closure.
      {K::Dg, K::Rg, G::None},
      {K::Rg, K::Dg, G::None},
      {K::Dc, K::Rc, G::None},
      {K::Rc, K::Dg, G::None},
      {K::Rc, K::Rg, G::None},
      {K::Dc, K::Dg, G::None},
      {K::Dc, K::Rg, G::None},
      {K::Rcmm, K::Dg, G::None},
      {K::Rcmm, K::Rg, G::None},
      // Dashed arrows, valid under a finite condition constant.
      {K::Dg, K::Dc, G::C},
      {K::Rg, K::Rc, G::C},
      {K::Dc, K::Dcmm, G::C1},
      {K::Rc, K::Rcmm, G::C1},
      {K::Dc, K::Rcmm, G::C1},
      {K::Dg, K::Dcmm, G::CAndC1},
      {K::Dg, K::Rcmm, G::CAndC1},
      {K::Rg, K::Dcmm, G::CAndC1},
      {K::Rg, K::Rcmm, G::CAndC1},
      {K::Rcmm, K::Dcmm, G::CAndC1},
  };
  return rules;
}

VerificationReport qualitative_audit(const FiniteJointDistribution& joint, const ProposalFamily* q1,
                                     const ProposalFamily* q2, double r, double geo_threshold) {
  VerificationReport report;
  report.claim = "qualitative-audit";
  report.inputs = describe(joint) + ", r=" + fmt(r);
  report.tolerance = geo_threshold;

  std::map<SamplerKind, double> rates;
  rates[SamplerKind::Dg] = rate_of(SamplerKind::Dg, joint, nullptr, nullptr, std::nullopt);
  rates[SamplerKind::Rg] = rate_of(SamplerKind::Rg, joint, nullptr, nullptr, r);
  if (q2 != nullptr) {
    rates[SamplerKind::Dc] = rate_of(SamplerKind::Dc, joint, nullptr, q2, std::nullopt);
    rates[SamplerKind::Rc] = rate_of(SamplerKind::Rc, joint, nullptr, q2, r);
  }
  if (q1 != nullptr && q2 != nullptr) {
    rates[SamplerKind::Dcmm] = rate_of(SamplerKind::Dcmm, joint, q1, q2, std::nullopt);
    rates[SamplerKind::Rcmm] = rate_of(SamplerKind::Rcmm, joint, q1, q2, r);
  }
  for (const auto& [kind, rate] : rates) {
    report.computed.emplace_back(std::string("rho_") + to_string(kind), rate);
  }

  bool c_finite = false, c1_finite = false;
  if (q2 != nullptr) {
    const ConditionConstant c = condition_c(joint, *q2);
    c_finite = !c.infinite;
    report.computed.emplace_back("C_infinite", c.infinite ? 1.0 : 0.0);
    if (c_finite) report.computed.emplace_back("C", c.value);
  }
  if (q1 != nullptr) {
    const ConditionConstant c1 = condition_c1(joint, *q1);
    c1_finite = !c1.infinite;
    report.computed.emplace_back("C1_infinite", c1.infinite ? 1.0 : 0.0);
    if (c1_finite) report.computed.emplace_back("C1", c1.value);
  }

  const auto geometric = [&](SamplerKind kind) { return rates.at(kind) < geo_threshold; };
  int violations = 0, skipped = 0, checked = 0;
  std::string detail;
  for (const ImplicationRule& rule : implication_rules()) {
    if (!rates.contains(rule.premise) || !rates.contains(rule.conclusion)) continue;
    const bool gate_open = rule.gate == ImplicationGate::None ||
                           (rule.gate == ImplicationGate::C && c_finite) ||
                           (rule.gate == ImplicationGate::C1 && c1_finite) ||
                           (rule.gate == ImplicationGate::CAndC1 && c_finite && c1_finite);
    if (!gate_open) {
      ++skipped;
      continue;
    }
    ++checked;
    if (geometric(rule.premise) && !geometric(rule.conclusion)) {
      ++violations;
      detail += std::string(" ") + to_string(rule.premise) + "->" + to_string(rule.conclusion);
    }
  }

  report.computed.emplace_back("arrows_checked", checked);
  report.computed.emplace_back("arrows_skipped", skipped);
  report.computed.emplace_back("violations", violations);
  report.pass = violations == 0;
  report.details = violations == 0 ? "no implication arrow violated" : "violated arrows:" + detail;
  if (skipped > 0) report.details += "; " + std::to_string(skipped) + " dashed arrows skipped (infinite gate)";
  return report;
}

VerificationReport selection_robustness(const FiniteJointDistribution& joint, const ProposalFamily* q2,
                                        const std::vector<double>& r_values, double geo_threshold) {
  if (r_values.empty()) fail(ErrorCode::DomainError, "need at least one selection probability");

  VerificationReport report;
  report.claim = "selection-robustness";
  report.inputs = describe(joint) + ", " + std::to_string(r_values.size()) + " r values";
  report.tolerance = geo_threshold;

  bool pass = true;
  std::optional<bool> rg_class, rc_class;
  for (double r : r_values) {
    const double rho_rg = rate_of(SamplerKind::Rg, joint, nullptr, nullptr, r);
    report.computed.emplace_back("rho_rg[r=" + fmt(r) + "]", rho_rg);
    const bool geo = rho_rg < geo_threshold;
    if (!rg_class) rg_class = geo;
    pass = pass && *rg_class == geo;

    if (q2 != nullptr) {
      const double rho_rc = rate_of(SamplerKind::Rc, joint, nullptr, q2, r);
      report.computed.emplace_back("rho_rc[r=" + fmt(r) + "]", rho_rc);
      const bool geo_rc = rho_rc < geo_threshold;
      if (!rc_class) rc_class = geo_rc;
      pass = pass && *rc_class == geo_rc;
    }
  }
  report.pass = pass;
  report.details = pass ? "classification constant across selection probabilities"
                        : "classification changed with the selection probability";
  return report;
}

}  // namespace gibbs_spectra
