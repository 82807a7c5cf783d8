#include "gibbs_spectra/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "gibbs_spectra/tolerances.hpp"

namespace gibbs_spectra {

namespace {

// Similarity transform to l2 coordinates with the fixed direction sqrt(pi)
// projected out: diag(u) P diag(u)^-1 - u u^T.  Its singular values are the
// kernel's singular values on mean-zero functions; its eigenvalues are the
// kernel's eigenvalues there plus one zero.
Eigen::MatrixXd deflated_matrix(const TransitionKernel& kernel) {
  const int n = kernel.size();
  if (kernel.stationary.minCoeff() <= 0.0) {
    fail(ErrorCode::ZeroStationaryMass, "operator norms need a strictly positive stationary vector");
  }
  const Eigen::VectorXd u = kernel.stationary.cwiseSqrt();
  const Eigen::VectorXd unit = u / u.norm();
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = u(i) * kernel.P(i, j) / u(j);
  }
  A.noalias() -= unit * unit.transpose();
  return A;
}

double sigma_max(const Eigen::MatrixXd& m) {
  if (m.rows() <= 200) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

// Stochastic kernels have norm at most 1; anything meaningfully above that
// is a solver failure, tiny excess is rounding.
double clamp_rate(double value) {
  if (!(value >= -1e-9 && value <= 1.0 + 1e-9)) {
    fail(ErrorCode::EigenSolverFailure, "computed rate " + std::to_string(value) + " outside [0,1]");
  }
  return std::min(std::max(value, 0.0), 1.0);
}

}  // namespace

double l0_operator_norm(const TransitionKernel& kernel) {
  return clamp_rate(sigma_max(deflated_matrix(kernel)));
}

double l0_spectral_radius(const TransitionKernel& kernel) {
  const Eigen::MatrixXd m = deflated_matrix(kernel);
  const double asymmetry = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry <= 1e-13) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) fail(ErrorCode::EigenSolverFailure, "symmetric eigensolver diverged");
    return clamp_rate(solver.eigenvalues().cwiseAbs().maxCoeff());
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success) fail(ErrorCode::EigenSolverFailure, "eigensolver diverged");
  return clamp_rate(solver.eigenvalues().cwiseAbs().maxCoeff());
}

std::vector<std::pair<int, double>> norm_power_sequence(const TransitionKernel& kernel, int n_max) {
  if (n_max < 1) fail(ErrorCode::DomainError, "n_max must be at least 1");
  const Eigen::MatrixXd m = deflated_matrix(kernel);
  // (diag(u) P diag(u)^-1 - u u^T)^n telescopes to the deflation of P^n, so
  // powering the deflated matrix directly gives ||P^n||.
  Eigen::MatrixXd power = m;
  std::vector<std::pair<int, double>> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    out.emplace_back(n, clamp_rate(sigma_max(power)));
    if (n < n_max) power = (power * m).eval();
  }
  return out;
}

SpectralReport rate_via_norm_powers(const TransitionKernel& kernel, int n) {
  if (n < 1) fail(ErrorCode::DomainError, "power must be at least 1");
  const auto powers = norm_power_sequence(kernel, n);
  SpectralReport report;
  report.rate = clamp_rate(std::pow(powers.back().second, 1.0 / n));
  report.method = RateMethod::NormPowerLimit;
  report.norm_powers = powers;
  return report;
}

double maximal_correlation(const FiniteJointDistribution& joint) {
  const Eigen::VectorXd px = joint.marginal_x();
  const Eigen::VectorXd py = joint.marginal_y();
  if (px.minCoeff() <= 0.0 || py.minCoeff() <= 0.0) {
    fail(ErrorCode::ZeroMarginal, "maximal correlation needs strictly positive marginals");
  }
  Eigen::MatrixXd b(joint.nx, joint.ny);
  for (int x = 0; x < joint.nx; ++x) {
    for (int y = 0; y < joint.ny; ++y) b(x, y) = joint.p(x, y) / std::sqrt(px(x) * py(y));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  const auto& sigma = svd.singularValues();
  if (std::abs(sigma(0) - 1.0) > tol::kEquality) {
    fail(ErrorCode::TopSingularValueNotOne,
         "leading singular value " + std::to_string(sigma(0)) + " is not 1");
  }
  return clamp_rate(sigma(1));
}

const char* to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::Dg: return "dg";
    case SamplerKind::Rg: return "rg";
    case SamplerKind::Dc: return "dc";
    case SamplerKind::Rc: return "rc";
    case SamplerKind::Dcmm: return "dcmm";
    case SamplerKind::Rcmm: return "rcmm";
  }
  return "unknown";
}

SamplerKind sampler_kind_from_string(const std::string& name) {
  if (name == "dg") return SamplerKind::Dg;
  if (name == "rg") return SamplerKind::Rg;
  if (name == "dc") return SamplerKind::Dc;
  if (name == "rc") return SamplerKind::Rc;
  if (name == "dcmm") return SamplerKind::Dcmm;
  if (name == "rcmm") return SamplerKind::Rcmm;
  fail(ErrorCode::DomainError, "unknown sampler kind '" + name + "'");
}

const char* to_string(RateMethod method) {
  switch (method) {
    case RateMethod::SlemReversible: return "slem-reversible";
    case RateMethod::MarginalChain: return "marginal-chain";
    case RateMethod::SpectralRadius: return "spectral-radius";
    case RateMethod::NormPowerLimit: return "norm-power-limit";
  }
  return "unknown";
}

namespace {

SelectionProbability require_r(const RateInputs& inputs, SamplerKind kind) {
  if (!inputs.r) fail(ErrorCode::DomainError, std::string(to_string(kind)) + " needs a selection probability");
  return SelectionProbability(*inputs.r);
}

const ProposalFamily& require_q(const ProposalFamily* q, Axis axis, SamplerKind kind) {
  if (q == nullptr) {
    fail(ErrorCode::DomainError,
         std::string(to_string(kind)) + " needs a proposal over " + to_string(axis));
  }
  if (q->axis != axis) {
    fail(ErrorCode::AxisMismatch, std::string("proposal for ") + to_string(kind) + " must update " +
                                      to_string(axis));
  }
  return *q;
}

}  // namespace

SpectralReport convergence_rate(SamplerKind kind, const FiniteJointDistribution& joint,
                                const RateInputs& inputs) {
  const auto maybe_restrict = [&](TransitionKernel kernel) {
    return inputs.restrict_support ? restrict_to_support(kernel) : kernel;
  };

  SpectralReport report;
  TransitionKernel product = [&] {
    switch (kind) {
      case SamplerKind::Dg:
        report.rate = l0_operator_norm(maybe_restrict(marginal_x_kernel(joint)));
        report.method = RateMethod::MarginalChain;
        return dg_kernel(joint);
      case SamplerKind::Dc: {
        const auto& q2 = require_q(inputs.q2, Axis::X, kind);
        report.rate = l0_operator_norm(maybe_restrict(marginal_xm_kernel(joint, q2)));
        report.method = RateMethod::MarginalChain;
        return dc_kernel(joint, q2);
      }
      case SamplerKind::Rg: {
        auto kernel = rg_kernel(joint, require_r(inputs, kind));
        report.rate = l0_operator_norm(maybe_restrict(kernel));
        report.method = RateMethod::SlemReversible;
        return kernel;
      }
      case SamplerKind::Rc: {
        auto kernel = rc_kernel(joint, require_q(inputs.q2, Axis::X, kind), require_r(inputs, kind));
        report.rate = l0_operator_norm(maybe_restrict(kernel));
        report.method = RateMethod::SlemReversible;
        return kernel;
      }
      case SamplerKind::Rcmm: {
        auto kernel = rcmm_kernel(joint, require_q(inputs.q1, Axis::Y, kind),
                                  require_q(inputs.q2, Axis::X, kind), require_r(inputs, kind));
        report.rate = l0_operator_norm(maybe_restrict(kernel));
        report.method = RateMethod::SlemReversible;
        return kernel;
      }
      case SamplerKind::Dcmm: {
        auto kernel =
            dcmm_kernel(joint, require_q(inputs.q1, Axis::Y, kind), require_q(inputs.q2, Axis::X, kind));
        report.rate = l0_spectral_radius(maybe_restrict(kernel));
        report.method = RateMethod::SpectralRadius;
        return kernel;
      }
    }
    fail(ErrorCode::DomainError, "unhandled sampler kind");
  }();

  if (inputs.n_powers > 0) {
    report.norm_powers = norm_power_sequence(maybe_restrict(std::move(product)), inputs.n_powers);
  }
  report.maximal_correlation = maximal_correlation(joint);
  return report;
}

}  // namespace gibbs_spectra
