#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gibbs_spectra/kernels.hpp"

namespace gibbs_spectra {

enum class SamplerKind { Dg, Rg, Dc, Rc, Dcmm, Rcmm };

const char* to_string(SamplerKind kind);
SamplerKind sampler_kind_from_string(const std::string& name);

enum class RateMethod { SlemReversible, MarginalChain, SpectralRadius, NormPowerLimit };

const char* to_string(RateMethod method);

struct SpectralReport {
  double rate = 0.0;
  RateMethod method = RateMethod::SlemReversible;
  std::vector<std::pair<int, double>> norm_powers;  // (n, ||P^n|| on mean-zero functions)
  std::optional<double> maximal_correlation;
};

// Operator norm of the kernel restricted to mean-zero square-integrable
// functions: with u = sqrt(stationary), the largest singular value of
// diag(u) P diag(u)^-1 - u u^T.
double l0_operator_norm(const TransitionKernel& kernel);

// Largest eigenvalue modulus of the same deflated matrix; agrees with the
// operator norm for reversible kernels.
double l0_spectral_radius(const TransitionKernel& kernel);

// (n, ||P^n||) for n = 1..n_max, computed on explicit powers of the
// deflated matrix.
std::vector<std::pair<int, double>> norm_power_sequence(const TransitionKernel& kernel, int n_max);

// Operator-norm estimate ||P^n||^(1/n); converges to the spectral radius and
// carries the NormPowerLimit method tag.
SpectralReport rate_via_norm_powers(const TransitionKernel& kernel, int n);

// Second-largest singular value of B(x,y) = p(x,y) / sqrt(px(x) py(y)); the
// largest must be 1.
double maximal_correlation(const FiniteJointDistribution& joint);

struct RateInputs {
  const ProposalFamily* q1 = nullptr;  // Y-axis proposal, needed by Dcmm/Rcmm
  const ProposalFamily* q2 = nullptr;  // X-axis proposal, needed by Dc/Rc/Dcmm/Rcmm
  std::optional<double> r;             // selection probability, needed by random-scan kinds
  int n_powers = 0;                    // include ||P^n|| for n = 1..n_powers when positive
  bool restrict_support = false;       // drop zero-mass product states before taking norms
};

// Convergence rate of the requested sampler.  Deterministic-scan Gibbs/CMH
// rates come from their reversible marginal chains, random-scan rates from
// the reversible product-space norm.  The two-MH deterministic-scan chain
// has no reversible marginal; its rate is the spectral radius, a
// finite-state evaluation flagged by the method tag.
SpectralReport convergence_rate(SamplerKind kind, const FiniteJointDistribution& joint,
                                const RateInputs& inputs = {});

}  // namespace gibbs_spectra
