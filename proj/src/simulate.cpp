#include "gibbs_spectra/simulate.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "gibbs_spectra/rng.hpp"
#include "gibbs_spectra/spectral.hpp"
#include "gibbs_spectra/theory.hpp"
#include "gibbs_spectra/tolerances.hpp"

namespace gibbs_spectra {

std::vector<Eigen::VectorXd> iterate_distribution(const TransitionKernel& kernel,
                                                  const Eigen::VectorXd& mu0, int n) {
  if (mu0.size() != kernel.size()) {
    fail(ErrorCode::DimensionMismatch, "initial distribution must match the state space");
  }
  if (n < 0) fail(ErrorCode::DomainError, "step count must be nonnegative");
  if (std::abs(mu0.sum() - 1.0) > tol::kInputDrift || mu0.minCoeff() < 0.0) {
    fail(ErrorCode::DomainError, "initial distribution must be a probability vector");
  }
  std::vector<Eigen::VectorXd> iterates;
  iterates.reserve(static_cast<std::size_t>(n) + 1);
  iterates.push_back(mu0);
  for (int step = 0; step < n; ++step) {
    iterates.emplace_back(kernel.P.transpose() * iterates.back());
  }
  return iterates;
}

double chi_square_distance(const Eigen::VectorXd& mu, const Eigen::VectorXd& pi) {
  if (mu.size() != pi.size()) fail(ErrorCode::DimensionMismatch, "distribution sizes differ");
  if (pi.minCoeff() <= 0.0) {
    fail(ErrorCode::ZeroStationaryMass, "chi-square distance needs a strictly positive reference");
  }
  double sum = 0.0;
  for (Eigen::Index s = 0; s < mu.size(); ++s) {
    const double rel = mu(s) / pi(s) - 1.0;
    sum += pi(s) * rel * rel;
  }
  return std::sqrt(sum);
}

double tv_distance(const Eigen::VectorXd& mu, const Eigen::VectorXd& pi) {
  if (mu.size() != pi.size()) fail(ErrorCode::DimensionMismatch, "distribution sizes differ");
  return 0.5 * (mu - pi).cwiseAbs().sum();
}

double fit_geometric_rate(const std::vector<std::pair<int, double>>& distances,
                          std::pair<int, int> window) {
  const auto [n1, n2] = window;
  if (!(n2 > n1 && n1 >= 1)) fail(ErrorCode::DomainError, "window must satisfy n2 > n1 >= 1");
  double sum_n = 0.0, sum_l = 0.0, sum_nn = 0.0, sum_nl = 0.0;
  int count = 0;
  for (const auto& [n, d] : distances) {
    if (n < n1 || n > n2) continue;
    if (d <= 0.0) return 0.0;  // hit stationarity exactly inside the window
    const double logd = std::log(d);
    sum_n += n;
    sum_l += logd;
    sum_nn += static_cast<double>(n) * n;
    sum_nl += n * logd;
    ++count;
  }
  if (count < 2) fail(ErrorCode::DomainError, "window covers fewer than two distances");
  const double slope = (count * sum_nl - sum_n * sum_l) / (count * sum_nn - sum_n * sum_n);
  return std::exp(slope);
}

double dominant_component(const TransitionKernel& kernel, const Eigen::VectorXd& mu0) {
  if (!kernel.reversible) fail(ErrorCode::DomainError, "dominant component needs a reversible kernel");
  if (mu0.size() != kernel.size()) fail(ErrorCode::DimensionMismatch, "distribution size mismatch");
  if (kernel.stationary.minCoeff() <= 0.0) {
    fail(ErrorCode::ZeroStationaryMass, "dominant component needs a strictly positive stationary vector");
  }
  const int n = kernel.size();
  const Eigen::VectorXd u = kernel.stationary.cwiseSqrt();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = u(i) * kernel.P(i, j) / u(j);
  }
  // Symmetrize away the rounding residue of detailed balance, then project
  // out the fixed direction so the spectrum left is the mean-zero one.
  const Eigen::VectorXd unit = u / u.norm();
  Eigen::MatrixXd deflated = 0.5 * (a + a.transpose());
  deflated.noalias() -= unit * unit.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(deflated);
  if (solver.info() != Eigen::Success) fail(ErrorCode::EigenSolverFailure, "eigensolver diverged");

  const double rho = solver.eigenvalues().cwiseAbs().maxCoeff();
  // l2 coordinates of the relative density mu0/pi - 1; orthogonal to unit,
  // so the deflation direction contributes nothing.
  Eigen::VectorXd density(n);
  for (int s = 0; s < n; ++s) density(s) = mu0(s) / kernel.stationary(s) - 1.0;
  const Eigen::VectorXd coords = u.asDiagonal() * density;
  double mass = 0.0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(solver.eigenvalues()(i)) < rho - 1e-12) continue;
    const double c = solver.eigenvectors().col(i).dot(coords);
    mass += c * c;
  }
  return std::sqrt(mass);
}

DecayTrace decay_trace(const TransitionKernel& kernel, const Eigen::VectorXd& mu0, int n,
                       std::pair<int, int> window) {
  if (mu0.size() != kernel.size()) {
    fail(ErrorCode::DimensionMismatch, "initial distribution must match the state space");
  }
  if (n < 0) fail(ErrorCode::DomainError, "step count must be nonnegative");
  if (std::abs(mu0.sum() - 1.0) > tol::kInputDrift || mu0.minCoeff() < 0.0) {
    fail(ErrorCode::DomainError, "initial distribution must be a probability vector");
  }
  if (kernel.stationary.minCoeff() <= 0.0) {
    fail(ErrorCode::ZeroStationaryMass, "decay distances need a strictly positive stationary vector");
  }

  // Propagate the signed deviation mu_n - pi rather than mu_n itself: the
  // matvec roundoff then scales with the deviation, keeping log-linearity
  // intact long after the distances drop below the absolute noise floor of
  // full-distribution iteration.  The exact deviation has zero total mass,
  // so the non-contracting component along pi is re-projected out after
  // each step before roundoff can accumulate there.
  DecayTrace trace;
  trace.chi_square.reserve(static_cast<std::size_t>(n) + 1);
  trace.tv.reserve(static_cast<std::size_t>(n) + 1);
  Eigen::VectorXd deviation = mu0 - kernel.stationary;
  deviation -= deviation.sum() * kernel.stationary;
  for (int step = 0; step <= n; ++step) {
    double chi2 = 0.0;
    for (int s = 0; s < kernel.size(); ++s) chi2 += deviation(s) * deviation(s) / kernel.stationary(s);
    trace.chi_square.emplace_back(step, std::sqrt(chi2));
    trace.tv.emplace_back(step, 0.5 * deviation.cwiseAbs().sum());
    if (step < n) {
      deviation = (kernel.P.transpose() * deviation).eval();
      deviation -= deviation.sum() * kernel.stationary;
    }
  }
  trace.fitted_rate = fit_geometric_rate(trace.chi_square, window);
  if (kernel.reversible) trace.degenerate_start = dominant_component(kernel, mu0) < 1e-6;
  return trace;
}

std::vector<int> sample_chain(const TransitionKernel& kernel, int s0, int n, std::uint64_t seed) {
  if (s0 < 0 || s0 >= kernel.size()) fail(ErrorCode::DimensionMismatch, "start state out of range");
  if (n < 0) fail(ErrorCode::DomainError, "step count must be nonnegative");
  Rng rng(seed);
  std::vector<int> path;
  path.reserve(static_cast<std::size_t>(n) + 1);
  path.push_back(s0);
  for (int step = 0; step < n; ++step) {
    const int s = path.back();
    const double u = rng.uniform01();
    double cumulative = 0.0;
    int next = kernel.size() - 1;
    for (int t = 0; t < kernel.size(); ++t) {
      cumulative += kernel.P(s, t);
      if (u < cumulative) {
        next = t;
        break;
      }
    }
    path.push_back(next);
  }
  return path;
}

GaussianExperimentResult gaussian_experiment(double gamma, double r, std::int64_t n_steps,
                                             std::uint64_t seed) {
  if (!(std::abs(gamma) < 1.0)) fail(ErrorCode::DomainError, "correlation must satisfy |gamma| < 1");
  if (n_steps < 10000) fail(ErrorCode::DomainError, "need at least 10^4 steps");
  const double theory_rho_r = theorem1_rhs(gamma * gamma, r);

  Rng rng(seed);
  const double conditional_sd = std::sqrt(1.0 - gamma * gamma);
  std::vector<double> xs(static_cast<std::size_t>(n_steps));
  double x = 0.0;
  for (auto& value : xs) {
    const double y = gamma * x + conditional_sd * rng.normal();
    x = gamma * y + conditional_sd * rng.normal();
    value = x;
  }

  double mean = 0.0;
  for (double v : xs) mean += v;
  mean /= static_cast<double>(xs.size());
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double centered = xs[i] - mean;
    var += centered * centered;
    if (i + 1 < xs.size()) cov += centered * (xs[i + 1] - mean);
  }

  GaussianExperimentResult result;
  result.gamma = gamma;
  result.n_steps = n_steps;
  result.lag1_autocorr_x = cov / var;
  result.theory_rho_d = gamma * gamma;
  result.theory_rho_r = theory_rho_r;
  return result;
}

}  // namespace gibbs_spectra
