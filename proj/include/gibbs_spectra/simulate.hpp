#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gibbs_spectra/kernels.hpp"

namespace gibbs_spectra {

struct DecayTrace {
  std::vector<std::pair<int, double>> chi_square;  // (n, chi-square distance)
  std::vector<std::pair<int, double>> tv;          // (n, total-variation distance)
  std::string initial;
  double fitted_rate = 0.0;
  // Set when the start's component on the dominant eigenspace is below 1e-6;
  // the fit may then track a sub-dominant mode.
  bool degenerate_start = false;
};

struct GaussianExperimentResult {
  double gamma = 0.0;
  std::int64_t n_steps = 0;
  double lag1_autocorr_x = 0.0;
  double theory_rho_d = 0.0;
  double theory_rho_r = 0.0;
};

// Exact left-multiplication iterates mu0, mu0 P, ..., mu0 P^n.
std::vector<Eigen::VectorXd> iterate_distribution(const TransitionKernel& kernel,
                                                  const Eigen::VectorXd& mu0, int n);

// sqrt( sum_s pi(s) (mu(s)/pi(s) - 1)^2 ).
double chi_square_distance(const Eigen::VectorXd& mu, const Eigen::VectorXd& pi);

// Half L1 distance.
double tv_distance(const Eigen::VectorXd& mu, const Eigen::VectorXd& pi);

// Slope of the least-squares line through (n, log distance) on n1 <= n <= n2,
// exponentiated.  A zero distance in the window means the chain hit
// stationarity exactly; the fitted rate is then 0.
double fit_geometric_rate(const std::vector<std::pair<int, double>>& distances,
                          std::pair<int, int> window);

// Component of mu0's relative density on the eigenspace of the dominant
// eigenvalue modulus; reversible kernels only.
double dominant_component(const TransitionKernel& kernel, const Eigen::VectorXd& mu0);

// Iterates mu0 for n steps, records chi-square and TV distances, and fits
// the geometric rate on the window.
DecayTrace decay_trace(const TransitionKernel& kernel, const Eigen::VectorXd& mu0, int n,
                       std::pair<int, int> window);

// Simulates the chain by inverse-CDF draws from each row; returns the
// length-(n+1) path starting at s0.
std::vector<int> sample_chain(const TransitionKernel& kernel, int s0, int n, std::uint64_t seed);

// Two-component Gibbs sampler for a standard bivariate Gaussian with
// correlation gamma, alternately drawing Y | X = x ~ N(gamma x, 1 - gamma^2)
// and X | Y = y ~ N(gamma y, 1 - gamma^2).  Returns the estimated lag-1
// autocorrelation of the X path next to the closed-form rates.
GaussianExperimentResult gaussian_experiment(double gamma, double r, std::int64_t n_steps,
                                             std::uint64_t seed);

}  // namespace gibbs_spectra
