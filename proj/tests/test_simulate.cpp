#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gibbs_spectra/simulate.hpp"
#include "gibbs_spectra/spectral.hpp"
#include "gibbs_spectra/theory.hpp"

using namespace gibbs_spectra;
using fixtures::check_error;

namespace {

Eigen::VectorXd point_mass(int n, int s) {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
  mu(s) = 1.0;
  return mu;
}

}  // namespace

TEST_CASE("iterate_distribution: stationarity and n = 0") {
  const auto rg = rg_kernel(fixtures::correlated_2x2(), SelectionProbability(0.5));
  const auto from_pi = iterate_distribution(rg, rg.stationary, 6);
  for (const auto& mu : from_pi) {
    CHECK((mu - rg.stationary).cwiseAbs().maxCoeff() <= 1e-13);
  }
  CHECK(iterate_distribution(rg, rg.stationary, 0).size() == 1);
}

TEST_CASE("iterate_distribution: one step of the counterexample rc chain") {
  const auto [joint, swap] = build_counterexample();
  const auto rc = rc_kernel(joint, swap, SelectionProbability(0.5));
  const auto iterates = iterate_distribution(rc, point_mass(4, rc.states.encode(0, 0)), 1);
  const Eigen::VectorXd& mu = iterates[1];
  CHECK(mu(rc.states.encode(1, 0)) == doctest::Approx(0.5));
  CHECK(mu(rc.states.encode(0, 0)) == doctest::Approx(0.25));
  CHECK(mu(rc.states.encode(0, 1)) == doctest::Approx(0.25));
  CHECK(mu(rc.states.encode(1, 1)) == 0.0);
}

TEST_CASE("iterate_distribution rejects bad starts") {
  const auto rg = rg_kernel(fixtures::correlated_2x2(), SelectionProbability(0.5));
  check_error(ErrorCode::DimensionMismatch,
              [&] { iterate_distribution(rg, Eigen::VectorXd::Constant(3, 1.0 / 3), 2); });
  check_error(ErrorCode::DomainError,
              [&] { iterate_distribution(rg, Eigen::VectorXd::Constant(4, 0.3), 2); });
}

TEST_CASE("chi-square distance values") {
  const Eigen::VectorXd uniform4 = Eigen::VectorXd::Constant(4, 0.25);
  CHECK(chi_square_distance(uniform4, uniform4) == 0.0);
  CHECK(chi_square_distance(point_mass(4, 2), uniform4) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

  Eigen::VectorXd mu(4);
  mu << 0.3, 0.3, 0.2, 0.2;
  CHECK(chi_square_distance(mu, uniform4) > 0.0);
  check_error(ErrorCode::ZeroStationaryMass, [&] {
    Eigen::VectorXd zero_pi(4);
    zero_pi << 0.5, 0.5, 0.0, 0.0;
    chi_square_distance(mu, zero_pi);
  });
}

TEST_CASE("fit_geometric_rate recovers an exact geometric sequence") {
  std::vector<std::pair<int, double>> distances;
  for (int n = 0; n <= 40; ++n) distances.emplace_back(n, 3.7 * std::pow(0.7, n));
  CHECK(fit_geometric_rate(distances, {10, 30}) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(fit_geometric_rate({{1, 0.5}, {2, 0.0}, {3, 0.1}}, {1, 3}) == 0.0);
  check_error(ErrorCode::DomainError, [&] { fit_geometric_rate(distances, {30, 10}); });
}

TEST_CASE("decay of the example rg chain fits the computed rate") {
  const auto joint = fixtures::correlated_2x2();
  const auto rg = rg_kernel(joint, SelectionProbability(0.5));
  const auto trace = decay_trace(rg, point_mass(4, 0), 30, {10, 30});
  CHECK_FALSE(trace.degenerate_start);
  CHECK(trace.fitted_rate == doctest::Approx(0.8).epsilon(0.01));
}

TEST_CASE("decay of the example dg chain fits the marginal rate") {
  const auto joint = fixtures::correlated_2x2();
  const auto dg = dg_kernel(joint);
  const auto trace = decay_trace(dg, point_mass(4, 0), 30, {10, 30});
  CHECK(trace.fitted_rate == doctest::Approx(0.36).epsilon(0.01));
}

TEST_CASE("chi-square decay of a non-negative definite chain is monotone") {
  const auto joint = gen_dirichlet_joint(3, 3, 1.0, 71);
  const auto rg = rg_kernel(joint, SelectionProbability(0.5));
  const auto trace = decay_trace(rg, point_mass(9, 4), 25, {10, 25});
  for (std::size_t i = 1; i < trace.chi_square.size(); ++i) {
    CHECK(trace.chi_square[i].second <= trace.chi_square[i - 1].second + 1e-12);
  }
}

TEST_CASE("chi-square and tv fitted rates agree on reversible instances") {
  for (std::uint64_t seed : {81ULL, 82ULL}) {
    const auto joint = gen_dirichlet_joint(3, 3, 1.0, seed);
    const auto rg = rg_kernel(joint, SelectionProbability(0.5));
    const auto trace = decay_trace(rg, point_mass(9, 0), 30, {10, 30});
    const double tv_rate = fit_geometric_rate(trace.tv, {10, 30});
    CHECK(std::abs(tv_rate - trace.fitted_rate) / trace.fitted_rate <= 0.02);
  }
}

TEST_CASE("dominant component flags a start orthogonal to the top mode") {
  const auto joint = fixtures::correlated_2x2();
  const auto px = marginal_x_kernel(joint);
  // Top eigenfunction of the 2-state marginal chain is odd; the uniform
  // start has no overlap with it.
  const Eigen::VectorXd uniform2 = Eigen::VectorXd::Constant(2, 0.5);
  CHECK(dominant_component(px, uniform2) <= 1e-12);
  CHECK(dominant_component(px, point_mass(2, 0)) > 1e-3);
}

TEST_CASE("sample_chain determinism and support pattern") {
  const auto joint = fixtures::correlated_2x2();
  const auto rg = rg_kernel(joint, SelectionProbability(0.5));
  const auto path = sample_chain(rg, 0, 500, 13);
  CHECK(path == sample_chain(rg, 0, 500, 13));
  CHECK(path.size() == 501);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto [x0, y0] = rg.states.decode(path[i - 1]);
    const auto [x1, y1] = rg.states.decode(path[i]);
    CHECK((x0 == x1 || y0 == y1));
  }
}

TEST_CASE("sample_chain occupation frequencies approach pi") {
  const auto joint = fixtures::correlated_2x2();
  const auto rg = rg_kernel(joint, SelectionProbability(0.5));
  const int steps = 1000000;
  const auto path = sample_chain(rg, 0, steps, 2024);
  Eigen::VectorXd frequency = Eigen::VectorXd::Zero(4);
  for (std::size_t i = 1; i < path.size(); ++i) frequency(path[i]) += 1.0;
  frequency /= static_cast<double>(steps);
  CHECK((frequency - rg.stationary).cwiseAbs().maxCoeff() <= 0.005);
}

TEST_CASE("gaussian experiment theory fields") {
  const auto result = gaussian_experiment(0.9, 0.5, 10000, 1);
  CHECK(result.theory_rho_d == doctest::Approx(0.81).epsilon(1e-15));
  CHECK(result.theory_rho_r == doctest::Approx(0.95).epsilon(1e-12));
  check_error(ErrorCode::DomainError, [] { gaussian_experiment(1.0, 0.5, 10000, 1); });
  check_error(ErrorCode::DomainError, [] { gaussian_experiment(0.5, 0.5, 100, 1); });
}

TEST_CASE("gaussian experiment lag-1 autocorrelation tracks gamma^2") {
  const auto independent = gaussian_experiment(0.0, 0.5, 200000, 7);
  CHECK(std::abs(independent.lag1_autocorr_x) <= 0.02);

  const auto correlated = gaussian_experiment(0.5, 0.5, 1000000, 7);
  CHECK(std::abs(correlated.lag1_autocorr_x - 0.25) <= 0.02);
}
