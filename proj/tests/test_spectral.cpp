#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gibbs_spectra/spectral.hpp"
#include "gibbs_spectra/theory.hpp"
#include "oracle.hpp"

using namespace gibbs_spectra;
using fixtures::check_error;

namespace {

TransitionKernel identity_kernel(int n) {
  return make_kernel(StateSpace::single(Axis::X, n), Eigen::MatrixXd::Identity(n, n),
                     Eigen::VectorXd::Constant(n, 1.0 / n), true);
}

TransitionKernel resampling_kernel(const Eigen::VectorXd& pi) {
  const int n = static_cast<int>(pi.size());
  Eigen::MatrixXd p(n, n);
  p.rowwise() = pi.transpose();
  return make_kernel(StateSpace::single(Axis::X, n), p, pi, true);
}

}  // namespace

TEST_CASE("operator norm: identity and resampling endpoints") {
  CHECK(l0_operator_norm(identity_kernel(2)) == doctest::Approx(1.0).epsilon(1e-14));

  Eigen::VectorXd pi(3);
  pi << 0.2, 0.3, 0.5;
  CHECK(l0_operator_norm(resampling_kernel(pi)) <= 1e-14);
}

TEST_CASE("operator norm of the example marginal chain is 0.36") {
  const auto px = marginal_x_kernel(fixtures::correlated_2x2());
  CHECK(l0_operator_norm(px) == doctest::Approx(0.36).epsilon(1e-13));
}

TEST_CASE("operator norm requires positive stationary mass") {
  const auto rg = rg_kernel(fixtures::diagonal_2x2(), SelectionProbability(0.5));
  check_error(ErrorCode::ZeroStationaryMass, [&] { l0_operator_norm(rg); });
  CHECK(l0_operator_norm(restrict_to_support(rg)) == doctest::Approx(1.0));
}

TEST_CASE("spectral radius: endpoints and the periodic counterexample") {
  Eigen::VectorXd pi(4);
  pi << 0.1, 0.2, 0.3, 0.4;
  CHECK(l0_spectral_radius(resampling_kernel(pi)) <= 1e-14);

  const auto [joint, swap] = build_counterexample();
  CHECK(l0_spectral_radius(dc_kernel(joint, swap)) == doctest::Approx(1.0).epsilon(1e-14));

  // Mean-zero eigenvalues of the mixed counterexample chain: 1-2r, r, -r.
  for (double r : {0.25, 0.5}) {
    const auto rc = rc_kernel(joint, swap, SelectionProbability(r));
    const double expected = std::max(std::abs(1.0 - 2.0 * r), r);
    CHECK(l0_spectral_radius(rc) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("norm powers: independent joint collapses to zero") {
  const auto dg = dg_kernel(fixtures::product_2x3());
  for (const auto& [n, norm] : norm_power_sequence(dg, 3)) CHECK(norm <= 1e-13);
}

TEST_CASE("norm powers: reversible chains obey the self-adjoint power law") {
  const auto joint = gen_dirichlet_joint(3, 3, 1.0, 6);
  const auto rg = rg_kernel(joint, SelectionProbability(0.5));
  const double base = l0_operator_norm(rg);
  for (const auto& [n, norm] : norm_power_sequence(rg, 5)) {
    CHECK(norm == doctest::Approx(std::pow(base, n)).epsilon(1e-10));
  }
}

TEST_CASE("norm powers of the example dg follow rho^(n - 1/2)") {
  const auto dg = dg_kernel(fixtures::correlated_2x2());
  for (const auto& [n, norm] : norm_power_sequence(dg, 4)) {
    CHECK(norm == doctest::Approx(std::pow(0.36, n - 0.5)).epsilon(1e-12));
  }
}

TEST_CASE("norm powers are submultiplicative") {
  const auto joint = gen_dirichlet_joint(4, 4, 1.0, 12);
  const auto dc = dc_kernel(joint, gen_independence_proposal(joint, Axis::X));
  const auto powers = norm_power_sequence(dc, 6);
  for (std::size_t i = 0; i < powers.size(); ++i) {
    for (std::size_t j = 0; i + j + 1 < powers.size(); ++j) {
      CHECK(powers[i + j + 1].second <= powers[i].second * powers[j].second + 1e-12);
    }
  }
}

TEST_CASE("maximal correlation endpoints and hand value") {
  CHECK(maximal_correlation(fixtures::product_2x3()) <= 1e-13);
  CHECK(maximal_correlation(fixtures::diagonal_2x2()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(maximal_correlation(fixtures::correlated_2x2()) == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("maximal correlation agrees with the Jacobi singular-value oracle") {
  const auto joint = gen_dirichlet_joint(5, 4, 1.0, 23);
  const auto px = joint.marginal_x();
  const auto py = joint.marginal_y();
  Eigen::MatrixXd b(joint.nx, joint.ny);
  for (int x = 0; x < joint.nx; ++x) {
    for (int y = 0; y < joint.ny; ++y) b(x, y) = joint.p(x, y) / std::sqrt(px(x) * py(y));
  }
  const auto sigma = oracle::singular_values(b);
  CHECK(sigma[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(maximal_correlation(joint) == doctest::Approx(sigma[1]).epsilon(1e-11));
}

TEST_CASE("convergence_rate: the correlated example") {
  const auto joint = fixtures::correlated_2x2();
  const auto dg = convergence_rate(SamplerKind::Dg, joint);
  CHECK(dg.rate == doctest::Approx(0.36).epsilon(1e-13));
  CHECK(dg.method == RateMethod::MarginalChain);
  CHECK(*dg.maximal_correlation == doctest::Approx(0.6).epsilon(1e-13));

  const auto rg = convergence_rate(SamplerKind::Rg, joint, {.r = 0.5});
  CHECK(rg.rate == doctest::Approx(0.8).epsilon(1e-13));
  CHECK(rg.method == RateMethod::SlemReversible);

  // Independent oracle: Jacobi SLEM of the explicit 4x4 random-scan matrix.
  const auto kernel = rg_kernel(joint, SelectionProbability(0.5));
  CHECK(rg.rate == doctest::Approx(oracle::slem(kernel.P, kernel.stationary)).epsilon(1e-12));
}

TEST_CASE("convergence_rate: independent joints") {
  const auto joint = fixtures::product_2x3();
  CHECK(convergence_rate(SamplerKind::Dg, joint).rate <= 1e-13);
  for (double r : {0.3, 0.5, 0.8}) {
    CHECK(convergence_rate(SamplerKind::Rg, joint, {.r = r}).rate ==
          doctest::Approx(std::max(r, 1.0 - r)).epsilon(1e-12));
  }
}

TEST_CASE("convergence_rate validates its inputs") {
  const auto joint = fixtures::correlated_2x2();
  check_error(ErrorCode::DomainError, [&] { convergence_rate(SamplerKind::Rg, joint); });
  check_error(ErrorCode::DomainError, [&] { convergence_rate(SamplerKind::Dc, joint); });
  const auto qy = gen_independence_proposal(joint, Axis::Y);
  check_error(ErrorCode::AxisMismatch,
              [&] { convergence_rate(SamplerKind::Dc, joint, {.q2 = &qy}); });
}

TEST_CASE("dc product-chain spectral radius equals the marginal-chain norm") {
  for (std::uint64_t seed : {71ULL, 72ULL, 73ULL}) {
    const auto joint = gen_dirichlet_joint(4, 3, 1.0, seed);
    const auto q2 = gen_independence_proposal(joint, Axis::X);
    const double radius = l0_spectral_radius(dc_kernel(joint, q2));
    const double marginal_norm = l0_operator_norm(marginal_xm_kernel(joint, q2));
    CHECK(std::abs(radius - marginal_norm) <= 1e-10);
  }
}

TEST_CASE("rate identities across routes on random instances") {
  for (std::uint64_t seed : {31ULL, 32ULL, 33ULL, 34ULL}) {
    const auto joint = gen_dirichlet_joint(4, 4, 1.0, seed);
    const double gamma_bar = maximal_correlation(joint);
    const double norm_px = l0_operator_norm(marginal_x_kernel(joint));
    const double norm_py = l0_operator_norm(marginal_y_kernel(joint));
    CHECK(std::abs(gamma_bar * gamma_bar - norm_px) <= 1e-10);
    CHECK(std::abs(norm_px - norm_py) <= 1e-10);
    CHECK(convergence_rate(SamplerKind::Dg, joint).rate == doctest::Approx(norm_px).epsilon(1e-12));
  }
}

TEST_CASE("px, py, and pr are non-negative definite") {
  for (std::uint64_t seed : {41ULL, 42ULL}) {
    const auto joint = gen_dirichlet_joint(4, 3, 1.0, seed);
    const auto check_nnd = [](const TransitionKernel& kernel) {
      const int n = kernel.size();
      const Eigen::VectorXd u = kernel.stationary.cwiseSqrt();
      Eigen::MatrixXd sym(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) sym(i, j) = u(i) * kernel.P(i, j) / u(j);
      }
      sym = 0.5 * (sym + sym.transpose()).eval();
      const Eigen::VectorXd unit = u / u.norm();
      sym.noalias() -= unit * unit.transpose();
      const auto eigenvalues = oracle::jacobi_eigenvalues(sym);
      CHECK(eigenvalues.back() >= -1e-10);
    };
    check_nnd(marginal_x_kernel(joint));
    check_nnd(marginal_y_kernel(joint));
    check_nnd(rg_kernel(joint, SelectionProbability(0.5)));
  }
}

TEST_CASE("reversible kernels: spectral radius equals operator norm") {
  for (std::uint64_t seed : {51ULL, 52ULL}) {
    const auto joint = gen_dirichlet_joint(3, 4, 1.0, seed);
    for (double r : {0.2, 0.5}) {
      const auto rg = rg_kernel(joint, SelectionProbability(r));
      CHECK(std::abs(l0_spectral_radius(rg) - l0_operator_norm(rg)) <= 1e-10);
      const auto rc = rc_kernel(joint, gen_independence_proposal(joint, Axis::X),
                                SelectionProbability(r));
      CHECK(std::abs(l0_spectral_radius(rc) - l0_operator_norm(rc)) <= 1e-10);
    }
  }
}

TEST_CASE("rates stay in [0,1] and rg dominates max(r, 1-r)") {
  for (std::uint64_t seed : {61ULL, 62ULL, 63ULL}) {
    const auto joint = gen_dirichlet_joint(3, 3, 1.3, seed);
    for (double r : {0.1, 0.5, 0.9}) {
      const double rate = convergence_rate(SamplerKind::Rg, joint, {.r = r}).rate;
      CHECK(rate >= std::max(r, 1.0 - r) - 1e-12);
      CHECK(rate <= 1.0);
    }
    const double rate_d = convergence_rate(SamplerKind::Dg, joint).rate;
    CHECK(rate_d >= 0.0);
    CHECK(rate_d <= 1.0);
  }
}

TEST_CASE("rate_via_norm_powers approaches the spectral radius") {
  const auto joint = gen_dirichlet_joint(3, 3, 1.0, 77);
  const auto q1 = gen_independence_proposal(joint, Axis::Y);
  const auto q2 = gen_independence_proposal(joint, Axis::X);
  const auto dcmm = dcmm_kernel(joint, q1, q2);
  const double radius = l0_spectral_radius(dcmm);
  const auto report = rate_via_norm_powers(dcmm, 60);
  CHECK(report.method == RateMethod::NormPowerLimit);
  // Gelfand upper estimate: within a few percent after 60 powers.
  CHECK(report.rate >= radius - 1e-10);
  CHECK(report.rate <= radius * 1.1 + 1e-10);
}

TEST_CASE("dcmm rate respects the norm-power sandwich") {
  const auto joint = gen_dirichlet_joint(3, 3, 1.0, 78);
  const auto q1 = gen_independence_proposal(joint, Axis::Y);
  const auto q2 = gen_independence_proposal(joint, Axis::X);
  const auto report = convergence_rate(SamplerKind::Dcmm, joint, {.q1 = &q1, .q2 = &q2, .n_powers = 8});
  CHECK(report.method == RateMethod::SpectralRadius);
  for (const auto& [n, norm] : report.norm_powers) {
    CHECK(report.rate <= std::pow(norm, 1.0 / n) + 1e-10);
  }
}
