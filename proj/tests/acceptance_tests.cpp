// Acceptance suite: one case per criterion, each printing a PASS/FAIL line
// with the measured margin.  Tolerances are pinned here, not configurable.

#include <doctest.h>
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "gibbs_spectra/io.hpp"
#include "gibbs_spectra/simulate.hpp"
#include "gibbs_spectra/theory.hpp"

using namespace gibbs_spectra;

namespace {

void report(int criterion, const std::string& name, bool pass, const std::string& note) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
              note.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(pass, "criterion ", criterion, ": ", note);
}

std::string fmt(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3g", v);
  return buffer;
}

}  // namespace

TEST_CASE("criterion 1: theorem-1 equality on the random corpus") {
  const auto start = std::chrono::steady_clock::now();
  const auto corpus = dirichlet_corpus(100, 5, 5, 1.0, 1001);
  double max_err = 0.0;
  for (const auto& joint : corpus) {
    for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const RatePoint point = theorem1_point(joint, r);
      max_err = std::max(max_err, std::abs(point.rho_r - point.formula));
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(1, "theorem-1 equality, 100 joints x 5 r", max_err < 1e-8 && seconds < 10.0,
         "max |err| = " + fmt(max_err) + ", " + fmt(seconds) + " s");
}

TEST_CASE("criterion 2: figure-2 CSV stays on the theoretical curve") {
  const std::string out =
      (std::filesystem::temp_directory_path() / "acceptance_figure2.csv").string();
  const std::string command = std::string(CLI_PATH) +
                              " figure2 --count 20 --nx 5 --ny 5 --r 0.25,0.5,0.75 --seed 1002 --out " +
                              out + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(WEXITSTATUS(status) == 0);

  std::istringstream csv(read_file(out));
  std::string line;
  std::getline(csv, line);
  REQUIRE(line == "r,rho_d,rho_r_computed,rho_r_formula");
  int rows = 0;
  double max_dev = 0.0;
  while (std::getline(csv, line)) {
    double r, rho_d, computed, formula;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r, &rho_d, &computed, &formula) == 4);
    max_dev = std::max(max_dev, std::abs(computed - formula));
    ++rows;
  }
  std::remove(out.c_str());
  report(2, "figure-2 reproduction, 20 instances", rows == 60 && max_dev < 1e-8,
         "rows = " + std::to_string(rows) + ", max curve deviation = " + fmt(max_dev));
}

TEST_CASE("criterion 3: norm-power identities and the sandwich") {
  const auto corpus = dirichlet_corpus(25, 5, 5, 1.0, 1003);
  bool pass = true;
  double worst_spread = 0.0;
  for (const auto& joint : corpus) {
    const auto q2 = gen_independence_proposal(joint, Axis::X);
    const auto result = verify_norm_power_identities(joint, &q2, 5);
    pass = pass && result.pass;
    for (const auto& [name, value] : result.computed) {
      if (name == "root_spread_rel") worst_spread = std::max(worst_spread, value);
    }
  }
  report(3, "norm-power identities, 25 instances", pass, "worst root spread = " + fmt(worst_spread));
}

TEST_CASE("criterion 4: squared maximal correlation equals rho_d") {
  const auto corpus = dirichlet_corpus(25, 5, 5, 1.0, 1003);
  bool pass = true;
  double worst = 0.0;
  for (const auto& joint : corpus) {
    const double gamma_bar = maximal_correlation(joint);
    const double rho_d = convergence_rate(SamplerKind::Dg, joint).rate;
    const double err = std::abs(gamma_bar * gamma_bar - rho_d);
    worst = std::max(worst, err);
    pass = pass && err < 1e-10;
  }
  report(4, "maximal-correlation identity, 25 instances", pass, "max |err| = " + fmt(worst));
}

TEST_CASE("criterion 5: lemma-4 and Young bounds with the k* floor") {
  const auto corpus = dirichlet_corpus(25, 5, 5, 1.0, 1003);
  bool pass = true;
  for (const auto& joint : corpus) {
    for (double r : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      pass = pass && lemma4_and_young_bounds(joint, r).pass;
    }
  }
  report(5, "lemma-4 + Young bounds, 25 instances x 5 r", pass, pass ? "all bounds hold" : "violated");
}

TEST_CASE("criterion 6: the periodic counterexample") {
  const auto result = verify_counterexample({0.25, 0.5});
  std::string note = "rho_dm";
  for (const auto& [name, value] : result.computed) {
    if (name == "rho_dm") note = "rho_dm = " + fmt(value);
  }
  report(6, "counterexample rates and infinite C", result.pass, note);
}

TEST_CASE("criterion 7: minorization inequalities") {
  const auto corpus = dirichlet_corpus(25, 4, 4, 1.0, 1007);
  bool pass = true;
  double worst_slack = 0.0;
  for (const auto& joint : corpus) {
    const auto q1 = gen_independence_proposal(joint, Axis::Y);
    const auto q2 = gen_independence_proposal(joint, Axis::X);
    for (double r : {0.25, 0.5}) {
      const auto result = verify_minorizations(joint, &q1, q2, r);
      pass = pass && result.pass;
      for (const auto& [name, value] : result.computed) {
        if (name.starts_with("slack_")) worst_slack = std::min(worst_slack, value);
      }
    }
  }
  report(7, "minorizations, 25 instances x 2 r", pass && worst_slack >= -1e-12,
         "worst entrywise slack = " + fmt(worst_slack));
}

TEST_CASE("criterion 8: fitted decay rates match computed rates") {
  const auto corpus = dirichlet_corpus(10, 4, 4, 1.0, 1008);
  bool pass = true;
  double worst_rel = 0.0;
  for (const auto& joint : corpus) {
    const auto q2 = gen_independence_proposal(joint, Axis::X);
    const SelectionProbability half(0.5);
    const TransitionKernel kernels[] = {rg_kernel(joint, half), rc_kernel(joint, q2, half),
                                        marginal_x_kernel(joint)};
    for (const auto& kernel : kernels) {
      const double rate = l0_operator_norm(kernel);
      // Generic point-mass start: the state whose deviation puts the largest
      // energy fraction on the dominant eigenspace.
      int start = 0;
      double best = -1.0;
      for (int s = 0; s < kernel.size(); ++s) {
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(kernel.size());
        mu(s) = 1.0;
        const double fraction =
            dominant_component(kernel, mu) / chi_square_distance(mu, kernel.stationary);
        if (fraction > best) {
          best = fraction;
          start = s;
        }
      }
      REQUIRE(best >= 1e-6);
      Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(kernel.size());
      mu0(start) = 1.0;
      const auto trace = decay_trace(kernel, mu0, 30, {10, 30});
      const double rel = std::abs(trace.fitted_rate - rate) / rate;
      worst_rel = std::max(worst_rel, rel);
      pass = pass && rel < 0.01;
    }
  }
  report(8, "decay-rate agreement, 10 instances x 3 kernels", pass,
         "worst relative error = " + fmt(worst_rel));
}

TEST_CASE("criterion 9: Gaussian Gibbs autocorrelation") {
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::string note;
  for (double gamma : {0.5, 0.9}) {
    const auto result = gaussian_experiment(gamma, 0.5, 1000000, 1009);
    const double err = std::abs(result.lag1_autocorr_x - gamma * gamma);
    pass = pass && err <= 0.02;
    note += "gamma=" + fmt(gamma) + ": |err|=" + fmt(err) + " ";
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(9, "Gaussian experiment lag-1 autocorrelation", pass && seconds < 5.0,
         note + "(" + fmt(seconds) + " s)");
}

TEST_CASE("criterion 10: qualitative audit and selection robustness") {
  const auto corpus = dirichlet_corpus(50, 4, 4, 1.0, 1010);
  bool pass = true;
  int violations = 0;
  for (const auto& joint : corpus) {
    const auto q1 = gen_independence_proposal(joint, Axis::Y);
    const auto q2 = gen_independence_proposal(joint, Axis::X);
    for (double r : {0.3, 0.5}) {
      const auto audit = qualitative_audit(joint, &q1, &q2, r);
      if (!audit.pass) ++violations;
      pass = pass && audit.pass;
    }
    pass = pass && selection_robustness(joint, &q2, {0.3, 0.5}).pass;
  }
  report(10, "qualitative audit, 50 instances x 2 r", pass,
         "arrow violations = " + std::to_string(violations));
}
