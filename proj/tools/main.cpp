#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gibbs_spectra/io.hpp"
#include "gibbs_spectra/parallel.hpp"
#include "gibbs_spectra/simulate.hpp"
#include "gibbs_spectra/theory.hpp"

namespace gs = gibbs_spectra;
using nlohmann::json;

namespace {

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    try {
      values.push_back(std::stod(text.substr(pos, next - pos)));
    } catch (const std::exception&) {
      gs::fail(gs::ErrorCode::DomainError, "cannot parse number list '" + text + "'");
    }
    pos = next + 1;
  }
  if (values.empty()) gs::fail(gs::ErrorCode::DomainError, "empty number list");
  return values;
}

gs::ProposalFamily make_proposal(const std::string& kind, const gs::FiniteJointDistribution& joint,
                                 gs::Axis axis) {
  if (kind == "exact") return gs::exact_conditional_proposal(joint, axis);
  if (kind == "independence") return gs::gen_independence_proposal(joint, axis);
  if (kind == "swap") return gs::gen_swap_proposal(joint, axis);
  if (kind.starts_with("file:")) {
    gs::ProposalFamily proposal = gs::load_proposal(kind.substr(5));
    if (proposal.axis != axis) {
      gs::fail(gs::ErrorCode::AxisMismatch,
               std::string("proposal file must update the ") + gs::to_string(axis) + " component");
    }
    if (proposal.nx != joint.nx || proposal.ny != joint.ny) {
      gs::fail(gs::ErrorCode::DimensionMismatch, "proposal file dimensions do not match the joint");
    }
    return proposal;
  }
  gs::fail(gs::ErrorCode::DomainError,
           "unknown proposal '" + kind + "' (want exact|independence|swap|file:PATH)");
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    gs::write_file(out_path, text);
    std::printf("%s\n", out_path.c_str());
  }
}

int cmd_gen(int nx, int ny, std::uint64_t seed, const std::string& concentration,
            const std::string& out_path) {
  gs::FiniteJointDistribution joint;
  if (concentration.find(',') != std::string::npos) {
    joint = gs::gen_dirichlet_joint(nx, ny, parse_double_list(concentration), seed);
  } else {
    joint = gs::gen_dirichlet_joint(nx, ny, std::stod(concentration), seed);
  }
  gs::save_joint(joint, out_path);
  std::printf("%s\n", out_path.c_str());
  return 0;
}

struct ProposalChoice {
  std::string q2_kind;  // X-axis proposal; empty = none
  std::string q1_kind;  // Y-axis proposal; empty = none
};

gs::TransitionKernel build_product_kernel(gs::SamplerKind kind, const gs::FiniteJointDistribution& joint,
                                          const std::optional<gs::ProposalFamily>& q1,
                                          const std::optional<gs::ProposalFamily>& q2, double r) {
  const bool needs_q2 = kind != gs::SamplerKind::Dg && kind != gs::SamplerKind::Rg;
  const bool needs_q1 = kind == gs::SamplerKind::Dcmm || kind == gs::SamplerKind::Rcmm;
  if (needs_q2 && !q2) {
    gs::fail(gs::ErrorCode::DomainError, std::string(to_string(kind)) + " needs --proposal");
  }
  if (needs_q1 && !q1) {
    gs::fail(gs::ErrorCode::DomainError, std::string(to_string(kind)) + " needs --proposal-y");
  }
  const gs::SelectionProbability sel(r);
  switch (kind) {
    case gs::SamplerKind::Dg: return gs::dg_kernel(joint);
    case gs::SamplerKind::Rg: return gs::rg_kernel(joint, sel);
    case gs::SamplerKind::Dc: return gs::dc_kernel(joint, *q2);
    case gs::SamplerKind::Rc: return gs::rc_kernel(joint, *q2, sel);
    case gs::SamplerKind::Dcmm: return gs::dcmm_kernel(joint, *q1, *q2);
    case gs::SamplerKind::Rcmm: return gs::rcmm_kernel(joint, *q1, *q2, sel);
  }
  gs::fail(gs::ErrorCode::DomainError, "unhandled sampler kind");
}

struct AnalyzeExtras {
  std::string decay_path;
  std::string decay_sampler = "rg";
  int decay_steps = 30;
  int decay_start = 0;
  std::string powers_path;
  std::string powers_sampler = "dg";
  int powers = 5;
};

int cmd_analyze(const std::string& joint_path, double r, const ProposalChoice& choice,
                bool restrict_support, const std::string& out_path, const AnalyzeExtras& extras) {
  gs::FiniteJointDistribution joint = gs::load_joint(joint_path);
  if (restrict_support) {
    // Drop zero-marginal states before any kernel is built; zero-mass
    // product states left inside are deflated at norm time.
    joint = gs::restrict_support(joint).joint;
  }
  std::optional<gs::ProposalFamily> q1, q2;
  if (!choice.q2_kind.empty()) q2 = make_proposal(choice.q2_kind, joint, gs::Axis::X);
  if (!choice.q1_kind.empty()) q1 = make_proposal(choice.q1_kind, joint, gs::Axis::Y);

  gs::RateInputs inputs;
  inputs.q1 = q1 ? &*q1 : nullptr;
  inputs.q2 = q2 ? &*q2 : nullptr;
  inputs.r = r;
  inputs.restrict_support = restrict_support;

  json out;
  out["rho_d"] = gs::convergence_rate(gs::SamplerKind::Dg, joint, inputs).rate;
  out["rho_r"] = gs::convergence_rate(gs::SamplerKind::Rg, joint, inputs).rate;
  out["maximal_correlation"] = gs::maximal_correlation(joint);
  if (q2) {
    out["rho_dc"] = gs::convergence_rate(gs::SamplerKind::Dc, joint, inputs).rate;
    out["rho_rc"] = gs::convergence_rate(gs::SamplerKind::Rc, joint, inputs).rate;
    const gs::ConditionConstant c = gs::condition_c(joint, *q2);
    out["C_infinite"] = c.infinite;
    if (!c.infinite) out["C"] = c.value;
  }
  if (q1 && q2) {
    out["rho_dcmm"] = gs::convergence_rate(gs::SamplerKind::Dcmm, joint, inputs).rate;
    out["rho_rcmm"] = gs::convergence_rate(gs::SamplerKind::Rcmm, joint, inputs).rate;
    const gs::ConditionConstant c1 = gs::condition_c1(joint, *q1);
    out["C1_infinite"] = c1.infinite;
    if (!c1.infinite) out["C1"] = c1.value;
  }

  if (!extras.decay_path.empty()) {
    const gs::SamplerKind kind = gs::sampler_kind_from_string(extras.decay_sampler);
    const gs::TransitionKernel kernel = build_product_kernel(kind, joint, q1, q2, r);
    if (extras.decay_start < 0 || extras.decay_start >= kernel.size()) {
      gs::fail(gs::ErrorCode::DomainError, "decay start state out of range");
    }
    Eigen::VectorXd mu0 = Eigen::VectorXd::Zero(kernel.size());
    mu0(extras.decay_start) = 1.0;
    const int hi = std::min(30, extras.decay_steps);
    const int lo = std::min(10, hi - 1);
    const gs::DecayTrace trace = gs::decay_trace(kernel, mu0, extras.decay_steps, {lo, hi});
    gs::write_file(extras.decay_path, gs::decay_trace_csv(trace));
    out["decay_fitted_rate"] = trace.fitted_rate;
    out["decay_csv"] = extras.decay_path;
  }

  if (!extras.powers_path.empty()) {
    const gs::SamplerKind kind = gs::sampler_kind_from_string(extras.powers_sampler);
    gs::TransitionKernel kernel = build_product_kernel(kind, joint, q1, q2, r);
    if (restrict_support) kernel = gs::restrict_to_support(kernel);
    gs::write_file(extras.powers_path, gs::norm_powers_csv(gs::norm_power_sequence(kernel, extras.powers)));
    out["norm_powers_csv"] = extras.powers_path;
  }

  emit(out, out_path);
  return 0;
}

struct ClaimLine {
  std::string label;
  enum class Status { Pass, Fail, Skip } status;
  std::string note;
};

void run_claim(std::vector<ClaimLine>& lines, std::vector<json>& reports, const std::string& label,
               const std::function<gs::VerificationReport()>& body) {
  try {
    const gs::VerificationReport report = body();
    reports.push_back(gs::verification_report_to_json(report));
    lines.push_back({label, report.pass ? ClaimLine::Status::Pass : ClaimLine::Status::Fail,
                     report.details});
  } catch (const gs::Error& e) {
    if (e.code() == gs::ErrorCode::InfiniteConditionConstant) {
      lines.push_back({label, ClaimLine::Status::Skip, e.what()});
    } else {
      lines.push_back({label, ClaimLine::Status::Fail, e.what()});
    }
  }
}

int cmd_verify(const std::string& joint_path, int corpus, int nx, int ny, std::uint64_t seed,
               const std::vector<double>& r_values, double tolerance, const ProposalChoice& choice,
               const std::string& out_path) {
  std::vector<gs::FiniteJointDistribution> instances;
  if (!joint_path.empty()) {
    instances.push_back(gs::load_joint(joint_path));
  } else {
    instances = gs::dirichlet_corpus(corpus, nx, ny, 1.0, seed);
  }

  const std::string q2_kind = choice.q2_kind.empty() ? "independence" : choice.q2_kind;
  const std::string q1_kind = choice.q1_kind.empty() ? "independence" : choice.q1_kind;

  std::vector<std::vector<ClaimLine>> lines(instances.size());
  std::vector<std::vector<json>> reports(instances.size());
  gs::parallel_for_index(static_cast<int>(instances.size()), [&](int i) {
    const gs::FiniteJointDistribution& joint = instances[static_cast<std::size_t>(i)];
    const gs::ProposalFamily q2 = make_proposal(q2_kind, joint, gs::Axis::X);
    const gs::ProposalFamily q1 = make_proposal(q1_kind, joint, gs::Axis::Y);
    auto& my_lines = lines[static_cast<std::size_t>(i)];
    auto& my_reports = reports[static_cast<std::size_t>(i)];
    const std::string tag = "instance " + std::to_string(i);

    for (double r : r_values) {
      char rbuf[32];
      std::snprintf(rbuf, sizeof(rbuf), "%g", r);
      const std::string rtag = tag + " r=" + rbuf;
      run_claim(my_lines, my_reports, rtag + " theorem1",
                [&] { return gs::verify_theorem1(joint, r, tolerance); });
      run_claim(my_lines, my_reports, rtag + " lemma4-young",
                [&] { return gs::lemma4_and_young_bounds(joint, r); });
      run_claim(my_lines, my_reports, rtag + " minorizations",
                [&] { return gs::verify_minorizations(joint, &q1, q2, r); });
      run_claim(my_lines, my_reports, rtag + " qualitative-audit",
                [&] { return gs::qualitative_audit(joint, &q1, &q2, r); });
    }
    run_claim(my_lines, my_reports, tag + " norm-power-identities",
              [&] { return gs::verify_norm_power_identities(joint, &q2); });
    run_claim(my_lines, my_reports, tag + " maximal-correlation",
              [&] { return gs::verify_maximal_correlation_identity(joint); });
    run_claim(my_lines, my_reports, tag + " selection-robustness",
              [&] { return gs::selection_robustness(joint, &q2, r_values); });
  });

  std::vector<ClaimLine> flat;
  std::vector<json> flat_reports;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    flat.insert(flat.end(), lines[i].begin(), lines[i].end());
    flat_reports.insert(flat_reports.end(), reports[i].begin(), reports[i].end());
  }
  run_claim(flat, flat_reports, "counterexample", [&] { return gs::verify_counterexample(); });

  int passed = 0, failed = 0, skipped = 0;
  for (const ClaimLine& line : flat) {
    const char* status = line.status == ClaimLine::Status::Pass   ? "PASS"
                         : line.status == ClaimLine::Status::Fail ? "FAIL"
                                                                  : "SKIP";
    std::printf("[%s] %s: %s\n", status, line.label.c_str(), line.note.c_str());
    if (line.status == ClaimLine::Status::Pass) ++passed;
    if (line.status == ClaimLine::Status::Fail) ++failed;
    if (line.status == ClaimLine::Status::Skip) ++skipped;
  }
  std::printf("%d passed, %d failed, %d skipped\n", passed, failed, skipped);

  if (!out_path.empty()) {
    gs::write_file(out_path, json(flat_reports).dump(2) + "\n");
  }
  return failed == 0 ? 0 : 1;
}

int cmd_figure2(int count, int nx, int ny, const std::vector<double>& r_values, std::uint64_t seed,
                const std::string& out_path) {
  gs::Rng master(seed);
  std::vector<gs::FiniteJointDistribution> joints;
  joints.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) joints.push_back(gs::gen_random_concentration_joint(master, nx, ny));

  std::vector<gs::Figure2Row> rows(static_cast<std::size_t>(count) * r_values.size());
  gs::parallel_for_index(count, [&](int i) {
    for (std::size_t k = 0; k < r_values.size(); ++k) {
      const gs::RatePoint point = gs::theorem1_point(joints[static_cast<std::size_t>(i)], r_values[k]);
      rows[static_cast<std::size_t>(i) * r_values.size() + k] =
          gs::Figure2Row{i, r_values[k], point.rho_d, point.rho_r, point.formula};
    }
  });

  gs::write_file(out_path, gs::figure2_csv(rows));
  std::printf("%s\n", out_path.c_str());
  return 0;
}

int cmd_gauss(const std::vector<double>& gammas, double r, std::int64_t n_steps, std::uint64_t seed,
              const std::string& out_path) {
  json results = json::array();
  for (double gamma : gammas) {
    results.push_back(gs::gaussian_result_to_json(gs::gaussian_experiment(gamma, r, n_steps, seed)));
  }
  emit(results, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact spectral analysis of two-component Gibbs and conditional MH samplers"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a Dirichlet joint pmf");
  int gen_nx = 0, gen_ny = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_conc = "1.0", gen_out;
  gen->add_option("nx", gen_nx, "number of X states")->required();
  gen->add_option("ny", gen_ny, "number of Y states")->required();
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--concentration", gen_conc, "Dirichlet concentration (scalar or comma list)");
  gen->add_option("--out", gen_out, "output joint JSON path")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Convergence rates of one instance");
  std::string an_joint, an_r = "0.5", an_q2, an_q1, an_out;
  bool an_restrict = false;
  AnalyzeExtras an_extras;
  analyze->add_option("joint", an_joint, "joint JSON path")->required();
  analyze->add_option("--r", an_r, "selection probability");
  analyze->add_option("--proposal", an_q2, "X proposal: exact|independence|swap|file:PATH");
  analyze->add_option("--proposal-y", an_q1, "Y proposal: exact|independence|swap|file:PATH");
  analyze->add_flag("--restrict-support", an_restrict, "drop zero-mass product states before norms");
  analyze->add_option("--out", an_out, "rates JSON path (stdout when omitted)");
  analyze->add_option("--decay-out", an_extras.decay_path, "write a chi-square/TV decay CSV here");
  analyze->add_option("--decay-sampler", an_extras.decay_sampler, "dg|rg|dc|rc|dcmm|rcmm");
  analyze->add_option("--decay-steps", an_extras.decay_steps, "iterations for the decay trace");
  analyze->add_option("--decay-start", an_extras.decay_start, "point-mass start state index");
  analyze->add_option("--powers-out", an_extras.powers_path, "write a norm-power CSV here");
  analyze->add_option("--powers-sampler", an_extras.powers_sampler, "dg|rg|dc|rc|dcmm|rcmm");
  analyze->add_option("--powers", an_extras.powers, "number of powers in the CSV");

  // verify
  auto* verify = app.add_subcommand("verify", "Run the claim verifiers");
  std::string ve_joint, ve_r = "0.1,0.3,0.5,0.7,0.9", ve_q2, ve_q1, ve_out;
  int ve_corpus = 0, ve_nx = 5, ve_ny = 5;
  std::uint64_t ve_seed = 0;
  double ve_tol = 1e-8;
  verify->add_option("joint", ve_joint, "joint JSON path (omit with --corpus)");
  verify->add_option("--corpus", ve_corpus, "verify this many random instances");
  verify->add_option("--nx", ve_nx, "corpus X states");
  verify->add_option("--ny", ve_ny, "corpus Y states");
  verify->add_option("--seed", ve_seed, "corpus seed");
  verify->add_option("--r", ve_r, "comma list of selection probabilities");
  verify->add_option("--tol", ve_tol, "rate-identity tolerance");
  verify->add_option("--proposal", ve_q2, "X proposal (default independence)");
  verify->add_option("--proposal-y", ve_q1, "Y proposal (default independence)");
  verify->add_option("--out", ve_out, "write all reports as JSON here");

  // figure2
  auto* figure2 = app.add_subcommand("figure2", "Rate pairs of random instances against the curve");
  int f2_count = 20, f2_nx = 5, f2_ny = 5;
  std::string f2_r = "0.25,0.5,0.75", f2_out;
  std::uint64_t f2_seed = 0;
  figure2->add_option("--count", f2_count, "number of instances");
  figure2->add_option("--nx", f2_nx, "X states");
  figure2->add_option("--ny", f2_ny, "Y states");
  figure2->add_option("--r", f2_r, "comma list of selection probabilities");
  figure2->add_option("--seed", f2_seed, "RNG seed");
  figure2->add_option("--out", f2_out, "output CSV path")->required();

  // gauss
  auto* gauss = app.add_subcommand("gauss", "Bivariate-Gaussian Gibbs autocorrelation experiment");
  std::string ga_gamma = "0.5,0.9", ga_out;
  double ga_r = 0.5;
  std::int64_t ga_n = 1000000;
  std::uint64_t ga_seed = 0;
  gauss->add_option("--gamma", ga_gamma, "comma list of correlations in (-1,1)");
  gauss->add_option("--r", ga_r, "selection probability for the rate formula");
  gauss->add_option("--n", ga_n, "number of sampler iterations");
  gauss->add_option("--seed", ga_seed, "RNG seed");
  gauss->add_option("--out", ga_out, "results JSON path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_nx, gen_ny, gen_seed, gen_conc, gen_out);
    if (analyze->parsed()) {
      const std::vector<double> rs = parse_double_list(an_r);
      if (rs.size() != 1) gs::fail(gs::ErrorCode::DomainError, "analyze takes a single --r value");
      return cmd_analyze(an_joint, rs[0], {an_q2, an_q1}, an_restrict, an_out, an_extras);
    }
    if (verify->parsed()) {
      if (ve_joint.empty() && ve_corpus <= 0) {
        gs::fail(gs::ErrorCode::DomainError, "verify needs a joint file or --corpus N");
      }
      return cmd_verify(ve_joint, ve_corpus, ve_nx, ve_ny, ve_seed, parse_double_list(ve_r), ve_tol,
                        {ve_q2, ve_q1}, ve_out);
    }
    if (figure2->parsed()) {
      return cmd_figure2(f2_count, f2_nx, f2_ny, parse_double_list(f2_r), f2_seed, f2_out);
    }
    if (gauss->parsed()) return cmd_gauss(parse_double_list(ga_gamma), ga_r, ga_n, ga_seed, ga_out);
  } catch (const gs::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
