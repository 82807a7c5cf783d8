#include "gibbs_spectra/io.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace gibbs_spectra {

using nlohmann::json;

nlohmann::json joint_to_json(const FiniteJointDistribution& joint) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(joint.nx) * joint.ny);
  for (int x = 0; x < joint.nx; ++x) {
    for (int y = 0; y < joint.ny; ++y) flat.push_back(joint.p(x, y));
  }
  return json{{"nx", joint.nx}, {"ny", joint.ny}, {"p", flat}};
}

FiniteJointDistribution joint_from_json(const json& j) {
  if (!j.is_object() || !j.contains("nx") || !j.contains("ny") || !j.contains("p")) {
    fail(ErrorCode::IoError, "joint JSON needs nx, ny, p");
  }
  int nx = 0, ny = 0;
  std::vector<double> flat;
  try {
    nx = j.at("nx").get<int>();
    ny = j.at("ny").get<int>();
    flat = j.at("p").get<std::vector<double>>();
  } catch (const json::exception& e) {
    fail(ErrorCode::IoError, std::string("joint JSON field types: ") + e.what());
  }
  if (nx < 1 || ny < 1 || flat.size() != static_cast<std::size_t>(nx) * ny) {
    fail(ErrorCode::IoError, "joint JSON table length must be nx*ny");
  }
  Eigen::MatrixXd table(nx, ny);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) table(x, y) = flat[static_cast<std::size_t>(x) * ny + y];
  }
  return validate_joint(table);
}

void save_joint(const FiniteJointDistribution& joint, const std::string& path) {
  write_file(path, joint_to_json(joint).dump(2) + "\n");
}

FiniteJointDistribution load_joint(const std::string& path) {
  return joint_from_json(parse_json_file(path));
}

nlohmann::json proposal_to_json(const ProposalFamily& proposal) {
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(proposal.q.rows()));
  for (Eigen::Index i = 0; i < proposal.q.rows(); ++i) {
    rows.emplace_back(proposal.q.row(i).begin(), proposal.q.row(i).end());
  }
  return json{{"axis", to_string(proposal.axis)}, {"nx", proposal.nx}, {"ny", proposal.ny}, {"q", rows}};
}

ProposalFamily proposal_from_json(const json& j) {
  if (!j.is_object() || !j.contains("axis") || !j.contains("nx") || !j.contains("ny") ||
      !j.contains("q")) {
    fail(ErrorCode::IoError, "proposal JSON needs axis, nx, ny, q");
  }
  std::string axis_name;
  int nx = 0, ny = 0;
  std::vector<std::vector<double>> rows;
  try {
    axis_name = j.at("axis").get<std::string>();
    nx = j.at("nx").get<int>();
    ny = j.at("ny").get<int>();
    rows = j.at("q").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    fail(ErrorCode::IoError, std::string("proposal JSON field types: ") + e.what());
  }
  if (axis_name != "X" && axis_name != "Y") fail(ErrorCode::IoError, "axis must be \"X\" or \"Y\"");
  const Axis axis = axis_name == "X" ? Axis::X : Axis::Y;
  const int n_axis = axis == Axis::X ? nx : ny;
  if (nx < 1 || ny < 1 || rows.size() != static_cast<std::size_t>(nx) * ny) {
    fail(ErrorCode::IoError, "proposal JSON needs nx*ny rows");
  }
  Eigen::MatrixXd q(nx * ny, n_axis);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != static_cast<std::size_t>(n_axis)) {
      fail(ErrorCode::IoError, "proposal row length must match the proposed axis");
    }
    for (int v = 0; v < n_axis; ++v) q(static_cast<Eigen::Index>(i), v) = rows[i][static_cast<std::size_t>(v)];
  }
  return validate_proposal(axis, nx, ny, q);
}

void save_proposal(const ProposalFamily& proposal, const std::string& path) {
  write_file(path, proposal_to_json(proposal).dump(2) + "\n");
}

ProposalFamily load_proposal(const std::string& path) {
  return proposal_from_json(parse_json_file(path));
}

nlohmann::json kernel_to_json(const TransitionKernel& kernel) {
  const int n = kernel.size();
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) labels.push_back(kernel.states.label(s));
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) flat.push_back(kernel.P(s, t));
  }
  return json{{"states", labels},
              {"P", flat},
              {"stationary", std::vector<double>(kernel.stationary.begin(), kernel.stationary.end())},
              {"reversible", kernel.reversible}};
}

nlohmann::json spectral_report_to_json(const SpectralReport& report) {
  json j{{"rate", report.rate}, {"method", to_string(report.method)}};
  if (!report.norm_powers.empty()) {
    json powers = json::array();
    for (const auto& [n, norm] : report.norm_powers) powers.push_back(json::array({n, norm}));
    j["norm_powers"] = powers;
  }
  if (report.maximal_correlation) j["maximal_correlation"] = *report.maximal_correlation;
  return j;
}

nlohmann::json verification_report_to_json(const VerificationReport& report) {
  json computed = json::object();
  for (const auto& [name, value] : report.computed) computed[name] = value;
  return json{{"claim", report.claim},     {"inputs", report.inputs}, {"computed", computed},
              {"pass", report.pass},       {"tolerance", report.tolerance},
              {"details", report.details}};
}

nlohmann::json gaussian_result_to_json(const GaussianExperimentResult& result) {
  return json{{"gamma", result.gamma},
              {"n_steps", result.n_steps},
              {"lag1_autocorr_x", result.lag1_autocorr_x},
              {"theory_rho_d", result.theory_rho_d},
              {"theory_rho_r", result.theory_rho_r}};
}

std::string format_g17(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string decay_trace_csv(const DecayTrace& trace) {
  std::ostringstream out;
  out << "n,chi_square,tv\n";
  for (std::size_t i = 0; i < trace.chi_square.size(); ++i) {
    out << trace.chi_square[i].first << ',' << format_g17(trace.chi_square[i].second) << ',';
    if (i < trace.tv.size()) out << format_g17(trace.tv[i].second);
    out << '\n';
  }
  return out.str();
}

std::string norm_powers_csv(const std::vector<std::pair<int, double>>& powers) {
  std::ostringstream out;
  out << "n,norm\n";
  for (const auto& [n, norm] : powers) out << n << ',' << format_g17(norm) << '\n';
  return out.str();
}

std::string figure2_csv(const std::vector<Figure2Row>& rows) {
  std::ostringstream out;
  out << "r,rho_d,rho_r_computed,rho_r_formula\n";
  for (const Figure2Row& row : rows) {
    out << format_g17(row.r) << ',' << format_g17(row.rho_d) << ',' << format_g17(row.rho_r_computed)
        << ',' << format_g17(row.rho_r_formula) << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (!in.good() && !in.eof()) fail(ErrorCode::IoError, "cannot read " + path);
  return buffer.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << contents;
  if (!out.good()) fail(ErrorCode::IoError, "cannot write " + path);
}

nlohmann::json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    fail(ErrorCode::IoError, "invalid JSON in " + path + ": " + e.what());
  }
}

}  // namespace gibbs_spectra
