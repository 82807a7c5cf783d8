#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "gibbs_spectra/simulate.hpp"
#include "gibbs_spectra/spectral.hpp"
#include "gibbs_spectra/theory.hpp"

namespace gibbs_spectra {

// Joint schema: {"nx": int, "ny": int, "p": [row-major reals]}.
nlohmann::json joint_to_json(const FiniteJointDistribution& joint);
FiniteJointDistribution joint_from_json(const nlohmann::json& j);
void save_joint(const FiniteJointDistribution& joint, const std::string& path);
FiniteJointDistribution load_joint(const std::string& path);

// Proposal schema: {"axis": "X"|"Y", "nx": int, "ny": int,
// "q": [[..] per (x,y) in row-major order]}.
nlohmann::json proposal_to_json(const ProposalFamily& proposal);
ProposalFamily proposal_from_json(const nlohmann::json& j);
void save_proposal(const ProposalFamily& proposal, const std::string& path);
ProposalFamily load_proposal(const std::string& path);

// Kernel schema: {"states": [labels], "P": [row-major reals],
// "stationary": [reals], "reversible": bool}.
nlohmann::json kernel_to_json(const TransitionKernel& kernel);

nlohmann::json spectral_report_to_json(const SpectralReport& report);
nlohmann::json verification_report_to_json(const VerificationReport& report);
nlohmann::json gaussian_result_to_json(const GaussianExperimentResult& result);

// Decay CSV with header "n,chi_square,tv"; 17 significant digits.
std::string decay_trace_csv(const DecayTrace& trace);

// Norm-power CSV with header "n,norm".
std::string norm_powers_csv(const std::vector<std::pair<int, double>>& powers);

struct Figure2Row {
  int instance = 0;
  double r = 0.0;
  double rho_d = 0.0;
  double rho_r_computed = 0.0;
  double rho_r_formula = 0.0;
};

// Header "r,rho_d,rho_r_computed,rho_r_formula"; rows in input order.
std::string figure2_csv(const std::vector<Figure2Row>& rows);

std::string format_g17(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);
nlohmann::json parse_json_file(const std::string& path);

}  // namespace gibbs_spectra
