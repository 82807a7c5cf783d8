#include "gibbs_spectra/core.hpp"

#include <cmath>

#include "gibbs_spectra/tolerances.hpp"

namespace gibbs_spectra {

namespace {

FiniteJointDistribution check_and_normalize(Eigen::MatrixXd table) {
  const int nx = static_cast<int>(table.rows());
  const int ny = static_cast<int>(table.cols());
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) {
      const double v = table(x, y);
      if (!std::isfinite(v)) fail(ErrorCode::DomainError, "joint entries must be finite");
      if (v < 0.0) {
        fail(ErrorCode::NegativeEntry, "joint entry (" + std::to_string(x) + "," + std::to_string(y) +
                                           ") = " + std::to_string(v));
      }
    }
  }
  const double total = table.sum();
  if (std::abs(total - 1.0) > tol::kInputDrift) {
    fail(ErrorCode::SumNotOne, "joint mass " + std::to_string(total) + " drifts beyond tolerance");
  }
  table /= total;

  int positive_rows = 0;
  int positive_cols = 0;
  for (int x = 0; x < nx; ++x) positive_rows += table.row(x).sum() > 0.0 ? 1 : 0;
  for (int y = 0; y < ny; ++y) positive_cols += table.col(y).sum() > 0.0 ? 1 : 0;
  if (positive_rows < 2 || positive_cols < 2) {
    fail(ErrorCode::AssumptionOneViolated,
         "need at least two positive-mass states per component, got " + std::to_string(positive_rows) +
             " rows and " + std::to_string(positive_cols) + " columns");
  }
  return FiniteJointDistribution{nx, ny, std::move(table)};
}

}  // namespace

FiniteJointDistribution validate_joint(const std::vector<std::vector<double>>& raw) {
  if (raw.empty() || raw.front().empty()) fail(ErrorCode::DimensionMismatch, "empty table");
  const std::size_t ny = raw.front().size();
  Eigen::MatrixXd table(static_cast<int>(raw.size()), static_cast<int>(ny));
  for (std::size_t x = 0; x < raw.size(); ++x) {
    if (raw[x].size() != ny) fail(ErrorCode::DimensionMismatch, "ragged table");
    for (std::size_t y = 0; y < ny; ++y) table(static_cast<int>(x), static_cast<int>(y)) = raw[x][y];
  }
  return check_and_normalize(std::move(table));
}

FiniteJointDistribution validate_joint(const Eigen::MatrixXd& raw) {
  if (raw.rows() == 0 || raw.cols() == 0) fail(ErrorCode::DimensionMismatch, "empty table");
  return check_and_normalize(raw);
}

FiniteJointDistribution gen_dirichlet_joint(Rng& rng, int nx, int ny,
                                            const std::vector<double>& concentration) {
  if (nx < 2 || ny < 2) {
    fail(ErrorCode::AssumptionOneViolated, "need nx >= 2 and ny >= 2, got " + std::to_string(nx) + "x" +
                                               std::to_string(ny));
  }
  if (concentration.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    fail(ErrorCode::DimensionMismatch, "concentration length must be nx*ny");
  }
  for (double a : concentration) {
    if (!(a > 0.0)) fail(ErrorCode::BadConcentration, "concentration entries must be positive");
  }
  const std::vector<double> cells = rng.dirichlet(concentration);
  Eigen::MatrixXd table(nx, ny);
  for (int x = 0; x < nx; ++x) {
    for (int y = 0; y < ny; ++y) table(x, y) = cells[static_cast<std::size_t>(x) * ny + y];
  }
  // Dirichlet draws are a.s. strictly positive, so Assumption 1 holds; the
  // shared check also renormalizes away the tiny summation residue.
  return check_and_normalize(std::move(table));
}

FiniteJointDistribution gen_dirichlet_joint(int nx, int ny, const std::vector<double>& concentration,
                                            std::uint64_t seed) {
  Rng rng(seed);
  return gen_dirichlet_joint(rng, nx, ny, concentration);
}

FiniteJointDistribution gen_dirichlet_joint(int nx, int ny, double concentration, std::uint64_t seed) {
  if (!(concentration > 0.0)) fail(ErrorCode::BadConcentration, "concentration must be positive");
  if (nx < 2 || ny < 2) {
    fail(ErrorCode::AssumptionOneViolated, "need nx >= 2 and ny >= 2, got " + std::to_string(nx) + "x" +
                                               std::to_string(ny));
  }
  const std::vector<double> alpha(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny),
                                  concentration);
  return gen_dirichlet_joint(nx, ny, alpha, seed);
}

FiniteJointDistribution gen_random_concentration_joint(Rng& rng, int nx, int ny) {
  std::vector<double> alpha(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (double& a : alpha) a = rng.uniform(0.5, 2.0);
  return gen_dirichlet_joint(rng, nx, ny, alpha);
}

std::vector<FiniteJointDistribution> dirichlet_corpus(int count, int nx, int ny, double concentration,
                                                      std::uint64_t seed) {
  if (count < 1) fail(ErrorCode::DomainError, "corpus count must be positive");
  Rng master(seed);
  std::vector<std::uint64_t> sub_seeds(static_cast<std::size_t>(count));
  for (auto& s : sub_seeds) s = master.next_u64();
  std::vector<FiniteJointDistribution> corpus;
  corpus.reserve(sub_seeds.size());
  for (auto s : sub_seeds) corpus.push_back(gen_dirichlet_joint(nx, ny, concentration, s));
  return corpus;
}

ProposalFamily validate_proposal(Axis axis, int nx, int ny, const Eigen::MatrixXd& q) {
  const int n_axis = axis == Axis::X ? nx : ny;
  if (q.rows() != static_cast<Eigen::Index>(nx) * ny || q.cols() != n_axis) {
    fail(ErrorCode::DimensionMismatch, "proposal table must be (nx*ny) x n_axis");
  }
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    if (q.row(i).minCoeff() < 0.0) fail(ErrorCode::NegativeEntry, "proposal entries must be nonnegative");
    if (std::abs(q.row(i).sum() - 1.0) > tol::kConstruction) {
      fail(ErrorCode::SumNotOne, "proposal row " + std::to_string(i) + " sums to " +
                                     std::to_string(q.row(i).sum()));
    }
  }
  return ProposalFamily{axis, nx, ny, q};
}

ProposalFamily gen_independence_proposal(const FiniteJointDistribution& joint, Axis axis) {
  const Eigen::VectorXd marginal = axis == Axis::X ? joint.marginal_x() : joint.marginal_y();
  if (marginal.minCoeff() <= 0.0) {
    fail(ErrorCode::ZeroMarginalState, "independence proposal needs a strictly positive marginal");
  }
  Eigen::MatrixXd q(joint.nx * joint.ny, marginal.size());
  q.rowwise() = marginal.transpose();
  return validate_proposal(axis, joint.nx, joint.ny, q);
}

ProposalFamily gen_swap_proposal(const FiniteJointDistribution& joint, Axis axis) {
  const int n_axis = axis == Axis::X ? joint.nx : joint.ny;
  if (n_axis < 2) fail(ErrorCode::DomainError, "swap proposal needs at least two states");
  Eigen::MatrixXd q = Eigen::MatrixXd::Constant(joint.nx * joint.ny, n_axis, 1.0 / (n_axis - 1));
  for (int x = 0; x < joint.nx; ++x) {
    for (int y = 0; y < joint.ny; ++y) {
      const int current = axis == Axis::X ? x : y;
      q(x * joint.ny + y, current) = 0.0;
    }
  }
  return validate_proposal(axis, joint.nx, joint.ny, q);
}

SupportRestriction restrict_support(const FiniteJointDistribution& joint) {
  std::vector<int> x_map, y_map;
  const Eigen::VectorXd px = joint.marginal_x();
  const Eigen::VectorXd py = joint.marginal_y();
  for (int x = 0; x < joint.nx; ++x) {
    if (px(x) > 0.0) x_map.push_back(x);
  }
  for (int y = 0; y < joint.ny; ++y) {
    if (py(y) > 0.0) y_map.push_back(y);
  }
  Eigen::MatrixXd table(static_cast<int>(x_map.size()), static_cast<int>(y_map.size()));
  for (std::size_t i = 0; i < x_map.size(); ++i) {
    for (std::size_t j = 0; j < y_map.size(); ++j) {
      table(static_cast<int>(i), static_cast<int>(j)) = joint.p(x_map[i], y_map[j]);
    }
  }
  return SupportRestriction{check_and_normalize(std::move(table)), std::move(x_map), std::move(y_map)};
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::SumNotOne: return "SumNotOne";
    case ErrorCode::AssumptionOneViolated: return "AssumptionOneViolated";
    case ErrorCode::BadConcentration: return "BadConcentration";
    case ErrorCode::ZeroMarginalState: return "ZeroMarginalState";
    case ErrorCode::ZeroMarginal: return "ZeroMarginal";
    case ErrorCode::AxisMismatch: return "AxisMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroStationaryMass: return "ZeroStationaryMass";
    case ErrorCode::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorCode::TopSingularValueNotOne: return "TopSingularValueNotOne";
    case ErrorCode::InfiniteConditionConstant: return "InfiniteConditionConstant";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace gibbs_spectra
