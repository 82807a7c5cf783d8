#pragma once

#include <stdexcept>
#include <string>

namespace gibbs_spectra {

enum class ErrorCode {
  NegativeEntry,
  SumNotOne,
  AssumptionOneViolated,
  BadConcentration,
  ZeroMarginalState,
  ZeroMarginal,
  AxisMismatch,
  DimensionMismatch,
  ZeroStationaryMass,
  EigenSolverFailure,
  TopSingularValueNotOne,
  InfiniteConditionConstant,
  DomainError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gibbs_spectra
