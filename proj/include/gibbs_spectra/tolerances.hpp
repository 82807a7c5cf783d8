#pragma once

namespace gibbs_spectra::tol {

// Construction-time checks on probability objects (row sums, stationarity,
// detailed balance).
inline constexpr double kConstruction = 1e-12;

// Drift allowed on externally supplied tables before rejection; accepted
// tables are renormalized to sum exactly 1.
inline constexpr double kInputDrift = 1e-9;

// Spectral equalities (norms, rates, reversible agreement).
inline constexpr double kEquality = 1e-10;

// Slack granted to inequalities that hold with equality in exact arithmetic.
inline constexpr double kInequalitySlack = 1e-12;

// Relative constancy of norm-power sequences.
inline constexpr double kRelativeSequence = 1e-7;

// A chain counts as geometrically ergodic when its rate is below this.
inline constexpr double kGeometricThreshold = 1.0 - 1e-8;

}  // namespace gibbs_spectra::tol
