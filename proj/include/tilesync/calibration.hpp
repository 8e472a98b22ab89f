#pragma once

#include <vector>

#include "tilesync/engine.hpp"
#include "tilesync/mesh_config.hpp"

namespace tilesync {

struct CalibrationTarget {
  Scheme scheme = Scheme::kNaive;
  bool neighbor = false;
  int k = 2;
  double s_hat = 0;
};

struct CalibrationOutcome {
  CalibrationSet set;
  double max_rel_error = 0;
  std::vector<double> residuals;  // per target, |sim - target| / target
  // Model adequacy: best max relative error within 50%.
  bool adequate = false;
};

// Measured overhead of one scheme under `cal` with simultaneous arrivals.
Cycle simulate_overhead(Scheme scheme, bool neighbor, int k,
                        const CalibrationSet& cal);

// Fits the five cost parameters against the given reference rows by lattice
// search plus coordinate descent, minimizing the maximum relative error.
// Deterministic. Requires at least the neighbor and 2x2 rows.
CalibrationOutcome calibrate(const std::vector<CalibrationTarget>& targets);

// The reference rows used for the built-in fit: neighbor and 2x2, both
// schemes.
std::vector<CalibrationTarget> default_calibration_targets();

// Result of calibrate(default_calibration_targets()), frozen so table
// reporting does not re-run the search.
CalibrationSet builtin_calibration();

}  // namespace tilesync
