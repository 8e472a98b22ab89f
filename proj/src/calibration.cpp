#include "tilesync/calibration.hpp"

#include <algorithm>
#include <cmath>

#include "tilesync/errors.hpp"
#include "tilesync/reference.hpp"

namespace tilesync {

Cycle simulate_overhead(Scheme scheme, bool neighbor, int k,
                        const CalibrationSet& cal) {
  Scenario sc;
  sc.name = "calibration";
  sc.scheme = scheme;
  sc.neighbor = neighbor;
  MeshConfig cfg;
  cfg.k = neighbor ? 2 : k;
  cfg.apply(cal);
  return run(sc, cfg).front().s_hat;
}

namespace {

struct Bounds {
  int lo, hi;
};

// The poll interval is a software constant of the modeled spin loop, not a
// physical latency; its range is capped at twice the runtime's default of 8.
constexpr Bounds kBounds[5] = {
    {1, 16},  // instr_cost
    {1, 16},  // poll_interval
    {1, 4},   // hop_latency
    {1, 4},   // router_latency
    {1, 14},  // amo_service_latency
};

int& field(CalibrationSet& c, int idx) {
  switch (idx) {
    case 0: return c.instr_cost;
    case 1: return c.poll_interval;
    case 2: return c.hop_latency;
    case 3: return c.router_latency;
    default: return c.amo_service_latency;
  }
}

std::vector<double> residuals_of(const CalibrationSet& c,
                                 const std::vector<CalibrationTarget>& targets) {
  std::vector<double> res;
  res.reserve(targets.size());
  for (const auto& t : targets) {
    const Cycle sim = simulate_overhead(t.scheme, t.neighbor, t.k, c);
    res.push_back(std::abs(static_cast<double>(sim) - t.s_hat) / t.s_hat);
  }
  return res;
}

// Minimax with leximin refinement: orders candidates by their largest
// residual, then the second largest, and so on. Breaks the many ties a
// minimax objective has on an integer lattice.
bool better(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> sa = a, sb = b;
  std::sort(sa.rbegin(), sa.rend());
  std::sort(sb.rbegin(), sb.rend());
  return std::lexicographical_compare(sa.begin(), sa.end(), sb.begin(), sb.end());
}

double max_of(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end());
}

}  // namespace

std::vector<CalibrationTarget> default_calibration_targets() {
  // The neighbor and 2x2 rows. The neighbor mesh has a single row, where the
  // two-phase scheme degenerates to the centralized one, so its XY entry
  // would duplicate the centralized target.
  std::vector<CalibrationTarget> targets;
  for (const auto& row : kReferenceTable) {
    if (!row.neighbor && row.k != 2) continue;
    targets.push_back({Scheme::kNaive, row.neighbor, row.k,
                       static_cast<double>(row.naive)});
    if (!row.neighbor) {
      targets.push_back(
          {Scheme::kXy, row.neighbor, row.k, static_cast<double>(row.xy)});
    }
  }
  return targets;
}

CalibrationOutcome calibrate(const std::vector<CalibrationTarget>& targets) {
  bool have_neighbor = false, have_2x2 = false;
  for (const auto& t : targets) {
    have_neighbor |= t.neighbor;
    have_2x2 |= (!t.neighbor && t.k == 2);
  }
  if (!have_neighbor || !have_2x2) {
    throw ConfigError("calibration needs at least the neighbor and 2x2 rows");
  }

  // Cheapest simulations first so lattice points can bail out early.
  std::vector<CalibrationTarget> ordered = targets;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const CalibrationTarget& a, const CalibrationTarget& b) {
                     const int ka = a.neighbor ? 1 : a.k;
                     const int kb = b.neighbor ? 1 : b.k;
                     return ka < kb;
                   });

  CalibrationSet best;
  std::vector<double> best_res = residuals_of(best, ordered);

  // Lattice pass over the full parameter box. Every run involved is tiny
  // (nothing larger than a 2x2 mesh among the default targets), and most
  // points are rejected after their first simulation.
  for (int instr = kBounds[0].lo; instr <= 12; ++instr) {
    for (int poll = kBounds[1].lo; poll <= kBounds[1].hi; ++poll) {
      for (int hop = kBounds[2].lo; hop <= 3; ++hop) {
        for (int router = kBounds[3].lo; router <= 3; ++router) {
          for (int amo = kBounds[4].lo; amo <= 14; ++amo) {
            const CalibrationSet c{instr, poll, hop, router, amo};
            const double bail = max_of(best_res);
            std::vector<double> res;
            bool viable = true;
            for (const auto& t : ordered) {
              const Cycle sim = simulate_overhead(t.scheme, t.neighbor, t.k, c);
              const double rel =
                  std::abs(static_cast<double>(sim) - t.s_hat) / t.s_hat;
              if (rel > bail) {
                viable = false;
                break;
              }
              res.push_back(rel);
            }
            if (viable && better(res, best_res)) {
              best = c;
              best_res = std::move(res);
            }
          }
        }
      }
    }
  }

  // Coordinate descent around the lattice optimum, same ordering.
  for (bool improved = true; improved && max_of(best_res) > 0;) {
    improved = false;
    for (int idx = 0; idx < 5; ++idx) {
      for (int delta : {-4, -2, -1, 1, 2, 4}) {
        CalibrationSet c = best;
        int& v = field(c, idx);
        v += delta;
        if (v < kBounds[idx].lo || v > kBounds[idx].hi) continue;
        std::vector<double> res = residuals_of(c, ordered);
        if (better(res, best_res)) {
          best = c;
          best_res = std::move(res);
          improved = true;
        }
      }
    }
  }

  CalibrationOutcome out;
  out.set = best;
  out.residuals = residuals_of(best, targets);
  out.max_rel_error = max_of(out.residuals);
  out.adequate = out.max_rel_error <= 0.5;
  return out;
}

CalibrationSet builtin_calibration() {
  // calibrate(default_calibration_targets()) result, frozen so reporting
  // paths need not re-run the search.
  return CalibrationSet{5, 5, 1, 2, 10};
}

}  // namespace tilesync
