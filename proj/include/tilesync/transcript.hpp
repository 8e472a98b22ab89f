#pragma once

#include <string>
#include <vector>

#include "tilesync/engine.hpp"

namespace tilesync {

// Event-order record of one barrier instance over one domain. Deliberately
// knows nothing about the simulator: verdicts are computed from cycles only.
struct BarrierTranscript {
  struct Event {
    enum class Kind { kRequest, kResume };
    Cycle cycle = 0;
    int pe = 0;
    Kind kind = Kind::kRequest;
  };
  std::vector<Event> events;
};

struct OrderVerdict {
  bool pass = false;
  int violating_pe = -1;
  Cycle violating_cycle = -1;
};

BarrierTranscript transcript_of(const DomainMetrics& dm);

// PASS iff every resume happens strictly after the last request. Each PE
// must contribute exactly one request and one resume; anything else is a
// malformed transcript (ConfigError).
OrderVerdict check_barrier_order(const BarrierTranscript& t);

struct CheckReport {
  int scenarios = 0;
  std::vector<std::string> failures;
  std::string text;
  bool ok() const { return failures.empty(); }
};

// Drives every tree node of a small mesh as a domain root under a grid of
// arrival skews, checks barrier order everywhere, and checks the closed-form
// latency on the zero-skew runs.
CheckReport exhaustive_small_check(int k);

}  // namespace tilesync
