#pragma once

namespace tilesync {

// Reference synchronization overheads (cycles) measured in cycle-accurate
// RTL simulation of the modeled platform (16 KiB instruction caches,
// pre-heated). Used for reporting columns and tolerance checks only; never
// fed back into the simulation.
struct ReferenceRow {
  const char* label;
  bool neighbor;
  int k;
  int fsync;
  int fsync_pipeline;
  int naive;
  int xy;
  int speedup;  // best AMO over pipelined tree barrier, truncated

  int best_amo() const { return naive < xy ? naive : xy; }
};

inline constexpr ReferenceRow kReferenceTable[] = {
    {"Neighbor", true, 2, 4, 4, 79, 79, 19},
    {"2x2", false, 2, 6, 6, 119, 219, 19},
    {"4x4", false, 4, 10, 10, 512, 347, 34},
    {"8x8", false, 8, 14, 18, 2488, 614, 34},
    {"16x16", false, 16, 18, 34, 13961, 1462, 43},
};

inline constexpr int kReferenceRows = 5;

}  // namespace tilesync
