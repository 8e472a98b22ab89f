#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace tilesync {

struct TileId {
  int x = 0;
  int y = 0;

  friend bool operator==(const TileId&, const TileId&) = default;
  friend auto operator<=>(const TileId&, const TileId&) = default;
};

inline int linear_index(TileId t, int k) { return t.y * k + t.x; }
inline TileId tile_from_index(int idx, int k) { return TileId{idx % k, idx / k}; }

enum class PipelineMode { kNone, kGeometric, kExplicitPerLink };

// Cycle costs of the modeled software instructions and NoC elements. These
// are free parameters fitted against reference measurements (see calibrate).
struct CalibrationSet {
  int instr_cost = 2;
  int poll_interval = 8;
  int hop_latency = 1;
  int router_latency = 1;
  int amo_service_latency = 2;

  friend bool operator==(const CalibrationSet&, const CalibrationSet&) = default;
};

struct MeshConfig {
  int k = 4;                  // tiles per mesh side, power of two in [2, 64]
  int hop_latency = 1;        // cycles per NoC link traversal
  int router_latency = 1;     // cycles per router traversal
  int amo_service_latency = 2;  // cycles per atomic op at a tile's AMO unit
  int instr_cost = 2;         // cycles per modeled baseline instruction
  int poll_interval = 8;      // cycles between remote flag polls
  PipelineMode pipeline_mode = PipelineMode::kNone;
  // Explicit per-link register counts, keyed "<node_id>.<child_slot>".
  // Consulted only in kExplicitPerLink mode, where every link must appear.
  std::map<std::string, int> explicit_regs;
  std::uint64_t seed = 1;

  CalibrationSet calibration() const {
    return {instr_cost, poll_interval, hop_latency, router_latency,
            amo_service_latency};
  }
  void apply(const CalibrationSet& c) {
    instr_cost = c.instr_cost;
    poll_interval = c.poll_interval;
    hop_latency = c.hop_latency;
    router_latency = c.router_latency;
    amo_service_latency = c.amo_service_latency;
  }
};

// Throws ConfigError when a field is out of contract.
void validate(const MeshConfig& cfg);

}  // namespace tilesync
