#pragma once

#include "tilesync/levels.hpp"

namespace tilesync {

// Upstream request channel: lvl is valid only on cycles where sync is high,
// so a transaction occupies at most two wires (sync + one lvl bit).
struct ReqWires {
  bool sync = false;
  LevelMask lvl;
};

// Downstream response channel.
struct RspWires {
  bool wake = false;
  bool error = false;
  friend bool operator==(const RspWires&, const RspWires&) = default;
};

enum class FsyncFsm { kIdle, kWaitPair, kWaitUp, kWake, kWaitAck };

const char* to_string(FsyncFsm s);

// Cycle-accurate model of one synchronization-tree node. Semantics are those
// of a synchronous Moore machine: outputs() holds the wires for the current
// cycle, step() computes the next cycle's state and wires from this cycle's
// inputs, commit() advances. One exception keeps the wake path at one cycle
// per node per direction: the wake output register is fed by the master wake
// input directly, not through the FSM register.
class FsyncNode {
public:
  struct Inputs {
    ReqWires slave[2];
    bool slave_ack[2] = {false, false};
    bool master_wake = false;
    bool master_error = false;
  };

  struct Outputs {
    RspWires rsp;          // fanned out to both slave ports
    ReqWires master_req;   // request propagated up (sync is a 1-cycle pulse)
    bool master_ack = false;  // 1-cycle pulse
  };

  struct State {
    FsyncFsm fsm = FsyncFsm::kIdle;
    bool seen_sync[2] = {false, false};
    bool seen_ack[2] = {false, false};
    LevelMask port_lvl[2];
    LevelMask sampled_lvl;   // captured from slave port 0
    bool propagated = false;  // request was forwarded to the parent
    bool err_latched = false;
    // Requests knocking while the node is busy wait here until it is idle.
    bool pending_sync[2] = {false, false};
    LevelMask pending_lvl[2];
  };

  void step(const Inputs& in);
  void commit();

  const Outputs& outputs() const { return out_; }
  const State& state() const { return state_; }
  // Values that will become visible at the next commit; used by tracing.
  const Outputs& staged_outputs() const { return next_out_; }
  const State& staged_state() const { return next_state_; }
  bool idle() const;

private:
  State state_, next_state_;
  Outputs out_, next_out_;
};

// Closed-form barrier latency for simultaneous arrivals: one cycle of request
// issue, one node traversal per level each way, one cycle of wake detection,
// plus two crossings of every pipeline register on the path.
inline int expected_barrier_latency(int level, int path_pipeline_regs) {
  return 2 * level + 2 + 2 * path_pipeline_regs;
}

}  // namespace tilesync
