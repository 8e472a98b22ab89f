#include "tilesync/fsync_node.hpp"

namespace tilesync {

const char* to_string(FsyncFsm s) {
  switch (s) {
    case FsyncFsm::kIdle: return "IDLE";
    case FsyncFsm::kWaitPair: return "WAIT_PAIR";
    case FsyncFsm::kWaitUp: return "WAIT_UP";
    case FsyncFsm::kWake: return "WAKE";
    case FsyncFsm::kWaitAck: return "WAIT_ACK";
  }
  return "?";
}

bool FsyncNode::idle() const {
  return state_.fsm == FsyncFsm::kIdle && !state_.seen_sync[0] &&
         !state_.seen_sync[1] && !state_.pending_sync[0] &&
         !state_.pending_sync[1] && !state_.err_latched;
}

void FsyncNode::step(const Inputs& in) {
  State ns = state_;
  Outputs no;  // pulses default to deasserted
  bool acks_done = false;

  const bool accepting =
      ns.fsm == FsyncFsm::kIdle || ns.fsm == FsyncFsm::kWaitPair;

  for (int p = 0; p < 2; ++p) {
    if (!in.slave[p].sync) continue;
    if (!is_one_hot(in.slave[p].lvl)) {
      ns.err_latched = true;
      continue;
    }
    if (accepting) {
      if (ns.seen_sync[p]) {
        // Two requests on one port within a single barrier.
        ns.err_latched = true;
      } else {
        ns.seen_sync[p] = true;
        ns.port_lvl[p] = in.slave[p].lvl;
      }
    } else {
      // Busy with the previous barrier; the port holds the request until
      // the node returns to idle.
      ns.pending_sync[p] = true;
      ns.pending_lvl[p] = in.slave[p].lvl;
    }
  }

  switch (ns.fsm) {
    case FsyncFsm::kIdle:
    case FsyncFsm::kWaitPair:
      if (ns.seen_sync[0] && ns.seen_sync[1]) {
        if (ns.port_lvl[0] != ns.port_lvl[1]) {
          ns.err_latched = true;  // level mismatch between sibling requesters
        } else {
          ns.sampled_lvl = ns.port_lvl[0];
          if (ns.sampled_lvl.lsb()) {
            ns.fsm = FsyncFsm::kWake;
            ns.propagated = false;
          } else {
            ns.fsm = FsyncFsm::kWaitUp;
            ns.propagated = true;
            no.master_req.sync = true;
            no.master_req.lvl = shed_level(ns.sampled_lvl);
          }
        }
      } else if (ns.seen_sync[0] || ns.seen_sync[1]) {
        ns.fsm = FsyncFsm::kWaitPair;
      }
      break;

    case FsyncFsm::kWaitUp:
      if (in.master_wake) ns.fsm = FsyncFsm::kWake;
      break;

    case FsyncFsm::kWake:
    case FsyncFsm::kWaitAck: {
      for (int p = 0; p < 2; ++p) {
        if (in.slave_ack[p]) ns.seen_ack[p] = true;
      }
      acks_done = ns.seen_ack[0] && ns.seen_ack[1];
      if (acks_done) {
        if (ns.propagated) no.master_ack = true;
        ns.fsm = FsyncFsm::kIdle;
        ns.seen_sync[0] = ns.seen_sync[1] = false;
        ns.seen_ack[0] = ns.seen_ack[1] = false;
        ns.port_lvl[0] = ns.port_lvl[1] = LevelMask{};
        ns.sampled_lvl = LevelMask{};
        ns.propagated = false;
        for (int p = 0; p < 2; ++p) {
          if (ns.pending_sync[p]) {
            ns.seen_sync[p] = true;
            ns.port_lvl[p] = ns.pending_lvl[p];
            ns.pending_sync[p] = false;
            ns.pending_lvl[p] = LevelMask{};
            ns.fsm = FsyncFsm::kWaitPair;  // completes next cycle if paired
          }
        }
      } else if (ns.fsm == FsyncFsm::kWake) {
        ns.fsm = FsyncFsm::kWaitAck;
      }
      break;
    }
  }

  // Wake output register. Fed by the master wake input directly (one cycle
  // down per node) or, at the node where the barrier terminates, by the FSM
  // having reached WAKE (the turnaround's second cycle). Drops the cycle the
  // final ack is captured so a back-to-back barrier never sees a stale wake.
  const bool in_wake_phase = state_.fsm == FsyncFsm::kWake ||
                             state_.fsm == FsyncFsm::kWaitAck;
  const bool forwarding = state_.fsm == FsyncFsm::kWaitUp || in_wake_phase;
  no.rsp.wake = !acks_done && ((in.master_wake && forwarding) ||
                               (in_wake_phase && !state_.propagated));

  // Error is terminal for the barrier; assert downstream immediately and
  // keep it up. Parent errors fan out to both slave ports unconditionally.
  no.rsp.error = ns.err_latched || in.master_error;

  next_state_ = ns;
  next_out_ = no;
}

void FsyncNode::commit() {
  state_ = next_state_;
  out_ = next_out_;
}

}  // namespace tilesync
