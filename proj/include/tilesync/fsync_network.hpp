#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "tilesync/fsync_node.hpp"
#include "tilesync/trace.hpp"
#include "tilesync/tree.hpp"

namespace tilesync {

using Cycle = std::int64_t;

// Fixed-depth shift register modeling pipeline stages on a link. Depth 0 is
// an ideal wire (the source's current value passes through).
template <typename T>
class DelayLine {
public:
  explicit DelayLine(int depth = 0) : depth_(depth) {
    q_.assign(static_cast<size_t>(depth_), T{});
  }
  const T& read(const T& source_now) const {
    return depth_ == 0 ? source_now : q_.front();
  }
  void advance(const T& source_now) {
    if (depth_ == 0) return;
    q_.push_back(source_now);
    q_.pop_front();
  }
  bool holds_default() const {
    for (const auto& v : q_) {
      if (!(v == T{})) return false;
    }
    return true;
  }
  int depth() const { return depth_; }

private:
  int depth_;
  std::deque<T> q_;
};

// Tile-side interface to the synchronization network. Issues a scheduled
// number of requests, acknowledges wakes one cycle after observing them, and
// records request / resume cycles per repetition.
class FsyncTile {
public:
  struct Wires {
    bool sync = false;
    LevelMask lvl;
    bool ack = false;
    friend bool operator==(const Wires&, const Wires&) = default;
  };

  void arm(LevelMask lvl, Cycle first_issue, int repetitions);
  void step(const RspWires& in, Cycle cycle);
  void commit() { out_ = next_out_; }

  const Wires& outputs() const { return out_; }
  bool done() const { return reps_left_ == 0 && !waiting_; }
  bool saw_error() const { return error_cycle_ >= 0; }
  Cycle error_cycle() const { return error_cycle_; }  // -1 when none seen
  const std::vector<Cycle>& request_cycles() const { return requests_; }
  const std::vector<Cycle>& resume_cycles() const { return resumes_; }

private:
  Wires out_, next_out_;
  LevelMask lvl_;
  Cycle next_issue_ = 0;
  int reps_left_ = 0;
  bool waiting_ = false;
  Cycle error_cycle_ = -1;
  std::vector<Cycle> requests_;
  std::vector<Cycle> resumes_;
};

// The wired tree: one FsyncNode per tree node plus per-link pipeline
// registers in both directions. Advances in lockstep, one call per cycle;
// within a cycle every input is taken from the previous cycle's outputs.
class FsyncNetwork {
public:
  FsyncNetwork(const SyncTree& tree, TraceFn trace = nullptr);

  FsyncTile& tile(int tile_idx) { return tiles_[static_cast<size_t>(tile_idx)]; }
  const FsyncTile& tile(int tile_idx) const {
    return tiles_[static_cast<size_t>(tile_idx)];
  }
  const SyncTree& tree() const { return tree_; }

  void step();
  Cycle now() const { return now_; }

  // All armed tiles resumed, every node back to idle, every wire and
  // pipeline stage deasserted.
  bool quiescent() const;

  // Node id of the first node holding a latched error, if any.
  std::optional<int> error_node() const;

  // Total asserted wires on a request channel must never exceed 2.
  int max_req_wires_seen() const { return max_req_wires_; }

private:
  struct UpWires {
    bool sync = false;
    LevelMask lvl;
    bool ack = false;
    friend bool operator==(const UpWires&, const UpWires&) = default;
  };

  struct Link {
    DelayLine<UpWires> up;
    DelayLine<RspWires> down;
  };

  UpWires child_up_now(int node_id, int slot) const;
  void emit_node_trace(int id, const FsyncNode& n);

  SyncTree tree_;
  std::vector<FsyncNode> nodes_;
  std::vector<Link> links_;        // 2 per node: node_id * 2 + slot
  std::vector<int> parent_slot_;   // which slot of the parent each node is
  std::vector<FsyncTile> tiles_;
  Cycle now_ = 0;
  int max_req_wires_ = 0;
  TraceFn trace_;
};

}  // namespace tilesync
