#include "tilesync/fsync_network.hpp"

#include <algorithm>
#include <cassert>

namespace tilesync {

void FsyncTile::arm(LevelMask lvl, Cycle first_issue, int repetitions) {
  lvl_ = lvl;
  next_issue_ = first_issue;
  reps_left_ = repetitions;
  waiting_ = false;
}

void FsyncTile::step(const RspWires& in, Cycle cycle) {
  next_out_ = Wires{};
  if (in.error && error_cycle_ < 0) error_cycle_ = cycle;

  if (waiting_) {
    if (in.wake) {
      waiting_ = false;
      resumes_.push_back(cycle + 1);  // first cycle after observing wake
      next_out_.ack = true;
      next_issue_ = cycle + 1;        // a back-to-back request may go out now
    }
  } else if (reps_left_ > 0 && cycle >= next_issue_) {
    requests_.push_back(cycle);
    next_out_.sync = true;
    next_out_.lvl = lvl_;
    waiting_ = true;
    --reps_left_;
  }
}

FsyncNetwork::FsyncNetwork(const SyncTree& tree, TraceFn trace)
    : tree_(tree),
      nodes_(tree.nodes.size()),
      parent_slot_(tree.nodes.size(), 0),
      tiles_(static_cast<size_t>(tree.k) * tree.k),
      trace_(std::move(trace)) {
  links_.reserve(tree_.nodes.size() * 2);
  for (const auto& n : tree_.nodes) {
    for (int slot = 0; slot < 2; ++slot) {
      links_.push_back(Link{DelayLine<UpWires>(n.child_regs[slot]),
                            DelayLine<RspWires>(n.child_regs[slot])});
      if (n.level > 1) parent_slot_[static_cast<size_t>(n.child[slot])] = slot;
    }
  }
}

FsyncNetwork::UpWires FsyncNetwork::child_up_now(int node_id, int slot) const {
  const TreeNode& n = tree_.node(node_id);
  if (n.level == 1) {
    const auto& w = tiles_[static_cast<size_t>(n.child[slot])].outputs();
    return UpWires{w.sync, w.lvl, w.ack};
  }
  const auto& out = nodes_[static_cast<size_t>(n.child[slot])].outputs();
  return UpWires{out.master_req.sync, out.master_req.lvl, out.master_ack};
}

void FsyncNetwork::step() {
  const size_t node_count = nodes_.size();

  // Inputs for this cycle, all read before anything advances.
  std::vector<FsyncNode::Inputs> ins(node_count);
  for (size_t id = 0; id < node_count; ++id) {
    const TreeNode& n = tree_.node(static_cast<int>(id));
    FsyncNode::Inputs& in = ins[id];
    for (int slot = 0; slot < 2; ++slot) {
      const Link& link = links_[id * 2 + static_cast<size_t>(slot)];
      const UpWires up = link.up.read(child_up_now(static_cast<int>(id), slot));
      in.slave[slot] = ReqWires{up.sync, up.lvl};
      in.slave_ack[slot] = up.ack;
      if (up.sync) {
        const int wires = 1 + static_cast<int>(is_one_hot(up.lvl));
        max_req_wires_ = std::max(max_req_wires_, wires);
      }
    }
    if (n.parent != kNoParent) {
      const Link& plink = links_[static_cast<size_t>(n.parent) * 2 +
                                 static_cast<size_t>(parent_slot_[id])];
      const RspWires down =
          plink.down.read(nodes_[static_cast<size_t>(n.parent)].outputs().rsp);
      in.master_wake = down.wake;
      in.master_error = down.error;
    }
  }

  std::vector<RspWires> tile_ins(tiles_.size());
  for (size_t t = 0; t < tiles_.size(); ++t) {
    const int leaf = tree_.leaf_of_tile[t];
    const TreeNode& n = tree_.node(leaf);
    const int slot = n.child[0] == static_cast<int>(t) ? 0 : 1;
    const Link& link =
        links_[static_cast<size_t>(leaf) * 2 + static_cast<size_t>(slot)];
    tile_ins[t] = link.down.read(nodes_[static_cast<size_t>(leaf)].outputs().rsp);
  }

  for (size_t id = 0; id < node_count; ++id) nodes_[id].step(ins[id]);
  for (size_t t = 0; t < tiles_.size(); ++t) tiles_[t].step(tile_ins[t], now_);

  // Pipeline stages consume this cycle's outputs, then everything commits.
  for (size_t id = 0; id < node_count; ++id) {
    for (int slot = 0; slot < 2; ++slot) {
      Link& link = links_[id * 2 + static_cast<size_t>(slot)];
      link.up.advance(child_up_now(static_cast<int>(id), slot));
      link.down.advance(nodes_[id].outputs().rsp);
    }
  }
  if (trace_) {
    for (size_t id = 0; id < node_count; ++id) {
      emit_node_trace(static_cast<int>(id), nodes_[id]);
    }
  }
  for (auto& node : nodes_) node.commit();
  for (auto& t : tiles_) t.commit();
  ++now_;
}

void FsyncNetwork::emit_node_trace(int id, const FsyncNode& n) {
  // One record per signal transition, stamped with the cycle it asserts.
  const FsyncNode::Outputs& before = n.outputs();
  const FsyncNode::Outputs& after = n.staged_outputs();
  const struct {
    const char* name;
    bool before, after;
  } sigs[] = {
      {"wake", before.rsp.wake, after.rsp.wake},
      {"error", before.rsp.error, after.rsp.error},
      {"master_sync", before.master_req.sync, after.master_req.sync},
      {"master_ack", before.master_ack, after.master_ack},
  };
  for (const auto& s : sigs) {
    if (s.before != s.after) {
      trace_("cycle=" + std::to_string(now_ + 1) + " node=" + std::to_string(id) +
             " signal=" + s.name + " value=" + std::to_string(s.after ? 1 : 0));
    }
  }
  if (n.staged_state().fsm != n.state().fsm) {
    trace_("cycle=" + std::to_string(now_ + 1) + " node=" + std::to_string(id) +
           " signal=fsm value=" + std::string(to_string(n.staged_state().fsm)));
  }
}

bool FsyncNetwork::quiescent() const {
  for (const auto& t : tiles_) {
    if (!t.done()) return false;
    if (!(t.outputs() == FsyncTile::Wires{})) return false;
  }
  for (const auto& n : nodes_) {
    if (!n.idle()) return false;
    const auto& o = n.outputs();
    if (o.rsp.wake || o.rsp.error || o.master_req.sync || o.master_ack) {
      return false;
    }
  }
  for (const auto& l : links_) {
    if (!l.up.holds_default() || !l.down.holds_default()) return false;
  }
  return true;
}

std::optional<int> FsyncNetwork::error_node() const {
  for (size_t id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].state().err_latched) return static_cast<int>(id);
  }
  return std::nullopt;
}

}  // namespace tilesync
