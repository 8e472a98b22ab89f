#include "doctest.h"
#include "tilesync/fsync_node.hpp"
#include "tilesync/levels.hpp"

using namespace tilesync;

namespace {

FsyncNode::Inputs both_sync(LevelMask lvl) {
  FsyncNode::Inputs in;
  in.slave[0] = {true, lvl};
  in.slave[1] = {true, lvl};
  return in;
}

void tick(FsyncNode& n, const FsyncNode::Inputs& in = {}) {
  n.step(in);
  n.commit();
}

}  // namespace

TEST_CASE("pair arriving together wakes after the two turnaround cycles") {
  FsyncNode n;
  const LevelMask here = encode_level(1, 2);

  tick(n, both_sync(here));
  CHECK(n.state().fsm == FsyncFsm::kWake);
  CHECK_FALSE(n.outputs().rsp.wake);
  CHECK_FALSE(n.outputs().master_req.sync);  // local barrier, nothing goes up

  tick(n);
  CHECK(n.outputs().rsp.wake);
  CHECK_FALSE(n.outputs().master_req.sync);
}

TEST_CASE("barrier waits for the last arrival") {
  FsyncNode n;
  const LevelMask here = encode_level(1, 2);
  FsyncNode::Inputs only_a;
  only_a.slave[0] = {true, here};

  tick(n, only_a);
  CHECK(n.state().fsm == FsyncFsm::kWaitPair);
  for (int i = 0; i < 5; ++i) {
    tick(n);
    CHECK(n.state().fsm == FsyncFsm::kWaitPair);
    CHECK_FALSE(n.outputs().rsp.wake);
  }

  FsyncNode::Inputs only_b;
  only_b.slave[1] = {true, here};
  tick(n, only_b);  // second arrival
  CHECK(n.state().fsm == FsyncFsm::kWake);
  tick(n);
  CHECK(n.outputs().rsp.wake);
}

TEST_CASE("level mismatch raises error on both ports within one cycle") {
  FsyncNode n;
  FsyncNode::Inputs in;
  in.slave[0] = {true, encode_level(1, 2)};
  in.slave[1] = {true, encode_level(2, 2)};
  tick(n, in);
  CHECK(n.state().err_latched);
  CHECK(n.outputs().rsp.error);
  CHECK_FALSE(n.outputs().rsp.wake);
  tick(n);
  CHECK_FALSE(n.outputs().rsp.wake);  // error is terminal, no wake ever
  CHECK(n.outputs().rsp.error);
}

TEST_CASE("non-local level propagates up with the lsb shed") {
  FsyncNode n;
  const LevelMask up = encode_level(2, 4);  // 0b0010, width 4

  tick(n, both_sync(up));
  CHECK(n.state().fsm == FsyncFsm::kWaitUp);
  CHECK(n.outputs().master_req.sync);
  CHECK(n.outputs().master_req.lvl == LevelMask{0b001, 3});

  tick(n);
  CHECK_FALSE(n.outputs().master_req.sync);  // one-cycle pulse
  CHECK_FALSE(n.outputs().rsp.wake);

  FsyncNode::Inputs wake_in;
  wake_in.master_wake = true;
  tick(n, wake_in);
  CHECK(n.outputs().rsp.wake);  // one cycle down through the node
  CHECK(n.state().fsm == FsyncFsm::kWake);

  // Acks from both children: ack to parent, wake drops, node resets.
  FsyncNode::Inputs acks = wake_in;
  acks.slave_ack[0] = acks.slave_ack[1] = true;
  tick(n, acks);
  CHECK(n.outputs().master_ack);
  CHECK_FALSE(n.outputs().rsp.wake);
  CHECK(n.state().fsm == FsyncFsm::kIdle);
  CHECK_FALSE(n.state().seen_sync[0]);
  CHECK_FALSE(n.state().seen_ack[0]);
}

TEST_CASE("acks may arrive in different cycles") {
  FsyncNode n;
  tick(n, both_sync(encode_level(1, 2)));
  tick(n);  // wake out
  FsyncNode::Inputs ack0;
  ack0.slave_ack[0] = true;
  tick(n, ack0);
  CHECK(n.state().fsm == FsyncFsm::kWaitAck);
  CHECK(n.outputs().rsp.wake);  // still waiting on the other ack
  FsyncNode::Inputs ack1;
  ack1.slave_ack[1] = true;
  tick(n, ack1);
  CHECK(n.state().fsm == FsyncFsm::kIdle);
  CHECK_FALSE(n.outputs().rsp.wake);
}

TEST_CASE("a request knocking while busy is held until the node is idle") {
  FsyncNode n;
  const LevelMask here = encode_level(1, 2);
  tick(n, both_sync(here));
  tick(n);  // wake asserted

  // Port 0 already requests the next barrier while acks are outstanding.
  FsyncNode::Inputs early;
  early.slave[0] = {true, here};
  early.slave_ack[0] = true;
  early.slave_ack[1] = true;
  tick(n, early);
  CHECK(n.state().fsm == FsyncFsm::kWaitPair);
  CHECK(n.state().seen_sync[0]);
  CHECK_FALSE(n.state().seen_sync[1]);

  FsyncNode::Inputs late;
  late.slave[1] = {true, here};
  tick(n, late);
  CHECK(n.state().fsm == FsyncFsm::kWake);
  tick(n);
  CHECK(n.outputs().rsp.wake);
}

TEST_CASE("parent error fans out to the slave ports") {
  FsyncNode n;
  tick(n, both_sync(encode_level(2, 4)));
  FsyncNode::Inputs err_in;
  err_in.master_error = true;
  tick(n, err_in);
  CHECK(n.outputs().rsp.error);
}
