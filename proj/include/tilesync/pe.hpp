#pragma once

#include <cstdint>
#include <vector>

#include "tilesync/noc.hpp"
#include "tilesync/program.hpp"

namespace tilesync {

// In-order execution of one PeProgram against the mesh. Every instruction
// pays instr_cost cycles of issue; memory operations then block until their
// response returns. R is the cycle the first barrier instruction executes,
// F the cycle after the barrier completes (spin success plus one
// instruction).
class PeCpu {
public:
  PeCpu(TileId self, int instr_cost, int poll_interval)
      : self_(self), instr_cost_(instr_cost), poll_interval_(poll_interval) {}

  // Begin executing `program` at `start` (a fresh barrier repetition).
  void arm(PeProgram program, Cycle start);

  // Advance: execute at most one instruction issue this cycle.
  void step(Cycle now, NocMesh& noc);

  // Response for this PE's single outstanding memory operation.
  void deliver(std::int64_t value, Cycle now);

  bool done() const { return done_; }
  TileId self() const { return self_; }
  // Next cycle this PE will act, or -1 when blocked on a response / done.
  Cycle next_action() const;

  const std::vector<Cycle>& request_cycles() const { return requests_; }
  const std::vector<Cycle>& resume_cycles() const { return resumes_; }

private:
  bool predicate_holds(const PeInstr& i, std::int64_t value) const;

  TileId self_;
  int instr_cost_;
  int poll_interval_;
  PeProgram prog_;
  size_t pc_ = 0;
  Cycle wake_at_ = 0;
  bool blocked_ = false;
  bool done_ = true;
  bool recorded_request_ = false;
  std::vector<Cycle> requests_;
  std::vector<Cycle> resumes_;
};

}  // namespace tilesync
