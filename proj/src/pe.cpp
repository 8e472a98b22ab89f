#include "tilesync/pe.hpp"

#include <cassert>

namespace tilesync {

void PeCpu::arm(PeProgram program, Cycle start) {
  assert(!program.instrs.empty() &&
         program.instrs.back().op == PeInstr::Op::kBarrierDone);
  prog_ = std::move(program);
  pc_ = 0;
  wake_at_ = start;
  blocked_ = false;
  done_ = false;
  recorded_request_ = false;
}

bool PeCpu::predicate_holds(const PeInstr& i, std::int64_t value) const {
  switch (i.pred) {
    case PeInstr::Pred::kEq: return value == i.pred_value;
    case PeInstr::Pred::kGe: return value >= i.pred_value;
  }
  return false;
}

void PeCpu::step(Cycle now, NocMesh& noc) {
  if (done_ || blocked_ || now < wake_at_) return;

  const PeInstr& i = prog_.instrs[pc_];
  if (!recorded_request_) {
    requests_.push_back(now);
    recorded_request_ = true;
  }

  switch (i.op) {
    case PeInstr::Op::kCompute:
      wake_at_ = now + i.cost;
      ++pc_;
      break;
    case PeInstr::Op::kFetchAdd:
      noc.submit(NocMessage::Kind::kAmoFetchAdd, self_, i.target, i.var,
                 i.value, now + instr_cost_);
      blocked_ = true;
      break;
    case PeInstr::Op::kLoad:
    case PeInstr::Op::kSpinUntil:
      noc.submit(NocMessage::Kind::kLoad, self_, i.target, i.var, 0,
                 now + instr_cost_);
      blocked_ = true;
      break;
    case PeInstr::Op::kStore:
      noc.submit(NocMessage::Kind::kStore, self_, i.target, i.var, i.value,
                 now + instr_cost_);
      blocked_ = true;
      break;
    case PeInstr::Op::kBarrierDone:
      resumes_.push_back(now + instr_cost_);
      done_ = true;
      break;
  }
}

void PeCpu::deliver(std::int64_t value, Cycle now) {
  assert(blocked_);
  blocked_ = false;
  const PeInstr& i = prog_.instrs[pc_];
  if (i.op == PeInstr::Op::kSpinUntil && !predicate_holds(i, value)) {
    wake_at_ = now + poll_interval_;  // re-poll
    return;
  }
  ++pc_;
  wake_at_ = now;
}

Cycle PeCpu::next_action() const {
  if (done_ || blocked_) return -1;
  return wake_at_;
}

}  // namespace tilesync
