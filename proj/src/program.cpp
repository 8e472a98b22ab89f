#include "tilesync/program.hpp"

namespace tilesync {

namespace {

// Instruction counts of the fixed bookkeeping around each barrier flavor:
// function entry/exit and sense handling (both schemes), plus the role and
// phase resolution only the two-phase scheme needs.
constexpr int kEpilogueInstrs = 1;
constexpr int kXySetupInstrs = 2;
constexpr int kXyPhaseSwitchInstrs = 1;

}  // namespace

PeInstr PeInstr::compute(int cost) {
  PeInstr i;
  i.op = Op::kCompute;
  i.cost = cost;
  return i;
}

PeInstr PeInstr::fetch_add(TileId target, std::string var, std::int64_t addend) {
  PeInstr i;
  i.op = Op::kFetchAdd;
  i.target = target;
  i.var = std::move(var);
  i.value = addend;
  return i;
}

PeInstr PeInstr::load(TileId target, std::string var) {
  PeInstr i;
  i.op = Op::kLoad;
  i.target = target;
  i.var = std::move(var);
  return i;
}

PeInstr PeInstr::store(TileId target, std::string var, std::int64_t value) {
  PeInstr i;
  i.op = Op::kStore;
  i.target = target;
  i.var = std::move(var);
  i.value = value;
  return i;
}

PeInstr PeInstr::spin_eq(TileId target, std::string var, std::int64_t value) {
  PeInstr i;
  i.op = Op::kSpinUntil;
  i.target = target;
  i.var = std::move(var);
  i.pred = Pred::kEq;
  i.pred_value = value;
  return i;
}

PeInstr PeInstr::spin_ge(TileId target, std::string var, std::int64_t value) {
  PeInstr i;
  i.op = Op::kSpinUntil;
  i.target = target;
  i.var = std::move(var);
  i.pred = Pred::kGe;
  i.pred_value = value;
  return i;
}

PeInstr PeInstr::barrier_done() {
  PeInstr i;
  i.op = Op::kBarrierDone;
  return i;
}

PeProgram build_naive_program(int width, int height, TileId tile,
                              std::int64_t epoch, TileId master,
                              int instr_cost) {
  const std::int64_t others = static_cast<std::int64_t>(width) * height - 1;
  PeProgram p;
  if (tile == master) {
    p.instrs.push_back(PeInstr::spin_eq(master, "bar_arrive", epoch * others));
    p.instrs.push_back(PeInstr::store(master, "bar_release", epoch));
  } else {
    p.instrs.push_back(PeInstr::fetch_add(master, "bar_arrive"));
    p.instrs.push_back(PeInstr::spin_ge(master, "bar_release", epoch));
  }
  // Sense flip and barrier-routine return before the next real instruction.
  p.instrs.push_back(PeInstr::compute(kEpilogueInstrs * instr_cost));
  p.instrs.push_back(PeInstr::barrier_done());
  return p;
}

PeProgram build_xy_program(int width, int height, TileId tile,
                           std::int64_t epoch, int instr_cost) {
  const TileId row_leader{0, tile.y};
  const TileId global_leader{0, 0};
  const std::int64_t row_others = width - 1;
  const std::int64_t col_others = height - 1;
  const bool two_phase = height > 1;

  PeProgram p;
  // The two-phase scheme pays for its bookkeeping: every participant
  // resolves its role and leader addresses up front, and leaders switch
  // phases. A single row has no second dimension and none of this overhead.
  if (two_phase) {
    p.instrs.push_back(PeInstr::compute(kXySetupInstrs * instr_cost));
  }
  if (tile.x != 0) {
    p.instrs.push_back(PeInstr::fetch_add(row_leader, "row_arrive"));
    p.instrs.push_back(PeInstr::spin_ge(row_leader, "row_release", epoch));
  } else if (!two_phase || tile.y != 0) {
    p.instrs.push_back(PeInstr::spin_eq(row_leader, "row_arrive", epoch * row_others));
    if (two_phase) {
      p.instrs.push_back(PeInstr::compute(kXyPhaseSwitchInstrs * instr_cost));
      p.instrs.push_back(PeInstr::fetch_add(global_leader, "col_arrive"));
      p.instrs.push_back(PeInstr::spin_ge(global_leader, "col_release", epoch));
    }
    p.instrs.push_back(PeInstr::store(row_leader, "row_release", epoch));
  } else {
    p.instrs.push_back(PeInstr::spin_eq(global_leader, "row_arrive", epoch * row_others));
    p.instrs.push_back(PeInstr::compute(kXyPhaseSwitchInstrs * instr_cost));
    p.instrs.push_back(PeInstr::spin_eq(global_leader, "col_arrive", epoch * col_others));
    p.instrs.push_back(PeInstr::store(global_leader, "col_release", epoch));
    p.instrs.push_back(PeInstr::store(global_leader, "row_release", epoch));
  }
  p.instrs.push_back(PeInstr::compute(kEpilogueInstrs * instr_cost));
  p.instrs.push_back(PeInstr::barrier_done());
  return p;
}

}  // namespace tilesync
