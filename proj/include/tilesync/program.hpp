#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tilesync/mesh_config.hpp"

namespace tilesync {

// Abstract instructions executed by a modeled PE. Memory operations block
// until their response; spin_until re-polls its variable every poll_interval
// cycles until the predicate holds.
struct PeInstr {
  enum class Op { kCompute, kFetchAdd, kLoad, kStore, kSpinUntil, kBarrierDone };
  enum class Pred { kEq, kGe };

  Op op = Op::kCompute;
  int cost = 0;          // kCompute only
  TileId target;         // memory operations
  std::string var;
  std::int64_t value = 0;  // store value / fetch_add addend
  Pred pred = Pred::kEq;   // kSpinUntil
  std::int64_t pred_value = 0;

  static PeInstr compute(int cost);
  static PeInstr fetch_add(TileId target, std::string var, std::int64_t addend = 1);
  static PeInstr load(TileId target, std::string var);
  static PeInstr store(TileId target, std::string var, std::int64_t value);
  static PeInstr spin_eq(TileId target, std::string var, std::int64_t value);
  static PeInstr spin_ge(TileId target, std::string var, std::int64_t value);
  static PeInstr barrier_done();
};

struct PeProgram {
  std::vector<PeInstr> instrs;  // always terminated by kBarrierDone
};

// Centralized barrier: every other tile bumps an arrival counter at the
// master (default (0,0)) and then polls the master's release flag; the
// master spins on the counter and publishes the release. `epoch` makes the
// flags sense-reversing so barriers can run back to back.
PeProgram build_naive_program(int width, int height, TileId tile,
                              std::int64_t epoch = 1,
                              TileId master = TileId{0, 0}, int instr_cost = 1);

// Two-phase barrier: rows synchronize at their column-0 leader, leaders
// synchronize down column 0, and the release retraces the same path. Extra
// compute instructions model the role and phase bookkeeping this scheme
// needs. With a single row there is no second dimension and the program
// degenerates to the centralized one.
PeProgram build_xy_program(int width, int height, TileId tile,
                           std::int64_t epoch = 1, int instr_cost = 1);

}  // namespace tilesync
