#pragma once

#include <cstdint>

namespace tilesync {

// One-hot synchronization-level word. A fresh request in a k x k mesh is
// 2*log2(k) wires wide; every hop up the tree drops the wire that can no
// longer fire, so width shrinks by one per level climbed.
struct LevelMask {
  std::uint32_t bits = 0;
  int width = 0;

  bool lsb() const { return (bits & 1u) != 0; }
  bool empty() const { return bits == 0; }

  friend bool operator==(const LevelMask&, const LevelMask&) = default;
};

// Tree depth (= full mask width) for a k x k mesh.
int level_count(int k);

// One-hot mask selecting `level` (1-based, 1 = leaf pair, level_count(k) =
// whole mesh). Throws ConfigError for out-of-range levels.
LevelMask encode_level(int level, int k);

// Drop the lsb wire when propagating a request one level up. The lsb must be
// clear: a set lsb means synchronization should have terminated here, and
// shedding it would silently lose the barrier (ProtocolError).
LevelMask shed_level(LevelMask mask);

// Index of the set bit + 1, i.e. the level a well-formed mask requests at the
// tree depth it currently sits. 0 for an empty mask.
int mask_level(LevelMask mask);

bool is_one_hot(LevelMask mask);

}  // namespace tilesync
