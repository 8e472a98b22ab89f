#include "tilesync/levels.hpp"

#include <bit>

#include "tilesync/errors.hpp"

namespace tilesync {

namespace {

bool is_pow2(int k) { return k > 0 && (k & (k - 1)) == 0; }

int log2i(int k) {
  int l = 0;
  while ((1 << l) < k) ++l;
  return l;
}

}  // namespace

int level_count(int k) {
  if (!is_pow2(k) || k < 2) {
    throw ConfigError("k must be a power of two >= 2, got " + std::to_string(k));
  }
  return 2 * log2i(k);
}

LevelMask encode_level(int level, int k) {
  const int width = level_count(k);
  if (level < 1 || level > width) {
    throw ConfigError("level " + std::to_string(level) + " out of range [1, " +
                      std::to_string(width) + "] for k=" + std::to_string(k));
  }
  return LevelMask{1u << (level - 1), width};
}

LevelMask shed_level(LevelMask mask) {
  if (mask.width < 2) {
    throw ProtocolError("level mask too narrow to shed");
  }
  if (mask.lsb()) {
    throw ProtocolError("shed_level on a mask whose lsb is set: synchronization "
                        "terminates at this level");
  }
  return LevelMask{mask.bits >> 1, mask.width - 1};
}

int mask_level(LevelMask mask) {
  if (mask.bits == 0) return 0;
  return std::countr_zero(mask.bits) + 1;
}

bool is_one_hot(LevelMask mask) {
  return mask.bits != 0 && (mask.bits & (mask.bits - 1)) == 0 &&
         mask_level(mask) <= mask.width;
}

}  // namespace tilesync
