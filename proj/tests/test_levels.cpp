#include "doctest.h"
#include "tilesync/errors.hpp"
#include "tilesync/levels.hpp"

using namespace tilesync;

TEST_CASE("level mask width is 2*log2(k)") {
  CHECK(level_count(2) == 2);
  CHECK(level_count(4) == 4);
  CHECK(level_count(16) == 8);
  CHECK(level_count(64) == 12);
  CHECK_THROWS_AS(level_count(3), ConfigError);
  CHECK_THROWS_AS(level_count(1), ConfigError);
  CHECK_THROWS_AS(level_count(0), ConfigError);
}

TEST_CASE("encode_level produces one-hot masks") {
  CHECK(encode_level(1, 16) == LevelMask{0b00000001, 8});
  CHECK(encode_level(8, 16) == LevelMask{0b10000000, 8});
  CHECK(encode_level(3, 4) == LevelMask{0b0100, 4});
  CHECK_THROWS_AS(encode_level(0, 16), ConfigError);
  CHECK_THROWS_AS(encode_level(9, 16), ConfigError);
}

TEST_CASE("shed_level drops the lsb wire") {
  CHECK(shed_level(LevelMask{0b0100, 4}) == LevelMask{0b010, 3});
  CHECK(shed_level(LevelMask{0b10000000, 8}) == LevelMask{0b1000000, 7});
  CHECK_THROWS_AS(shed_level(LevelMask{0b0001, 4}), ProtocolError);
}

TEST_CASE("encode then shed level-1 times lands on the lsb") {
  for (int k : {2, 4, 8, 16, 32, 64}) {
    for (int level = 1; level <= level_count(k); ++level) {
      LevelMask m = encode_level(level, k);
      for (int i = 1; i < level; ++i) m = shed_level(m);
      CHECK(m.lsb());
      CHECK(m.width == level_count(k) - (level - 1));
      CHECK(is_one_hot(m));
    }
  }
}

TEST_CASE("mask_level inverts encode_level") {
  for (int level = 1; level <= 8; ++level) {
    CHECK(mask_level(encode_level(level, 16)) == level);
  }
  CHECK(mask_level(LevelMask{}) == 0);
}
