#include <random>

#include "doctest.h"
#include "tilesync/engine.hpp"
#include "tilesync/errors.hpp"
#include "tilesync/fsync_node.hpp"
#include "tilesync/tree.hpp"

using namespace tilesync;

namespace {

MeshConfig cfg_k(int k) {
  MeshConfig cfg;
  cfg.k = k;
  return cfg;
}

Scenario fsync_scenario(int level = 0) {
  Scenario sc;
  sc.scheme = Scheme::kFsync;
  sc.level = level;
  return sc;
}

}  // namespace

TEST_CASE("root barriers hit the reference latencies") {
  CHECK(run(fsync_scenario(4), cfg_k(4)).front().s_hat == 10);
  Scenario pipelined;
  pipelined.scheme = Scheme::kFsyncPipeline;
  CHECK(run(pipelined, cfg_k(16)).front().s_hat == 34);
}

TEST_CASE("every leaf pair synchronizes in 4 cycles, independently") {
  for (int k : {2, 4, 8}) {
    const RunMetrics m = run(fsync_scenario(1), cfg_k(k)).front();
    CHECK(m.participants == k * k);
    for (const auto& d : m.domains) {
      CHECK(d.members.size() == 2);
      CHECK(d.s_hat == 4);
    }
  }
}

TEST_CASE("concurrent domains of mixed levels") {
  // 4x4 split: the 8-tile upper half, the lower-left 2x2 block, and two
  // lower-right pairs.
  const std::vector<DomainSpec> split = {
      {TileId{0, 0}, 3},
      {TileId{0, 2}, 2},
      {TileId{2, 2}, 1},
      {TileId{2, 3}, 1},
  };
  Scenario sc = fsync_scenario();
  const auto domains = run_concurrent_domains(split, sc, cfg_k(4));
  REQUIRE(domains.size() == 4);
  CHECK(domains[0].members.size() == 8);
  CHECK(domains[0].s_hat == 8);
  CHECK(domains[1].members.size() == 4);
  CHECK(domains[1].s_hat == 6);
  CHECK(domains[2].s_hat == 4);
  CHECK(domains[3].s_hat == 4);
}

TEST_CASE("overlapping concurrent domains are rejected") {
  Scenario sc = fsync_scenario();
  sc.domains = {{TileId{0, 0}, 2}, {TileId{1, 0}, 1}};
  CHECK_THROWS_AS(run(sc, cfg_k(4)), ConfigError);
}

TEST_CASE("the metric is invariant to a common shift of all arrivals") {
  auto with_offset = [](Cycle offset) {
    Scenario sc = fsync_scenario(2);
    sc.skew.kind = SkewModel::Kind::kFixed;
    sc.skew.fixed.assign(16, 0);
    const Cycle base[16] = {0, 3, 1, 7, 2, 2, 9, 0, 5, 5, 5, 5, 1, 0, 4, 8};
    for (int i = 0; i < 16; ++i) sc.skew.fixed[static_cast<size_t>(i)] = base[i] + offset;
    return run(sc, cfg_k(4)).front().s_hat;
  };
  CHECK(with_offset(0) == with_offset(137));
}

TEST_CASE("overhead grows strictly with the level") {
  for (int k : {4, 8}) {
    Cycle prev = 0;
    for (int level = 1; level <= level_count(k); ++level) {
      const Cycle s = run(fsync_scenario(level), cfg_k(k)).front().s_hat;
      CHECK(s > prev);
      prev = s;
    }
  }
}

TEST_CASE("skewed barriers still match the closed form") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Scenario sc = fsync_scenario(3);
    sc.skew.kind = SkewModel::Kind::kUniformRandom;
    sc.skew.max_skew = 90;
    MeshConfig cfg = cfg_k(8);
    cfg.seed = rng();
    const RunMetrics m = run(sc, cfg).front();
    for (const auto& d : m.domains) {
      CHECK(d.s_hat == expected_barrier_latency(3, 0));
    }
  }
}

TEST_CASE("mismatched sibling levels abort with the offending node") {
  Scenario sc = fsync_scenario(2);
  sc.mismatch = MismatchSpec{TileId{1, 0}, 1};  // sibling of (0,0) goes rogue
  CHECK_THROWS_WITH_AS(run(sc, cfg_k(4)),
                       doctest::Contains("level mismatch at node"), RunError);
}

TEST_CASE("runs that cannot settle hit the cycle budget guard") {
  Scenario sc = fsync_scenario();
  sc.cycle_budget = 3;  // far below the 10-cycle barrier
  CHECK_THROWS_WITH_AS(run(sc, cfg_k(4)), doctest::Contains("cycle budget"),
                       RunError);
}

TEST_CASE("same seed, same rows; the seed is recorded in the metrics") {
  Scenario sc = fsync_scenario(2);
  sc.skew.kind = SkewModel::Kind::kUniformRandom;
  sc.skew.max_skew = 40;
  MeshConfig cfg = cfg_k(4);
  cfg.seed = 424242;
  const RunMetrics a = run(sc, cfg).front();
  const RunMetrics b = run(sc, cfg).front();
  CHECK(a.seed == 424242);
  CHECK(a.request_cycles == b.request_cycles);
  CHECK(a.resume_cycles == b.resume_cycles);
  CHECK(a.s_hat == b.s_hat);
}

TEST_CASE("speedup truncates like the reference table") {
  CHECK(compute_speedup(347, 10) == 34);
  CHECK(compute_speedup(1462, 34) == 43);
  CHECK(compute_speedup(79, 4) == 19);
  CHECK(compute_speedup(10, 10) == 1);
}

TEST_CASE("fixed skew list must cover every participant") {
  Scenario sc = fsync_scenario();
  sc.skew.kind = SkewModel::Kind::kFixed;
  sc.skew.fixed = {0, 1, 2};  // 16 needed
  CHECK_THROWS_AS(run(sc, cfg_k(4)), ConfigError);
}
