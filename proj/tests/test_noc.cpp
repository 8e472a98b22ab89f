#include <algorithm>
#include <random>

#include "doctest.h"
#include "tilesync/noc.hpp"

using namespace tilesync;

namespace {

// Minimal client: remembers every response per tile.
struct Capture {
  struct Rx {
    std::int64_t value;
    Cycle cycle;
  };
  std::vector<std::vector<Rx>> rx;
  explicit Capture(int tiles) : rx(static_cast<size_t>(tiles)) {}
  NocMesh::ResponseFn fn(int width) {
    return [this, width](TileId pe, std::int64_t v, Cycle now) {
      rx[static_cast<size_t>(pe.y * width + pe.x)].push_back({v, now});
    };
  }
};

void run_until_idle(NocMesh& noc, Cycle from = 0, Cycle limit = 100000) {
  for (Cycle c = from; c <= limit; ++c) {
    noc.begin_cycle(c);
    noc.end_cycle(c);
    if (noc.idle()) return;
  }
  REQUIRE(false);
}

}  // namespace

TEST_CASE("XY routes take the full X displacement first") {
  CHECK(route({0, 0}, {3, 0}) ==
        std::vector<Dir>{Dir::kEast, Dir::kEast, Dir::kEast});
  CHECK(route({0, 0}, {0, 0}).empty());
  CHECK(route({1, 2}, {3, 0}) ==
        std::vector<Dir>{Dir::kEast, Dir::kEast, Dir::kNorth, Dir::kNorth});
}

TEST_CASE("uncontended delivery time is hops times per-hop cost") {
  Capture cap(16);
  NocMesh noc(4, 4, 1, 1, 1, nullptr);
  noc.set_response_handler(cap.fn(4));
  // 3 hops each way, service 1: response lands at 3*2 + 1 + 3*2 = 13.
  noc.submit(NocMessage::Kind::kLoad, {0, 0}, {3, 0}, "v", 0, 0);
  run_until_idle(noc);
  REQUIRE(cap.rx[0].size() == 1);
  CHECK(cap.rx[0][0].cycle == 13);
}

TEST_CASE("two messages contending for one link: loser delayed one cycle") {
  Capture cap(9);
  NocMesh noc(3, 1, 1, 1, 1, nullptr);
  noc.set_response_handler(cap.fn(3));
  // Both want the (1,0) -> (2,0) link at cycle 2. The through message wins
  // arbitration (its input port scans first); its round trip is unchanged.
  noc.submit(NocMessage::Kind::kLoad, {0, 0}, {2, 0}, "a", 0, 0);  // at router (1,0) by 2
  noc.submit(NocMessage::Kind::kLoad, {1, 0}, {2, 0}, "b", 0, 2);  // injected at 2
  run_until_idle(noc);
  REQUIRE(cap.rx[0].size() == 1);
  REQUIRE(cap.rx[1].size() == 1);
  // Uncontended: a takes 2*2*(1+1) + 1 = 9, b takes 2*1*(1+1) + 1 = 5.
  CHECK(cap.rx[0][0].cycle - 0 == 9);
  CHECK(cap.rx[1][0].cycle - 2 == 5 + 1);  // exactly one cycle behind solo
}

TEST_CASE("fetch_add returns the prior value and increments") {
  Capture cap(4);
  NocMesh noc(2, 2, 1, 1, 2, nullptr);
  noc.set_response_handler(cap.fn(2));
  noc.submit(NocMessage::Kind::kAmoFetchAdd, {1, 0}, {0, 0}, "ctr", 1, 0);
  run_until_idle(noc);
  REQUIRE(cap.rx[1].size() == 1);
  CHECK(cap.rx[1][0].value == 0);
  CHECK(noc.read_mem({0, 0}, "ctr") == 1);
}

TEST_CASE("concurrent fetch_adds return distinct consecutive values") {
  Capture cap(16);
  NocMesh noc(4, 4, 1, 1, 2, nullptr);
  noc.set_response_handler(cap.fn(4));
  for (int t = 1; t < 16; ++t) {
    noc.submit(NocMessage::Kind::kAmoFetchAdd, {t % 4, t / 4}, {0, 0}, "ctr", 1, 0);
  }
  run_until_idle(noc);
  std::vector<std::int64_t> got;
  for (int t = 1; t < 16; ++t) {
    REQUIRE(cap.rx[static_cast<size_t>(t)].size() == 1);
    got.push_back(cap.rx[static_cast<size_t>(t)][0].value);
  }
  std::sort(got.begin(), got.end());
  for (int i = 0; i < 15; ++i) CHECK(got[static_cast<size_t>(i)] == i);
  CHECK(noc.read_mem({0, 0}, "ctr") == 15);
}

TEST_CASE("load after store observes the stored value") {
  Capture cap(4);
  NocMesh noc(2, 2, 1, 1, 1, nullptr);
  noc.set_response_handler(cap.fn(2));
  noc.submit(NocMessage::Kind::kStore, {1, 1}, {0, 0}, "flag", 42, 0);
  run_until_idle(noc);
  noc.submit(NocMessage::Kind::kLoad, {1, 1}, {0, 0}, "flag", 0, 100);
  run_until_idle(noc, 100);
  REQUIRE(cap.rx[3].size() == 2);
  CHECK(cap.rx[3][1].value == 42);
}

TEST_CASE("a service unit takes service_latency per op") {
  // All of a 16x16 mesh's other tiles fetch_add one counter: responses must
  // span at least 255 service slots.
  const int a = 3;
  Capture cap(256);
  NocMesh noc(16, 16, 1, 1, a, nullptr);
  noc.set_response_handler(cap.fn(16));
  for (int t = 1; t < 256; ++t) {
    noc.submit(NocMessage::Kind::kAmoFetchAdd, {t % 16, t / 16}, {0, 0}, "c", 1, 0);
  }
  run_until_idle(noc);
  Cycle first = -1, last = -1;
  for (int t = 1; t < 256; ++t) {
    const Cycle c = cap.rx[static_cast<size_t>(t)][0].cycle;
    first = first < 0 ? c : std::min(first, c);
    last = std::max(last, c);
  }
  CHECK(last - first >= 255 * a - a);
  CHECK(noc.read_mem({0, 0}, "c") == 255);
}

TEST_CASE("conservation and determinism under random traffic") {
  auto run_once = [](std::uint64_t seed) {
    Capture cap(16);
    NocMesh noc(4, 4, 2, 1, 2, nullptr);
    noc.set_response_handler(cap.fn(4));
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 200; ++i) {
      const TileId src{static_cast<int>(rng() % 4), static_cast<int>(rng() % 4)};
      const TileId dst{static_cast<int>(rng() % 4), static_cast<int>(rng() % 4)};
      if (src == dst) continue;
      noc.submit(NocMessage::Kind::kAmoFetchAdd, src, dst,
                 "v" + std::to_string(rng() % 3), 1, static_cast<Cycle>(rng() % 50));
    }
    run_until_idle(noc);
    CHECK(noc.injected(NocMessage::Kind::kAmoFetchAdd) ==
          noc.delivered(NocMessage::Kind::kAmoFetchAdd));
    CHECK(noc.injected(NocMessage::Kind::kResponse) ==
          noc.delivered(NocMessage::Kind::kResponse));
    std::vector<std::pair<std::int64_t, Cycle>> flat;
    for (const auto& per_tile : cap.rx) {
      for (const auto& r : per_tile) flat.emplace_back(r.value, r.cycle);
    }
    return flat;
  };
  const auto a = run_once(11);
  const auto b = run_once(11);
  CHECK(a == b);
  CHECK(!a.empty());
}

TEST_CASE("delivery time never beats the hop lower bound") {
  const int h = 2, r = 1, a = 1;
  std::mt19937_64 rng(5);

  // One load per source tile under cross traffic: round trip must be at
  // least 2 * hops * (h + r) + a, with equality when run alone.
  Capture cap(64);
  NocMesh noc(8, 8, h, r, a, nullptr);
  noc.set_response_handler(cap.fn(8));
  std::vector<int> hops_of(64, -1);
  for (int t = 0; t < 64; ++t) {
    const TileId src{t % 8, t / 8};
    const TileId dst{static_cast<int>(rng() % 8), static_cast<int>(rng() % 8)};
    if (src == dst) continue;
    noc.submit(NocMessage::Kind::kLoad, src, dst, "x", 0, 0);
    hops_of[static_cast<size_t>(t)] =
        std::abs(dst.x - src.x) + std::abs(dst.y - src.y);
  }
  run_until_idle(noc);
  for (int t = 0; t < 64; ++t) {
    if (hops_of[static_cast<size_t>(t)] < 0) continue;
    REQUIRE(cap.rx[static_cast<size_t>(t)].size() == 1);
    CHECK(cap.rx[static_cast<size_t>(t)][0].cycle >=
          2 * hops_of[static_cast<size_t>(t)] * (h + r) + a);
  }

  for (int trial = 0; trial < 10; ++trial) {
    const TileId src{static_cast<int>(rng() % 8), static_cast<int>(rng() % 8)};
    const TileId dst{static_cast<int>(rng() % 8), static_cast<int>(rng() % 8)};
    if (src == dst) continue;
    Capture solo(64);
    NocMesh quiet(8, 8, h, r, a, nullptr);
    quiet.set_response_handler(solo.fn(8));
    quiet.submit(NocMessage::Kind::kLoad, src, dst, "x", 0, 0);
    run_until_idle(quiet);
    const int hops = std::abs(dst.x - src.x) + std::abs(dst.y - src.y);
    CHECK(solo.rx[static_cast<size_t>(src.y * 8 + src.x)][0].cycle ==
          2 * hops * (h + r) + a);
  }
}
