#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "tilesync/mesh_config.hpp"
#include "tilesync/trace.hpp"

namespace tilesync {

using Cycle = std::int64_t;

enum class Dir { kNorth, kEast, kSouth, kWest, kLocal };

struct NocMessage {
  enum class Kind { kAmoFetchAdd, kLoad, kStore, kResponse };
  Kind kind = Kind::kLoad;
  TileId src, dst;
  std::string var;
  std::int64_t payload = 0;  // addend / store value; result for responses
  Cycle issue_cycle = 0;
  std::uint64_t seq = 0;
};

const char* to_string(NocMessage::Kind k);

// Dimension-ordered path: the full X displacement first, then Y.
std::vector<Dir> route(TileId src, TileId dst);

// XY-routed mesh with one message per link per cycle, round-robin input
// arbitration per output port, unbounded FIFO queues, and one AMO service
// unit per tile. Advance with begin_cycle / end_cycle around the clients'
// own per-cycle work:
//   begin_cycle  arrivals land, finished AMO ops apply and answer
//   (clients submit new operations)
//   end_cycle    service units start new ops, links arbitrate and launch
class NocMesh {
public:
  using ResponseFn = std::function<void(TileId pe, std::int64_t value, Cycle now)>;

  NocMesh(int width, int height, int hop_latency, int router_latency,
          int service_latency, TraceFn trace = nullptr);

  void set_response_handler(ResponseFn fn) { on_response_ = std::move(fn); }

  // Schedules a memory operation by `src` against `dst`'s memory, entering
  // the network (or the local service queue) at cycle `when`.
  void submit(NocMessage::Kind kind, TileId src, TileId dst, std::string var,
              std::int64_t payload, Cycle when);

  void begin_cycle(Cycle now);
  void end_cycle(Cycle now);

  bool idle() const;

  std::int64_t read_mem(TileId tile, const std::string& var) const;

  std::int64_t injected(NocMessage::Kind kind) const;
  std::int64_t delivered(NocMessage::Kind kind) const;
  std::int64_t local_ops() const { return local_ops_; }

  int width() const { return width_; }
  int height() const { return height_; }

private:
  struct Router {
    std::array<std::deque<NocMessage>, 5> in_q;  // indexed by Dir
    std::array<int, 4> rr{};                     // per output port
  };

  struct Unit {
    std::deque<NocMessage> q;
    bool busy = false;
    Cycle done_at = 0;
    NocMessage cur;
    std::unordered_map<std::string, std::int64_t> mem;
  };

  // A message due to land somewhere: a scheduled submission entering its
  // source router (entry = kLocal) or a link crossing completing (entry =
  // the input port it arrives through).
  struct Arrival {
    NocMessage msg;
    int at_router;
    Dir entry;
  };

  int index(TileId t) const { return t.y * width_ + t.x; }
  TileId neighbor(TileId t, Dir d) const;
  Dir next_hop(TileId at, TileId dst) const;
  void inject_now(NocMessage msg, Cycle now);
  void deliver(NocMessage msg, Cycle now);
  std::int64_t apply(Unit& u, const NocMessage& m);
  void emit(Cycle now, const char* event, const NocMessage& m);

  int width_, height_;
  int hop_latency_, router_latency_, service_latency_;
  std::vector<Router> routers_;
  std::vector<Unit> units_;
  std::map<Cycle, std::vector<Arrival>> arrivals_;
  ResponseFn on_response_;
  std::uint64_t next_seq_ = 0;
  std::int64_t injected_[4] = {0, 0, 0, 0};
  std::int64_t delivered_[4] = {0, 0, 0, 0};
  std::int64_t local_ops_ = 0;
  TraceFn trace_;
};

}  // namespace tilesync
