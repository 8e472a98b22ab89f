#include "tilesync/noc.hpp"

#include <cassert>
#include <cstdlib>

#include "tilesync/errors.hpp"

namespace tilesync {

const char* to_string(NocMessage::Kind k) {
  switch (k) {
    case NocMessage::Kind::kAmoFetchAdd: return "amo_fetch_add";
    case NocMessage::Kind::kLoad: return "load";
    case NocMessage::Kind::kStore: return "store";
    case NocMessage::Kind::kResponse: return "response";
  }
  return "?";
}

std::vector<Dir> route(TileId src, TileId dst) {
  std::vector<Dir> hops;
  hops.reserve(static_cast<size_t>(std::abs(dst.x - src.x) +
                                   std::abs(dst.y - src.y)));
  for (int x = src.x; x != dst.x; x += dst.x > src.x ? 1 : -1) {
    hops.push_back(dst.x > src.x ? Dir::kEast : Dir::kWest);
  }
  for (int y = src.y; y != dst.y; y += dst.y > src.y ? 1 : -1) {
    hops.push_back(dst.y > src.y ? Dir::kSouth : Dir::kNorth);
  }
  return hops;
}

namespace {

Dir opposite(Dir d) {
  switch (d) {
    case Dir::kNorth: return Dir::kSouth;
    case Dir::kEast: return Dir::kWest;
    case Dir::kSouth: return Dir::kNorth;
    case Dir::kWest: return Dir::kEast;
    case Dir::kLocal: break;
  }
  return Dir::kLocal;
}

}  // namespace

NocMesh::NocMesh(int width, int height, int hop_latency, int router_latency,
                 int service_latency, TraceFn trace)
    : width_(width),
      height_(height),
      hop_latency_(hop_latency),
      router_latency_(router_latency),
      service_latency_(service_latency),
      routers_(static_cast<size_t>(width) * height),
      units_(static_cast<size_t>(width) * height),
      trace_(std::move(trace)) {
  assert(width >= 1 && height >= 1);
  assert(hop_latency >= 1 && router_latency >= 1 && service_latency >= 1);
}

TileId NocMesh::neighbor(TileId t, Dir d) const {
  switch (d) {
    case Dir::kNorth: return TileId{t.x, t.y - 1};
    case Dir::kEast: return TileId{t.x + 1, t.y};
    case Dir::kSouth: return TileId{t.x, t.y + 1};
    case Dir::kWest: return TileId{t.x - 1, t.y};
    case Dir::kLocal: break;
  }
  return t;
}

Dir NocMesh::next_hop(TileId at, TileId dst) const {
  if (at.x != dst.x) return dst.x > at.x ? Dir::kEast : Dir::kWest;
  if (at.y != dst.y) return dst.y > at.y ? Dir::kSouth : Dir::kNorth;
  return Dir::kLocal;
}

void NocMesh::emit(Cycle now, const char* event, const NocMessage& m) {
  if (!trace_) return;
  trace_("cycle=" + std::to_string(now) + " event=" + event +
         " kind=" + to_string(m.kind) + " src=(" + std::to_string(m.src.x) +
         "," + std::to_string(m.src.y) + ") dst=(" + std::to_string(m.dst.x) +
         "," + std::to_string(m.dst.y) + ")");
}

void NocMesh::submit(NocMessage::Kind kind, TileId src, TileId dst,
                     std::string var, std::int64_t payload, Cycle when) {
  NocMessage msg;
  msg.kind = kind;
  msg.src = src;
  msg.dst = dst;
  msg.var = std::move(var);
  msg.payload = payload;
  msg.issue_cycle = when;
  msg.seq = next_seq_++;
  if (src == dst) {
    ++local_ops_;
    arrivals_[when].push_back(Arrival{std::move(msg), index(dst), Dir::kLocal});
  } else {
    ++injected_[static_cast<int>(kind)];
    arrivals_[when].push_back(Arrival{std::move(msg), index(src), Dir::kLocal});
  }
}

void NocMesh::inject_now(NocMessage msg, Cycle now) {
  ++injected_[static_cast<int>(msg.kind)];
  emit(now, "inject", msg);
  routers_[static_cast<size_t>(index(msg.src))]
      .in_q[static_cast<int>(Dir::kLocal)]
      .push_back(std::move(msg));
}

void NocMesh::deliver(NocMessage msg, Cycle now) {
  if (msg.kind == NocMessage::Kind::kResponse) {
    ++delivered_[static_cast<int>(msg.kind)];
    emit(now, "deliver", msg);
    if (on_response_) on_response_(msg.dst, msg.payload, now);
    return;
  }
  if (!(msg.src == msg.dst)) {
    ++delivered_[static_cast<int>(msg.kind)];
    emit(now, "deliver", msg);
  }
  units_[static_cast<size_t>(index(msg.dst))].q.push_back(std::move(msg));
}

std::int64_t NocMesh::apply(Unit& u, const NocMessage& m) {
  switch (m.kind) {
    case NocMessage::Kind::kAmoFetchAdd: {
      std::int64_t prior = u.mem[m.var];
      u.mem[m.var] = prior + m.payload;
      return prior;
    }
    case NocMessage::Kind::kLoad:
      return u.mem[m.var];
    case NocMessage::Kind::kStore:
      u.mem[m.var] = m.payload;
      return m.payload;
    case NocMessage::Kind::kResponse:
      break;
  }
  return 0;
}

void NocMesh::begin_cycle(Cycle now) {
  // Land everything due this cycle. A message at its destination router goes
  // straight to the tile (service queue or requesting PE); anything else
  // queues at the router input port it entered through.
  auto it = arrivals_.find(now);
  if (it != arrivals_.end()) {
    auto batch = std::move(it->second);
    arrivals_.erase(it);
    for (auto& a : batch) {
      if (a.at_router == index(a.msg.dst)) {
        deliver(std::move(a.msg), now);
      } else {
        if (a.entry == Dir::kLocal) emit(now, "inject", a.msg);
        routers_[static_cast<size_t>(a.at_router)]
            .in_q[static_cast<int>(a.entry)]
            .push_back(std::move(a.msg));
      }
    }
  }

  // Finished AMO operations apply and answer.
  for (auto& u : units_) {
    if (!u.busy || u.done_at != now) continue;
    const std::int64_t result = apply(u, u.cur);
    emit(now, "serve", u.cur);
    u.busy = false;
    if (u.cur.src == u.cur.dst) {
      if (on_response_) on_response_(u.cur.src, result, now);
    } else {
      NocMessage rsp;
      rsp.kind = NocMessage::Kind::kResponse;
      rsp.src = u.cur.dst;
      rsp.dst = u.cur.src;
      rsp.var = u.cur.var;
      rsp.payload = result;
      rsp.issue_cycle = now;
      rsp.seq = next_seq_++;
      inject_now(std::move(rsp), now);
    }
  }
}

void NocMesh::end_cycle(Cycle now) {
  // Service units pick up their next operation; a unit freed in begin_cycle
  // may start again here, sustaining one op per service_latency cycles.
  for (auto& u : units_) {
    if (!u.busy && !u.q.empty()) {
      u.cur = std::move(u.q.front());
      u.q.pop_front();
      u.busy = true;
      u.done_at = now + service_latency_;
    }
  }

  // Per-link arbitration: each output port launches at most one message per
  // cycle, scanning input ports round-robin from the last grant.
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const TileId here{x, y};
      Router& r = routers_[static_cast<size_t>(index(here))];
      for (int out = 0; out < 4; ++out) {
        const Dir out_dir = static_cast<Dir>(out);
        const TileId next = neighbor(here, out_dir);
        if (next.x < 0 || next.x >= width_ || next.y < 0 || next.y >= height_) {
          continue;
        }
        for (int scan = 0; scan < 5; ++scan) {
          const int in = (r.rr[static_cast<size_t>(out)] + scan) % 5;
          auto& q = r.in_q[static_cast<size_t>(in)];
          if (q.empty()) continue;
          if (next_hop(here, q.front().dst) != out_dir) continue;
          NocMessage msg = std::move(q.front());
          q.pop_front();
          emit(now, "hop", msg);
          arrivals_[now + hop_latency_ + router_latency_].push_back(
              Arrival{std::move(msg), index(next), opposite(out_dir)});
          r.rr[static_cast<size_t>(out)] = (in + 1) % 5;
          break;
        }
      }
    }
  }
}

bool NocMesh::idle() const {
  if (!arrivals_.empty()) return false;
  for (const auto& r : routers_) {
    for (const auto& q : r.in_q) {
      if (!q.empty()) return false;
    }
  }
  for (const auto& u : units_) {
    if (u.busy || !u.q.empty()) return false;
  }
  return true;
}

std::int64_t NocMesh::read_mem(TileId tile, const std::string& var) const {
  const auto& mem = units_[static_cast<size_t>(index(tile))].mem;
  auto it = mem.find(var);
  return it == mem.end() ? 0 : it->second;
}

std::int64_t NocMesh::injected(NocMessage::Kind kind) const {
  return injected_[static_cast<int>(kind)];
}

std::int64_t NocMesh::delivered(NocMessage::Kind kind) const {
  return delivered_[static_cast<int>(kind)];
}

}  // namespace tilesync
