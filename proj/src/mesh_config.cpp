#include "tilesync/mesh_config.hpp"

#include "tilesync/errors.hpp"

namespace tilesync {

void validate(const MeshConfig& cfg) {
  const bool pow2 = cfg.k > 0 && (cfg.k & (cfg.k - 1)) == 0;
  if (!pow2 || cfg.k < 2 || cfg.k > 64) {
    throw ConfigError("k must be a power of two in [2, 64], got " +
                      std::to_string(cfg.k));
  }
  auto check = [](int v, const char* name) {
    if (v < 1) {
      throw ConfigError(std::string(name) + " must be >= 1 cycle, got " +
                        std::to_string(v));
    }
  };
  check(cfg.hop_latency, "hop_latency");
  check(cfg.router_latency, "router_latency");
  check(cfg.amo_service_latency, "amo_service_latency");
  check(cfg.instr_cost, "instr_cost");
  check(cfg.poll_interval, "poll_interval");
}

}  // namespace tilesync
