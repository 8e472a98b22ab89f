#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tilesync/mesh_config.hpp"
#include "tilesync/trace.hpp"
#include "tilesync/tree.hpp"

namespace tilesync {

using Cycle = std::int64_t;

enum class Scheme { kFsync, kFsyncPipeline, kNaive, kXy };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& name);  // ConfigError on unknown

struct SkewModel {
  enum class Kind { kSimultaneous, kUniformRandom, kFixed };
  Kind kind = Kind::kSimultaneous;
  int max_skew = 0;                // kUniformRandom
  std::vector<Cycle> fixed;        // kFixed: one entry per participant
};

// A synchronization domain addressed by any member tile plus the tree level
// of its root.
struct DomainSpec {
  TileId tile;
  int level = 1;
};

// Fault injection: one tile requests a different level than its domain,
// which the common tree node must flag as an error.
struct MismatchSpec {
  TileId tile;
  int level = 1;
};

struct Scenario {
  std::string name = "run";
  Scheme scheme = Scheme::kFsync;
  bool neighbor = false;  // two-tile mesh for AMO schemes, a leaf pair for fsync
  int level = 0;          // fsync: 0 = root of the tree
  SkewModel skew;
  int repetitions = 1;
  std::vector<DomainSpec> domains;  // fsync: explicit concurrent domains
  std::optional<MismatchSpec> mismatch;
  Cycle cycle_budget = 1'000'000;
};

struct DomainMetrics {
  int root_node = -1;
  int level = 0;
  std::vector<TileId> members;
  std::vector<Cycle> request_cycles;  // aligned with members
  std::vector<Cycle> resume_cycles;
  Cycle s_hat = 0;  // max(resume) - max(request)
};

// Measurements of one barrier repetition.
struct RunMetrics {
  int participants = 0;
  std::vector<Cycle> request_cycles;
  std::vector<Cycle> resume_cycles;
  Cycle s_hat = 0;
  std::vector<DomainMetrics> domains;
  Cycle cycles_simulated = 0;
  std::uint64_t seed = 0;
  int repetition = 0;
};

// Runs a scenario to quiescence; one RunMetrics per repetition. Throws
// RunError on level-mismatch errors or when the cycle budget is exhausted,
// ConfigError on invalid scenarios.
std::vector<RunMetrics> run(const Scenario& scenario, const MeshConfig& cfg,
                            TraceFn trace = nullptr);

// Several disjoint domains synchronizing concurrently in one simulation;
// returns per-domain metrics of the first repetition.
std::vector<DomainMetrics> run_concurrent_domains(
    const std::vector<DomainSpec>& domains, const Scenario& scenario,
    const MeshConfig& cfg);

// Speedup as reported: best-AMO over tree-barrier overhead, truncated to an
// integer. Guard: s_hat of a real barrier is always >= 4.
int compute_speedup(Cycle best_amo_s_hat, Cycle fsync_pipeline_s_hat);
int compute_speedup(const RunMetrics& best_amo, const RunMetrics& fsync_pipeline);

}  // namespace tilesync
