#include "tilesync/engine.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "tilesync/errors.hpp"
#include "tilesync/fsync_network.hpp"
#include "tilesync/noc.hpp"
#include "tilesync/pe.hpp"
#include "tilesync/program.hpp"

namespace tilesync {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::kFsync: return "fsync";
    case Scheme::kFsyncPipeline: return "fsync_pipeline";
    case Scheme::kNaive: return "naive";
    case Scheme::kXy: return "xy";
  }
  return "?";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "fsync") return Scheme::kFsync;
  if (name == "fsync_pipeline") return Scheme::kFsyncPipeline;
  if (name == "naive") return Scheme::kNaive;
  if (name == "xy") return Scheme::kXy;
  throw ConfigError("unknown scheme '" + name +
                    "' (valid: fsync, fsync_pipeline, naive, xy)");
}

namespace {

std::vector<Cycle> make_skews(const SkewModel& skew, int participants,
                              std::uint64_t seed) {
  std::vector<Cycle> out(static_cast<size_t>(participants), 0);
  switch (skew.kind) {
    case SkewModel::Kind::kSimultaneous:
      break;
    case SkewModel::Kind::kUniformRandom: {
      std::mt19937_64 rng(seed);
      for (auto& s : out) {
        s = static_cast<Cycle>(rng() % static_cast<std::uint64_t>(skew.max_skew + 1));
      }
      break;
    }
    case SkewModel::Kind::kFixed:
      if (static_cast<int>(skew.fixed.size()) != participants) {
        throw ConfigError("fixed skew list has " +
                          std::to_string(skew.fixed.size()) + " entries, need " +
                          std::to_string(participants));
      }
      out = skew.fixed;
      break;
  }
  return out;
}

Cycle s_hat_of(const std::vector<Cycle>& requests,
               const std::vector<Cycle>& resumes) {
  const Cycle max_r = *std::max_element(requests.begin(), requests.end());
  const Cycle max_f = *std::max_element(resumes.begin(), resumes.end());
  return max_f - max_r;
}

std::vector<SyncDomain> resolve_domains(const SyncTree& tree,
                                        const Scenario& scenario) {
  std::vector<SyncDomain> domains;
  if (!scenario.domains.empty()) {
    for (const auto& spec : scenario.domains) {
      domains.push_back(domain_of(tree, spec.tile, spec.level));
    }
    std::set<int> seen;
    for (const auto& d : domains) {
      for (const auto& t : d.members) {
        if (!seen.insert(linear_index(t, tree.k)).second) {
          throw ConfigError("concurrent domains overlap at tile (" +
                            std::to_string(t.x) + "," + std::to_string(t.y) + ")");
        }
      }
    }
  } else if (scenario.neighbor) {
    domains.push_back(domain_of(tree, TileId{0, 0}, 1));
  } else {
    const int level = scenario.level == 0 ? tree.depth : scenario.level;
    if (level < 1 || level > tree.depth) {
      throw ConfigError("level " + std::to_string(level) + " out of range [1, " +
                        std::to_string(tree.depth) + "]");
    }
    // All same-level subtrees barrier concurrently: a partition of the mesh.
    std::set<int> seen;
    for (int y = 0; y < tree.k; ++y) {
      for (int x = 0; x < tree.k; ++x) {
        SyncDomain d = domain_of(tree, TileId{x, y}, level);
        if (seen.insert(d.root_node).second) {
          domains.push_back(std::move(d));
        }
      }
    }
  }
  return domains;
}

std::vector<RunMetrics> run_fsync(const Scenario& scenario, const MeshConfig& cfg,
                                  TraceFn trace) {
  MeshConfig tree_cfg = cfg;
  if (scenario.scheme == Scheme::kFsync) {
    tree_cfg.pipeline_mode = PipelineMode::kNone;
  } else if (tree_cfg.pipeline_mode == PipelineMode::kNone) {
    tree_cfg.pipeline_mode = PipelineMode::kGeometric;
  }
  SyncTree tree = place_pipeline_regs(build_tree(tree_cfg), tree_cfg);

  const std::vector<SyncDomain> domains = resolve_domains(tree, scenario);
  std::vector<int> participant_tiles;
  for (const auto& d : domains) {
    for (const auto& t : d.members) {
      participant_tiles.push_back(linear_index(t, tree.k));
    }
  }
  const int participants = static_cast<int>(participant_tiles.size());
  const std::vector<Cycle> skews =
      make_skews(scenario.skew, participants, cfg.seed);

  FsyncNetwork net(tree, std::move(trace));
  {
    size_t idx = 0;
    bool mismatch_applied = false;
    for (const auto& d : domains) {
      const int level = tree.node(d.root_node).level;
      const LevelMask mask = encode_level(level, tree.k);
      for (const auto& t : d.members) {
        LevelMask tile_mask = mask;
        if (scenario.mismatch && scenario.mismatch->tile == t) {
          tile_mask = encode_level(scenario.mismatch->level, tree.k);
          mismatch_applied = true;
        }
        net.tile(linear_index(t, tree.k))
            .arm(tile_mask, skews[idx], scenario.repetitions);
        ++idx;
      }
    }
    if (scenario.mismatch && !mismatch_applied) {
      throw ConfigError("mismatch tile (" +
                        std::to_string(scenario.mismatch->tile.x) + "," +
                        std::to_string(scenario.mismatch->tile.y) +
                        ") is not a participant");
    }
  }

  while (!net.quiescent()) {
    net.step();
    if (auto bad = net.error_node()) {
      throw RunError("synchronization level mismatch at node " +
                     std::to_string(*bad) + " (level " +
                     std::to_string(tree.node(*bad).level) + "), cycle " +
                     std::to_string(net.now()));
    }
    if (net.now() > scenario.cycle_budget) {
      throw RunError("cycle budget exceeded (" +
                     std::to_string(scenario.cycle_budget) + " cycles)");
    }
  }

  std::vector<RunMetrics> reps(static_cast<size_t>(scenario.repetitions));
  for (int rep = 0; rep < scenario.repetitions; ++rep) {
    RunMetrics& m = reps[static_cast<size_t>(rep)];
    m.participants = participants;
    m.repetition = rep;
    m.seed = cfg.seed;
    m.cycles_simulated = net.now();
    for (const auto& d : domains) {
      DomainMetrics dm;
      dm.root_node = d.root_node;
      dm.level = tree.node(d.root_node).level;
      dm.members = d.members;
      for (const auto& t : d.members) {
        const auto& tile = net.tile(linear_index(t, tree.k));
        dm.request_cycles.push_back(tile.request_cycles()[static_cast<size_t>(rep)]);
        dm.resume_cycles.push_back(tile.resume_cycles()[static_cast<size_t>(rep)]);
      }
      dm.s_hat = s_hat_of(dm.request_cycles, dm.resume_cycles);
      m.request_cycles.insert(m.request_cycles.end(), dm.request_cycles.begin(),
                              dm.request_cycles.end());
      m.resume_cycles.insert(m.resume_cycles.end(), dm.resume_cycles.begin(),
                             dm.resume_cycles.end());
      m.domains.push_back(std::move(dm));
    }
    m.s_hat = s_hat_of(m.request_cycles, m.resume_cycles);
  }
  return reps;
}

std::vector<RunMetrics> run_amo(const Scenario& scenario, const MeshConfig& cfg,
                                TraceFn trace) {
  const int width = scenario.neighbor ? 2 : cfg.k;
  const int height = scenario.neighbor ? 1 : cfg.k;
  const int participants = width * height;
  const std::vector<Cycle> skews =
      make_skews(scenario.skew, participants, cfg.seed);

  NocMesh noc(width, height, cfg.hop_latency, cfg.router_latency,
              cfg.amo_service_latency, std::move(trace));
  std::vector<PeCpu> pes;
  pes.reserve(static_cast<size_t>(participants));
  for (int idx = 0; idx < participants; ++idx) {
    pes.emplace_back(TileId{idx % width, idx / width}, cfg.instr_cost,
                     cfg.poll_interval);
  }
  noc.set_response_handler([&pes, width](TileId pe, std::int64_t value, Cycle now) {
    pes[static_cast<size_t>(pe.y * width + pe.x)].deliver(value, now);
  });

  auto build = [&](TileId tile, std::int64_t epoch) {
    return scenario.scheme == Scheme::kNaive
               ? build_naive_program(width, height, tile, epoch, TileId{0, 0},
                                     cfg.instr_cost)
               : build_xy_program(width, height, tile, epoch, cfg.instr_cost);
  };

  std::vector<RunMetrics> reps;
  Cycle now = 0;
  Cycle rep_start = 0;
  for (int rep = 0; rep < scenario.repetitions; ++rep) {
    const std::int64_t epoch = rep + 1;
    for (auto& pe : pes) {
      // Later repetitions re-enter once the previous barrier has completed
      // everywhere, keeping the arrival pattern identical across reps.
      const Cycle start = rep_start + (rep == 0 ? skews[static_cast<size_t>(
                                           linear_index(pe.self(), width))]
                                                : 0);
      pe.arm(build(pe.self(), epoch), start);
    }

    bool running = true;
    while (running) {
      noc.begin_cycle(now);
      for (auto& pe : pes) pe.step(now, noc);
      noc.end_cycle(now);

      running = false;
      for (const auto& pe : pes) {
        if (!pe.done()) {
          running = true;
          break;
        }
      }
      if (!running && !noc.idle()) running = true;

      if (running) {
        ++now;
        // Nothing in flight: jump to the next PE action.
        if (noc.idle()) {
          Cycle next = -1;
          for (const auto& pe : pes) {
            const Cycle na = pe.next_action();
            if (na >= 0 && (next < 0 || na < next)) next = na;
          }
          if (next > now) now = next;
        }
      }
      if (now > scenario.cycle_budget) {
        throw RunError("cycle budget exceeded (" +
                       std::to_string(scenario.cycle_budget) + " cycles)");
      }
    }

    RunMetrics m;
    m.participants = participants;
    m.repetition = rep;
    m.seed = cfg.seed;
    DomainMetrics dm;
    dm.level = 0;
    for (const auto& pe : pes) {
      dm.members.push_back(pe.self());
      dm.request_cycles.push_back(pe.request_cycles()[static_cast<size_t>(rep)]);
      dm.resume_cycles.push_back(pe.resume_cycles()[static_cast<size_t>(rep)]);
    }
    dm.s_hat = s_hat_of(dm.request_cycles, dm.resume_cycles);
    m.request_cycles = dm.request_cycles;
    m.resume_cycles = dm.resume_cycles;
    m.s_hat = dm.s_hat;
    m.domains.push_back(std::move(dm));
    m.cycles_simulated = now;
    rep_start = *std::max_element(m.resume_cycles.begin(), m.resume_cycles.end());
    reps.push_back(std::move(m));
  }
  return reps;
}

}  // namespace

std::vector<RunMetrics> run(const Scenario& scenario, const MeshConfig& cfg,
                            TraceFn trace) {
  validate(cfg);
  if (scenario.repetitions < 1) {
    throw ConfigError("repetitions must be >= 1");
  }
  switch (scenario.scheme) {
    case Scheme::kFsync:
    case Scheme::kFsyncPipeline:
      return run_fsync(scenario, cfg, std::move(trace));
    case Scheme::kNaive:
    case Scheme::kXy:
      return run_amo(scenario, cfg, std::move(trace));
  }
  throw ConfigError("unknown scheme");
}

std::vector<DomainMetrics> run_concurrent_domains(
    const std::vector<DomainSpec>& domains, const Scenario& scenario,
    const MeshConfig& cfg) {
  Scenario s = scenario;
  s.domains = domains;
  s.scheme = scenario.scheme == Scheme::kFsyncPipeline ? Scheme::kFsyncPipeline
                                                       : Scheme::kFsync;
  return run(s, cfg).front().domains;
}

int compute_speedup(Cycle best_amo_s_hat, Cycle fsync_pipeline_s_hat) {
  return static_cast<int>(best_amo_s_hat / fsync_pipeline_s_hat);
}

int compute_speedup(const RunMetrics& best_amo, const RunMetrics& fsync_pipeline) {
  return compute_speedup(best_amo.s_hat, fsync_pipeline.s_hat);
}

}  // namespace tilesync
