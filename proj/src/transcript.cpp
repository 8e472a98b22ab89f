#include "tilesync/transcript.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tilesync/errors.hpp"
#include "tilesync/fsync_node.hpp"

namespace tilesync {

BarrierTranscript transcript_of(const DomainMetrics& dm) {
  BarrierTranscript t;
  for (size_t i = 0; i < dm.members.size(); ++i) {
    const int pe = dm.members[i].y * 1024 + dm.members[i].x;  // stable id
    t.events.push_back({dm.request_cycles[i], pe,
                        BarrierTranscript::Event::Kind::kRequest});
    t.events.push_back({dm.resume_cycles[i], pe,
                        BarrierTranscript::Event::Kind::kResume});
  }
  return t;
}

OrderVerdict check_barrier_order(const BarrierTranscript& t) {
  std::map<int, int> requests, resumes;
  for (const auto& e : t.events) {
    (e.kind == BarrierTranscript::Event::Kind::kRequest ? requests[e.pe]
                                                        : resumes[e.pe])++;
  }
  if (requests.empty()) throw ConfigError("empty transcript");
  if (requests.size() != resumes.size()) {
    throw ConfigError("malformed transcript: request/resume sets differ");
  }
  for (const auto& [pe, n] : requests) {
    if (n != 1 || resumes[pe] != 1) {
      throw ConfigError("malformed transcript: pe " + std::to_string(pe) +
                        " has " + std::to_string(n) + " requests, " +
                        std::to_string(resumes[pe]) + " resumes");
    }
  }

  Cycle max_request = 0;
  for (const auto& e : t.events) {
    if (e.kind == BarrierTranscript::Event::Kind::kRequest) {
      max_request = std::max(max_request, e.cycle);
    }
  }
  OrderVerdict v;
  v.pass = true;
  for (const auto& e : t.events) {
    if (e.kind == BarrierTranscript::Event::Kind::kResume &&
        e.cycle <= max_request) {
      if (v.pass || e.cycle < v.violating_cycle) {
        v.pass = false;
        v.violating_pe = e.pe;
        v.violating_cycle = e.cycle;
      }
    }
  }
  return v;
}

namespace {

// Deterministic skew patterns over the grid {0, 1, 5, 50}: all-zero, every
// single-PE skew, and a rotating mix.
std::vector<std::vector<Cycle>> skew_patterns(int members) {
  static const Cycle kGrid[] = {0, 1, 5, 50};
  std::vector<std::vector<Cycle>> patterns;
  patterns.emplace_back(static_cast<size_t>(members), 0);
  for (int m = 0; m < members; ++m) {
    for (Cycle s : {Cycle{1}, Cycle{5}, Cycle{50}}) {
      std::vector<Cycle> p(static_cast<size_t>(members), 0);
      p[static_cast<size_t>(m)] = s;
      patterns.push_back(std::move(p));
    }
  }
  for (int rot = 0; rot < 4; ++rot) {
    std::vector<Cycle> p(static_cast<size_t>(members));
    for (int m = 0; m < members; ++m) {
      p[static_cast<size_t>(m)] = kGrid[(m + rot) % 4];
    }
    patterns.push_back(std::move(p));
  }
  return patterns;
}

}  // namespace

CheckReport exhaustive_small_check(int k) {
  CheckReport report;
  std::ostringstream text;
  MeshConfig cfg;
  cfg.k = k;

  const SyncTree tree = build_tree(cfg);
  for (const auto& node : tree.nodes) {
    const SyncDomain dom = domain_of(tree, TileId{node.rect.x0, node.rect.y0},
                                     node.level);
    const int members = static_cast<int>(dom.members.size());
    for (const auto& skews : skew_patterns(members)) {
      Scenario sc;
      sc.name = "exhaustive";
      sc.scheme = Scheme::kFsync;
      sc.domains = {DomainSpec{dom.members.front(), node.level}};
      const bool zero_skew =
          std::all_of(skews.begin(), skews.end(), [](Cycle c) { return c == 0; });
      if (zero_skew) {
        sc.skew.kind = SkewModel::Kind::kSimultaneous;
      } else {
        sc.skew.kind = SkewModel::Kind::kFixed;
        sc.skew.fixed = skews;
      }

      std::ostringstream label;
      label << "k=" << k << " node=" << node.id << " level=" << node.level
            << " skews=[";
      for (size_t i = 0; i < skews.size(); ++i) {
        label << (i ? "," : "") << skews[i];
      }
      label << "]";

      ++report.scenarios;
      const RunMetrics m = run(sc, cfg).front();
      const OrderVerdict v = check_barrier_order(transcript_of(m.domains.front()));
      bool ok = v.pass;
      std::string detail;
      if (!v.pass) {
        detail = "order violation at pe " + std::to_string(v.violating_pe) +
                 " cycle " + std::to_string(v.violating_cycle);
      } else if (zero_skew) {
        const Cycle expect = expected_barrier_latency(node.level, 0);
        if (m.domains.front().s_hat != expect) {
          ok = false;
          detail = "s_hat " + std::to_string(m.domains.front().s_hat) +
                   " != oracle " + std::to_string(expect);
        }
      }
      text << label.str() << (ok ? " PASS" : " FAIL " + detail) << "\n";
      if (!ok) report.failures.push_back(label.str() + ": " + detail);
    }
  }

  // Fault injection: sibling tiles disagreeing on the level must raise the
  // error signal and deliver no wake.
  for (int level = 2; level <= tree.depth; ++level) {
    Scenario sc;
    sc.name = "mismatch";
    sc.scheme = Scheme::kFsync;
    sc.level = level;
    sc.mismatch = MismatchSpec{TileId{1, 0}, level - 1};
    ++report.scenarios;
    std::string label = "k=" + std::to_string(k) + " mismatch level=" +
                        std::to_string(level) + " vs " + std::to_string(level - 1);
    bool ok = false;
    std::string detail;
    try {
      run(sc, cfg);
      detail = "run completed despite mismatched levels";
    } catch (const RunError& e) {
      ok = std::string(e.what()).find("level mismatch") != std::string::npos;
      if (!ok) detail = e.what();
    }
    text << label << (ok ? " PASS" : " FAIL " + detail) << "\n";
    if (!ok) report.failures.push_back(label + ": " + detail);
  }

  report.text = text.str();
  return report;
}

}  // namespace tilesync
