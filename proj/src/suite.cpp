#include "tilesync/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "tilesync/errors.hpp"
#include "tilesync/levels.hpp"
#include "tilesync/reference.hpp"

namespace tilesync {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ConfigError(path + ": " + why);
}

int get_int(const Json& j, const std::string& path, const std::string& key,
            int fallback, int lo, int hi) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  const std::int64_t n = v.get<std::int64_t>();
  if (n < lo || n > hi) {
    fail(path + "." + key, "value " + std::to_string(n) + " out of range [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(n);
}

void check_power_of_two_k(int k, const std::string& path) {
  const bool pow2 = k > 0 && (k & (k - 1)) == 0;
  if (!pow2 || k < 2 || k > 64) {
    fail(path, "k must be a power of two in [2, 64], got " + std::to_string(k));
  }
}

CalibrationSet parse_calibration(const Json& j, const std::string& path,
                                 CalibrationSet base) {
  CalibrationSet c = base;
  c.instr_cost = get_int(j, path, "instr_cost", c.instr_cost, 1, 1 << 20);
  c.poll_interval = get_int(j, path, "poll_interval", c.poll_interval, 1, 1 << 20);
  c.hop_latency = get_int(j, path, "hop_latency", c.hop_latency, 1, 1 << 20);
  c.router_latency = get_int(j, path, "router_latency", c.router_latency, 1, 1 << 20);
  c.amo_service_latency =
      get_int(j, path, "amo_service_latency", c.amo_service_latency, 1, 1 << 20);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "instr_cost" && key != "poll_interval" && key != "hop_latency" &&
        key != "router_latency" && key != "amo_service_latency") {
      fail(path + "." + key, "unknown calibration key");
    }
  }
  return c;
}

RunSpec parse_run(const Json& j, const std::string& path, const Json& defaults,
                  const CalibrationSet& cal, int run_index) {
  auto merged = Json::object();
  for (const auto& [key, value] : defaults.items()) merged[key] = value;
  for (const auto& [key, value] : j.items()) merged[key] = value;
  auto field = [&](const std::string& key) -> const Json* {
    return merged.contains(key) ? &merged.at(key) : nullptr;
  };

  static const char* known[] = {
      "name", "scheme", "k", "neighbor", "level", "skew", "repetitions",
      "seed", "pipeline", "explicit_regs", "domains", "mismatch", "cycle_budget"};
  for (const auto& [key, value] : merged.items()) {
    (void)value;
    bool ok = false;
    for (const char* kk : known) ok = ok || key == kk;
    if (!ok) fail(path + "." + key, "unknown key");
  }

  RunSpec spec;
  spec.scenario.name = merged.contains("name")
                           ? merged.at("name").get<std::string>()
                           : "run" + std::to_string(run_index);

  if (const Json* s = field("scheme")) {
    if (!s->is_string()) fail(path + ".scheme", "expected a string");
    spec.scenario.scheme = scheme_from_string(s->get<std::string>());
  }

  spec.cfg.apply(cal);
  spec.cfg.k = get_int(merged, path, "k", 4, 1, 1 << 20);
  check_power_of_two_k(spec.cfg.k, path + ".k");
  spec.cfg.seed = static_cast<std::uint64_t>(
      get_int(merged, path, "seed", 1, 0, 1 << 30));

  if (const Json* n = field("neighbor")) {
    if (!n->is_boolean()) fail(path + ".neighbor", "expected a boolean");
    spec.scenario.neighbor = n->get<bool>();
    if (spec.scenario.neighbor) spec.cfg.k = 2;
  }

  spec.scenario.level = get_int(merged, path, "level", 0, 0, 64);
  spec.scenario.repetitions = get_int(merged, path, "repetitions", 1, 1, 1 << 20);
  spec.scenario.cycle_budget =
      get_int(merged, path, "cycle_budget", 1'000'000, 1, 1 << 30);

  if (const Json* s = field("skew")) {
    const std::string spath = path + ".skew";
    if (s->is_string()) {
      if (s->get<std::string>() != "simultaneous") {
        fail(spath, "expected \"simultaneous\" or an object with a model key");
      }
    } else if (s->is_object()) {
      const std::string model = s->contains("model")
                                    ? s->at("model").get<std::string>()
                                    : std::string();
      if (model == "uniform") {
        spec.scenario.skew.kind = SkewModel::Kind::kUniformRandom;
        spec.scenario.skew.max_skew = get_int(*s, spath, "max", 0, 0, 1 << 30);
      } else if (model == "fixed") {
        spec.scenario.skew.kind = SkewModel::Kind::kFixed;
        if (!s->contains("cycles") || !s->at("cycles").is_array()) {
          fail(spath + ".cycles", "fixed skew needs a cycles array");
        }
        for (const auto& c : s->at("cycles")) {
          spec.scenario.skew.fixed.push_back(c.get<Cycle>());
        }
      } else {
        fail(spath + ".model", "unknown skew model '" + model +
                                   "' (valid: uniform, fixed)");
      }
    } else {
      fail(spath, "expected a string or object");
    }
  }

  if (const Json* p = field("pipeline")) {
    const std::string mode = p->get<std::string>();
    if (mode == "none") {
      spec.cfg.pipeline_mode = PipelineMode::kNone;
    } else if (mode == "geometric") {
      spec.cfg.pipeline_mode = PipelineMode::kGeometric;
    } else if (mode == "explicit") {
      spec.cfg.pipeline_mode = PipelineMode::kExplicitPerLink;
    } else {
      fail(path + ".pipeline",
           "unknown mode '" + mode + "' (valid: none, geometric, explicit)");
    }
  }
  if (const Json* r = field("explicit_regs")) {
    if (!r->is_object()) fail(path + ".explicit_regs", "expected an object");
    for (const auto& [key, value] : r->items()) {
      spec.cfg.explicit_regs[key] = value.get<int>();
    }
  }

  if (const Json* m = field("mismatch")) {
    const std::string mpath = path + ".mismatch";
    if (!m->is_object() || !m->contains("tile") || !m->at("tile").is_array() ||
        m->at("tile").size() != 2) {
      fail(mpath, "expected {\"tile\": [x, y], \"level\": n}");
    }
    MismatchSpec ms;
    ms.tile = TileId{m->at("tile")[0].get<int>(), m->at("tile")[1].get<int>()};
    ms.level = get_int(*m, mpath, "level", 1, 1, 64);
    spec.scenario.mismatch = ms;
  }

  if (const Json* d = field("domains")) {
    if (!d->is_array()) fail(path + ".domains", "expected an array");
    int idx = 0;
    for (const auto& dom : *d) {
      const std::string dpath = path + ".domains[" + std::to_string(idx) + "]";
      if (!dom.contains("tile") || !dom.at("tile").is_array() ||
          dom.at("tile").size() != 2) {
        fail(dpath + ".tile", "expected [x, y]");
      }
      DomainSpec ds;
      ds.tile = TileId{dom.at("tile")[0].get<int>(), dom.at("tile")[1].get<int>()};
      ds.level = get_int(dom, dpath, "level", 1, 1, 64);
      spec.scenario.domains.push_back(ds);
      ++idx;
    }
  }

  return spec;
}

}  // namespace

ExperimentSuite parse_config(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");

  const Json defaults =
      root.contains("defaults") ? root.at("defaults") : Json::object();
  CalibrationSet cal = builtin_calibration();
  if (root.contains("calibration")) {
    cal = parse_calibration(root.at("calibration"), "calibration", cal);
  }

  ExperimentSuite suite;
  if (root.contains("runs")) {
    if (!root.at("runs").is_array()) fail("runs", "expected an array");
    int idx = 0;
    for (const auto& run : root.at("runs")) {
      suite.runs.push_back(parse_run(run, "runs[" + std::to_string(idx) + "]",
                                     defaults, cal, idx));
      ++idx;
    }
  } else {
    // A single run object at the top level.
    Json run = root;
    run.erase("defaults");
    run.erase("calibration");
    suite.runs.push_back(parse_run(run, "run", defaults, cal, 0));
  }
  if (suite.runs.empty()) throw ConfigError("runs: no runs defined");

  std::vector<std::string> names;
  for (const auto& r : suite.runs) names.push_back(r.scenario.name);
  std::sort(names.begin(), names.end());
  for (size_t i = 1; i < names.size(); ++i) {
    if (names[i] == names[i - 1]) {
      throw ConfigError("runs: duplicate scenario name '" + names[i] + "'");
    }
  }
  return suite;
}

ExperimentSuite parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string reference_config() {
  Json j;
  j["_about"] = "every key below shows its default; omit what you do not need";
  j["calibration"] = {
      {"instr_cost", builtin_calibration().instr_cost},
      {"poll_interval", builtin_calibration().poll_interval},
      {"hop_latency", builtin_calibration().hop_latency},
      {"router_latency", builtin_calibration().router_latency},
      {"amo_service_latency", builtin_calibration().amo_service_latency},
  };
  j["runs"] = Json::array({Json{
      {"name", "run0"},
      {"scheme", "fsync"},
      {"k", 4},
      {"neighbor", false},
      {"level", 0},
      {"skew", "simultaneous"},
      {"repetitions", 1},
      {"seed", 1},
      {"pipeline", "none"},
      {"cycle_budget", 1000000},
  }});
  return j.dump(2) + "\n";
}

std::string csv_header() {
  return "name,seed,k,scheme,level,s_hat,max_r,max_f,cycles,wall_time_us,status";
}

namespace {

std::string opt_str(const std::optional<Cycle>& v) {
  return v ? std::to_string(*v) : std::string();
}

}  // namespace

std::string to_csv(const ResultRow& r) {
  std::ostringstream out;
  out << r.name << ',' << r.seed << ',' << r.k << ',' << r.scheme << ','
      << r.level << ',' << opt_str(r.s_hat) << ',' << opt_str(r.max_request)
      << ',' << opt_str(r.max_resume) << ',' << opt_str(r.cycles) << ','
      << r.wall_time_us << ',' << r.status;
  return out.str();
}

std::string to_json_line(const ResultRow& r) {
  Json j;
  j["name"] = r.name;
  j["seed"] = r.seed;
  j["k"] = r.k;
  j["scheme"] = r.scheme;
  j["level"] = r.level;
  if (r.s_hat) j["s_hat"] = *r.s_hat;
  if (r.max_request) j["max_r"] = *r.max_request;
  if (r.max_resume) j["max_f"] = *r.max_resume;
  if (r.cycles) j["cycles"] = *r.cycles;
  j["wall_time_us"] = r.wall_time_us;
  j["status"] = r.status;
  if (!r.message.empty()) j["message"] = r.message;
  return j.dump();
}

ResultRow execute_run(const RunSpec& spec, const RunOptions& opts) {
  RunSpec s = spec;
  if (opts.seed_override) s.cfg.seed = *opts.seed_override;

  ResultRow row;
  row.name = s.scenario.name;
  row.seed = s.cfg.seed;
  row.k = s.scenario.neighbor ? 2 : s.cfg.k;
  row.scheme = to_string(s.scenario.scheme);
  const bool is_fsync = s.scenario.scheme == Scheme::kFsync ||
                        s.scenario.scheme == Scheme::kFsyncPipeline;
  row.level = !is_fsync ? 0
              : s.scenario.level == 0 ? level_count(s.cfg.k)
                                      : s.scenario.level;

  TraceFn trace;
  std::shared_ptr<std::ofstream> trace_file;
  if (opts.trace) {
    trace_file = std::make_shared<std::ofstream>(opts.out_dir + "/" +
                                                 s.scenario.name + ".trace");
    trace = [trace_file](const std::string& line) { *trace_file << line << "\n"; };
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const std::vector<RunMetrics> reps = run(s.scenario, s.cfg, trace);
    const RunMetrics& m = reps.front();
    row.s_hat = m.s_hat;
    row.max_request = *std::max_element(m.request_cycles.begin(),
                                        m.request_cycles.end());
    row.max_resume = *std::max_element(m.resume_cycles.begin(),
                                       m.resume_cycles.end());
    row.cycles = m.cycles_simulated;
  } catch (const RunError& e) {
    row.status = "error";
    row.message = e.what();
  } catch (const ConfigError& e) {
    // Scenario-level misconfiguration that only surfaces when the run is
    // assembled (overlapping domains, short skew lists); the suite goes on.
    row.status = "error";
    row.message = e.what();
  }
  const auto t1 = std::chrono::steady_clock::now();
  row.wall_time_us =
      std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count();
  return row;
}

std::vector<ResultRow> run_suite(const ExperimentSuite& suite,
                                 const RunOptions& opts) {
  std::vector<ResultRow> rows;
  rows.reserve(suite.runs.size());
  for (const auto& spec : suite.runs) {
    rows.push_back(execute_run(spec, opts));
  }

  std::ofstream csv(opts.out_dir + "/results.csv");
  csv << csv_header() << "\n";
  for (const auto& r : rows) csv << to_csv(r) << "\n";
  if (opts.format == OutputFormat::kJsonLines) {
    std::ofstream jsonl(opts.out_dir + "/results.jsonl");
    for (const auto& r : rows) jsonl << to_json_line(r) << "\n";
  }
  return rows;
}

std::vector<TableRow> build_reference_table(const CalibrationSet& cal) {
  std::vector<TableRow> rows;
  for (const auto& ref : kReferenceTable) {
    TableRow row;
    row.label = ref.label;
    row.ref_fsync = ref.fsync;
    row.ref_fsync_pipeline = ref.fsync_pipeline;
    row.ref_naive = ref.naive;
    row.ref_xy = ref.xy;
    row.ref_speedup = ref.speedup;

    auto overhead = [&](Scheme scheme) {
      Scenario sc;
      sc.name = std::string(ref.label) + "/" + to_string(scheme);
      sc.scheme = scheme;
      sc.neighbor = ref.neighbor;
      MeshConfig cfg;
      cfg.k = ref.neighbor ? 2 : ref.k;
      cfg.apply(cal);
      return run(sc, cfg).front().s_hat;
    };
    row.fsync = overhead(Scheme::kFsync);
    row.fsync_pipeline = overhead(Scheme::kFsyncPipeline);
    row.naive = overhead(Scheme::kNaive);
    row.xy = overhead(Scheme::kXy);

    row.speedup_vs_reference_amo =
        compute_speedup(ref.best_amo(), row.fsync_pipeline);
    row.speedup_vs_simulated_amo =
        compute_speedup(std::min(row.naive, row.xy), row.fsync_pipeline);
    row.naive_rel_error =
        (static_cast<double>(row.naive) - ref.naive) / ref.naive;
    row.xy_rel_error = (static_cast<double>(row.xy) - ref.xy) / ref.xy;
    rows.push_back(row);
  }
  return rows;
}

std::string format_reference_table(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-9s %7s %9s %8s %8s %9s | %s\n",
                "mesh", "fsync", "fsync+p", "naive", "xy", "speedup",
                "reference (naive, xy, speedup) / rel.err");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line,
                  "%-9s %7lld %9lld %8lld %8lld %8dx | %6d %6d %3dx  "
                  "naive %+5.1f%%  xy %+5.1f%%\n",
                  r.label.c_str(), static_cast<long long>(r.fsync),
                  static_cast<long long>(r.fsync_pipeline),
                  static_cast<long long>(r.naive), static_cast<long long>(r.xy),
                  r.speedup_vs_reference_amo, r.ref_naive, r.ref_xy,
                  r.ref_speedup, 100.0 * r.naive_rel_error,
                  100.0 * r.xy_rel_error);
    out << line;
  }
  return out.str();
}

std::string reference_table_csv(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  out << "mesh,fsync,fsync_p,naive,xy,speedup_ref_amo,speedup_sim_amo,"
         "ref_fsync,ref_fsync_p,ref_naive,ref_xy,ref_speedup\n";
  for (const auto& r : rows) {
    out << r.label << ',' << r.fsync << ',' << r.fsync_pipeline << ','
        << r.naive << ',' << r.xy << ',' << r.speedup_vs_reference_amo << ','
        << r.speedup_vs_simulated_amo << ',' << r.ref_fsync << ','
        << r.ref_fsync_pipeline << ',' << r.ref_naive << ',' << r.ref_xy << ','
        << r.ref_speedup << "\n";
  }
  return out.str();
}

std::string reference_table_json(const std::vector<TableRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["mesh"] = r.label;
    j["fsync"] = r.fsync;
    j["fsync_pipeline"] = r.fsync_pipeline;
    j["naive"] = r.naive;
    j["xy"] = r.xy;
    j["speedup_vs_reference_amo"] = r.speedup_vs_reference_amo;
    j["speedup_vs_simulated_amo"] = r.speedup_vs_simulated_amo;
    j["reference"] = {{"fsync", r.ref_fsync},
                      {"fsync_pipeline", r.ref_fsync_pipeline},
                      {"naive", r.ref_naive},
                      {"xy", r.ref_xy},
                      {"speedup", r.ref_speedup}};
    j["naive_rel_error"] = r.naive_rel_error;
    j["xy_rel_error"] = r.xy_rel_error;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

}  // namespace tilesync
