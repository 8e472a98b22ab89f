#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tilesync/calibration.hpp"
#include "tilesync/engine.hpp"
#include "tilesync/mesh_config.hpp"

namespace tilesync {

struct RunSpec {
  Scenario scenario;
  MeshConfig cfg;
};

struct ExperimentSuite {
  std::vector<RunSpec> runs;
};

// Parses a JSON experiment description: either {"runs": [...]} with optional
// "defaults" and "calibration" sections, or a single run object. Schema
// violations are reported with their key path. Throws ConfigError.
ExperimentSuite parse_config(const std::string& text);
ExperimentSuite parse_config_file(const std::string& path);

// A fully populated single-run config documenting every default.
std::string reference_config();

enum class OutputFormat { kCsv, kJsonLines };

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  std::string out_dir = ".";
  OutputFormat format = OutputFormat::kCsv;
  bool trace = false;
};

// One emitted record per run. Failed runs carry status "error" and empty
// metric fields.
struct ResultRow {
  std::string name;
  std::uint64_t seed = 0;
  int k = 0;
  std::string scheme;
  int level = 0;
  std::optional<Cycle> s_hat;
  std::optional<Cycle> max_request;
  std::optional<Cycle> max_resume;
  std::optional<Cycle> cycles;
  std::int64_t wall_time_us = 0;
  std::string status = "ok";
  std::string message;  // diagnostics for failed runs (json-lines only)
};

std::string csv_header();
std::string to_csv(const ResultRow& row);
std::string to_json_line(const ResultRow& row);

// Executes one run, timing it and folding failures into the row.
ResultRow execute_run(const RunSpec& spec, const RunOptions& opts);

// Executes a whole suite in order and writes results files into out_dir
// (results.csv always; results.jsonl for the json-lines format).
std::vector<ResultRow> run_suite(const ExperimentSuite& suite,
                                 const RunOptions& opts);

// The five reference mesh configurations times four schemes, against the
// published reference numbers.
struct TableRow {
  std::string label;
  Cycle fsync = 0;
  Cycle fsync_pipeline = 0;
  Cycle naive = 0;
  Cycle xy = 0;
  int speedup_vs_reference_amo = 0;  // reference best AMO / simulated fsync+p
  int speedup_vs_simulated_amo = 0;
  int ref_fsync = 0, ref_fsync_pipeline = 0, ref_naive = 0, ref_xy = 0;
  int ref_speedup = 0;
  double naive_rel_error = 0, xy_rel_error = 0;  // signed, (sim - ref) / ref
};

std::vector<TableRow> build_reference_table(const CalibrationSet& cal);
std::string format_reference_table(const std::vector<TableRow>& rows);
std::string reference_table_csv(const std::vector<TableRow>& rows);
std::string reference_table_json(const std::vector<TableRow>& rows);

}  // namespace tilesync
