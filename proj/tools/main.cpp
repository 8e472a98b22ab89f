#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tilesync/calibration.hpp"
#include "tilesync/errors.hpp"
#include "tilesync/suite.hpp"
#include "tilesync/tree.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitConfigError = 2;

int print_rows(const std::vector<tilesync::ResultRow>& rows,
               tilesync::OutputFormat format) {
  if (format == tilesync::OutputFormat::kCsv) {
    std::cout << tilesync::csv_header() << "\n";
    for (const auto& r : rows) std::cout << tilesync::to_csv(r) << "\n";
  } else {
    for (const auto& r : rows) std::cout << tilesync::to_json_line(r) << "\n";
  }
  for (const auto& r : rows) {
    if (r.status != "ok") return kExitRunFailure;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycle-accurate simulator of hardware tree barriers and "
               "AMO software barriers on tile meshes"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::string format_name = "csv";
  bool trace = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--out-dir", out_dir, "directory for result files");
  app.add_option("--format", format_name, "output format")
      ->check(CLI::IsMember({"csv", "json-lines"}));
  app.add_flag("--trace", trace, "write per-run signal/message traces");
  app.add_option("--seed", seed, "override every run's PRNG seed")
      ->each([&](const std::string&) { seed_set = true; });

  std::string run_config, sweep_config, calib_config;
  int tree_k = 4;
  bool tree_pipeline = false;

  CLI::App* cmd_run = app.add_subcommand("run", "execute a config and print records");
  cmd_run->add_option("config", run_config, "experiment config (json)")->required();

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "execute a config and write results files");
  cmd_sweep->add_option("config", sweep_config, "experiment config (json)")->required();

  CLI::App* cmd_table =
      app.add_subcommand("table1", "reproduce the reference comparison table");

  CLI::App* cmd_tree = app.add_subcommand("tree", "dump a synchronization tree");
  cmd_tree->add_option("--k", tree_k, "mesh side length");
  cmd_tree->add_flag("--pipeline", tree_pipeline, "geometric pipeline registers");

  CLI::App* cmd_cal = app.add_subcommand(
      "calibrate", "fit cost parameters against the reference rows");
  cmd_cal->add_option("config", calib_config,
                      "optional config whose calibration section seeds the fit");

  CLI::App* cmd_init =
      app.add_subcommand("init-config", "print a reference config with defaults");

  CLI11_PARSE(app, argc, argv);

  tilesync::RunOptions opts;
  opts.out_dir = out_dir;
  opts.format = format_name == "csv" ? tilesync::OutputFormat::kCsv
                                     : tilesync::OutputFormat::kJsonLines;
  opts.trace = trace;
  if (seed_set) opts.seed_override = seed;

  try {
    std::filesystem::create_directories(out_dir);

    if (cmd_run->parsed()) {
      const auto suite = tilesync::parse_config_file(run_config);
      return print_rows(tilesync::run_suite(suite, opts), opts.format);
    }

    if (cmd_sweep->parsed()) {
      const auto suite = tilesync::parse_config_file(sweep_config);
      const auto rows = tilesync::run_suite(suite, opts);
      int failures = 0;
      for (const auto& r : rows) failures += r.status != "ok";
      std::cout << rows.size() << " runs, " << failures << " failed; results in "
                << out_dir << "/results.csv\n";
      return failures ? kExitRunFailure : kExitOk;
    }

    if (cmd_table->parsed()) {
      const auto rows = tilesync::build_reference_table(tilesync::builtin_calibration());
      std::cout << tilesync::format_reference_table(rows);
      std::ofstream(out_dir + "/table1.csv") << tilesync::reference_table_csv(rows);
      std::ofstream(out_dir + "/table1.json") << tilesync::reference_table_json(rows);
      return kExitOk;
    }

    if (cmd_tree->parsed()) {
      tilesync::MeshConfig cfg;
      cfg.k = tree_k;
      cfg.pipeline_mode = tree_pipeline ? tilesync::PipelineMode::kGeometric
                                        : tilesync::PipelineMode::kNone;
      const auto tree =
          tilesync::place_pipeline_regs(tilesync::build_tree(cfg), cfg);
      std::cout << tilesync::dump_tree(tree);
      return kExitOk;
    }

    if (cmd_cal->parsed()) {
      const auto outcome =
          tilesync::calibrate(tilesync::default_calibration_targets());
      // Ready to paste into a config file.
      std::cout << "{\n  \"calibration\": {\n"
                << "    \"instr_cost\": " << outcome.set.instr_cost << ",\n"
                << "    \"poll_interval\": " << outcome.set.poll_interval << ",\n"
                << "    \"hop_latency\": " << outcome.set.hop_latency << ",\n"
                << "    \"router_latency\": " << outcome.set.router_latency << ",\n"
                << "    \"amo_service_latency\": " << outcome.set.amo_service_latency
                << "\n  }\n}\n";
      std::cout << "max_rel_error=" << outcome.max_rel_error
                << (outcome.adequate ? "" : "  (exceeds 50%: model inadequate)")
                << "\n";
      return outcome.adequate ? kExitOk : kExitRunFailure;
    }

    if (cmd_init->parsed()) {
      std::cout << tilesync::reference_config();
      return kExitOk;
    }
  } catch (const tilesync::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const tilesync::RunError& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return kExitRunFailure;
  }
  return kExitOk;
}
