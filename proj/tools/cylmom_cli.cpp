// Command line driver.
//
// Subcommands:
//   run --config <file>                      full pipeline from a JSON config
//   example <name> [--resolution N] [--out DIR]   run a builtin example
//   list-examples                            print the builtin registry
//   schema                                   print the report JSON schema
//
// Exit codes: 0 success, 1 configuration / usage error, 2 unsupported
// mathematical regime (e.g. non-closed holonomy), 3 internal check failure.
//
// The environment variable CYLMOM_LOG (quiet | info | debug) controls
// progress logging on stderr; default is info.

#include "cylmom/cli_reports.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

enum class LogLevel { kQuiet = 0, kInfo = 1, kDebug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("CYLMOM_LOG");
  if (!env) return LogLevel::kInfo;
  std::string v(env);
  if (v == "quiet") return LogLevel::kQuiet;
  if (v == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::kInfo) std::cerr << "[cylmom] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::kDebug) std::cerr << "[cylmom:debug] " << msg << "\n";
}

int execute(const cylmom::RunConfig& cfg) {
  log_debug("config: " + cylmom::config_json(cfg).dump());
  cylmom::RunOutcome outcome = cylmom::run_pipeline(cfg);
  if (!cfg.out_dir.empty()) {
    cylmom::write_run_outputs(outcome, cfg.out_dir);
    log_info("wrote report.json, polylines.csv, summary.txt to " + cfg.out_dir);
    std::cout << cylmom::summary_text(outcome);
  } else {
    std::cout << cylmom::dump_report_json(outcome.report);
  }
  if (!outcome.pass) {
    log_info("one or more required checks failed");
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cylinder-valued momentum maps and metric-convexity checks"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run the pipeline from a JSON config file");
  run->add_option("--config", config_path, "path to the JSON run configuration")->required();

  std::string example_name;
  int resolution = 16;
  std::string out_dir;
  auto* example = app.add_subcommand("example", "run a builtin example with default settings");
  example->add_option("name", example_name, "builtin example name")->required();
  example->add_option("--resolution", resolution, "mesh resolution per periodic coordinate");
  example->add_option("--out", out_dir, "directory for report.json / polylines.csv / summary.txt");

  auto* list = app.add_subcommand("list-examples", "list the builtin examples");
  auto* schema = app.add_subcommand("schema", "print the JSON schema of the run report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (list->parsed()) {
      for (const auto& e : cylmom::list_builtin_examples()) {
        std::cout << e.name << "  [" << e.kind << "]  " << e.description << "\n";
      }
      return 0;
    }
    if (schema->parsed()) {
      std::cout << cylmom::dump_report_json(cylmom::report_schema());
      return 0;
    }
    if (run->parsed()) {
      log_info("loading config " + config_path);
      return execute(cylmom::parse_config_file(config_path));
    }
    if (example->parsed()) {
      cylmom::ojson j;
      j["example"] = example_name;
      j["resolution"] = resolution;
      if (!out_dir.empty()) j["out_dir"] = out_dir;
      log_info("running builtin example " + example_name);
      return execute(cylmom::parse_run_config(j));
    }
    std::cerr << "error: no subcommand given\n";
    return 1;
  } catch (const cylmom::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const cylmom::UnsupportedRegime& e) {
    std::cerr << "unsupported regime: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
