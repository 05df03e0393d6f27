// cantisq: command-line front end for the squeezing models.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cantisq/io/config.hpp"
#include "cantisq/io/exit_codes.hpp"
#include "cantisq/io/profiles.hpp"
#include "cantisq/io/scenario.hpp"

namespace fs = std::filesystem;
using namespace cantisq;
using namespace cantisq::io;

namespace {

constexpr const char* out_dir_env = "CANTISQ_OUT_DIR";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

// --out beats the environment, which beats output.dir in the config.
std::string output_dir(const RunConfig& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(out_dir_env); env && *env) return env;
  return cfg.output_dir;
}

int emit(const RunOutput& out, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& t : out.traces) {
    const auto p = dir / (t.name + ".csv");
    write_file(p, write_csv(t));
    std::cout << p.string() << "\n";
  }
  for (const auto& s : out.svgs) {
    const auto p = dir / (s.name + ".svg");
    write_file(p, s.content);
    std::cout << p.string() << "\n";
  }
  if (out.cutoff_limited) {
    std::cerr << "warning: Fock truncation is cutoff-limited; raise oracle.n_max\n";
    return exit_cutoff;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cantilever-driven squeezing of trapped polar molecules"};
  app.require_subcommand(1);

  std::string profile, config_file, trace_file, out_flag;
  bool svg = false;
  auto* run = app.add_subcommand("run", "run a profile, a config file or the header of a trace file");
  auto* src = run->add_option_group("source");
  src->add_option("--profile", profile, "shipped profile name");
  src->add_option("--config", config_file, "key = value config file");
  src->add_option("--from-trace", trace_file, "re-run from the header of a CSV trace");
  src->require_option(1);
  run->add_option("--out", out_flag, std::string("output directory (overrides $") + out_dir_env + ")");
  run->add_flag("--svg", svg, "also write SVG plots");

  std::string axis, sweep_profile, sweep_config, sweep_out;
  double lo = 0.0, hi = 0.0;
  int points = 0;
  auto* sw = app.add_subcommand("sweep", "sweep one numeric parameter");
  auto* sw_src = sw->add_option_group("source");
  sw_src->add_option("--config", sweep_config, "base config file");
  sw_src->add_option("--profile", sweep_profile, "base profile");
  sw_src->require_option(1);
  sw->add_option("--axis", axis, "parameter key, e.g. setup.distance_R")->required();
  sw->add_option("--min", lo, "first value")->required();
  sw->add_option("--max", hi, "last value")->required();
  sw->add_option("--points", points, "number of values")->required();
  sw->add_option("--out", sweep_out, "output directory");

  auto* list = app.add_subcommand("list-profiles", "list shipped profiles");
  auto* report = app.add_subcommand("report", "worked-example provenance report");
  std::string show_name;
  auto* show = app.add_subcommand("show-profile", "print a profile as config text");
  show->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*list) {
      for (const auto& p : profiles()) std::cout << p.name << "\t" << p.summary << "\n";
      return exit_ok;
    }
    if (*report) {
      std::cout << worked_example_report().text;
      return exit_ok;
    }
    if (*show) {
      std::cout << emit_config(load_profile(show_name));
      return exit_ok;
    }
    if (*run) {
      RunConfig cfg = !profile.empty()       ? load_profile(profile)
                      : !config_file.empty() ? parse_config(read_file(config_file))
                                             : config_from_trace(read_file(trace_file));
      if (svg) cfg.svg = true;
      return emit(run_scenario(cfg), output_dir(cfg, out_flag));
    }
    if (*sw) {
      RunConfig cfg = !sweep_profile.empty() ? load_profile(sweep_profile) : parse_config(read_file(sweep_config));
      if (cfg.scenario == Scenario::single_mode || cfg.scenario == Scenario::two_mode) cfg.sweep.target = cfg.scenario;
      cfg.scenario = Scenario::sweep;
      cfg.sweep.axis = axis;
      cfg.sweep.min = lo;
      cfg.sweep.max = hi;
      cfg.sweep.points = points;
      validate(cfg);
      RunOutput out;
      out.traces.push_back(sweep(cfg));
      return emit(out, output_dir(cfg, sweep_out));
    }
  } catch (...) {
    const auto e = std::current_exception();
    try {
      std::rethrow_exception(e);
    } catch (const std::exception& ex) {
      std::cerr << "error: " << ex.what() << "\n";
    }
    return exit_code_for(e);
  }
  return exit_usage;
}
