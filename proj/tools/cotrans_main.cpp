#include "cotrans/config.hpp"
#include "cotrans/logio.hpp"
#include "cotrans/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using cotrans::ConfigError;
using nlohmann::json;

json read_config_tree(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cotrans::IoError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) throw ConfigError(what + ": not a number: " + s);
  return v;
}

// Builds the effective config tree: base (file or preset), then --set
// overrides in order, then the dedicated flags, then appended failure events.
json build_tree(const std::string& config_path, const std::string& preset,
                const std::vector<std::string>& sets, bool have_dt, double dt, bool have_duration,
                double duration, const std::string& plant,
                const std::vector<std::string>& disables) {
  if (!config_path.empty() && !preset.empty())
    throw ConfigError("choose exactly one of --config and --preset");
  json tree;
  if (!preset.empty())
    tree = cotrans::preset_config(preset);
  else if (!config_path.empty())
    tree = read_config_tree(config_path);
  else
    throw ConfigError("provide --config FILE or --preset NAME");

  for (const std::string& kv : sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set expects KEY=VALUE, got: " + kv);
    cotrans::apply_override(tree, kv.substr(0, eq), kv.substr(eq + 1));
  }

  if (have_dt) tree["sim"]["dt"] = dt;
  if (have_duration) tree["sim"]["duration"] = duration;
  if (!plant.empty()) tree["scenario"]["plant"] = plant;

  for (const std::string& d : disables) {
    const std::size_t at = d.find('@');
    if (at == std::string::npos || at == 0 || at + 1 >= d.size())
      throw ConfigError("--disable expects AGENT@TIME (e.g. 1@10), got: " + d);
    const double agent = parse_double(d.substr(0, at), "--disable agent");
    const double t = parse_double(d.substr(at + 1), "--disable time");
    json e;
    e["kind"] = "disable_agent";
    e["agent"] = agent;
    e["t"] = t;
    tree["events"].push_back(std::move(e));
  }
  return tree;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic multi-agent payload transport simulator"};
  app.require_subcommand(1);

  std::string config_path, preset, out_dir = "out", plant, exec_s = "serial";
  double dt = 0.0, duration = 0.0;
  std::vector<std::string> sets, disables;

  CLI::App* run_cmd = app.add_subcommand("run", "execute a scenario and write logs");
  run_cmd->add_option("--config", config_path, "JSON scenario file");
  run_cmd->add_option("--preset", preset, "built-in scenario (see `preset list`)");
  run_cmd->add_option("--out", out_dir, "output directory (default: out)");
  CLI::Option* dt_opt = run_cmd->add_option("--dt", dt, "integration step override (s)");
  CLI::Option* dur_opt = run_cmd->add_option("--duration", duration, "run length override (s)");
  run_cmd->add_option("--plant", plant, "plant fidelity: wrench | rotor")
      ->check(CLI::IsMember({"wrench", "rotor"}));
  run_cmd->add_option("--disable", disables, "inject a failure: AGENT@TIME (repeatable)");
  run_cmd->add_option("--set", sets, "config override KEY=VALUE (repeatable, dotted keys)");
  run_cmd->add_option("--exec", exec_s, "per-agent fan-out execution: serial | openmp")
      ->check(CLI::IsMember({"serial", "openmp"}));

  CLI::App* preset_cmd = app.add_subcommand("preset", "built-in scenario utilities");
  preset_cmd->require_subcommand(1);
  CLI::App* list_cmd = preset_cmd->add_subcommand("list", "list built-in scenario names");

  CLI::App* val_cmd = app.add_subcommand("validate", "resolve a config and print its hash");
  val_cmd->add_option("--config", config_path, "JSON scenario file");
  val_cmd->add_option("--preset", preset, "built-in scenario name");
  val_cmd->add_option("--set", sets, "config override KEY=VALUE (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list_cmd->parsed()) {
      for (const std::string& n : cotrans::preset_names()) std::printf("%s\n", n.c_str());
      return 0;
    }

    if (val_cmd->parsed()) {
      const json tree =
          build_tree(config_path, preset, sets, false, 0.0, false, 0.0, "", {});
      const cotrans::ResolvedConfig resolved = cotrans::load_config_json(tree);
      std::printf("OK %s config_hash=%016llx agents=%d\n", resolved.name.c_str(),
                  static_cast<unsigned long long>(resolved.hash),
                  static_cast<int>(resolved.spec.agents.size()));
      return 0;
    }

    // run
    const json tree = build_tree(config_path, preset, sets, dt_opt->count() > 0, dt,
                                 dur_opt->count() > 0, duration, plant, disables);
    const cotrans::ResolvedConfig resolved = cotrans::load_config_json(tree);
    const cotrans::ExecMode exec =
        exec_s == "openmp" ? cotrans::ExecMode::OpenMP : cotrans::ExecMode::Serial;

    const cotrans::SimLog log = cotrans::run(resolved.spec, exec);
    const cotrans::RunSummary summary = cotrans::summarize(log, resolved.spec);
    cotrans::emit_logs(log, summary, resolved, out_dir);

    std::printf("%s: %s at t=%s s, %zu steps -> %s\n", resolved.name.c_str(),
                summary.termination.c_str(), cotrans::format_double(summary.termination_t).c_str(),
                log.records.size(), out_dir.c_str());
    std::printf("final ||e_p|| = %s, steady ||e_p|| = %s, V violations = %lld\n",
                cotrans::format_double(summary.final_ep_norm).c_str(),
                cotrans::format_double(summary.steady_ep_norm).c_str(),
                static_cast<long long>(summary.v_violations));
    if (!summary.termination_reason.empty())
      std::fprintf(stderr, "termination reason: %s\n", summary.termination_reason.c_str());
    return summary.termination == "diverged" ? 3 : 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const cotrans::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
