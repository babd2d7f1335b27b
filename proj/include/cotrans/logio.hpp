#pragma once

#include "cotrans/config.hpp"
#include "cotrans/sim.hpp"

#include <string>
#include <vector>

namespace cotrans {

// Shortest decimal representation that parses back to the identical double
// (round-trip exact). Used for every floating-point value in the CSV logs.
std::string format_double(double x);

// CSV builders. Headers are fixed; one row per recorded step; floats are
// round-trip exact; flags are 0/1 integers.
std::string trajectory_csv(const SimLog& log);
std::string errors_csv(const SimLog& log);
std::string estimates_csv(const SimLog& log, int agent_index);  // 0-based index
std::string lyapunov_csv(const SimLog& log);

struct AgentSummary {
  Vec10 phi_hat{Vec10::Zero()};
  Vec3 d_hat{Vec3::Zero()};
  double phi_err_norm = 0.0;  // vs the even 1/n share of the true parameters
  double d_err_norm = 0.0;    // vs the agent's true grasp offset
};

struct RunSummary {
  double final_ep_norm = 0.0;
  double steady_ep_norm = 0.0;      // mean ||e_p|| over the last tenth of records
  double max_s_post_failure = 0.0;  // max ||s|| from the last failure event on
  std::vector<AgentSummary> agents;
  long long v_violations = 0;       // steps with dV > 1e-6
  long long saturation_events = 0;  // total per-agent saturation flags
  std::string termination;          // "completed" or "diverged"
  double termination_t = 0.0;
  std::string termination_reason;
};

// Every number here is recomputable exactly from the emitted CSVs: the same
// values in the same accumulation order.
RunSummary summarize(const SimLog& log, const ScenarioSpec& spec);

// Canonical JSON text of the summary (sorted keys, includes the config hash).
std::string summary_json(const RunSummary& summary, const ResolvedConfig& config);

// Writes trajectory.csv, errors.csv, estimates_agent<i>.csv (i is 1-based),
// lyapunov.csv, summary.json, and config.resolved into out_dir (created if
// missing). Throws IoError naming the failing path.
void emit_logs(const SimLog& log, const RunSummary& summary, const ResolvedConfig& config,
               const std::string& out_dir);

}  // namespace cotrans
