#include "cotrans/logio.hpp"

#include "cotrans/spatial.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace cotrans {
namespace {

void put(std::string& out, double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, res.ptr);
}

void put_row_end(std::string& out) { out.push_back('\n'); }

double last_failure_time(const ScenarioSpec& spec) {
  double t = 0.0;
  bool any = false;
  for (const DisableEvent& e : spec.events) {
    if (!any || e.t > t) t = e.t;
    any = true;
  }
  return any ? t : 0.0;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const SimLog& log) {
  std::string out = "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz,wx,wy,wz,pdx,pdy,pdz\n";
  for (const StepRecord& r : log.records) {
    put(out, r.t);
    for (int i = 0; i < 3; ++i) {
      out.push_back(',');
      put(out, r.state.p[i]);
    }
    const Vec4 q = rot_to_quat(r.state.R);
    for (int i = 0; i < 4; ++i) {
      out.push_back(',');
      put(out, q[i]);
    }
    for (int i = 0; i < 3; ++i) {
      out.push_back(',');
      put(out, r.state.v[i]);
    }
    for (int i = 0; i < 3; ++i) {
      out.push_back(',');
      put(out, r.state.omega[i]);
    }
    for (int i = 0; i < 3; ++i) {
      out.push_back(',');
      put(out, r.p_d[i]);
    }
    put_row_end(out);
  }
  return out;
}

std::string errors_csv(const SimLog& log) {
  std::string out = "t,epx,epy,epz,ep_norm,rot_err,s1,s2,s3,s4,s5,s6,s_norm\n";
  for (const StepRecord& r : log.records) {
    put(out, r.t);
    for (int i = 0; i < 3; ++i) {
      out.push_back(',');
      put(out, r.e_p[i]);
    }
    out.push_back(',');
    put(out, r.e_p.norm());
    out.push_back(',');
    put(out, r.rot_err);
    for (int i = 0; i < 6; ++i) {
      out.push_back(',');
      put(out, r.s[i]);
    }
    out.push_back(',');
    put(out, r.s.norm());
    put_row_end(out);
  }
  return out;
}

std::string estimates_csv(const SimLog& log, int agent_index) {
  std::string out =
      "t,active,phi1,phi2,phi3,phi4,phi5,phi6,phi7,phi8,phi9,phi10,"
      "dhatx,dhaty,dhatz,what1,what2,what3,what4,what5,what6,sat_flag\n";
  for (const StepRecord& r : log.records) {
    const AgentRecord& a = r.agents.at(static_cast<std::size_t>(agent_index));
    put(out, r.t);
    out.push_back(',');
    out.push_back(a.active ? '1' : '0');
    for (int i = 0; i < 10; ++i) {
      out.push_back(',');
      put(out, a.phi_hat[i]);
    }
    for (int i = 0; i < 3; ++i) {
      out.push_back(',');
      put(out, a.d_hat[i]);
    }
    for (int i = 0; i < 6; ++i) {
      out.push_back(',');
      put(out, a.w_hat[i]);
    }
    out.push_back(',');
    out.push_back(a.saturated ? '1' : '0');
    put_row_end(out);
  }
  return out;
}

std::string lyapunov_csv(const SimLog& log) {
  std::string out = "t,V,dV\n";
  for (const StepRecord& r : log.records) {
    put(out, r.t);
    out.push_back(',');
    put(out, r.V);
    out.push_back(',');
    put(out, r.dV);
    put_row_end(out);
  }
  return out;
}

RunSummary summarize(const SimLog& log, const ScenarioSpec& spec) {
  RunSummary s;
  s.termination =
      log.termination.kind == Termination::Kind::Completed ? "completed" : "diverged";
  s.termination_t = log.termination.t;
  s.termination_reason = log.termination.reason;

  const std::size_t N = log.records.size();
  if (N > 0) {
    s.final_ep_norm = log.records.back().e_p.norm();
    const std::size_t tail = std::max<std::size_t>(1, N / 10);
    double acc = 0.0;
    for (std::size_t i = N - tail; i < N; ++i) acc += log.records[i].e_p.norm();
    s.steady_ep_norm = acc / static_cast<double>(tail);

    const double t_fail = last_failure_time(spec);
    for (const StepRecord& r : log.records) {
      if (r.t < t_fail) continue;
      const double sn = r.s.norm();
      if (sn > s.max_s_post_failure) s.max_s_post_failure = sn;
    }
    for (const StepRecord& r : log.records) {
      if (r.dV > 1e-6) ++s.v_violations;
      for (const AgentRecord& a : r.agents)
        if (a.saturated) ++s.saturation_events;
    }
  }

  const int n = static_cast<int>(spec.agents.size());
  const Vec10 share = spec.payload.phi() / static_cast<double>(n > 0 ? n : 1);
  for (int i = 0; i < n; ++i) {
    AgentSummary as;
    if (N > 0) {
      const AgentRecord& a = log.records.back().agents.at(static_cast<std::size_t>(i));
      as.phi_hat = a.phi_hat;
      as.d_hat = a.d_hat;
    }
    as.phi_err_norm = (as.phi_hat - share).norm();
    as.d_err_norm = (as.d_hat - spec.agents[static_cast<std::size_t>(i)].grasp.d).norm();
    s.agents.push_back(std::move(as));
  }
  return s;
}

std::string summary_json(const RunSummary& summary, const ResolvedConfig& config) {
  nlohmann::json j;
  char hash_hex[17];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(config.hash));
  j["config_hash"] = hash_hex;
  j["config_name"] = config.name;
  j["n_agents"] = static_cast<int>(config.spec.agents.size());
  j["final_ep_norm"] = summary.final_ep_norm;
  j["steady_ep_norm"] = summary.steady_ep_norm;
  j["max_s_post_failure"] = summary.max_s_post_failure;
  j["v_violations"] = summary.v_violations;
  j["saturation_events"] = summary.saturation_events;
  j["termination"] = {{"kind", summary.termination},
                      {"t", summary.termination_t},
                      {"reason", summary.termination_reason}};
  nlohmann::json agents = nlohmann::json::array();
  for (const AgentSummary& a : summary.agents) {
    nlohmann::json ja;
    nlohmann::json phi = nlohmann::json::array();
    for (int i = 0; i < 10; ++i) phi.push_back(a.phi_hat[i]);
    nlohmann::json dh = nlohmann::json::array();
    for (int i = 0; i < 3; ++i) dh.push_back(a.d_hat[i]);
    ja["phi_hat"] = std::move(phi);
    ja["d_hat"] = std::move(dh);
    ja["phi_err_norm"] = a.phi_err_norm;
    ja["d_err_norm"] = a.d_err_norm;
    agents.push_back(std::move(ja));
  }
  j["agents"] = std::move(agents);
  return j.dump(2);
}

void emit_logs(const SimLog& log, const RunSummary& summary, const ResolvedConfig& config,
               const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir + " (" + ec.message() + ")");

  auto write_file = [&](const std::string& name, const std::string& content) {
    const std::string path = (fs::path(out_dir) / name).string();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write file: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) throw IoError("write failed: " + path);
  };

  write_file("trajectory.csv", trajectory_csv(log));
  write_file("errors.csv", errors_csv(log));
  for (int i = 0; i < log.n_agents; ++i)
    write_file("estimates_agent" + std::to_string(i + 1) + ".csv", estimates_csv(log, i));
  write_file("lyapunov.csv", lyapunov_csv(log));
  write_file("summary.json", summary_json(summary, config) + "\n");
  write_file("config.resolved", config.canonical + "\n");
}

}  // namespace cotrans
