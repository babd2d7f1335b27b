#include "cotrans/config.hpp"

#include "cotrans/spatial.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace cotrans {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) fail("unknown key: " + join(path, it.key()));
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path, const char* key) {
  const json* v = find(obj, key);
  if (!v) fail("missing key: " + join(path, key));
  return *v;
}

double as_num(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(where + ": must be finite");
  return x;
}

double require_num(const json& obj, const std::string& path, const char* key) {
  return as_num(require(obj, path, key), join(path, key));
}

double get_num(const json& obj, const std::string& path, const char* key, double fallback) {
  const json* v = find(obj, key);
  return v ? as_num(*v, join(path, key)) : fallback;
}

std::string require_str(const json& obj, const std::string& path, const char* key) {
  const json& v = require(obj, path, key);
  if (!v.is_string()) fail(join(path, key) + ": expected a string");
  return v.get<std::string>();
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    const std::string& fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(join(path, key) + ": expected a string");
  return v->get<std::string>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(join(path, key) + ": expected true or false");
  return v->get<bool>();
}

template <int N>
Eigen::Matrix<double, N, 1> as_vec(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != static_cast<std::size_t>(N))
    fail(where + ": expected an array of " + std::to_string(N) + " numbers");
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) out[i] = as_num(v[static_cast<std::size_t>(i)], where);
  return out;
}

template <int N>
Eigen::Matrix<double, N, 1> require_vec(const json& obj, const std::string& path,
                                        const char* key) {
  return as_vec<N>(require(obj, path, key), join(path, key));
}

// Symmetric 3x3 from packed [xx, yy, zz, xy, xz, yz].
Mat3 unpack_sym6(const Vec6& p) {
  Mat3 J;
  J << p[0], p[3], p[4], p[3], p[1], p[5], p[4], p[5], p[2];
  return J;
}

Vec6 pack_sym6(const Mat3& J) {
  Vec6 p;
  p << J(0, 0), J(1, 1), J(2, 2), J(0, 1), J(0, 2), J(1, 2);
  return p;
}

json vec_to_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

// Positive diagonal gain given either as a scalar or as a full diagonal.
template <int N>
Eigen::Matrix<double, N, 1> gain_diag(const json& obj, const std::string& path, const char* key,
                                      double fallback) {
  const std::string where = join(path, key);
  const json* v = find(obj, key);
  Eigen::Matrix<double, N, 1> out;
  if (!v) {
    out.setConstant(fallback);
  } else if (v->is_number()) {
    out.setConstant(as_num(*v, where));
  } else {
    out = as_vec<N>(*v, where);
  }
  for (int i = 0; i < N; ++i)
    if (out[i] <= 0.0) fail(where + ": entries must be > 0");
  return out;
}

json canonical_tree(const ScenarioSpec& spec, const std::string& name) {
  json j;
  json& sc = j["scenario"];
  sc["name"] = name;
  sc["gravity"] = spec.gravity == GravityMode::Earth ? "earth" : "zero";
  sc["plant"] = spec.plant == PlantMode::WrenchLevel ? "wrench" : "rotor";
  sc["grasp_map_form"] = spec.grasp_form == GraspMapForm::SkewProduct ? "skew_product" : "skew_sum";
  sc["rotor_moment_form"] =
      spec.rotor_form == RotorMomentForm::Conventional ? "conventional" : "flipped";
  sc["gamma_rescale_on_failure"] = spec.gamma_rescale_on_failure;
  sc["estimate_sup_bound"] = spec.estimate_sup_bound;

  json& pl = j["payload"];
  pl["mass"] = spec.payload.mass;
  pl["inertia_cm"] = vec_to_json(pack_sym6(spec.payload.inertia_cm));
  pl["com_offset"] = vec_to_json(spec.payload.com_offset);

  json agents = json::array();
  for (const AgentSpec& a : spec.agents) {
    json ja;
    ja["kind"] = a.vehicle.kind == VehicleParams::Kind::Hexarotor ? "hexarotor" : "tug";
    ja["mass"] = a.vehicle.mass;
    ja["inertia"] = vec_to_json(pack_sym6(a.vehicle.inertia));
    ja["grasp_offset"] = vec_to_json(a.grasp.d);
    ja["gripper_offset"] = vec_to_json(a.grasp.l_g);
    ja["gripper_quat"] = vec_to_json(a.gripper_quat);
    if (a.vehicle.kind == VehicleParams::Kind::Hexarotor) {
      json& r = ja["rotor"];
      r["arm_length"] = a.rotor_geom.arm_length;
      r["tilt_alpha_deg"] = a.rotor_geom.tilt_alpha_deg;
      r["tilt_beta_deg"] = a.rotor_geom.tilt_beta_deg;
      r["k_f"] = a.rotor_geom.k_f;
      r["k_m"] = a.rotor_geom.k_m;
    } else {
      ja["wrench_limits"] = vec_to_json(a.vehicle.wrench_limits);
    }
    ja["phi0"] = vec_to_json(a.phi0);
    ja["d0"] = vec_to_json(a.d0);
    agents.push_back(std::move(ja));
  }
  j["agents"] = std::move(agents);

  json& g = j["gains"];
  g["beta"] = spec.gains.beta;
  g["kpd"] = vec_to_json(spec.gains.kpd);
  g["gamma_phi"] = vec_to_json(spec.gains.gamma_phi);
  g["gamma_d"] = vec_to_json(spec.gains.gamma_d);

  json& tr = j["traj"];
  tr["omega_x"] = spec.traj.omega_x;
  tr["omega_y"] = spec.traj.omega_y;
  tr["amplitude"] = spec.traj.amplitude;

  json& sm = j["sim"];
  sm["dt"] = spec.dt;
  sm["duration"] = spec.duration;

  json events = json::array();
  for (const DisableEvent& e : spec.events) {
    json je;
    je["kind"] = "disable_agent";
    je["agent"] = e.agent + 1;  // external agent numbers are 1-based
    je["t"] = e.t;
    events.push_back(std::move(je));
  }
  j["events"] = std::move(events);
  return j;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

ResolvedConfig load_config_json(const json& tree) {
  if (!tree.is_object()) fail("config root: expected an object");
  check_keys(tree, "", {"scenario", "payload", "agents", "gains", "traj", "sim", "events"});

  // scenario
  const json scenario = find(tree, "scenario") ? tree.at("scenario") : json::object();
  if (!scenario.is_object()) fail("scenario: expected an object");
  check_keys(scenario, "scenario",
             {"name", "gravity", "plant", "grasp_map_form", "rotor_moment_form",
              "gamma_rescale_on_failure", "estimate_sup_bound", "estimator_init"});
  const std::string name = get_str(scenario, "scenario", "name", "scenario");
  const std::string gravity_s = get_str(scenario, "scenario", "gravity", "earth");
  if (gravity_s != "earth" && gravity_s != "zero")
    fail("scenario.gravity: expected \"earth\" or \"zero\"");
  const std::string plant_s = get_str(scenario, "scenario", "plant", "wrench");
  if (plant_s != "wrench" && plant_s != "rotor")
    fail("scenario.plant: expected \"wrench\" or \"rotor\"");
  const std::string grasp_s = get_str(scenario, "scenario", "grasp_map_form", "skew_product");
  if (grasp_s != "skew_product" && grasp_s != "skew_sum")
    fail("scenario.grasp_map_form: expected \"skew_product\" or \"skew_sum\"");
  const std::string rotor_s = get_str(scenario, "scenario", "rotor_moment_form", "conventional");
  if (rotor_s != "conventional" && rotor_s != "flipped")
    fail("scenario.rotor_moment_form: expected \"conventional\" or \"flipped\"");
  const std::string init_s = get_str(scenario, "scenario", "estimator_init", "zero");
  if (init_s != "zero" && init_s != "truth")
    fail("scenario.estimator_init: expected \"zero\" or \"truth\"");
  const double sup_bound = get_num(scenario, "scenario", "estimate_sup_bound", 50.0);
  if (sup_bound <= 0.0) fail("scenario.estimate_sup_bound: must be > 0");

  // payload
  const json& payload_j = require(tree, "", "payload");
  if (!payload_j.is_object()) fail("payload: expected an object");
  check_keys(payload_j, "payload", {"mass", "inertia_cm", "com_offset"});
  const double pm = require_num(payload_j, "payload", "mass");
  if (pm <= 0.0) fail("payload.mass: must be > 0 (kg)");
  const Vec6 pj = require_vec<6>(payload_j, "payload", "inertia_cm");
  const Vec3 pcom = require_vec<3>(payload_j, "payload", "com_offset");
  ScenarioSpec spec = [&] {
    try {
      return ScenarioSpec(PayloadParams(pm, unpack_sym6(pj), pcom));
    } catch (const std::invalid_argument& e) {
      fail(std::string("payload: ") + e.what());
    }
  }();

  spec.gravity = gravity_s == "earth" ? GravityMode::Earth : GravityMode::Zero;
  spec.plant = plant_s == "wrench" ? PlantMode::WrenchLevel : PlantMode::RotorLevel;
  spec.grasp_form = grasp_s == "skew_product" ? GraspMapForm::SkewProduct : GraspMapForm::SkewSum;
  spec.rotor_form =
      rotor_s == "conventional" ? RotorMomentForm::Conventional : RotorMomentForm::Flipped;
  spec.gamma_rescale_on_failure =
      get_bool(scenario, "scenario", "gamma_rescale_on_failure", false);
  spec.estimate_sup_bound = sup_bound;

  // agents
  const json& agents_j = require(tree, "", "agents");
  if (!agents_j.is_array() || agents_j.empty())
    fail("agents: expected a non-empty array of agent objects");
  const int n = static_cast<int>(agents_j.size());
  for (int i = 0; i < n; ++i) {
    const std::string path = "agents[" + std::to_string(i) + "]";
    const json& a = agents_j[static_cast<std::size_t>(i)];
    if (!a.is_object()) fail(path + ": expected an object");
    check_keys(a, path,
               {"kind", "mass", "inertia", "grasp_offset", "gripper_offset", "gripper_quat",
                "rotor", "wrench_limits", "phi0", "d0"});
    const std::string kind = require_str(a, path, "kind");
    if (kind != "hexarotor" && kind != "tug")
      fail(path + ".kind: expected \"hexarotor\" or \"tug\"");
    const double am = require_num(a, path, "mass");
    if (am <= 0.0) fail(path + ".mass: must be > 0 (kg)");
    const Mat3 aj = unpack_sym6(require_vec<6>(a, path, "inertia"));

    AgentSpec as;
    as.grasp.d = require_vec<3>(a, path, "grasp_offset");
    if (find(a, "gripper_offset")) as.grasp.l_g = require_vec<3>(a, path, "gripper_offset");
    if (find(a, "gripper_quat")) {
      const Vec4 q = require_vec<4>(a, path, "gripper_quat");
      try {
        as.grasp.R_Ei_Ui = quat_to_rot(q);
      } catch (const std::exception& e) {
        fail(path + ".gripper_quat: " + e.what());
      }
      as.gripper_quat = q;
    }

    if (kind == "hexarotor") {
      if (find(a, "wrench_limits"))
        fail(path + ".wrench_limits: only valid for kind \"tug\"");
      const json& r = require(a, path, "rotor");
      if (!r.is_object()) fail(path + ".rotor: expected an object");
      const std::string rpath = path + ".rotor";
      check_keys(r, rpath, {"arm_length", "tilt_alpha_deg", "tilt_beta_deg", "k_f", "k_m"});
      HexarotorGeometry geom;
      geom.arm_length = get_num(r, rpath, "arm_length", geom.arm_length);
      geom.tilt_alpha_deg = get_num(r, rpath, "tilt_alpha_deg", geom.tilt_alpha_deg);
      geom.tilt_beta_deg = get_num(r, rpath, "tilt_beta_deg", geom.tilt_beta_deg);
      geom.k_f = get_num(r, rpath, "k_f", geom.k_f);
      geom.k_m = get_num(r, rpath, "k_m", geom.k_m);
      if (geom.arm_length <= 0.0) fail(rpath + ".arm_length: must be > 0 (m)");
      if (geom.k_f <= 0.0) fail(rpath + ".k_f: must be > 0 (N s^2)");
      if (geom.k_m == 0.0) fail(rpath + ".k_m: must be nonzero (N m s^2)");
      try {
        as.vehicle = make_hexarotor(am, aj, geom, spec.rotor_form);
      } catch (const std::exception& e) {
        fail(path + ": " + e.what());
      }
      as.rotor_geom = geom;
    } else {
      if (find(a, "rotor")) fail(path + ".rotor: only valid for kind \"hexarotor\"");
      const Vec6 lim = require_vec<6>(a, path, "wrench_limits");
      for (int c = 0; c < 6; ++c)
        if (lim[c] <= 0.0) fail(path + ".wrench_limits: entries must be > 0");
      try {
        as.vehicle = make_tug(am, aj, lim);
      } catch (const std::exception& e) {
        fail(path + ": " + e.what());
      }
    }

    if (find(a, "phi0")) {
      if (init_s == "truth")
        fail(path + ".phi0: remove when scenario.estimator_init is \"truth\"");
      as.phi0 = require_vec<10>(a, path, "phi0");
    }
    if (find(a, "d0")) {
      if (init_s == "truth")
        fail(path + ".d0: remove when scenario.estimator_init is \"truth\"");
      as.d0 = require_vec<3>(a, path, "d0");
    }
    spec.agents.push_back(std::move(as));
  }

  if (init_s == "truth") {
    const Vec10 share = spec.payload.phi() / static_cast<double>(n);
    for (AgentSpec& a : spec.agents) {
      a.phi0 = share;
      a.d0 = a.grasp.d;
    }
  }

  // gains
  const json gains_j = find(tree, "gains") ? tree.at("gains") : json::object();
  if (!gains_j.is_object()) fail("gains: expected an object");
  check_keys(gains_j, "gains", {"beta", "kpd", "gamma_phi", "gamma_d"});
  spec.gains.beta = get_num(gains_j, "gains", "beta", spec.gains.beta);
  if (spec.gains.beta <= 0.0) fail("gains.beta: must be > 0 (1/s)");
  if (find(gains_j, "kpd")) {
    spec.gains.kpd = require_vec<6>(gains_j, "gains", "kpd");
    for (int c = 0; c < 6; ++c)
      if (spec.gains.kpd[c] <= 0.0) fail("gains.kpd: entries must be > 0");
  }
  spec.gains.gamma_phi = gain_diag<10>(gains_j, "gains", "gamma_phi", 0.5);
  spec.gains.gamma_d = gain_diag<3>(gains_j, "gains", "gamma_d", 0.1);

  // traj
  const json traj_j = find(tree, "traj") ? tree.at("traj") : json::object();
  if (!traj_j.is_object()) fail("traj: expected an object");
  check_keys(traj_j, "traj", {"omega_x", "omega_y", "amplitude"});
  spec.traj.omega_x = get_num(traj_j, "traj", "omega_x", spec.traj.omega_x);
  spec.traj.omega_y = get_num(traj_j, "traj", "omega_y", spec.traj.omega_y);
  spec.traj.amplitude = get_num(traj_j, "traj", "amplitude", spec.traj.amplitude);
  if (spec.traj.amplitude < 0.0) fail("traj.amplitude: must be >= 0 (m)");

  // sim
  const json sim_j = find(tree, "sim") ? tree.at("sim") : json::object();
  if (!sim_j.is_object()) fail("sim: expected an object");
  check_keys(sim_j, "sim", {"dt", "duration"});
  spec.dt = get_num(sim_j, "sim", "dt", spec.dt);
  if (spec.dt <= 0.0) fail("sim.dt: must be > 0 (s)");
  spec.duration = get_num(sim_j, "sim", "duration", spec.duration);
  if (spec.duration < spec.dt) fail("sim.duration: must be >= sim.dt (s)");

  // events
  if (const json* events_j = find(tree, "events")) {
    if (!events_j->is_array()) fail("events: expected an array");
    for (std::size_t i = 0; i < events_j->size(); ++i) {
      const std::string path = "events[" + std::to_string(i) + "]";
      const json& e = (*events_j)[i];
      if (!e.is_object()) fail(path + ": expected an object");
      check_keys(e, path, {"kind", "agent", "t"});
      const std::string kind = require_str(e, path, "kind");
      if (kind != "disable_agent") fail(path + ".kind: expected \"disable_agent\"");
      const double agent_num = require_num(e, path, "agent");
      const int agent = static_cast<int>(agent_num);
      if (agent_num != static_cast<double>(agent) || agent < 1 || agent > n)
        fail(path + ".agent: expected an integer in [1, " + std::to_string(n) + "]");
      const double t = require_num(e, path, "t");
      if (t < 0.0 || t > spec.duration)
        fail(path + ".t: must lie within [0, duration] (s)");
      spec.events.push_back({agent - 1, t});
    }
  }
  std::stable_sort(spec.events.begin(), spec.events.end(),
                   [](const DisableEvent& a, const DisableEvent& b) {
                     return a.t != b.t ? a.t < b.t : a.agent < b.agent;
                   });

  ResolvedConfig out(std::move(spec));
  out.name = name;
  out.tree = canonical_tree(out.spec, out.name);
  out.canonical = out.tree.dump(2);
  out.hash = fnv1a64(out.canonical);
  return out;
}

ResolvedConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  json tree;
  try {
    tree = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    fail("config parse error in " + path + ": " + e.what());
  }
  return load_config_json(tree);
}

nlohmann::json preset_config(const std::string& name) {
  if (name != "earth" && name != "space")
    fail("unknown preset: " + name + " (available: earth, space)");

  json j;
  j["scenario"] = {{"name", name}, {"gravity", name == "space" ? "zero" : "earth"}};
  j["payload"] = {{"mass", 5.0},
                  {"inertia_cm", {1.4255, 1.4255, 0.8411, 0.0, 0.0, 0.0}},
                  {"com_offset", {0.74, 0.01, -0.2}}};

  const std::vector<std::vector<double>> grasp_offsets = {
      {-0.8, 1.2, 0.1}, {1.0, 1.0, 0.1}, {1.0, -0.7, 0.1}, {-0.7, -1.1, 0.1}};
  json agents = json::array();
  for (const auto& d : grasp_offsets) {
    json a;
    a["kind"] = "hexarotor";
    a["mass"] = 1.5;
    a["inertia"] = {0.03, 0.03, 0.05, 0.0, 0.0, 0.0};
    a["grasp_offset"] = d;
    a["gripper_offset"] = {0.1, 0.0, -0.3};
    a["rotor"] = {{"arm_length", 1.2},
                  {"tilt_alpha_deg", 30.0},
                  {"tilt_beta_deg", 10.0},
                  {"k_f", 8.5e-6},
                  {"k_m", 1.36e-7}};
    agents.push_back(std::move(a));
  }
  j["agents"] = std::move(agents);

  j["gains"] = {{"beta", 0.5},
                {"kpd", {60.0, 60.0, 60.0, 30.0, 30.0, 30.0}},
                {"gamma_phi", 0.4},
                {"gamma_d", 0.1}};
  j["traj"] = {{"omega_x", 0.5}, {"omega_y", 0.5}, {"amplitude", 1.0}};
  j["sim"] = {{"dt", 0.001}, {"duration", 20.0}};
  j["events"] = json::array({{{"kind", "disable_agent"}, {"agent", 1}, {"t", 10.0}}});
  return j;
}

std::vector<std::string> preset_names() { return {"earth", "space"}; }

void apply_override(json& tree, const std::string& dotted_key, const std::string& value) {
  if (dotted_key.empty()) fail("override: empty key");
  std::vector<std::string> segs;
  std::string seg;
  std::istringstream ss(dotted_key);
  while (std::getline(ss, seg, '.')) {
    if (seg.empty()) fail("override " + dotted_key + ": empty path segment");
    segs.push_back(seg);
  }

  json* cur = &tree;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    const std::string& s = segs[i];
    const bool numeric = std::all_of(s.begin(), s.end(),
                                     [](unsigned char c) { return std::isdigit(c); });
    if (cur->is_array()) {
      if (!numeric) fail("override " + dotted_key + ": \"" + s + "\" does not index an array");
      const std::size_t idx = std::stoul(s);
      if (idx >= cur->size()) fail("override " + dotted_key + ": index " + s + " out of range");
      cur = &(*cur)[idx];
    } else if (cur->is_object() || cur->is_null()) {
      cur = &(*cur)[s];
    } else {
      fail("override " + dotted_key + ": path hits a non-container value at \"" + s + "\"");
    }
  }

  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;  // keep as string

  const std::string& last = segs.back();
  const bool numeric = std::all_of(last.begin(), last.end(),
                                   [](unsigned char c) { return std::isdigit(c); });
  if (cur->is_array()) {
    if (!numeric)
      fail("override " + dotted_key + ": \"" + last + "\" does not index an array");
    const std::size_t idx = std::stoul(last);
    if (idx >= cur->size()) fail("override " + dotted_key + ": index " + last + " out of range");
    (*cur)[idx] = std::move(parsed);
  } else if (cur->is_object() || cur->is_null()) {
    (*cur)[last] = std::move(parsed);
  } else {
    fail("override " + dotted_key + ": path hits a non-container value at \"" + last + "\"");
  }
}

}  // namespace cotrans
