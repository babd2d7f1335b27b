#pragma once

#include "cotrans/controller.hpp"
#include "cotrans/grasp.hpp"
#include "cotrans/payload.hpp"
#include "cotrans/reference.hpp"
#include "cotrans/vehicle.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace cotrans {

// Plant fidelity: WrenchLevel applies commanded grasp wrenches directly;
// RotorLevel pushes each command through rotor allocation (or tug clamping)
// and back, so actuation limits reach the payload.
enum class PlantMode { WrenchLevel, RotorLevel };

// Execution of the per-agent fan-out within a step. Results are bitwise
// identical across modes: agents write to indexed slots and aggregation
// always runs in agent-index order.
enum class ExecMode { Serial, OpenMP };

struct DisableEvent {
  int agent = 0;  // 0-based internal index
  double t = 0.0;
};

struct AgentSpec {
  VehicleParams vehicle;
  HexarotorGeometry rotor_geom;  // source numbers for hexarotor vehicles
  GraspGeometry grasp;
  // Serialization source for grasp.R_Ei_Ui ([w,x,y,z], kept verbatim from the
  // input so re-resolving a canonical config is an exact fixed point).
  Vec4 gripper_quat{Vec4(1.0, 0.0, 0.0, 0.0)};
  Vec10 phi0{Vec10::Zero()};
  Vec3 d0{Vec3::Zero()};
};

struct ScenarioSpec {
  explicit ScenarioSpec(PayloadParams p) : payload(std::move(p)) {}

  GravityMode gravity = GravityMode::Earth;
  PayloadParams payload;
  std::vector<AgentSpec> agents;
  ControllerGains gains;
  TrajParams traj;
  double dt = 1e-3;
  double duration = 20.0;
  std::vector<DisableEvent> events;
  PlantMode plant = PlantMode::WrenchLevel;
  bool gamma_rescale_on_failure = false;
  GraspMapForm grasp_form = GraspMapForm::SkewProduct;
  RotorMomentForm rotor_form = RotorMomentForm::Conventional;
  double estimate_sup_bound = 50.0;
};

struct AgentRecord {
  Vec10 phi_hat{Vec10::Zero()};
  Vec3 d_hat{Vec3::Zero()};
  Vec6 w_hat{Vec6::Zero()};
  Vec6 w_apply{Vec6::Zero()};
  Vec6 omega_sq{Vec6::Zero()};  // rotor-level hexarotors only
  bool active = true;
  bool saturated = false;
};

struct StepRecord {
  double t = 0.0;
  PayloadState state;
  Vec3 p_d{Vec3::Zero()};
  Vec6 s{Vec6::Zero()};
  Vec3 e_p{Vec3::Zero()};
  double rot_err = 0.0;
  double V = 0.0;
  double dV = 0.0;
  std::vector<AgentRecord> agents;
};

struct Termination {
  enum class Kind { Completed, Diverged };
  Kind kind = Kind::Completed;
  double t = 0.0;
  std::string reason;
};

struct SimLog {
  std::vector<StepRecord> records;
  Termination termination;
  int n_agents = 0;
};

// Diagnostic certificate: V = s^T M s / 2 plus, for each active agent, the
// inverse-adaptation-gain-weighted squared estimate errors against this
// regime's even-split target (phi_true / n_active, the agent's own grasp
// offset). Truth-informed; never feeds back into control.
double lyapunov(const PayloadParams& payload, const Mat3& R, const Vec6& s,
                const std::vector<AgentEstimator>& estimators,
                const std::vector<std::uint8_t>& active, const std::vector<AgentSpec>& agents,
                const ControllerGains& gains);

// One RK4 step on (p, v, theta, omega) with the rotation advanced through a
// per-step exponential chart (theta starts at zero, derivative dexpinv) and
// re-orthonormalized at the end. The wrench callback is sampled at the stage
// times, so smooth policies integrate at full RK4 order.
PayloadState integrate_step(const PayloadParams& params, const PayloadState& state,
                            const std::function<Vec6(double)>& wrench_at, double t, double dt,
                            GravityMode mode);

// Closed-loop scenario execution. Deterministic: identical specs produce
// bitwise-identical logs in either execution mode. The run starts on the
// reference sample at t = 0 and records one StepRecord per step at the step
// start; numerical blowups terminate with Diverged and keep prior records.
SimLog run(const ScenarioSpec& spec, ExecMode exec = ExecMode::Serial);

}  // namespace cotrans
