#include "cotrans/sim.hpp"

#include "cotrans/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace cotrans {
namespace {

struct AgentScratch {
  Vec6 w_hat{Vec6::Zero()};
  Vec6 w_apply{Vec6::Zero()};
  Vec6 w_real{Vec6::Zero()};
  Vec6 omega_sq{Vec6::Zero()};
  bool saturated = false;
  std::string error;  // non-empty marks a per-agent numerical failure
};

std::optional<std::string> state_out_of_range(const PayloadState& x) {
  if (!x.p.allFinite() || !x.v.allFinite() || !x.R.allFinite() || !x.omega.allFinite())
    return "non-finite payload state";
  constexpr double kLim = 1e9;
  if (x.p.cwiseAbs().maxCoeff() > kLim || x.v.cwiseAbs().maxCoeff() > kLim ||
      x.omega.cwiseAbs().maxCoeff() > kLim)
    return "payload state magnitude exceeded 1e9";
  return std::nullopt;
}

std::optional<std::string> estimates_out_of_range(const std::vector<AgentEstimator>& est) {
  constexpr double kLim = 1e9;
  for (std::size_t i = 0; i < est.size(); ++i) {
    if (!est[i].phi_hat.allFinite() || !est[i].d_hat.allFinite())
      return "non-finite estimate for agent " + std::to_string(i + 1);
    if (est[i].phi_hat.cwiseAbs().maxCoeff() > kLim || est[i].d_hat.cwiseAbs().maxCoeff() > kLim)
      return "estimate magnitude exceeded 1e9 for agent " + std::to_string(i + 1);
  }
  return std::nullopt;
}

}  // namespace

double lyapunov(const PayloadParams& payload, const Mat3& R, const Vec6& s,
                const std::vector<AgentEstimator>& estimators,
                const std::vector<std::uint8_t>& active, const std::vector<AgentSpec>& agents,
                const ControllerGains& gains) {
  const Mat6 M = inertia_matrix(payload, R);
  double V = 0.5 * s.dot(M * s);

  int n_active = 0;
  for (std::uint8_t a : active) n_active += (a != 0);
  if (n_active == 0) return V;

  const Vec10 phi_target = payload.phi() / static_cast<double>(n_active);
  for (std::size_t i = 0; i < estimators.size(); ++i) {
    if (!active[i]) continue;
    const Vec10 phi_err = estimators[i].phi_hat - phi_target;
    const Vec3 d_err = estimators[i].d_hat - agents[i].grasp.d;
    V += 0.5 * phi_err.dot(gains.gamma_phi.cwiseInverse().cwiseProduct(phi_err));
    V += 0.5 * d_err.dot(gains.gamma_d.cwiseInverse().cwiseProduct(d_err));
  }
  return V;
}

PayloadState integrate_step(const PayloadParams& params, const PayloadState& state,
                            const std::function<Vec6(double)>& wrench_at, double t, double dt,
                            GravityMode mode) {
  // State in the step-local chart: y = (p, v, theta, omega), R = exp(theta) R0.
  struct Y {
    Vec3 p, v, theta, omega;
  };
  const Mat3 R0 = state.R;

  auto deriv = [&](const Y& y, double tt) -> Y {
    PayloadState xs;
    xs.p = y.p;
    xs.v = y.v;
    xs.R = exp_so3(y.theta) * R0;
    xs.omega = y.omega;
    const Accel a = forward_dynamics(params, xs, wrench_at(tt), mode);
    return {y.v, a.vdot, dexpinv(y.theta, y.omega), a.omegadot};
  };

  const Y y0{state.p, state.v, Vec3::Zero(), state.omega};
  auto axpy = [](const Y& y, double h, const Y& k) -> Y {
    return {y.p + h * k.p, y.v + h * k.v, y.theta + h * k.theta, y.omega + h * k.omega};
  };

  const Y k1 = deriv(y0, t);
  const Y k2 = deriv(axpy(y0, 0.5 * dt, k1), t + 0.5 * dt);
  const Y k3 = deriv(axpy(y0, 0.5 * dt, k2), t + 0.5 * dt);
  const Y k4 = deriv(axpy(y0, dt, k3), t + dt);

  const double w = dt / 6.0;
  PayloadState out;
  out.p = state.p + w * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
  out.v = state.v + w * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  const Vec3 theta = w * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
  out.R = orthonormalize(exp_so3(theta) * R0);
  out.omega = state.omega + w * (k1.omega + 2.0 * k2.omega + 2.0 * k3.omega + k4.omega);
  return out;
}

SimLog run(const ScenarioSpec& spec, ExecMode exec) {
  const int n = static_cast<int>(spec.agents.size());
  SimLog log;
  log.n_agents = n;

  std::vector<AgentEstimator> est(spec.agents.size());
  for (int i = 0; i < n; ++i) {
    est[i].phi_hat = spec.agents[i].phi0;
    est[i].d_hat = spec.agents[i].d0;
  }
  std::vector<std::uint8_t> active(spec.agents.size(), 1);
  std::vector<std::uint8_t> prev_active = active;

  std::vector<DisableEvent> events = spec.events;
  std::stable_sort(events.begin(), events.end(), [](const DisableEvent& a, const DisableEvent& b) {
    return a.t != b.t ? a.t < b.t : a.agent < b.agent;
  });
  std::size_t next_event = 0;

  // Rotor allocation matrices are geometry-only; build once.
  std::vector<Mat6> alloc_A(spec.agents.size(), Mat6::Zero());
  for (int i = 0; i < n; ++i)
    if (spec.agents[i].vehicle.kind == VehicleParams::Kind::Hexarotor)
      alloc_A[i] = allocation_matrix(spec.agents[i].vehicle.rotors, spec.rotor_form);

  // Start on the reference.
  const ReferenceSample ref0 = reference_trajectory(0.0, spec.traj);
  PayloadState x;
  x.p = ref0.p_d;
  x.v = ref0.v_d;
  x.R = ref0.R_d;
  x.omega = ref0.omega_d;

  // Shared measurement cache: control at step k reuses the (ref, errors,
  // regressor) evaluated when the estimators adapted at the end of step k-1,
  // so estimator updates and the commands they shape see the same data.
  ReferenceSample ref = ref0;
  CompositeError ce = composite_error(x, ref, spec.gains.beta);
  Mat6x10 Y =
      regressor_phi_slots(x.R, x.omega, x.v, ce.qdot_r, ce.qddot_r, spec.gravity);

  Accel prev_acc;  // quasi-static acceleration estimate for the rotor plant
  double prev_V = 0.0;
  Termination term;
  const long long N = std::llround(spec.duration / spec.dt);
  log.records.reserve(static_cast<std::size_t>(N > 0 ? N : 0));

  std::vector<AgentScratch> scratch(spec.agents.size());

  for (long long k = 0; k < N; ++k) {
    const double t = static_cast<double>(k) * spec.dt;

    // Failure events fire before control of the step they land on.
    int old_active_count = 0;
    for (std::uint8_t a : active) old_active_count += (a != 0);
    while (next_event < events.size() && t >= events[next_event].t) {
      const int ag = events[next_event].agent;
      if (ag >= 0 && ag < n) active[ag] = 0;
      ++next_event;
    }
    int active_count = 0;
    for (std::uint8_t a : active) active_count += (a != 0);
    if (spec.gamma_rescale_on_failure && active_count > 0 && active_count < old_active_count) {
      const double scale =
          static_cast<double>(old_active_count) / static_cast<double>(active_count);
      for (int i = 0; i < n; ++i)
        if (active[i]) est[i].phi_hat *= scale;
    }

    // Per-agent command fan-out into indexed slots.
    auto command_agent = [&](int i) {
      AgentScratch& sl = scratch[i];
      sl = AgentScratch{};
      if (!active[i]) return;
      try {
        const AgentSpec& a = spec.agents[i];
        sl.w_hat = Y * est[i].phi_hat - spec.gains.kpd.cwiseProduct(ce.s);
        const Mat3 R_Ei_W = x.R * a.grasp.R_Ei_Ui;
        const Mat6 G_hat = grasp_map(x.R, R_Ei_W, est[i].d_hat, a.grasp.l_g, spec.grasp_form);
        sl.w_apply = invert_grasp_map(G_hat) * sl.w_hat;
        if (spec.plant == PlantMode::WrenchLevel) {
          sl.w_real = sl.w_apply;
        } else if (a.vehicle.kind == VehicleParams::Kind::Hexarotor) {
          const Vec3 r_g = -(x.R * a.grasp.d);
          const Vec3 vdot_g = prev_acc.vdot + prev_acc.omegadot.cross(r_g) +
                              x.omega.cross(x.omega.cross(r_g));
          const Wrench need = required_rotor_wrench(a.vehicle, x.R, vdot_g, x.omega,
                                                    prev_acc.omegadot,
                                                    Wrench::from_vec(sl.w_apply), spec.gravity);
          const AllocationResult ar = allocate(alloc_A[i], need.vec());
          sl.omega_sq = ar.omega_sq;
          sl.saturated = ar.saturated;
          const Wrench realized = rotor_wrench(a.vehicle.rotors, ar.omega_sq, spec.rotor_form);
          sl.w_real = vehicle_world_wrench(a.vehicle, x.R, vdot_g, x.omega, prev_acc.omegadot,
                                           realized, spec.gravity)
                          .vec();
        } else {
          const TugResult tr = tug_wrench(a.vehicle.wrench_limits, sl.w_apply);
          sl.w_real = tr.wrench;
          sl.saturated = tr.saturated;
        }
      } catch (const std::exception& e) {
        sl.error = e.what();
      }
    };
#ifdef COTRANS_HAVE_OPENMP
    if (exec == ExecMode::OpenMP) {
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) command_agent(i);
    } else {
      for (int i = 0; i < n; ++i) command_agent(i);
    }
#else
    (void)exec;
    for (int i = 0; i < n; ++i) command_agent(i);
#endif
    std::string agent_error;
    for (int i = 0; i < n; ++i)
      if (!scratch[i].error.empty()) {
        agent_error = "agent " + std::to_string(i + 1) + ": " + scratch[i].error;
        break;
      }
    if (!agent_error.empty()) {
      term = {Termination::Kind::Diverged, t, agent_error};
      log.termination = term;
      return log;
    }

    // Aggregate through the true grasp maps in agent-index order.
    std::vector<std::pair<Mat6, Vec6>> contributions;
    contributions.reserve(static_cast<std::size_t>(active_count));
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const AgentSpec& a = spec.agents[i];
      const Mat3 R_Ei_W = x.R * a.grasp.R_Ei_Ui;
      const Mat6 G = grasp_map(x.R, R_Ei_W, a.grasp.d, a.grasp.l_g, spec.grasp_form);
      contributions.emplace_back(G, scratch[i].w_real);
    }
    const Vec6 w_total =
        contributions.empty() ? Vec6::Zero() : aggregate_wrench(contributions);

    // Diagnostics: V under the step's regime; dV across a regime switch is
    // evaluated under the outgoing regime so it measures motion, not the
    // bookkeeping jump from re-targeting the estimate errors.
    const double V_now = lyapunov(spec.payload, x.R, ce.s, est, active, spec.agents, spec.gains);
    double dV = 0.0;
    if (k > 0) {
      if (active != prev_active)
        dV = lyapunov(spec.payload, x.R, ce.s, est, prev_active, spec.agents, spec.gains) - prev_V;
      else
        dV = V_now - prev_V;
    }

    StepRecord rec;
    rec.t = t;
    rec.state = x;
    rec.p_d = ref.p_d;
    rec.s = ce.s;
    rec.e_p = ce.e_p;
    rec.rot_err = ce.rot_err;
    rec.V = V_now;
    rec.dV = dV;
    rec.agents.resize(spec.agents.size());
    for (int i = 0; i < n; ++i) {
      AgentRecord& ar = rec.agents[i];
      ar.phi_hat = est[i].phi_hat;
      ar.d_hat = est[i].d_hat;
      ar.w_hat = scratch[i].w_hat;
      ar.w_apply = scratch[i].w_apply;
      ar.omega_sq = scratch[i].omega_sq;
      ar.active = active[i] != 0;
      ar.saturated = scratch[i].saturated;
    }
    log.records.push_back(std::move(rec));

    prev_V = V_now;
    prev_active = active;

    // Advance the payload under the zero-order-hold total wrench.
    PayloadState x_next;
    try {
      prev_acc = forward_dynamics(spec.payload, x, w_total, spec.gravity);
      x_next = integrate_step(
          spec.payload, x, [&w_total](double) { return w_total; }, t, spec.dt, spec.gravity);
    } catch (const std::exception& e) {
      term = {Termination::Kind::Diverged, t, e.what()};
      log.termination = term;
      return log;
    }
    if (auto why = state_out_of_range(x_next)) {
      term = {Termination::Kind::Diverged, static_cast<double>(k + 1) * spec.dt, *why};
      log.termination = term;
      return log;
    }
    x = x_next;

    // Adapt at the post-step state, then cache the measurement for the next
    // step's control.
    const double t_next = static_cast<double>(k + 1) * spec.dt;
    ref = reference_trajectory(t_next, spec.traj);
    ce = composite_error(x, ref, spec.gains.beta);
    Y = regressor_phi_slots(x.R, x.omega, x.v, ce.qdot_r, ce.qddot_r, spec.gravity);

    auto adapt_agent = [&](int i) {
      scratch[i].error.clear();
      if (!active[i]) return;
      try {
        const AgentSpec& a = spec.agents[i];
        const Vec6 w_hat_pre = Y * est[i].phi_hat - spec.gains.kpd.cwiseProduct(ce.s);
        const Mat3 R_Ei_W = x.R * a.grasp.R_Ei_Ui;
        const Mat6x3 Y_d = regressor_d(w_hat_pre, x.R, R_Ei_W, a.grasp.l_g, spec.grasp_form);
        adapt(est[i], Y, Y_d, ce.s, spec.gains, spec.dt);
      } catch (const std::exception& e) {
        scratch[i].error = e.what();
      }
    };
#ifdef COTRANS_HAVE_OPENMP
    if (exec == ExecMode::OpenMP) {
#pragma omp parallel for schedule(static)
      for (int i = 0; i < n; ++i) adapt_agent(i);
    } else {
      for (int i = 0; i < n; ++i) adapt_agent(i);
    }
#else
    for (int i = 0; i < n; ++i) adapt_agent(i);
#endif
    for (int i = 0; i < n; ++i)
      if (!scratch[i].error.empty()) {
        agent_error = "agent " + std::to_string(i + 1) + ": " + scratch[i].error;
        break;
      }
    if (!agent_error.empty()) {
      term = {Termination::Kind::Diverged, t_next, agent_error};
      log.termination = term;
      return log;
    }
    if (auto why = estimates_out_of_range(est)) {
      term = {Termination::Kind::Diverged, t_next, *why};
      log.termination = term;
      return log;
    }
  }

  term.kind = Termination::Kind::Completed;
  term.t = static_cast<double>(N) * spec.dt;
  term.reason.clear();
  log.termination = term;
  return log;
}

}  // namespace cotrans
