#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "alp/box.hpp"
#include "alp/errors.hpp"
#include "alp/io.hpp"
#include "alp/params.hpp"

namespace alp {

/// A system that is linear in its parameters: xdot = theta_x * phi(x) + theta_u * u.
struct SystemModel {
  Eigen::Index n = 0;  // state dimension
  Eigen::Index m = 0;  // input dimension
  Eigen::Index p = 0;  // regressor dimension
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> regressor;
  Box state_box;
  Box input_box;
  std::string label;

  Eigen::VectorXd phi(const Eigen::VectorXd& x) const {
    Eigen::VectorXd r = regressor(x);
    if (r.size() != p) throw DimensionError("regressor output has wrong length");
    if (!r.allFinite()) throw Error("regressor produced a non-finite value");
    return r;
  }

  /// Stacked regressor [phi(x); u].
  Eigen::VectorXd lumped_regressor(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    Eigen::VectorXd X(p + m);
    X << phi(x), u;
    return X;
  }
};

inline Eigen::VectorXd eval_dynamics(const SystemModel& sys, const LumpedParams& theta,
                                     const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  if (x.size() != sys.n || u.size() != sys.m)
    throw DimensionError("state or input dimension mismatch");
  if (theta.n() != sys.n || theta.p() != sys.p || theta.m() != sys.m)
    throw DimensionError("parameter dimensions do not match the model");
  return theta.theta_x * sys.phi(x) + theta.theta_u * u;
}

/// Uniformly sampled state/input trajectory.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> inputs;  // same length as states here

  double duration() const { return times.empty() ? 0.0 : times.back(); }

  /// Linear interpolation of the state at time t (clamped to the ends).
  Eigen::VectorXd state_at(double t) const { return interp(states, t); }
  Eigen::VectorXd input_at(double t) const { return interp(inputs, t); }

  std::string to_csv() const {
    std::string out = "t";
    const auto n = states.empty() ? 0 : states.front().size();
    const auto m = inputs.empty() ? 0 : inputs.front().size();
    for (Eigen::Index i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
    for (Eigen::Index i = 1; i <= m; ++i) out += ",u" + std::to_string(i);
    out += "\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
      out += format_number(times[k]);
      for (Eigen::Index i = 0; i < n; ++i) out += "," + format_number(states[k][i]);
      for (Eigen::Index i = 0; i < m; ++i) out += "," + format_number(inputs[k][i]);
      out += "\n";
    }
    return out;
  }

 private:
  Eigen::VectorXd interp(const std::vector<Eigen::VectorXd>& v, double t) const {
    if (v.empty()) throw Error("empty trajectory");
    if (times.size() == 1 || t <= times.front()) return v.front();
    if (t >= times.back()) return v.back();
    const double dt = times[1] - times[0];
    auto k = static_cast<std::size_t>(std::floor((t - times.front()) / dt));
    if (k + 1 >= v.size()) return v.back();
    double a = (t - times[k]) / dt;
    return (1.0 - a) * v[k] + a * v[k + 1];
  }
};

/// One classic fourth-order Runge-Kutta step of xdot = f(t, x).
template <typename F>
Eigen::VectorXd rk4_step(const F& f, double t, const Eigen::VectorXd& x, double dt) {
  Eigen::VectorXd k1 = f(t, x);
  Eigen::VectorXd k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
  Eigen::VectorXd k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
  Eigen::VectorXd k4 = f(t + dt, x + dt * k3);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Fixed-step RK4 rollout of the parameterized dynamics under a control
/// signal evaluated at the integrator stage times. Deterministic.
inline Trajectory integrate(const SystemModel& sys, const LumpedParams& theta,
                            const Eigen::VectorXd& x0,
                            const std::function<Eigen::VectorXd(double)>& control, double dt,
                            double T, double blow_up = 1e6) {
  if (dt <= 0.0) throw Error("dt must be positive");
  if (T < 0.0) throw Error("negative duration");
  const double steps_real = T / dt;
  const auto steps = static_cast<std::int64_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9)
    throw Error("T is not an integral number of steps");

  Trajectory traj;
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  traj.inputs.reserve(static_cast<std::size_t>(steps) + 1);

  auto f = [&](double t, const Eigen::VectorXd& x) {
    return eval_dynamics(sys, theta, x, control(t));
  };

  Eigen::VectorXd x = x0;
  for (std::int64_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.inputs.push_back(control(t));
    if (k == steps) break;
    x = rk4_step(f, t, x, dt);
    if (!x.allFinite() || x.norm() > blow_up)
      throw IntegrationBlowUp("state left the blow-up bound at t=" + format_number(t + dt));
  }
  return traj;
}

}  // namespace alp
