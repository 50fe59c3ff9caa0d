#pragma once

#include "alp/scenario.hpp"

namespace alp {

/// Bundled drone campaign. The wall at x in [5, 6] carries two gaps: a wide
/// one at y = 3 that opens once the tube radius drops below 0.6 m and a
/// narrow one at y = 5 that opens below 0.4 m; a lane under the wall stays
/// open at the initial radius. Repeated executions shrink the model set, the
/// tube follows sqrt(1/Gamma) * diam, and the planner switches from the long
/// detour to the mid gap and finally to the straight route.
///
/// The true gyroscopic coefficients sit at the centroid of the uncertainty
/// box; they are a simulation choice, not something the planner reads.
inline Scenario make_drone_scenario() {
  Scenario s;
  s.label = "drone_campaign";
  s.model = "quadrotor_planar";
  s.seed = 2024;
  s.executions = 9;
  s.dt_id = 1e-3;
  s.dt_plan = 1e-2;

  s.omega = 25.0;
  s.rate_limit = 3.0;
  s.attitude_input_limit = 2.0;

  s.true_theta = quadrotor_attitude_params(s.constants, -2.5e-3, 5.0e-3);
  s.psi = ParamPolytope({quadrotor_attitude_params(s.constants, -5e-3, 2.25e-3),
                         quadrotor_attitude_params(s.constants, 0.0, 2.25e-3),
                         quadrotor_attitude_params(s.constants, 0.0, 7.75e-3),
                         quadrotor_attitude_params(s.constants, -5e-3, 7.75e-3)});
  s.psi_d = s.psi.vertices();
  s.psi_d.push_back(s.psi.convex_combine(Eigen::VectorXd::Constant(4, 0.25)));
  s.gamma = Eigen::VectorXd::Constant(4, 0.25);
  s.adaptation_rate = 1e-4;  // tube radius = 100 * diam
  s.tracking_gain = 2.0;
  s.nominal_tolerance = 1e-4;

  s.lattice_lo = Eigen::VectorXd::Zero(2);
  s.lattice_hi = (Eigen::VectorXd(2) << 12.0, 9.0).finished();
  s.lattice_resolution = Eigen::VectorXd::Ones(2);
  s.connectivity = 8;

  s.workspace.bounds = Box(Eigen::VectorXd::Zero(2), (Eigen::VectorXd(2) << 12.0, 9.0).finished());
  auto box = [](double x0, double y0, double x1, double y1) {
    return Box((Eigen::VectorXd(2) << x0, y0).finished(),
               (Eigen::VectorXd(2) << x1, y1).finished());
  };
  s.workspace.obstacles = {
      box(5.0, 1.9, 6.0, 2.4),  // bottom plug; lane under it stays open
      box(5.0, 3.6, 6.0, 4.6),  // between the wide and the narrow gap
      box(5.0, 5.4, 6.0, 9.0),  // top segment up to the boundary
  };

  s.start_node = (Eigen::VectorXi(2) << 1, 5).finished();
  s.goal_node = (Eigen::VectorXi(2) << 11, 5).finished();

  s.velocity_limit = 2.0;
  s.acceleration_limit = 3.0;
  s.loop_kp = 1.0;
  s.loop_kd = 2.0;
  s.tilt_coupling = 0.8;
  s.input_margin = 1.25;

  s.excitation_amplitudes = Eigen::Vector3d(0.5, 0.45, 0.35);
  s.excitation_frequencies = Eigen::Vector3d(0.9, 0.7, 0.5);
  s.plan_coupling = 0.1;
  s.ramp_time = 0.5;

  s.primitive_cfg.segments = 20;
  s.primitive_cfg.samples = 50;
  s.primitive_cfg.t_min = 0.8;
  s.primitive_cfg.t_max = 6.0;
  s.primitive_cfg.golden_tol = 1e-3;
  return s;
}

/// Small two-execution variant for fast tests: same structure, one obstacle,
/// a short route.
inline Scenario make_mini_scenario() {
  Scenario s = make_drone_scenario();
  s.label = "mini_campaign";
  s.executions = 2;
  s.lattice_hi = (Eigen::VectorXd(2) << 6.0, 4.0).finished();
  s.workspace.bounds = Box(Eigen::VectorXd::Zero(2), (Eigen::VectorXd(2) << 6.0, 4.0).finished());
  s.workspace.obstacles = {Box((Eigen::VectorXd(2) << 2.6, 1.6).finished(),
                               (Eigen::VectorXd(2) << 3.4, 4.0).finished())};
  s.start_node = (Eigen::VectorXi(2) << 1, 2).finished();
  s.goal_node = (Eigen::VectorXi(2) << 5, 2).finished();
  s.adaptation_rate = 4e-4;  // tube radius = 50 * diam, initial 0.372
  s.primitive_cfg.segments = 14;
  return s;
}

}  // namespace alp
