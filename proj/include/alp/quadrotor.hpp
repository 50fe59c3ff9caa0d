#pragma once

#include <utility>

#include <Eigen/Dense>

#include "alp/dynamics.hpp"
#include "alp/params.hpp"

namespace alp {

/// Quadrotor rigid-body constants. The derived rate-model coefficients are
/// stored directly alongside the physical quantities they come from.
struct QuadrotorConstants {
  double mass = 0.61;        // kg
  double ixx = 1.54e-2;      // kg m^2
  double iyy = 1.54e-2;      // kg m^2
  double izz = 3.09e-2;      // kg m^2
  double arm_length = 0.305; // m
  double gravity = 9.81;     // m/s^2

  double a1 = -1.0065;  // (iyy - izz) / ixx
  double a2 = 1.0065;   // (izz - ixx) / iyy
  double a3 = 0.0;      // (ixx - iyy) / izz
  double b1 = 19.8052;  // arm_length / ixx
  double b2 = 19.8052;  // arm_length / iyy
  double b3 = 32.3625;  // 1 / izz
};

/// Builds the 3-state body-rate model with roll/pitch gyroscopic coupling to
/// a constant net rotor spin rate omega. States are (roll, pitch, yaw) rates,
/// inputs the three torque commands, and the regressor collects the rate
/// products so the dynamics are linear in the uncertain coefficients:
///
///   r1' = a1 r2 r3 + c1 r2 omega + b1 u1
///   r2' = a2 r1 r3 + c2 r1 omega + b2 u2
///   r3' = a3 r1 r2 + b3 u3
///
/// phi(r) = [r2 r3, r2 omega, r1 r3, r1 omega, r1 r2]. Only c1 and c2 vary
/// across the uncertainty set; they sit at theta_x(0,1) and theta_x(1,3).
inline SystemModel quadrotor_attitude_model(double omega, double rate_limit = 3.0,
                                            double input_limit = 2.0) {
  SystemModel sys;
  sys.n = 3;
  sys.m = 3;
  sys.p = 5;
  sys.label = "quadrotor_attitude";
  sys.regressor = [omega](const Eigen::VectorXd& r) {
    Eigen::VectorXd f(5);
    f << r[1] * r[2], r[1] * omega, r[0] * r[2], r[0] * omega, r[0] * r[1];
    return f;
  };
  sys.state_box = Box(Eigen::VectorXd::Constant(3, -rate_limit),
                      Eigen::VectorXd::Constant(3, rate_limit));
  sys.input_box = Box(Eigen::VectorXd::Constant(3, -input_limit),
                      Eigen::VectorXd::Constant(3, input_limit));
  return sys;
}

/// Parameter matrices for the attitude model with the given uncertain
/// gyroscopic coefficients.
inline LumpedParams quadrotor_attitude_params(const QuadrotorConstants& c, double c1, double c2) {
  Eigen::MatrixXd tx = Eigen::MatrixXd::Zero(3, 5);
  tx(0, 0) = c.a1;
  tx(0, 1) = c1;
  tx(1, 2) = c.a2;
  tx(1, 3) = c2;
  tx(2, 4) = c.a3;
  Eigen::MatrixXd tu = Eigen::MatrixXd::Zero(3, 3);
  tu(0, 0) = c.b1;
  tu(1, 1) = c.b2;
  tu(2, 2) = c.b3;
  return LumpedParams(tx, tu);
}

/// Reads the uncertain coefficients back out of an attitude parameter matrix.
inline std::pair<double, double> attitude_c_coeffs(const LumpedParams& theta) {
  return {theta.theta_x(0, 1), theta.theta_x(1, 3)};
}

/// Attitude model plus the true parameter matrix in one call.
inline std::pair<SystemModel, LumpedParams> make_quadrotor_attitude(
    const QuadrotorConstants& c, double omega, double true_c1, double true_c2) {
  return {quadrotor_attitude_model(omega), quadrotor_attitude_params(c, true_c1, true_c2)};
}

/// Planar translational model used for lattice planning: position and
/// velocity per axis with commanded acceleration as input. phi(x) returns
/// the velocities, so the kinematic rows are exact and the acceleration rows
/// are pure input gains.
inline SystemModel planar_position_model(double pos_limit, double vel_limit, double acc_limit) {
  SystemModel sys;
  sys.n = 4;  // x, y, vx, vy
  sys.m = 2;  // ax, ay
  sys.p = 2;
  sys.label = "planar_position";
  sys.regressor = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd f(2);
    f << x[2], x[3];
    return f;
  };
  Eigen::VectorXd lo(4), hi(4);
  lo << -pos_limit, -pos_limit, -vel_limit, -vel_limit;
  hi << pos_limit, pos_limit, vel_limit, vel_limit;
  sys.state_box = Box(lo, hi);
  sys.input_box = Box(Eigen::VectorXd::Constant(2, -acc_limit),
                      Eigen::VectorXd::Constant(2, acc_limit));
  return sys;
}

inline LumpedParams planar_position_params() {
  Eigen::MatrixXd tx = Eigen::MatrixXd::Zero(4, 2);
  tx(0, 0) = 1.0;
  tx(1, 1) = 1.0;
  Eigen::MatrixXd tu = Eigen::MatrixXd::Zero(4, 2);
  tu(2, 0) = 1.0;
  tu(3, 1) = 1.0;
  return LumpedParams(tx, tu);
}

}  // namespace alp
