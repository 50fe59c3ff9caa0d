#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "alp/dynamics.hpp"
#include "alp/quadrotor.hpp"

using namespace alp;

namespace {

SystemModel scalar_model(double limit = 10.0) {
  SystemModel sys;
  sys.n = sys.m = sys.p = 1;
  sys.label = "scalar";
  sys.regressor = [](const Eigen::VectorXd& x) { return x; };
  sys.state_box = Box(Eigen::VectorXd::Constant(1, -limit), Eigen::VectorXd::Constant(1, limit));
  sys.input_box = sys.state_box;
  return sys;
}

LumpedParams scalar_params(double tx, double tu) {
  Eigen::MatrixXd a(1, 1), b(1, 1);
  a << tx;
  b << tu;
  return LumpedParams(a, b);
}

Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("eval_dynamics") {
  SECTION("zero state and input with vanishing regressor") {
    auto sys = scalar_model();
    auto xdot = eval_dynamics(sys, scalar_params(2.0, 3.0), Eigen::VectorXd::Zero(1),
                              Eigen::VectorXd::Zero(1));
    CHECK(xdot[0] == 0.0);
  }

  SECTION("scalar hand evaluation") {
    auto sys = scalar_model();
    auto xdot = eval_dynamics(sys, scalar_params(2.0, 3.0), Eigen::VectorXd::Ones(1),
                              Eigen::VectorXd::Ones(1));
    CHECK_THAT(xdot[0], Catch::Matchers::WithinAbs(5.0, 1e-15));
  }

  SECTION("quadrotor roll response at rest") {
    QuadrotorConstants qc;
    auto sys = quadrotor_attitude_model(0.0);
    auto theta = quadrotor_attitude_params(qc, -2.5e-3, 5e-3);
    auto xdot = eval_dynamics(sys, theta, Eigen::VectorXd::Zero(3), vec3(1, 0, 0));
    CHECK_THAT(xdot[0], Catch::Matchers::WithinAbs(19.8052, 1e-12));
    CHECK(xdot[1] == 0.0);
    CHECK(xdot[2] == 0.0);
  }

  SECTION("gyroscopic term at unit pitch and yaw rates") {
    QuadrotorConstants qc;
    auto sys = quadrotor_attitude_model(0.0);
    auto theta = quadrotor_attitude_params(qc, -2.5e-3, 5e-3);
    auto xdot = eval_dynamics(sys, theta, vec3(0, 1, 1), Eigen::VectorXd::Zero(3));
    CHECK_THAT(xdot[0], Catch::Matchers::WithinAbs(-1.0065, 1e-12));
  }

  SECTION("dimension mismatch throws") {
    auto sys = scalar_model();
    CHECK_THROWS_AS(eval_dynamics(sys, scalar_params(1, 1), Eigen::VectorXd::Zero(2),
                                  Eigen::VectorXd::Zero(1)),
                    DimensionError);
  }

  SECTION("linearity in the parameters") {
    QuadrotorConstants qc;
    auto sys = quadrotor_attitude_model(2.0);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      auto t1 = quadrotor_attitude_params(qc, u(rng) * 1e-2, u(rng) * 1e-2);
      auto t2 = quadrotor_attitude_params(qc, u(rng) * 1e-2, u(rng) * 1e-2);
      double a = 0.5 * (u(rng) + 1.0);
      Eigen::VectorXd x = vec3(u(rng), u(rng), u(rng));
      Eigen::VectorXd in = vec3(u(rng), u(rng), u(rng));
      Eigen::VectorXd lhs = eval_dynamics(sys, a * t1 + (1.0 - a) * t2, x, in);
      Eigen::VectorXd rhs =
          a * eval_dynamics(sys, t1, x, in) + (1.0 - a) * eval_dynamics(sys, t2, x, in);
      CHECK((lhs - rhs).norm() <= 1e-12);
    }
  }
}

TEST_CASE("integration") {
  SECTION("exponential decay hits the closed form") {
    auto sys = scalar_model();
    auto theta = scalar_params(-1.0, 0.0);
    auto traj = integrate(sys, theta, Eigen::VectorXd::Ones(1),
                          [](double) { return Eigen::VectorXd::Zero(1); }, 0.01, 1.0);
    REQUIRE(traj.states.size() == 101);
    CHECK_THAT(traj.states.back()[0], Catch::Matchers::WithinAbs(std::exp(-1.0), 1e-6));
  }

  SECTION("zero horizon returns the initial sample") {
    auto sys = scalar_model();
    auto traj = integrate(sys, scalar_params(-1, 0), Eigen::VectorXd::Ones(1),
                          [](double) { return Eigen::VectorXd::Zero(1); }, 0.01, 0.0);
    CHECK(traj.states.size() == 1);
    CHECK(traj.states[0][0] == 1.0);
  }

  SECTION("attitude equilibrium stays at rest") {
    QuadrotorConstants qc;
    auto sys = quadrotor_attitude_model(3.0);
    auto theta = quadrotor_attitude_params(qc, -2.5e-3, 5e-3);
    auto traj = integrate(sys, theta, Eigen::VectorXd::Zero(3),
                          [](double) { return Eigen::VectorXd::Zero(3); }, 0.01, 2.0);
    for (const auto& x : traj.states) CHECK(x.norm() == 0.0);
  }

  SECTION("RK4 order on exponential decay") {
    auto sys = scalar_model();
    auto theta = scalar_params(-1.0, 0.0);
    auto zero = [](double) { return Eigen::VectorXd::Zero(1); };
    double e1 = std::abs(
        integrate(sys, theta, Eigen::VectorXd::Ones(1), zero, 0.02, 1.0).states.back()[0] -
        std::exp(-1.0));
    double e2 = std::abs(
        integrate(sys, theta, Eigen::VectorXd::Ones(1), zero, 0.01, 1.0).states.back()[0] -
        std::exp(-1.0));
    CHECK(e1 / e2 >= 14.0);
  }

  SECTION("bit-identical reruns") {
    QuadrotorConstants qc;
    auto sys = quadrotor_attitude_model(2.0);
    auto theta = quadrotor_attitude_params(qc, -4e-3, 6e-3);
    auto control = [](double t) {
      Eigen::VectorXd u(3);
      u << 0.1 * std::sin(t), 0.05 * std::cos(2 * t), 0.02;
      return u;
    };
    auto t1 = integrate(sys, theta, vec3(0.1, -0.2, 0.05), control, 1e-3, 1.0);
    auto t2 = integrate(sys, theta, vec3(0.1, -0.2, 0.05), control, 1e-3, 1.0);
    REQUIRE(t1.states.size() == t2.states.size());
    for (std::size_t k = 0; k < t1.states.size(); ++k) {
      CHECK(t1.states[k] == t2.states[k]);
    }
  }

  SECTION("blow-up guard fires") {
    auto sys = scalar_model(1e9);
    auto theta = scalar_params(5.0, 0.0);  // unstable
    CHECK_THROWS_AS(integrate(sys, theta, Eigen::VectorXd::Ones(1),
                              [](double) { return Eigen::VectorXd::Zero(1); }, 0.01, 20.0, 1e3),
                    IntegrationBlowUp);
  }

  SECTION("non-integral horizon is rejected") {
    auto sys = scalar_model();
    CHECK_THROWS(integrate(sys, scalar_params(-1, 0), Eigen::VectorXd::Ones(1),
                           [](double) { return Eigen::VectorXd::Zero(1); }, 0.01, 0.0153));
  }
}

TEST_CASE("trajectory csv") {
  auto sys = scalar_model();
  auto traj = integrate(sys, scalar_params(-1.0, 0.0), Eigen::VectorXd::Ones(1),
                        [](double) { return Eigen::VectorXd::Zero(1); }, 0.5, 1.0);
  auto csv = traj.to_csv();
  std::istringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "t,x1,u1");
  int rows = 0;
  while (std::getline(ss, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
  // 17 significant digits survive a round trip
  CHECK(csv.find(format_number(std::stod(format_number(traj.states[1][0])))) != std::string::npos);
}

TEST_CASE("table constants") {
  QuadrotorConstants qc;
  CHECK(qc.a1 == -1.0065);
  CHECK(qc.a2 == 1.0065);
  CHECK(qc.a3 == 0.0);
  CHECK(qc.b1 == 19.8052);
  CHECK(qc.b2 == 19.8052);
  CHECK(qc.b3 == 32.3625);
  // stored coefficients agree with their defining ratios
  CHECK_THAT(qc.a1, Catch::Matchers::WithinAbs((qc.iyy - qc.izz) / qc.ixx, 1e-4));
  CHECK_THAT(qc.b1, Catch::Matchers::WithinAbs(qc.arm_length / qc.ixx, 1e-4));
  CHECK_THAT(qc.b3, Catch::Matchers::WithinAbs(1.0 / qc.izz, 1e-4));

  auto theta = quadrotor_attitude_params(qc, -2.5e-3, 5e-3);
  CHECK(theta.theta_u.determinant() != 0.0);  // invertible input block
  auto [c1, c2] = attitude_c_coeffs(theta);
  CHECK(c1 == -2.5e-3);
  CHECK(c2 == 5e-3);
}
