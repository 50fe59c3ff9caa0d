#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "alp/identifier.hpp"
#include "alp/quadrotor.hpp"
#include "alp/tube_control.hpp"

using namespace alp;

namespace {

SystemModel scalar_model() {
  SystemModel sys;
  sys.n = sys.m = sys.p = 1;
  sys.label = "scalar";
  sys.regressor = [](const Eigen::VectorXd& x) { return x; };
  sys.state_box = Box(Eigen::VectorXd::Constant(1, -10), Eigen::VectorXd::Constant(1, 10));
  sys.input_box = sys.state_box;
  return sys;
}

LumpedParams scalar_params(double tx, double tu) {
  Eigen::MatrixXd a(1, 1), b(1, 1);
  a << tx;
  b << tu;
  return LumpedParams(a, b);
}

Eigen::VectorXd sv(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

TEST_CASE("h term") {
  auto sys = scalar_model();

  SECTION("vanishes when estimate matches nominal on the nominal trajectory") {
    ControlContext ctx(scalar_params(1.0, 2.0), 1.0, sys);
    auto h = h_term(sv(0.7), sv(0.7), sv(0.3), scalar_params(1.0, 2.0), ctx);
    CHECK(h.norm() == 0.0);
  }

  SECTION("drift mismatch") {
    ControlContext ctx(scalar_params(1.0, 1.0), 1.0, sys);
    auto h = h_term(sv(1.0), sv(1.0), sv(0.0), scalar_params(2.0, 1.0), ctx);
    CHECK_THAT(h[0], Catch::Matchers::WithinAbs(1.0, 1e-15));
  }

  SECTION("input-block mismatch") {
    ControlContext ctx(scalar_params(1.0, 1.0), 1.0, sys);
    auto h = h_term(sv(1.0), sv(1.0), sv(2.0), scalar_params(1.0, 1.5), ctx);
    CHECK_THAT(h[0], Catch::Matchers::WithinAbs(1.0, 1e-15));
  }
}

TEST_CASE("nu correction") {
  auto sys = scalar_model();

  SECTION("zero when nothing deviates") {
    ControlContext ctx(scalar_params(1.0, 2.0), 1.0, sys);
    auto v = nu(sv(0.7), sv(0.7), sv(0.3), scalar_params(1.0, 2.0), ctx);
    CHECK(v.norm() == 0.0);
  }

  SECTION("hand-evaluated scalar case") {
    ControlContext ctx(scalar_params(1.0, 1.0), 1.0, sys);
    auto v = nu(sv(1.0), sv(1.0), sv(0.0), scalar_params(2.0, 1.0), ctx);
    CHECK_THAT(v[0], Catch::Matchers::WithinAbs(-1.0, 1e-15));
  }

  SECTION("feedback part scales linearly with the gain") {
    ControlContext c1(scalar_params(1.0, 1.0), 1.0, sys);
    ControlContext c2(scalar_params(1.0, 1.0), 2.0, sys);
    auto theta = scalar_params(1.3, 0.9);
    auto h = h_term(sv(1.2), sv(1.0), sv(0.4), theta, c1);
    auto rest1 = nu(sv(1.2), sv(1.0), sv(0.4), theta, c1)[0] + h[0] / 0.9;
    auto rest2 = nu(sv(1.2), sv(1.0), sv(0.4), theta, c2)[0] + h[0] / 0.9;
    CHECK_THAT(rest2, Catch::Matchers::WithinAbs(2.0 * rest1, 1e-14));
  }

  SECTION("singular input block throws") {
    ControlContext ctx(scalar_params(1.0, 1.0), 1.0, sys);
    CHECK_THROWS_AS(nu(sv(1.0), sv(0.0), sv(0.0), scalar_params(1.0, 0.0), ctx),
                    SingularMatrixError);
  }
}

TEST_CASE("vertex controls") {
  auto sys = scalar_model();
  ControlContext ctx(scalar_params(1.0, 1.0), 2.0, sys);

  SECTION("estimates on the nominal return the nominal input") {
    std::vector<LumpedParams> psis(3, scalar_params(1.0, 1.0));
    std::vector<Eigen::VectorXd> xhats(3, sv(0.4));
    Eigen::VectorXd g = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
    auto u_hats = vertex_controls(sv(0.4), sv(0.4), sv(0.25), psis, xhats, g, ctx);
    for (const auto& u : u_hats) CHECK_THAT(u[0], Catch::Matchers::WithinAbs(0.25, 1e-15));
  }

  SECTION("single vertex equals the combined control") {
    std::vector<LumpedParams> psis{scalar_params(1.4, 0.9)};
    std::vector<Eigen::VectorXd> xhats{sv(0.8)};
    auto u_hats = vertex_controls(sv(1.0), sv(0.5), sv(0.2), psis, xhats,
                                  Eigen::VectorXd::Ones(1), ctx);
    // combined control: ubar - tu^{-1} (h + k (xhat - xbar))
    auto h = h_term(sv(1.0), sv(0.5), sv(0.2), psis[0], ctx);
    double expected = 0.2 - (h[0] + 2.0 * (0.8 - 0.5)) / 0.9;
    CHECK_THAT(u_hats[0][0], Catch::Matchers::WithinAbs(expected, 1e-14));
  }

  SECTION("weighted combination reproduces the combined control") {
    QuadrotorConstants qc;
    auto asys = quadrotor_attitude_model(2.0);
    ControlContext actx(quadrotor_attitude_params(qc, -2.5e-3, 5e-3), 1.7, asys);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<LumpedParams> psis;
      std::vector<Eigen::VectorXd> xhats;
      Eigen::VectorXd g(4);
      for (int i = 0; i < 4; ++i) {
        psis.push_back(quadrotor_attitude_params(qc, 1e-2 * u(rng), 1e-2 * u(rng)));
        Eigen::VectorXd xh(3);
        xh << u(rng), u(rng), u(rng);
        xhats.push_back(xh);
        g[i] = 0.1 + std::abs(u(rng));
      }
      g /= g.sum();
      Eigen::VectorXd x(3), xbar(3), ubar(3);
      x << u(rng), u(rng), u(rng);
      xbar << u(rng), u(rng), u(rng);
      ubar << u(rng), u(rng), u(rng);

      auto u_hats = vertex_controls(x, xbar, ubar, psis, xhats, g, actx);
      Eigen::VectorXd mix = Eigen::VectorXd::Zero(3);
      for (int i = 0; i < 4; ++i) mix += g[i] * u_hats[static_cast<std::size_t>(i)];

      LumpedParams theta_hat = 0.0 * psis[0];
      Eigen::VectorXd xhat = Eigen::VectorXd::Zero(3);
      for (int i = 0; i < 4; ++i) {
        theta_hat = theta_hat + g[i] * psis[static_cast<std::size_t>(i)];
        xhat += g[i] * xhats[static_cast<std::size_t>(i)];
      }
      Eigen::VectorXd combined =
          ubar - theta_hat.theta_u.fullPivLu().solve(
                     h_term(x, xbar, ubar, theta_hat, actx) + actx.tracking_gain * (xhat - xbar));
      CHECK((mix - combined).norm() <= 1e-12);
    }
  }
}

TEST_CASE("nu composition identity") {
  // u - ubar from nu() equals (uhat - ubar) plus the measured-state feedback
  // remainder -tu^{-1} k (x - xhat), evaluated on random instances.
  QuadrotorConstants qc;
  auto asys = quadrotor_attitude_model(2.0);
  ControlContext ctx(quadrotor_attitude_params(qc, -2.5e-3, 5e-3), 2.3, asys);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto theta_hat = quadrotor_attitude_params(qc, 1e-2 * u(rng), 1e-2 * u(rng));
    Eigen::VectorXd x(3), xhat(3), xbar(3), ubar(3);
    x << u(rng), u(rng), u(rng);
    xhat << u(rng), u(rng), u(rng);
    xbar << u(rng), u(rng), u(rng);
    ubar << u(rng), u(rng), u(rng);

    Eigen::VectorXd lhs = nu(x, xbar, ubar, theta_hat, ctx);
    Eigen::VectorXd uhat_minus_ubar = -theta_hat.theta_u.fullPivLu().solve(
        h_term(x, xbar, ubar, theta_hat, ctx) + ctx.tracking_gain * (xhat - xbar));
    Eigen::VectorXd remainder =
        -theta_hat.theta_u.fullPivLu().solve(ctx.tracking_gain * (x - xhat));
    CHECK((lhs - (uhat_minus_ubar + remainder)).norm() <= 1e-12);
  }
}

TEST_CASE("exponential tracking of the nominal") {
  // Plant parameters equal the estimate, so the correction yields pure -k
  // feedback on the deviation and the closed form e0 * exp(-k t).
  QuadrotorConstants qc;
  auto sys = quadrotor_attitude_model(1.5);
  auto theta = quadrotor_attitude_params(qc, -2.5e-3, 5e-3);
  auto theta_bar = quadrotor_attitude_params(qc, -4e-3, 3e-3);
  const double k = 2.0;
  ControlContext ctx(theta_bar, k, sys);

  auto ref = [&](double t) {
    Eigen::VectorXd r(3);
    r << 0.3 * std::sin(0.8 * t), 0.25 * std::sin(0.6 * t), 0.2 * std::sin(0.4 * t);
    return r;
  };
  auto ref_dot = [&](double t) {
    Eigen::VectorXd r(3);
    r << 0.3 * 0.8 * std::cos(0.8 * t), 0.25 * 0.6 * std::cos(0.6 * t),
        0.2 * 0.4 * std::cos(0.4 * t);
    return r;
  };
  auto ubar = [&](double t) {
    return theta_bar.theta_u.fullPivLu()
        .solve(ref_dot(t) - theta_bar.theta_x * sys.phi(ref(t)))
        .eval();
  };

  Eigen::VectorXd e0(3);
  e0 << 0.1, -0.05, 0.08;
  Eigen::VectorXd x = ref(0.0) + e0;

  auto f = [&](double t, const Eigen::VectorXd& s) {
    Eigen::VectorXd u = ubar(t) + nu(s, ref(t), ubar(t), theta, ctx);
    return eval_dynamics(sys, theta, s, u);
  };

  const double dt = 1e-3;
  double t = 0.0;
  for (double target : {0.5, 1.0, 2.0}) {
    while (t < target - 0.5 * dt) {
      x = rk4_step(f, t, x, dt);
      t += dt;
    }
    double expected = e0.norm() * std::exp(-k * target);
    CHECK_THAT((x - ref(t)).norm(), Catch::Matchers::WithinRel(expected, 0.01));
  }
}

TEST_CASE("deviation tube over a closed-loop run") {
  // Full loop on the scalar system: true parameters unknown inside a box,
  // identifier plus tube control, deviation from the nominal stays within
  // sqrt(1/Gamma) * diam of the initial set.
  auto sys = scalar_model();
  ParamPolytope psi({scalar_params(0.5, 0.8), scalar_params(1.5, 0.8), scalar_params(1.5, 1.2),
                     scalar_params(0.5, 1.2)});
  auto truth = scalar_params(1.1, 0.95);
  const double rate = 1.0, k = 2.0, dt = 1e-3;

  ControlContext ctx(psi.convex_combine(Eigen::VectorXd::Constant(4, 0.25)), k, sys);
  auto id = init_identifier(psi, Eigen::VectorXd::Constant(4, 0.25), rate, k, sv(0.0));

  auto ref = [](double t) { return Eigen::VectorXd::Constant(1, 0.5 * std::sin(0.7 * t)); };
  auto ref_dot = [](double t) {
    return Eigen::VectorXd::Constant(1, 0.5 * 0.7 * std::cos(0.7 * t));
  };

  Eigen::VectorXd x = sv(0.0);
  double max_dev = 0.0;
  for (int s = 0; s < 8000; ++s) {
    double t = id.time;
    Eigen::VectorXd xbar = ref(t);
    Eigen::VectorXd ub =
        ctx.theta_bar.theta_u.fullPivLu().solve(ref_dot(t) - ctx.theta_bar.theta_x * sys.phi(xbar));
    auto [theta_hat, xh] = combined_estimate(id);
    (void)xh;
    Eigen::VectorXd u = ub + nu(x, xbar, ub, theta_hat, ctx);

    std::vector<LumpedParams> psis;
    std::vector<Eigen::VectorXd> xhats;
    for (const auto& v : id.vertices) {
      psis.push_back(v.psi_hat);
      xhats.push_back(v.x_hat);
    }
    auto u_hats = vertex_controls(x, xbar, ub, psis, xhats, id.gamma, ctx);
    id = identifier_step(id, sys, x, u, u_hats, dt);
    auto f = [&](double, const Eigen::VectorXd& s2) { return eval_dynamics(sys, truth, s2, u); };
    x = rk4_step(f, t, x, dt);
    max_dev = std::max(max_dev, (x - ref(id.time)).norm());
  }
  CHECK(max_dev <= delta_bound(id.s0_diam, rate) + 1e-6);
  CHECK(max_dev > 0.0);
}
