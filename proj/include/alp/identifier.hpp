#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "alp/dynamics.hpp"
#include "alp/errors.hpp"
#include "alp/params.hpp"
#include "alp/tube_control.hpp"

namespace alp {

/// One moving vertex of the adaptive model set: its parameter estimate and
/// the state estimate evolving alongside it.
struct VertexEstimator {
  LumpedParams psi_hat;
  Eigen::VectorXd x_hat;
};

/// Multi-model adaptive identifier. q vertex estimators span the model set
/// S(t); the combined estimate is their fixed convex combination. Value
/// type: steps return the advanced state, nothing is shared.
struct IdentifierState {
  std::vector<VertexEstimator> vertices;
  Eigen::VectorXd gamma;
  double adaptation_rate = 1.0;  // Gamma
  double tracking_gain = 1.0;    // k
  ParamPolytope psi;             // fixed projection set
  double s0_diam = 0.0;          // diam of the model set when this run started
  double time = 0.0;

  std::size_t q() const { return vertices.size(); }
};

inline IdentifierState init_identifier(const ParamPolytope& psi, const Eigen::VectorXd& gamma,
                                       double adaptation_rate, double tracking_gain,
                                       const Eigen::VectorXd& x0) {
  if (static_cast<std::size_t>(gamma.size()) != psi.size())
    throw WeightError("gamma length must equal the vertex count");
  if (gamma.minCoeff() < 0.0) throw WeightError("negative combination weight");
  if (std::abs(gamma.sum() - 1.0) > 1e-12) throw WeightError("weights do not sum to 1");
  if (adaptation_rate <= 0.0 || tracking_gain <= 0.0)
    throw Error("adaptation rate and tracking gain must be positive");

  IdentifierState id;
  id.gamma = gamma;
  id.adaptation_rate = adaptation_rate;
  id.tracking_gain = tracking_gain;
  id.psi = psi;
  id.time = 0.0;
  id.vertices.reserve(psi.size());
  for (const auto& v : psi.vertices()) id.vertices.push_back({v, x0});
  id.s0_diam = psi.diameter();
  return id;
}

/// Re-enters a run with the carried model set: vertex parameters are kept,
/// state estimates restart at the measured state, and the frozen diameter is
/// re-taken from the current set.
inline IdentifierState rebase_identifier(const IdentifierState& carried,
                                         const Eigen::VectorXd& x0) {
  IdentifierState id = carried;
  for (auto& v : id.vertices) v.x_hat = x0;
  ParamPolytope s = [&] {
    std::vector<LumpedParams> vs;
    vs.reserve(id.vertices.size());
    for (const auto& v : id.vertices) vs.push_back(v.psi_hat);
    return ParamPolytope(std::move(vs));
  }();
  id.s0_diam = s.diameter();
  id.time = 0.0;
  return id;
}

inline std::pair<LumpedParams, Eigen::VectorXd> combined_estimate(const IdentifierState& id) {
  LumpedParams theta = 0.0 * id.vertices.front().psi_hat;
  Eigen::VectorXd x_hat = Eigen::VectorXd::Zero(id.vertices.front().x_hat.size());
  for (std::size_t i = 0; i < id.vertices.size(); ++i) {
    const double g = id.gamma[static_cast<Eigen::Index>(i)];
    theta = theta + g * id.vertices[i].psi_hat;
    x_hat += g * id.vertices[i].x_hat;
  }
  return {theta, x_hat};
}

/// Current model set: the hull of the vertex parameter estimates.
inline ParamPolytope model_set(const IdentifierState& id) {
  std::vector<LumpedParams> vs;
  vs.reserve(id.vertices.size());
  for (const auto& v : id.vertices) vs.push_back(v.psi_hat);
  return ParamPolytope(std::move(vs));
}

inline double current_diam(const IdentifierState& id) { return model_set(id).diameter(); }

/// Tube radius from the frozen model-set diameter: sqrt(1/Gamma) * diam.
inline double delta_bound(double s0_diam, double adaptation_rate) {
  if (adaptation_rate <= 0.0) throw Error("adaptation rate must be positive");
  return std::sqrt(1.0 / adaptation_rate) * s0_diam;
}

/// Advances every vertex estimator by one sampled-data step. The measured
/// state, applied input and the supplied per-vertex controls are held over
/// the step; the estimator pair (x_hat_i, psi_hat_i) is integrated with RK4
/// and the parameter estimate is then projected back onto the admissible set.
///
///   x_hat_i'  = psi_hat_i X + theta_u_hat (u - u_hat_i substituted)
///   psi_hat_i' = Gamma (x - x_hat_i) X^T
inline IdentifierState identifier_step(const IdentifierState& id, const SystemModel& sys,
                                       const Eigen::VectorXd& x_meas,
                                       const Eigen::VectorXd& u_applied,
                                       const std::vector<Eigen::VectorXd>& u_hats, double dt) {
  if (dt <= 0.0) throw Error("dt must be positive");
  if (u_hats.size() != id.vertices.size())
    throw DimensionError("one estimator control is needed per vertex");

  const Eigen::VectorXd X = sys.lumped_regressor(x_meas, u_applied);
  const Eigen::VectorXd phi_x = X.head(sys.p);

  {
    auto [theta_hat, x_hat] = combined_estimate(id);
    (void)x_hat;
    if (condition_number(theta_hat.theta_u) > 1e12)
      throw SingularMatrixError("combined input parameter block is numerically singular");
  }

  const auto q = id.vertices.size();
  const Eigen::Index n = sys.n;
  const Eigen::Index pm = sys.p + sys.m;

  // Stacked stage state: per vertex, x_hat (n) followed by row-major psi_hat.
  auto pack = [&](const std::vector<VertexEstimator>& vs) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(q) * (n + n * pm));
    Eigen::Index off = 0;
    for (const auto& v : vs) {
      z.segment(off, n) = v.x_hat;
      off += n;
      Eigen::MatrixXd c = v.psi_hat.combined();
      for (Eigen::Index r = 0; r < n; ++r) z.segment(off + r * pm, pm) = c.row(r).transpose();
      off += n * pm;
    }
    return z;
  };
  auto unpack_psi = [&](const Eigen::VectorXd& z, std::size_t i) {
    Eigen::Index off = static_cast<Eigen::Index>(i) * (n + n * pm) + n;
    Eigen::MatrixXd c(n, pm);
    for (Eigen::Index r = 0; r < n; ++r) c.row(r) = z.segment(off + r * pm, pm).transpose();
    return c;
  };
  auto unpack_xhat = [&](const Eigen::VectorXd& z, std::size_t i) {
    return z.segment(static_cast<Eigen::Index>(i) * (n + n * pm), n).eval();
  };

  auto rhs = [&](double /*t*/, const Eigen::VectorXd& z) {
    // Combined input block from the stage values.
    Eigen::MatrixXd tu_hat = Eigen::MatrixXd::Zero(n, sys.m);
    for (std::size_t i = 0; i < q; ++i)
      tu_hat += id.gamma[static_cast<Eigen::Index>(i)] *
                unpack_psi(z, i).rightCols(sys.m);

    Eigen::VectorXd dz(z.size());
    for (std::size_t i = 0; i < q; ++i) {
      Eigen::MatrixXd psi = unpack_psi(z, i);
      Eigen::VectorXd x_hat = unpack_xhat(z, i);
      Eigen::VectorXd x_tilde = x_meas - x_hat;
      Eigen::VectorXd u_tilde = u_applied - u_hats[i];
      Eigen::VectorXd dx = psi.leftCols(sys.p) * phi_x + psi.rightCols(sys.m) * u_applied -
                           tu_hat * u_tilde;
      Eigen::MatrixXd dpsi = id.adaptation_rate * x_tilde * X.transpose();
      Eigen::Index off = static_cast<Eigen::Index>(i) * (n + n * pm);
      dz.segment(off, n) = dx;
      for (Eigen::Index r = 0; r < n; ++r)
        dz.segment(off + n + r * pm, pm) = dpsi.row(r).transpose();
    }
    return dz;
  };

  Eigen::VectorXd z = rk4_step(rhs, id.time, pack(id.vertices), dt);

  IdentifierState out = id;
  for (std::size_t i = 0; i < q; ++i) {
    out.vertices[i].x_hat = unpack_xhat(z, i);
    LumpedParams raw = LumpedParams::from_combined(unpack_psi(z, i), sys.p);
    out.vertices[i].psi_hat = id.psi.project(raw);
  }
  out.time = id.time + dt;
  return out;
}

}  // namespace alp
