#pragma once

#include <vector>

#include <Eigen/Dense>

#include "alp/dynamics.hpp"
#include "alp/errors.hpp"
#include "alp/params.hpp"

namespace alp {

inline double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[s.size() - 1] <= 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / s[s.size() - 1];
}

/// Solves theta_u * y = b with conditioning guarded at the call site.
inline Eigen::VectorXd solve_input_block(const Eigen::MatrixXd& theta_u,
                                         const Eigen::VectorXd& b,
                                         double cond_limit = 1e12) {
  if (theta_u.rows() != theta_u.cols())
    throw DimensionError("input block must be square for control inversion");
  if (condition_number(theta_u) > cond_limit)
    throw SingularMatrixError("input parameter block is numerically singular");
  return theta_u.fullPivLu().solve(b);
}

/// Shared context for the tracking controller: the nominal parameters the
/// reference trajectory was built with, the tracking gain, and the model.
struct ControlContext {
  LumpedParams theta_bar;
  double tracking_gain = 1.0;
  const SystemModel* sys = nullptr;

  ControlContext(LumpedParams tb, double k, const SystemModel& model)
      : theta_bar(std::move(tb)), tracking_gain(k), sys(&model) {
    if (theta_bar.theta_u.rows() != theta_bar.theta_u.cols())
      throw DimensionError("nominal input block must be square");
    if (condition_number(theta_bar.theta_u) > 1e12)
      throw SingularMatrixError("nominal input block is numerically singular");
  }
};

/// Measurable mismatch between the estimated model at the measured state and
/// the nominal model along its reference:
///   h = th^x phi(x) - tb^x phi(xbar) + (th^u - tb^u) ubar
inline Eigen::VectorXd h_term(const Eigen::VectorXd& x, const Eigen::VectorXd& xbar,
                              const Eigen::VectorXd& ubar, const LumpedParams& theta_hat,
                              const ControlContext& ctx) {
  const SystemModel& sys = *ctx.sys;
  return theta_hat.theta_x * sys.phi(x) - ctx.theta_bar.theta_x * sys.phi(xbar) +
         (theta_hat.theta_u - ctx.theta_bar.theta_u) * ubar;
}

/// Feedback correction so that u = ubar + nu cancels the measurable mismatch
/// and leaves pure -k feedback on the deviation from the nominal reference.
inline Eigen::VectorXd nu(const Eigen::VectorXd& x, const Eigen::VectorXd& xbar,
                          const Eigen::VectorXd& ubar, const LumpedParams& theta_hat,
                          const ControlContext& ctx) {
  Eigen::VectorXd h = h_term(x, xbar, ubar, theta_hat, ctx);
  return -solve_input_block(theta_hat.theta_u, h + ctx.tracking_gain * (x - xbar));
}

/// Per-vertex estimator controls. Each one shares the combined mismatch term
/// and differs only through its own state estimate, which keeps the vertex
/// error dynamics at xtilde_i' = psitilde_i X - k xtilde_i and makes the
/// gamma-weighted combination reproduce the combined control exactly.
inline std::vector<Eigen::VectorXd> vertex_controls(
    const Eigen::VectorXd& x, const Eigen::VectorXd& xbar, const Eigen::VectorXd& ubar,
    const std::vector<LumpedParams>& psi_hats, const std::vector<Eigen::VectorXd>& x_hats,
    const Eigen::VectorXd& gamma, const ControlContext& ctx) {
  if (psi_hats.size() != x_hats.size() ||
      psi_hats.size() != static_cast<std::size_t>(gamma.size()))
    throw DimensionError("vertex estimate list sizes disagree");

  LumpedParams theta_hat = 0.0 * psi_hats.front();
  for (std::size_t i = 0; i < psi_hats.size(); ++i)
    theta_hat = theta_hat + gamma[static_cast<Eigen::Index>(i)] * psi_hats[i];

  const Eigen::VectorXd h = h_term(x, xbar, ubar, theta_hat, ctx);
  const Eigen::MatrixXd& tu = theta_hat.theta_u;
  if (condition_number(tu) > 1e12)
    throw SingularMatrixError("combined input parameter block is numerically singular");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(tu);

  std::vector<Eigen::VectorXd> u_hats;
  u_hats.reserve(psi_hats.size());
  for (std::size_t i = 0; i < psi_hats.size(); ++i) {
    Eigen::VectorXd corr = h + ctx.tracking_gain * (x_hats[i] - xbar);
    u_hats.push_back(ubar - lu.solve(corr));
  }
  return u_hats;
}

}  // namespace alp
