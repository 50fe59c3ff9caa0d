#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "alp/box.hpp"
#include "alp/dynamics.hpp"
#include "alp/errors.hpp"
#include "alp/params.hpp"

namespace alp {

/// Running cost l(x, u) = time_weight + u' R u.
struct RunningCost {
  double time_weight = 1.0;
  Eigen::MatrixXd R;

  static RunningCost standard(Eigen::Index m) {
    return RunningCost{1.0, Eigen::MatrixXd::Identity(m, m)};
  }
};

/// Bounds the two-point solver must respect. State bounds may be relaxed per
/// dimension (infinities) so translation-invariant templates can leave the
/// absolute position unconstrained.
struct BvpLimits {
  Box input_box;
  Eigen::VectorXd state_lo, state_hi;  // per state dim; +-inf where free

  static BvpLimits unbounded_state(const Box& input, Eigen::Index n) {
    const double inf = std::numeric_limits<double>::infinity();
    return BvpLimits{input, Eigen::VectorXd::Constant(n, -inf),
                     Eigen::VectorXd::Constant(n, inf)};
  }
};

struct BvpConfig {
  int segments = 20;
  double kkt_tol = 1e-8;
  int max_sqp_iters = 60;
  double t_min = 0.1;
  double t_max = 10.0;
  double golden_tol = 1e-3;
  int scan_points = 9;
  int samples = 50;          // stored samples per primitive
  double state_reg = 1e-8;
  int polish_iters = 8;
  double polish_tol = 1e-10;
};

/// Solution of one fixed-duration transcription.
struct BvpSolution {
  double duration = 0.0;
  double cost = 0.0;
  std::vector<Eigen::VectorXd> states;  // uniformly sampled, endpoints pinned
  std::vector<Eigen::VectorXd> inputs;
  double kkt_residual = 0.0;
  double endpoint_error = 0.0;
};

namespace detail {

/// Trapezoidal direct transcription with fixed endpoints, solved by a
/// Newton-KKT iteration; input bounds handled with an active set. Returns
/// nothing when the iteration fails to meet the tolerance.
class Transcription {
 public:
  Transcription(const SystemModel& sys, const LumpedParams& theta, Eigen::VectorXd a,
                Eigen::VectorXd b, double T, RunningCost cost, BvpLimits limits, BvpConfig cfg)
      : sys_(sys),
        theta_(theta),
        a_(std::move(a)),
        b_(std::move(b)),
        T_(T),
        cost_(std::move(cost)),
        limits_(std::move(limits)),
        cfg_(std::move(cfg)),
        N_(cfg_.segments),
        h_(T / cfg_.segments),
        n_(sys.n),
        m_(sys.m) {}

  std::optional<BvpSolution> solve() {
    const Eigen::Index nv = (N_ - 1) * n_ + (N_ + 1) * m_;
    z_ = Eigen::VectorXd::Zero(nv);
    for (int k = 1; k < N_; ++k) {
      double s = static_cast<double>(k) / N_;
      state(k) = (1.0 - s) * a_ + s * b_;
    }
    fixed_.assign(static_cast<std::size_t>(nv), 0);

    try {
      for (int outer = 0; outer < 6; ++outer) {
        if (!newton_loop()) return std::nullopt;
        if (!adjust_active_set()) break;
      }
    } catch (const std::exception&) {
      return std::nullopt;  // divergence surfaces as non-finite regressor values
    }
    if (last_residual_ > cfg_.kkt_tol) return std::nullopt;
    if (!within_bounds()) return std::nullopt;

    BvpSolution sol;
    sol.duration = T_;
    sol.kkt_residual = last_residual_;
    sol.states.push_back(a_);
    for (int k = 1; k < N_; ++k) sol.states.push_back(state(k));
    sol.states.push_back(b_);
    for (int k = 0; k <= N_; ++k) sol.inputs.push_back(input(k));
    sol.cost = transcription_cost();
    return sol;
  }

 private:
  Eigen::Ref<Eigen::VectorXd> state(int k) {
    return z_.segment((k - 1) * n_, n_);
  }
  Eigen::Ref<Eigen::VectorXd> input(int k) {
    return z_.segment((N_ - 1) * n_ + k * m_, m_);
  }
  Eigen::VectorXd state_value(int k) const {
    if (k == 0) return a_;
    if (k == N_) return b_;
    return z_.segment((k - 1) * n_, n_);
  }
  Eigen::VectorXd input_value(int k) const {
    return z_.segment((N_ - 1) * n_ + k * m_, m_);
  }
  double quad_weight(int k) const { return (k == 0 || k == N_) ? 0.5 : 1.0; }

  double transcription_cost() const {
    double c = cost_.time_weight * T_;
    for (int k = 0; k <= N_; ++k) {
      Eigen::VectorXd u = input_value(k);
      c += h_ * quad_weight(k) * u.dot(cost_.R * u);
    }
    return c;
  }

  Eigen::MatrixXd state_jacobian(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
    // d f / d x = theta_x * d phi / d x, regressor differentiated centrally.
    Eigen::MatrixXd dphi(sys_.p, n_);
    for (Eigen::Index j = 0; j < n_; ++j) {
      double step = 1e-6 * std::max(1.0, std::abs(x[j]));
      Eigen::VectorXd xp = x, xm = x;
      xp[j] += step;
      xm[j] -= step;
      dphi.col(j) = (sys_.phi(xp) - sys_.phi(xm)) / (2.0 * step);
    }
    (void)u;
    return theta_.theta_x * dphi;
  }

  Eigen::VectorXd defects() const {
    Eigen::VectorXd d(N_ * n_);
    for (int k = 0; k < N_; ++k) {
      Eigen::VectorXd xk = state_value(k), xk1 = state_value(k + 1);
      Eigen::VectorXd fk = eval_dynamics(sys_, theta_, xk, input_value(k));
      Eigen::VectorXd fk1 = eval_dynamics(sys_, theta_, xk1, input_value(k + 1));
      d.segment(k * n_, n_) = xk1 - xk - 0.5 * h_ * (fk + fk1);
    }
    return d;
  }

  bool newton_loop() {
    const Eigen::Index nv = z_.size();
    const Eigen::Index nd = N_ * n_;

    double best_defect = std::numeric_limits<double>::infinity();
    int no_progress = 0;

    for (int iter = 0; iter < cfg_.max_sqp_iters; ++iter) {
      Eigen::VectorXd d = defects();

      // Jacobian of the defects.
      Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nd, nv);
      for (int k = 0; k < N_; ++k) {
        Eigen::MatrixXd Ak = state_jacobian(state_value(k), input_value(k));
        Eigen::MatrixXd Ak1 = state_jacobian(state_value(k + 1), input_value(k + 1));
        if (k > 0)
          J.block(k * n_, (k - 1) * n_, n_, n_) =
              -Eigen::MatrixXd::Identity(n_, n_) - 0.5 * h_ * Ak;
        if (k + 1 < N_)
          J.block(k * n_, k * n_, n_, n_) = Eigen::MatrixXd::Identity(n_, n_) - 0.5 * h_ * Ak1;
        J.block(k * n_, (N_ - 1) * n_ + k * m_, n_, m_) = -0.5 * h_ * theta_.theta_u;
        J.block(k * n_, (N_ - 1) * n_ + (k + 1) * m_, n_, m_) = -0.5 * h_ * theta_.theta_u;
      }

      // Gradient and (diagonal-block) Hessian of the cost.
      Eigen::VectorXd g = Eigen::VectorXd::Zero(nv);
      Eigen::MatrixXd H = cfg_.state_reg * Eigen::MatrixXd::Identity(nv, nv);
      for (int k = 0; k <= N_; ++k) {
        Eigen::Index off = (N_ - 1) * n_ + k * m_;
        g.segment(off, m_) = 2.0 * h_ * quad_weight(k) * (cost_.R * input_value(k));
        H.block(off, off, m_, m_) += 2.0 * h_ * quad_weight(k) * cost_.R;
      }

      // Restrict to free variables.
      std::vector<Eigen::Index> free_idx;
      free_idx.reserve(static_cast<std::size_t>(nv));
      for (Eigen::Index i = 0; i < nv; ++i)
        if (!fixed_[static_cast<std::size_t>(i)]) free_idx.push_back(i);
      const auto nf = static_cast<Eigen::Index>(free_idx.size());

      Eigen::MatrixXd Jf(nd, nf);
      for (Eigen::Index c = 0; c < nf; ++c) Jf.col(c) = J.col(free_idx[static_cast<std::size_t>(c)]);
      Eigen::MatrixXd Hf(nf, nf);
      Eigen::VectorXd gf(nf);
      for (Eigen::Index r = 0; r < nf; ++r) {
        gf[r] = g[free_idx[static_cast<std::size_t>(r)]];
        for (Eigen::Index c = 0; c < nf; ++c)
          Hf(r, c) = H(free_idx[static_cast<std::size_t>(r)], free_idx[static_cast<std::size_t>(c)]);
      }

      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nf + nd, nf + nd);
      K.topLeftCorner(nf, nf) = Hf;
      K.topRightCorner(nf, nd) = Jf.transpose();
      K.bottomLeftCorner(nd, nf) = Jf;
      Eigen::VectorXd rhs(nf + nd);
      rhs.head(nf) = -gf;
      rhs.tail(nd) = -d;

      Eigen::VectorXd sol = K.partialPivLu().solve(rhs);
      lambda_ = sol.tail(nd);
      Eigen::VectorXd step_full = Eigen::VectorXd::Zero(nv);
      for (Eigen::Index c = 0; c < nf; ++c)
        step_full[free_idx[static_cast<std::size_t>(c)]] = sol[c];

      if (!sol.allFinite()) return false;

      double before = d.norm();
      Eigen::VectorXd z_old = z_;
      double alpha = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 12; ++ls) {
        z_ = z_old + alpha * step_full;
        if (z_.allFinite()) {
          double after = defects().norm();
          if (after <= before * (1.0 - 0.1 * alpha) + 1e-14 || after <= cfg_.kkt_tol) {
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        if (++stalls_ >= 3) return false;
      } else {
        stalls_ = 0;
      }

      Eigen::VectorXd d_new = defects();
      Eigen::VectorXd stat = g + J.transpose() * lambda_;
      double stat_free = 0.0;
      for (Eigen::Index i : free_idx) stat_free = std::max(stat_free, std::abs(stat[i]));
      last_residual_ = std::max(d_new.lpNorm<Eigen::Infinity>(), stat_free);
      stationarity_ = stat;
      if (last_residual_ <= cfg_.kkt_tol) return true;

      // infeasible or blocked problems stagnate; stop burning iterations
      double dn = d_new.norm();
      if (dn < 0.98 * best_defect) {
        best_defect = dn;
        no_progress = 0;
      } else if (++no_progress >= 5) {
        return false;
      }
    }
    return false;
  }

  /// Clamps violated input entries and releases actively held entries whose
  /// multiplier sign says the cost would improve. Returns true if the active
  /// set changed.
  bool adjust_active_set() {
    bool changed = false;
    for (int k = 0; k <= N_; ++k) {
      for (Eigen::Index j = 0; j < m_; ++j) {
        Eigen::Index idx = (N_ - 1) * n_ + k * m_ + j;
        double lo = limits_.input_box.lo[j], hi = limits_.input_box.hi[j];
        double v = z_[idx];
        auto& flag = fixed_[static_cast<std::size_t>(idx)];
        if (!flag) {
          if (v < lo - 1e-12) {
            z_[idx] = lo;
            flag = 1;
            changed = true;
          } else if (v > hi + 1e-12) {
            z_[idx] = hi;
            flag = 2;
            changed = true;
          }
        } else if (stationarity_.size() == z_.size()) {
          double r = stationarity_[idx];
          if ((flag == 1 && r < -1e-10) || (flag == 2 && r > 1e-10)) {
            flag = 0;
            changed = true;
          }
        }
      }
    }
    return changed;
  }

  bool within_bounds() const {
    for (int k = 0; k <= N_; ++k) {
      Eigen::VectorXd u = input_value(k);
      for (Eigen::Index j = 0; j < m_; ++j)
        if (u[j] < limits_.input_box.lo[j] - 1e-9 || u[j] > limits_.input_box.hi[j] + 1e-9)
          return false;
      Eigen::VectorXd x = state_value(k);
      for (Eigen::Index j = 0; j < n_; ++j)
        if (x[j] < limits_.state_lo[j] - 1e-9 || x[j] > limits_.state_hi[j] + 1e-9) return false;
    }
    return true;
  }

  const SystemModel& sys_;
  const LumpedParams& theta_;
  Eigen::VectorXd a_, b_;
  double T_;
  RunningCost cost_;  // copied: callers may pass temporaries
  BvpLimits limits_;
  BvpConfig cfg_;
  int N_;
  double h_;
  Eigen::Index n_, m_;

  Eigen::VectorXd z_;
  Eigen::VectorXd lambda_;
  Eigen::VectorXd stationarity_;
  std::vector<char> fixed_;
  int stalls_ = 0;
  double last_residual_ = std::numeric_limits<double>::infinity();
};

/// RK4 rollout of linearly interpolated input samples at a fine step.
inline Eigen::VectorXd rollout_endpoint(const SystemModel& sys, const LumpedParams& theta,
                                        const Eigen::VectorXd& x0,
                                        const std::vector<Eigen::VectorXd>& inputs, double T,
                                        int substeps_per_sample) {
  const auto ns = static_cast<int>(inputs.size());
  if (ns == 1 || T <= 0.0) return x0;
  const double sample_dt = T / (ns - 1);
  auto u_at = [&](double t) -> Eigen::VectorXd {
    if (t <= 0.0) return inputs.front();
    if (t >= T) return inputs.back();
    double s = t / sample_dt;
    auto k = static_cast<int>(std::floor(s));
    if (k >= ns - 1) return inputs.back();
    double a = s - k;
    return (1.0 - a) * inputs[static_cast<std::size_t>(k)] +
           a * inputs[static_cast<std::size_t>(k + 1)];
  };
  auto f = [&](double t, const Eigen::VectorXd& x) { return eval_dynamics(sys, theta, x, u_at(t)); };
  const int steps = (ns - 1) * substeps_per_sample;
  const double dt = T / steps;
  Eigen::VectorXd x = x0;
  for (int k = 0; k < steps; ++k) x = rk4_step(f, k * dt, x, dt);
  return x;
}

}  // namespace detail

/// Solves the fixed-duration two-point problem once. Used directly by tests
/// and by the duration search below.
inline std::optional<BvpSolution> solve_fixed_duration(const SystemModel& sys,
                                                       const LumpedParams& theta,
                                                       const Eigen::VectorXd& from,
                                                       const Eigen::VectorXd& to, double T,
                                                       const RunningCost& cost,
                                                       const BvpLimits& limits,
                                                       const BvpConfig& cfg) {
  detail::Transcription tr(sys, theta, from, to, T, cost, limits, cfg);
  return tr.solve();
}

/// Full two-point solve: bracketing scan plus golden-section refinement of
/// the duration, resampling to the stored sample count, then a shooting
/// polish that pins the endpoint of the stored representation. The returned
/// states are the fine rollout of the stored inputs, so re-integration
/// reproduces them.
inline BvpSolution solve_primitive_bvp(const SystemModel& sys, const LumpedParams& theta,
                                       const Eigen::VectorXd& from, const Eigen::VectorXd& to,
                                       const RunningCost& cost, const BvpLimits& limits,
                                       const BvpConfig& cfg) {
  if (from.size() != sys.n || to.size() != sys.n)
    throw DimensionError("endpoint dimension mismatch");
  for (Eigen::Index j = 0; j < sys.n; ++j) {
    if (from[j] < limits.state_lo[j] - 1e-9 || from[j] > limits.state_hi[j] + 1e-9 ||
        to[j] < limits.state_lo[j] - 1e-9 || to[j] > limits.state_hi[j] + 1e-9)
      throw InfeasibleBVP("endpoint outside the tightened state set");
  }

  if ((to - from).norm() == 0.0) {
    BvpSolution sol;
    sol.duration = 0.0;
    sol.cost = 0.0;
    sol.states = {from};
    sol.inputs = {Eigen::VectorXd::Zero(sys.m)};
    return sol;
  }

  auto cost_at = [&](double T) -> std::pair<double, std::optional<BvpSolution>> {
    auto s = solve_fixed_duration(sys, theta, from, to, T, cost, limits, cfg);
    if (!s) return {std::numeric_limits<double>::infinity(), std::nullopt};
    return {s->cost, std::move(s)};
  };

  // Coarse geometric scan to bracket the minimum.
  std::vector<double> ts;
  for (int i = 0; i < cfg.scan_points; ++i) {
    double a = static_cast<double>(i) / (cfg.scan_points - 1);
    ts.push_back(cfg.t_min * std::pow(cfg.t_max / cfg.t_min, a));
  }
  int best_i = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double c = cost_at(ts[i]).first;
    if (c < best_cost) {
      best_cost = c;
      best_i = static_cast<int>(i);
    }
  }
  if (best_i < 0) throw InfeasibleBVP("no duration in range admits a feasible transcription");

  double lo = ts[static_cast<std::size_t>(std::max(0, best_i - 1))];
  double hi = ts[static_cast<std::size_t>(
      std::min(static_cast<int>(ts.size()) - 1, best_i + 1))];

  // Golden-section refinement on [lo, hi].
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = cost_at(x1).first, f2 = cost_at(x2).first;
  while (hi - lo > cfg.golden_tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = cost_at(x1).first;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = cost_at(x2).first;
    }
  }
  double t_star = 0.5 * (lo + hi);
  auto [c_star, sol_opt] = cost_at(t_star);
  if (!sol_opt) {
    t_star = (f1 < f2) ? x1 : x2;
    std::tie(c_star, sol_opt) = cost_at(t_star);
  }
  if (!sol_opt) throw InfeasibleBVP("duration refinement lost feasibility");
  BvpSolution sol = std::move(*sol_opt);

  // Resample the knot solution onto the stored uniform grid.
  const int ns = cfg.samples;
  std::vector<Eigen::VectorXd> inputs(static_cast<std::size_t>(ns));
  const int N = cfg.segments;
  for (int i = 0; i < ns; ++i) {
    double s = static_cast<double>(i) / (ns - 1) * N;
    auto k = std::min(static_cast<int>(std::floor(s)), N - 1);
    double a = s - k;
    inputs[static_cast<std::size_t>(i)] =
        (1.0 - a) * sol.inputs[static_cast<std::size_t>(k)] +
        a * sol.inputs[static_cast<std::size_t>(k + 1)];
  }

  // Shooting polish: a constant+ramp correction per input channel drives the
  // fine-rollout endpoint of the stored samples onto the target.
  const Eigen::Index m = sys.m;
  const int basis = 2;
  auto apply = [&](const Eigen::VectorXd& c) {
    std::vector<Eigen::VectorXd> adj = inputs;
    for (int i = 0; i < ns; ++i) {
      double tau = static_cast<double>(i) / (ns - 1);
      for (Eigen::Index j = 0; j < m; ++j)
        adj[static_cast<std::size_t>(i)][j] += c[j * basis] + c[j * basis + 1] * tau;
    }
    return adj;
  };

  Eigen::VectorXd corr = Eigen::VectorXd::Zero(m * basis);
  for (int it = 0; it < cfg.polish_iters; ++it) {
    auto adj = apply(corr);
    Eigen::VectorXd r =
        detail::rollout_endpoint(sys, theta, from, adj, sol.duration, 10) - to;
    if (r.lpNorm<Eigen::Infinity>() <= cfg.polish_tol) break;
    Eigen::MatrixXd Jc(sys.n, m * basis);
    const double eps = 1e-6;
    for (Eigen::Index q = 0; q < m * basis; ++q) {
      Eigen::VectorXd cp = corr;
      cp[q] += eps;
      Eigen::VectorXd rp =
          detail::rollout_endpoint(sys, theta, from, apply(cp), sol.duration, 10) - to;
      Jc.col(q) = (rp - r) / eps;
    }
    corr -= Jc.completeOrthogonalDecomposition().solve(r);
  }
  inputs = apply(corr);

  // Stored states come from the fine rollout itself.
  std::vector<Eigen::VectorXd> states(static_cast<std::size_t>(ns));
  states[0] = from;
  {
    const int sub = 10;
    const double dt = sol.duration / ((ns - 1) * sub);
    Eigen::VectorXd x = from;
    auto u_at = [&](double t) -> Eigen::VectorXd {
      double s = t / (sol.duration / (ns - 1));
      auto k = std::min(static_cast<int>(std::floor(s)), ns - 2);
      double a = std::clamp(s - k, 0.0, 1.0);
      return (1.0 - a) * inputs[static_cast<std::size_t>(k)] +
             a * inputs[static_cast<std::size_t>(k + 1)];
    };
    auto f = [&](double t, const Eigen::VectorXd& xx) {
      return eval_dynamics(sys, theta, xx, u_at(t));
    };
    int step = 0;
    for (int i = 1; i < ns; ++i) {
      for (int s = 0; s < sub; ++s) {
        x = rk4_step(f, step * dt, x, dt);
        ++step;
      }
      states[static_cast<std::size_t>(i)] = x;
    }
  }
  sol.endpoint_error = (states.back() - to).lpNorm<Eigen::Infinity>();

  // Cost of the stored representation (trapezoid over the samples).
  double c = cost.time_weight * sol.duration;
  const double hs = sol.duration / (ns - 1);
  for (int i = 0; i < ns; ++i) {
    double w = (i == 0 || i == ns - 1) ? 0.5 : 1.0;
    const auto& u = inputs[static_cast<std::size_t>(i)];
    c += hs * w * u.dot(cost.R * u);
  }
  sol.cost = c;
  sol.states = std::move(states);
  sol.inputs = std::move(inputs);
  return sol;
}

}  // namespace alp
