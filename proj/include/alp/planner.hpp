#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "alp/errors.hpp"
#include "alp/io.hpp"
#include "alp/params.hpp"
#include "alp/primitives.hpp"
#include "alp/tube_control.hpp"
#include "alp/workspace.hpp"

namespace alp {

/// Chain of primitives from start to goal on the lattice.
struct Plan {
  std::vector<Eigen::VectorXi> nodes;
  std::vector<Eigen::VectorXi> offsets;
  double cost = 0.0;
  double delta = 0.0;
  int nominal_id = 0;

  bool empty() const { return offsets.empty(); }
};

/// Picks the discrete nominal parameter closest to the current estimate,
/// restricted to samples still inside the model set. Ties break toward the
/// lowest index.
inline std::pair<int, LumpedParams> select_nominal(const std::vector<LumpedParams>& psi_d,
                                                   const ParamPolytope& model_set,
                                                   const LumpedParams& theta_hat,
                                                   double membership_tol = 1e-9) {
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < psi_d.size(); ++i) {
    if (!model_set.contains(psi_d[i], membership_tol)) continue;
    double d = psi_d[i].frobenius_distance(theta_hat);
    if (d < best_dist - 1e-15) {
      best_dist = d;
      best = static_cast<int>(i);
    }
  }
  if (best < 0)
    throw NoNominalInSet("no discrete nominal parameter lies inside the current model set");
  return {best, psi_d[static_cast<std::size_t>(best)]};
}

/// Shrinks the input box per coordinate by margin times the largest sampled
/// correction magnitude. The samples come from whatever grid the caller
/// deems representative of the correction set.
inline Box tighten_inputs(const Box& input_box, const std::vector<Eigen::VectorXd>& nu_samples,
                          double margin) {
  if (margin < 1.0) throw Error("margin must be at least 1");
  Eigen::VectorXd worst = Eigen::VectorXd::Zero(input_box.dims());
  for (const auto& s : nu_samples) {
    if (s.size() != input_box.dims()) throw DimensionError("correction sample dimension mismatch");
    worst = worst.cwiseMax(s.cwiseAbs());
  }
  Eigen::VectorXd lo = input_box.lo + margin * worst;
  Eigen::VectorXd hi = input_box.hi - margin * worst;
  if ((hi - lo).minCoeff() < 0.0) throw EmptySet("input set empty after tightening");
  return Box(lo, hi);
}

/// Evaluates the feedback correction over a coarse grid of states, nominal
/// states, nominal inputs and model-set parameters (vertices plus midpoints
/// per axis, vertices plus centroid for the parameter set).
inline std::vector<Eigen::VectorXd> sample_nu_set(const SystemModel& sys, const Box& state_box,
                                                  const Box& tightened_state_box,
                                                  const Box& input_box,
                                                  const ParamPolytope& model_set,
                                                  const LumpedParams& theta_bar,
                                                  double tracking_gain, int points_per_axis = 3) {
  ControlContext ctx(theta_bar, tracking_gain, sys);
  auto axis_values = [&](const Box& b, Eigen::Index d) {
    std::vector<double> vals{b.lo[d], b.hi[d]};
    if (points_per_axis >= 3) vals.push_back(0.5 * (b.lo[d] + b.hi[d]));
    return vals;
  };
  auto grid = [&](const Box& b) {
    std::vector<Eigen::VectorXd> pts;
    std::vector<std::vector<double>> axes;
    for (Eigen::Index d = 0; d < b.dims(); ++d) axes.push_back(axis_values(b, d));
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
      Eigen::VectorXd p(b.dims());
      for (Eigen::Index d = 0; d < b.dims(); ++d)
        p[d] = axes[static_cast<std::size_t>(d)][idx[static_cast<std::size_t>(d)]];
      pts.push_back(p);
      Eigen::Index d = 0;
      for (; d < b.dims(); ++d) {
        auto& i = idx[static_cast<std::size_t>(d)];
        if (++i < axes[static_cast<std::size_t>(d)].size()) break;
        i = 0;
      }
      if (d == b.dims()) break;
    }
    return pts;
  };

  std::vector<LumpedParams> thetas = model_set.vertices();
  {
    Eigen::VectorXd g =
        Eigen::VectorXd::Constant(static_cast<Eigen::Index>(model_set.size()),
                                  1.0 / static_cast<double>(model_set.size()));
    thetas.push_back(model_set.convex_combine(g));
  }

  std::vector<Eigen::VectorXd> out;
  for (const auto& x : grid(state_box))
    for (const auto& xb : grid(tightened_state_box))
      for (const auto& ub : grid(input_box))
        for (const auto& th : thetas) out.push_back(nu(x, xb, ub, th, ctx));
  return out;
}

namespace detail {

inline std::string node_key(const Eigen::VectorXi& n) { return offset_key(n); }

/// Interpolated footprint membership: every sample of the primitive,
/// densified to at most `spacing` apart in the planned dimensions, must stay
/// in the tightened free space.
inline bool footprint_free(const MotionPrimitive& mp, const LatticeSpec& lattice,
                           const Eigen::VectorXd& anchor_pos, const Workspace& tightened,
                           double spacing) {
  const auto dims = lattice.dims();
  auto position = [&](const Eigen::VectorXd& state) {
    Eigen::VectorXd p(dims);
    for (Eigen::Index d = 0; d < dims; ++d)
      p[d] = anchor_pos[d] + state[lattice.planning_dims[static_cast<std::size_t>(d)]];
    return p;
  };

  Eigen::VectorXd prev = position(mp.states.front());
  if (!tightened.point_free(prev)) return false;
  for (std::size_t i = 1; i < mp.states.size(); ++i) {
    Eigen::VectorXd next = position(mp.states[i]);
    double seg = (next - prev).norm();
    int pieces = spacing > 0.0 ? std::max(1, static_cast<int>(std::ceil(seg / spacing))) : 1;
    for (int s = 1; s <= pieces; ++s) {
      Eigen::VectorXd p = prev + (static_cast<double>(s) / pieces) * (next - prev);
      if (!tightened.point_free(p)) return false;
    }
    prev = next;
  }
  return true;
}

}  // namespace detail

/// Resolution-optimal search over the primitive lattice: A* with an
/// admissible distance-over-best-step heuristic, deterministic tie-breaking
/// (lower f, then lower h, then insertion order).
inline Plan plan_path(const Eigen::VectorXi& start_node, const Eigen::VectorXi& goal_node,
                      const PrimitiveLibrary& library, int nominal_id, const Workspace& workspace,
                      double delta) {
  const LatticeSpec& lattice = library.lattice;
  Workspace tightened = tighten_workspace(workspace, delta);

  if (!lattice.node_in_grid(start_node) || !lattice.node_in_grid(goal_node))
    throw NoPath("start or goal is outside the lattice grid");
  if (!tightened.point_free(lattice.node_position(start_node)))
    throw NoPath("start node is infeasible in the tightened workspace");
  if (!tightened.point_free(lattice.node_position(goal_node)))
    throw NoPath("goal node is infeasible in the tightened workspace");

  Plan plan;
  plan.delta = delta;
  plan.nominal_id = nominal_id;
  plan.nodes.push_back(start_node);
  if (start_node == goal_node) return plan;

  auto slice = library.slice(nominal_id);
  if (slice.empty()) throw NoPath("primitive library has no entries for the selected nominal");

  double min_cost = std::numeric_limits<double>::infinity();
  double max_disp = 0.0;
  for (const auto* mp : slice) {
    if (mp->duration == 0.0) continue;
    min_cost = std::min(min_cost, mp->cost);
    max_disp = std::max(max_disp, lattice.offset_displacement(mp->to_offset).norm());
  }
  if (!std::isfinite(min_cost) || max_disp <= 0.0)
    throw NoPath("no usable primitives for the selected nominal");

  auto heuristic = [&](const Eigen::VectorXi& node) {
    double dist = (lattice.node_position(goal_node) - lattice.node_position(node)).norm();
    return dist / max_disp * min_cost * (1.0 - 1e-12);
  };

  struct OpenItem {
    double f;
    double h;
    std::uint64_t order;
    std::string node;
  };
  struct Cmp {
    bool operator()(const OpenItem& a, const OpenItem& b) const {
      if (a.f != b.f) return a.f > b.f;
      if (a.h != b.h) return a.h > b.h;
      return a.order > b.order;
    }
  };

  std::map<std::string, double> g_cost;
  std::map<std::string, std::pair<std::string, const MotionPrimitive*>> parent;
  std::map<std::string, Eigen::VectorXi> node_of;
  std::priority_queue<OpenItem, std::vector<OpenItem>, Cmp> open;
  std::uint64_t order = 0;

  const double spacing = delta > 0.0 ? 0.5 * delta : 0.0;
  auto skey = detail::node_key(start_node);
  g_cost[skey] = 0.0;
  node_of[skey] = start_node;
  open.push({heuristic(start_node), heuristic(start_node), order++, skey});
  const auto gkey = detail::node_key(goal_node);

  while (!open.empty()) {
    OpenItem top = open.top();
    open.pop();
    double g = g_cost.at(top.node);
    if (top.f > g + heuristic(node_of.at(top.node)) + 1e-12) continue;  // stale
    if (top.node == gkey) break;
    Eigen::VectorXi node = node_of.at(top.node);

    for (const auto* mp : slice) {
      if (mp->duration == 0.0) continue;
      Eigen::VectorXi next = node + mp->to_offset;
      if (!lattice.node_in_grid(next)) continue;
      if (!detail::footprint_free(*mp, lattice, lattice.node_position(node), tightened, spacing))
        continue;
      double ng = g + mp->cost;
      auto nkey = detail::node_key(next);
      auto it = g_cost.find(nkey);
      if (it == g_cost.end() || ng < it->second) {
        g_cost[nkey] = ng;
        node_of[nkey] = next;
        parent[nkey] = {top.node, mp};
        double h = heuristic(next);
        open.push({ng + h, h, order++, nkey});
      }
    }
  }

  if (!g_cost.count(gkey)) throw NoPath("goal is unreachable on the tightened lattice");

  // Reconstruct.
  std::vector<std::pair<Eigen::VectorXi, const MotionPrimitive*>> chain;
  std::string cur = gkey;
  while (cur != skey) {
    auto [prev, mp] = parent.at(cur);
    chain.push_back({node_of.at(cur), mp});
    cur = prev;
  }
  std::reverse(chain.begin(), chain.end());
  for (const auto& [node, mp] : chain) {
    plan.nodes.push_back(node);
    plan.offsets.push_back(mp->to_offset);
    plan.cost += mp->cost;
  }
  return plan;
}

inline std::string plan_to_json(const Plan& plan) {
  JsonWriter w;
  w.begin_object();
  w.key("cost").value(plan.cost);
  w.key("delta").value(plan.delta);
  w.key("nominal_id").value(plan.nominal_id);
  w.key("nodes").begin_array();
  for (const auto& n : plan.nodes) w.value(n);
  w.end_array();
  w.key("offsets").begin_array();
  for (const auto& o : plan.offsets) w.value(o);
  w.end_array();
  w.end_object();
  return w.str();
}

}  // namespace alp
