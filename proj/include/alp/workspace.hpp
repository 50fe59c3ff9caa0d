#pragma once

#include <vector>

#include <Eigen/Dense>

#include "alp/box.hpp"
#include "alp/errors.hpp"

namespace alp {

/// Planar workspace: outer bounds plus axis-aligned box obstacles, all in
/// the planned position dimensions.
struct Workspace {
  Box bounds;
  std::vector<Box> obstacles;

  bool point_free(const Eigen::VectorXd& pos) const {
    if (!bounds.contains(pos)) return false;
    for (const auto& o : obstacles)
      if (o.contains(pos)) return false;
    return true;
  }
};

/// Shrinks the outer bounds by delta and inflates every obstacle by delta
/// per axis. The axis-aligned inflation over-approximates the exact erosion
/// by a ball, which keeps every clearance claim conservative.
inline Workspace tighten_workspace(const Workspace& w, double delta) {
  if (delta < 0.0) throw Error("tube radius must be nonnegative");
  Workspace out;
  out.bounds = w.bounds.shrunk(delta);
  out.obstacles.reserve(w.obstacles.size());
  for (const auto& o : w.obstacles) out.obstacles.push_back(o.inflated(delta));
  return out;
}

}  // namespace alp
