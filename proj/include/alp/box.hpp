#pragma once

#include <Eigen/Dense>

#include "alp/errors.hpp"

namespace alp {

/// Axis-aligned box given by per-coordinate bounds.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Box() = default;
  Box(Eigen::VectorXd l, Eigen::VectorXd h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo.size() != hi.size()) throw DimensionError("box bounds dimension mismatch");
    if ((hi - lo).minCoeff() < 0.0) throw EmptySet("box has hi < lo");
  }

  Eigen::Index dims() const { return lo.size(); }

  bool contains(const Eigen::VectorXd& x, double tol = 0.0) const {
    if (x.size() != lo.size()) throw DimensionError("box/point dimension mismatch");
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    }
    return true;
  }

  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const {
    return x.cwiseMax(lo).cwiseMin(hi);
  }

  /// Shrinks every face inward by r. Throws EmptySet when nothing remains.
  Box shrunk(double r) const {
    Eigen::VectorXd l = lo.array() + r;
    Eigen::VectorXd h = hi.array() - r;
    if ((h - l).minCoeff() < 0.0) throw EmptySet("box empty after shrinking");
    return Box(l, h);
  }

  /// Grows every face outward by r.
  Box inflated(double r) const {
    return Box(lo.array() - r, hi.array() + r);
  }

  Eigen::VectorXd center() const { return 0.5 * (lo + hi); }

  bool operator==(const Box& other) const {
    return lo == other.lo && hi == other.hi;
  }
};

}  // namespace alp
