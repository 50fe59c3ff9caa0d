#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "alp/errors.hpp"

namespace alp {

/// Regular grid over a projection of the state space. Nodes are integer
/// coordinate vectors; node k sits at position k .* resolution in the
/// planned dimensions, with every other coordinate pinned to the boundary
/// state (rest velocities for the position lattice).
struct LatticeSpec {
  std::vector<Eigen::Index> planning_dims;
  Eigen::VectorXd lo, hi;          // per planned dim, in state units
  Eigen::VectorXd resolution;      // per planned dim
  std::vector<Eigen::VectorXi> connectivity;
  Eigen::VectorXd boundary_state;  // full state template

  Eigen::Index dims() const { return static_cast<Eigen::Index>(planning_dims.size()); }

  Eigen::VectorXi node_min() const {
    Eigen::VectorXi k(dims());
    for (Eigen::Index d = 0; d < dims(); ++d)
      k[d] = static_cast<int>(std::ceil(lo[d] / resolution[d] - 1e-9));
    return k;
  }
  Eigen::VectorXi node_max() const {
    Eigen::VectorXi k(dims());
    for (Eigen::Index d = 0; d < dims(); ++d)
      k[d] = static_cast<int>(std::floor(hi[d] / resolution[d] + 1e-9));
    return k;
  }

  bool node_in_grid(const Eigen::VectorXi& node) const {
    Eigen::VectorXi a = node_min(), b = node_max();
    for (Eigen::Index d = 0; d < dims(); ++d)
      if (node[d] < a[d] || node[d] > b[d]) return false;
    return true;
  }

  std::int64_t node_count() const {
    Eigen::VectorXi a = node_min(), b = node_max();
    std::int64_t c = 1;
    for (Eigen::Index d = 0; d < dims(); ++d) {
      if (b[d] < a[d]) return 0;
      c *= (b[d] - a[d] + 1);
    }
    return c;
  }

  /// Position of a node in the planned dimensions.
  Eigen::VectorXd node_position(const Eigen::VectorXi& node) const {
    Eigen::VectorXd pos(dims());
    for (Eigen::Index d = 0; d < dims(); ++d) pos[d] = node[d] * resolution[d];
    return pos;
  }

  /// Full boundary state at a node.
  Eigen::VectorXd node_state(const Eigen::VectorXi& node) const {
    Eigen::VectorXd x = boundary_state;
    for (Eigen::Index d = 0; d < dims(); ++d) x[planning_dims[static_cast<std::size_t>(d)]] = node[d] * resolution[d];
    return x;
  }

  /// Displacement in state units of one connectivity offset.
  Eigen::VectorXd offset_displacement(const Eigen::VectorXi& offset) const {
    Eigen::VectorXd disp(dims());
    for (Eigen::Index d = 0; d < dims(); ++d) disp[d] = offset[d] * resolution[d];
    return disp;
  }
};

/// Standard 4- or 8-connected neighbor templates for planar lattices.
inline std::vector<Eigen::VectorXi> planar_connectivity(int kind) {
  std::vector<Eigen::VectorXi> out;
  auto add = [&](int a, int b) {
    Eigen::VectorXi v(2);
    v << a, b;
    out.push_back(v);
  };
  add(1, 0);
  add(-1, 0);
  add(0, 1);
  add(0, -1);
  if (kind == 8) {
    add(1, 1);
    add(1, -1);
    add(-1, 1);
    add(-1, -1);
  } else if (kind != 4) {
    throw Error("planar connectivity must be 4 or 8");
  }
  return out;
}

inline LatticeSpec build_lattice(std::vector<Eigen::Index> planning_dims,
                                 const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
                                 const Eigen::VectorXd& resolution,
                                 std::vector<Eigen::VectorXi> connectivity,
                                 const Eigen::VectorXd& boundary_state) {
  const auto dims = static_cast<Eigen::Index>(planning_dims.size());
  if (lo.size() != dims || hi.size() != dims || resolution.size() != dims)
    throw DimensionError("lattice bounds/resolution dimensions disagree");
  if (resolution.minCoeff() <= 0.0) throw Error("lattice resolution must be positive");
  if (connectivity.empty()) throw Error("connectivity template is empty");
  for (const auto& o : connectivity) {
    if (o.size() != dims) throw DimensionError("connectivity offset dimension mismatch");
    if (o.isZero()) throw Error("connectivity must exclude the zero offset");
  }
  for (auto d : planning_dims)
    if (d < 0 || d >= boundary_state.size())
      throw DimensionError("planning dimension index out of range");

  LatticeSpec spec{std::move(planning_dims), lo, hi, resolution, std::move(connectivity),
                   boundary_state};
  if (spec.node_count() <= 0) throw EmptySet("lattice grid is empty");

  // At least one offset must connect two grid nodes.
  Eigen::VectorXi a = spec.node_min(), b = spec.node_max();
  bool reachable = false;
  for (const auto& o : spec.connectivity) {
    Eigen::VectorXi probe = a + o;
    if (spec.node_in_grid(probe)) reachable = true;
    probe = b + o;
    if (spec.node_in_grid(probe)) reachable = true;
  }
  if (!reachable) throw Error("no connectivity offset stays inside the grid");
  return spec;
}

}  // namespace alp
