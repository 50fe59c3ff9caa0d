#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "alp/errors.hpp"

namespace alp {

/// Lumped parameter matrix: the drift block applied to the regressor and the
/// input block applied to the control.
struct LumpedParams {
  Eigen::MatrixXd theta_x;  // n x p
  Eigen::MatrixXd theta_u;  // n x m

  LumpedParams() = default;
  LumpedParams(Eigen::MatrixXd tx, Eigen::MatrixXd tu)
      : theta_x(std::move(tx)), theta_u(std::move(tu)) {
    if (theta_x.rows() != theta_u.rows())
      throw DimensionError("theta_x and theta_u row counts differ");
  }

  Eigen::Index n() const { return theta_x.rows(); }
  Eigen::Index p() const { return theta_x.cols(); }
  Eigen::Index m() const { return theta_u.cols(); }

  bool same_shape(const LumpedParams& o) const {
    return theta_x.rows() == o.theta_x.rows() && theta_x.cols() == o.theta_x.cols() &&
           theta_u.rows() == o.theta_u.rows() && theta_u.cols() == o.theta_u.cols();
  }

  /// [theta_x theta_u] as one n x (p+m) matrix.
  Eigen::MatrixXd combined() const {
    Eigen::MatrixXd c(theta_x.rows(), theta_x.cols() + theta_u.cols());
    c << theta_x, theta_u;
    return c;
  }

  static LumpedParams from_combined(const Eigen::MatrixXd& c, Eigen::Index p) {
    return LumpedParams(c.leftCols(p), c.rightCols(c.cols() - p));
  }

  double frobenius_distance(const LumpedParams& o) const {
    if (!same_shape(o)) throw DimensionError("parameter shape mismatch");
    double dx = (theta_x - o.theta_x).squaredNorm();
    double du = (theta_u - o.theta_u).squaredNorm();
    return std::sqrt(dx + du);
  }

  double frobenius_norm() const {
    return std::sqrt(theta_x.squaredNorm() + theta_u.squaredNorm());
  }

  LumpedParams operator+(const LumpedParams& o) const {
    return LumpedParams(theta_x + o.theta_x, theta_u + o.theta_u);
  }
  LumpedParams operator-(const LumpedParams& o) const {
    return LumpedParams(theta_x - o.theta_x, theta_u - o.theta_u);
  }
  friend LumpedParams operator*(double s, const LumpedParams& p) {
    return LumpedParams(s * p.theta_x, s * p.theta_u);
  }
  bool operator==(const LumpedParams& o) const {
    return theta_x == o.theta_x && theta_u == o.theta_u;
  }
};

namespace detail {

/// Minimum-norm point of co{u_1..u_q} via Wolfe's algorithm. Returns the
/// convex weights; the optimum is U*w. Exact for the small vertex counts we
/// deal with; `tol` bounds the duality gap on the squared norm.
inline Eigen::VectorXd min_norm_point_weights(const Eigen::MatrixXd& U, double tol) {
  const Eigen::Index q = U.cols();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(q);

  // Start from the vertex with the smallest norm.
  Eigen::Index i0 = 0;
  double best = U.col(0).squaredNorm();
  for (Eigen::Index i = 1; i < q; ++i) {
    double s = U.col(i).squaredNorm();
    if (s < best) {
      best = s;
      i0 = i;
    }
  }
  std::vector<Eigen::Index> support{i0};
  w[i0] = 1.0;

  const double scale = std::max(1.0, best);
  for (int major = 0; major < 16 * static_cast<int>(q) + 64; ++major) {
    Eigen::VectorXd p = U * w;
    double pp = p.squaredNorm();

    // Most improving vertex.
    Eigen::Index j = 0;
    double jv = U.col(0).dot(p);
    for (Eigen::Index i = 1; i < q; ++i) {
      double v = U.col(i).dot(p);
      if (v < jv) {
        jv = v;
        j = i;
      }
    }
    if (jv >= pp - tol * scale) return w;

    bool in_support = false;
    for (auto s : support)
      if (s == j) in_support = true;
    if (!in_support) support.push_back(j);

    // Minor cycle: affine-optimal weights on the current support, stepping
    // back whenever a weight would turn negative.
    for (int minor = 0; minor < 4 * static_cast<int>(q) + 16; ++minor) {
      const auto k = static_cast<Eigen::Index>(support.size());
      Eigen::MatrixXd G(k + 1, k + 1);
      for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b)
          G(a, b) = U.col(support[a]).dot(U.col(support[b]));
      G.topLeftCorner(k, k).diagonal().array() += 1e-13 * scale;
      G.bottomRows(1).setOnes();
      G.rightCols(1).setOnes();
      G(k, k) = 0.0;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
      rhs[k] = 1.0;
      Eigen::VectorXd sol = G.fullPivLu().solve(rhs);
      Eigen::VectorXd a = sol.head(k);

      if (a.minCoeff() >= -1e-13) {
        Eigen::VectorXd nw = Eigen::VectorXd::Zero(q);
        for (Eigen::Index t = 0; t < k; ++t) nw[support[t]] = std::max(0.0, a[t]);
        nw /= nw.sum();
        w = nw;
        break;
      }

      // Largest step toward `a` that keeps weights nonnegative.
      double theta = 1.0;
      for (Eigen::Index t = 0; t < k; ++t) {
        if (a[t] < 0.0) {
          double wt = w[support[t]];
          theta = std::min(theta, wt / (wt - a[t]));
        }
      }
      Eigen::VectorXd nw = Eigen::VectorXd::Zero(q);
      for (Eigen::Index t = 0; t < k; ++t)
        nw[support[t]] = (1.0 - theta) * w[support[t]] + theta * a[t];
      // Drop vanished vertices from the support.
      std::vector<Eigen::Index> ns;
      for (Eigen::Index t = 0; t < k; ++t) {
        if (nw[support[t]] > 1e-13) ns.push_back(support[t]);
        else nw[support[t]] = 0.0;
      }
      double sum = nw.sum();
      if (sum <= 0.0) {
        ns = {j};
        nw.setZero();
        nw[j] = 1.0;
        sum = 1.0;
      }
      nw /= sum;
      w = nw;
      support = std::move(ns);
    }
  }
  return w;
}

}  // namespace detail

/// Convex hull of a finite list of parameter matrices, in vertex
/// representation. Immutable after construction.
class ParamPolytope {
 public:
  ParamPolytope() = default;

  explicit ParamPolytope(std::vector<LumpedParams> vertices)
      : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw Error("polytope needs at least one vertex");
    for (const auto& v : vertices_) {
      if (!v.same_shape(vertices_.front()))
        throw DimensionError("polytope vertices have mixed shapes");
    }
    detect_box();
  }

  const std::vector<LumpedParams>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool is_axis_aligned_box() const { return is_box_; }

  /// Largest pairwise Frobenius distance between vertices; 0 for one vertex.
  double diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      for (std::size_t j = i + 1; j < vertices_.size(); ++j)
        d = std::max(d, vertices_[i].frobenius_distance(vertices_[j]));
    return d;
  }

  /// Frobenius-nearest point of the hull. Axis-aligned boxes take the exact
  /// per-entry clamp; general hulls run the min-norm-point iteration.
  LumpedParams project(const LumpedParams& m, double tol = 1e-10) const {
    check_shape(m);
    if (is_box_) {
      Eigen::MatrixXd c = m.combined().cwiseMax(box_lo_).cwiseMin(box_hi_);
      return LumpedParams::from_combined(c, m.p());
    }
    Eigen::MatrixXd U = stacked_minus(m);
    Eigen::VectorXd w = detail::min_norm_point_weights(U, tol * tol);
    return combine_weights(w);
  }

  /// Distance from m to the hull in Frobenius norm.
  double distance(const LumpedParams& m, double tol = 1e-12) const {
    return project(m, tol).frobenius_distance(m);
  }

  bool contains(const LumpedParams& m, double tol) const {
    check_shape(m);
    return distance(m) <= tol + 1e-15;
  }

  /// Weighted vertex sum. Weights must be nonnegative and sum to one.
  LumpedParams convex_combine(const Eigen::VectorXd& gamma) const {
    if (static_cast<std::size_t>(gamma.size()) != vertices_.size())
      throw WeightError("weight count does not match vertex count");
    if (gamma.minCoeff() < 0.0) throw WeightError("negative convex weight");
    if (std::abs(gamma.sum() - 1.0) > 1e-12) throw WeightError("weights do not sum to 1");
    return combine_weights(gamma);
  }

  bool operator==(const ParamPolytope& o) const {
    if (vertices_.size() != o.vertices_.size()) return false;
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      if (!(vertices_[i] == o.vertices_[i])) return false;
    return true;
  }

 private:
  void check_shape(const LumpedParams& m) const {
    if (!m.same_shape(vertices_.front()))
      throw DimensionError("parameter shape does not match polytope");
  }

  LumpedParams combine_weights(const Eigen::VectorXd& w) const {
    LumpedParams acc(Eigen::MatrixXd::Zero(vertices_[0].theta_x.rows(), vertices_[0].theta_x.cols()),
                     Eigen::MatrixXd::Zero(vertices_[0].theta_u.rows(), vertices_[0].theta_u.cols()));
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      acc.theta_x += w[static_cast<Eigen::Index>(i)] * vertices_[i].theta_x;
      acc.theta_u += w[static_cast<Eigen::Index>(i)] * vertices_[i].theta_u;
    }
    return acc;
  }

  /// Columns are vec(vertex_i) - vec(m).
  Eigen::MatrixXd stacked_minus(const LumpedParams& m) const {
    const Eigen::MatrixXd mc = m.combined();
    const Eigen::Index dim = mc.size();
    Eigen::MatrixXd U(dim, static_cast<Eigen::Index>(vertices_.size()));
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      Eigen::MatrixXd d = vertices_[i].combined() - mc;
      U.col(static_cast<Eigen::Index>(i)) =
          Eigen::Map<Eigen::VectorXd>(d.data(), d.size());
    }
    return U;
  }

  /// A vertex list is an axis-aligned box when every entry takes at most two
  /// distinct values and the vertices enumerate each combination exactly once.
  void detect_box() {
    is_box_ = false;
    const Eigen::MatrixXd first = vertices_.front().combined();
    const Eigen::Index dim = first.size();
    box_lo_ = first;
    box_hi_ = first;

    std::vector<std::pair<double, double>> range(static_cast<std::size_t>(dim));
    std::vector<bool> two(static_cast<std::size_t>(dim), false);
    for (Eigen::Index e = 0; e < dim; ++e)
      range[static_cast<std::size_t>(e)] = {first(e / first.cols(), e % first.cols()),
                                            first(e / first.cols(), e % first.cols())};

    auto entry = [](const Eigen::MatrixXd& m, Eigen::Index e) {
      return m(e / m.cols(), e % m.cols());
    };

    for (const auto& v : vertices_) {
      Eigen::MatrixXd c = v.combined();
      for (Eigen::Index e = 0; e < dim; ++e) {
        auto& r = range[static_cast<std::size_t>(e)];
        double val = entry(c, e);
        if (val == r.first || val == r.second) continue;
        if (!two[static_cast<std::size_t>(e)] && r.first == r.second) {
          two[static_cast<std::size_t>(e)] = true;
          if (val < r.first) r.first = val;
          else r.second = val;
        } else {
          return;  // a third distinct value: not a box
        }
      }
    }

    std::size_t free_dims = 0;
    for (Eigen::Index e = 0; e < dim; ++e)
      if (range[static_cast<std::size_t>(e)].first != range[static_cast<std::size_t>(e)].second)
        ++free_dims;
    if (free_dims > 20) return;
    if (vertices_.size() != (std::size_t{1} << free_dims)) return;

    // Every corner combination must appear exactly once.
    std::map<std::uint64_t, int> seen;
    for (const auto& v : vertices_) {
      Eigen::MatrixXd c = v.combined();
      std::uint64_t code = 0;
      std::size_t bit = 0;
      for (Eigen::Index e = 0; e < dim; ++e) {
        const auto& r = range[static_cast<std::size_t>(e)];
        if (r.first == r.second) continue;
        if (entry(c, e) == r.second) code |= (std::uint64_t{1} << bit);
        ++bit;
      }
      seen[code]++;
    }
    if (seen.size() != vertices_.size()) return;

    Eigen::MatrixXd lo = first, hi = first;
    for (Eigen::Index e = 0; e < dim; ++e) {
      const auto& r = range[static_cast<std::size_t>(e)];
      lo(e / lo.cols(), e % lo.cols()) = std::min(r.first, r.second);
      hi(e / hi.cols(), e % hi.cols()) = std::max(r.first, r.second);
    }
    box_lo_ = lo;
    box_hi_ = hi;
    is_box_ = true;
  }

  std::vector<LumpedParams> vertices_;
  bool is_box_ = false;
  Eigen::MatrixXd box_lo_, box_hi_;
};

}  // namespace alp
