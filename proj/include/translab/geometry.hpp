#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "translab/common.hpp"

namespace translab {

namespace detail {

inline void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw PreconditionError(std::string(what) + " has non-finite coordinates");
}

}  // namespace detail

/// Closed ball in R^k (k >= 1; projected and sliced balls may live in R^1).
class Ball {
 public:
  Ball(Vector center, double radius) : center_(std::move(center)), radius_(radius) {
    if (center_.size() < 1) throw PreconditionError("ball center must have at least one coordinate");
    detail::require_finite(center_, "ball center");
    if (!(radius_ > 0.0) || !std::isfinite(radius_))
      throw PreconditionError("ball radius must be positive and finite, got " + std::to_string(radius_));
  }

  const Vector& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  Eigen::Index dim() const noexcept { return center_.size(); }

  /// Same center, radius multiplied by `factor` (> 0).
  Ball scaled(double factor) const { return Ball(center_, radius_ * factor); }

 private:
  Vector center_;
  double radius_;
};

using BallFamily = std::vector<Ball>;

inline Eigen::Index family_dimension(const BallFamily& f) {
  if (f.empty()) throw PreconditionError("ball family is empty");
  const auto d = f.front().dim();
  for (const auto& b : f)
    if (b.dim() != d) throw PreconditionError("ball family mixes dimensions");
  return d;
}

inline BallFamily scale_family(const BallFamily& f, double factor) {
  BallFamily out;
  out.reserve(f.size());
  for (const auto& b : f) out.push_back(b.scaled(factor));
  return out;
}

inline BallFamily subfamily(const BallFamily& f, const std::vector<int>& indices) {
  BallFamily out;
  out.reserve(indices.size());
  for (int i : indices) out.push_back(f.at(static_cast<std::size_t>(i)));
  return out;
}

/// Unit vector on S^{d-1}.
class UnitDirection {
 public:
  /// Wraps an already-normalized vector; throws if |v| deviates from 1 by more than 1e-12.
  explicit UnitDirection(Vector v) : vec_(std::move(v)) {
    detail::require_finite(vec_, "direction");
    if (std::abs(vec_.norm() - 1.0) > 1e-12) throw PreconditionError("direction is not unit length");
  }

  static UnitDirection normalized(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw PreconditionError("cannot normalize a zero or non-finite vector");
    return UnitDirection(v / n);
  }

  const Vector& vec() const noexcept { return vec_; }
  Eigen::Index dim() const noexcept { return vec_.size(); }
  UnitDirection reversed() const { return UnitDirection(-vec_); }

 private:
  Vector vec_;
};

/// Geodesic (great-circle) angle between two unit directions.
inline double geodesic_angle(const UnitDirection& a, const UnitDirection& b) {
  // atan2 form stays accurate for nearly parallel vectors.
  const double s = (a.vec() - b.vec()).norm();
  const double c = (a.vec() + b.vec()).norm();
  return 2.0 * std::atan2(s, c);
}

/// Point on the great circle from `a` towards `b` at fraction `s` of the arc.
inline UnitDirection slerp(const UnitDirection& a, const UnitDirection& b, double s) {
  const double theta = geodesic_angle(a, b);
  if (theta < 1e-15) return a;
  const double sin_theta = std::sin(theta);
  const Vector v = (std::sin((1.0 - s) * theta) / sin_theta) * a.vec() + (std::sin(s * theta) / sin_theta) * b.vec();
  return UnitDirection::normalized(v);
}

/// Point at geodesic distance `theta` from `base` along the unit tangent `tangent` (tangent ⟂ base).
inline UnitDirection exp_map(const UnitDirection& base, const Vector& tangent, double theta) {
  return UnitDirection::normalized(std::cos(theta) * base.vec() + std::sin(theta) * tangent);
}

/// Orthonormal basis (columns) of the hyperplane v^⟂.
///
/// Gram–Schmidt seeded by the standard basis vectors ordered by decreasing
/// |component ⟂ v| (ties by index), so the frame is a deterministic function of v.
inline Matrix hyperplane_frame(const Vector& v) {
  const auto d = v.size();
  if (d < 2) throw PreconditionError("hyperplane frame needs dimension >= 2");
  const Vector u = v.normalized();
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return std::abs(u[a]) < std::abs(u[b]); });
  Matrix frame(d, d - 1);
  Eigen::Index filled = 0;
  for (auto k : idx) {
    if (filled == d - 1) break;
    Vector e = Vector::Zero(d);
    e[k] = 1.0;
    // Two passes of modified Gram–Schmidt keep the frame orthonormal to ~1e-16.
    for (int pass = 0; pass < 2; ++pass) {
      e -= e.dot(u) * u;
      for (Eigen::Index j = 0; j < filled; ++j) e -= e.dot(frame.col(j)) * frame.col(j);
    }
    const double n = e.norm();
    if (n < 1e-8) continue;
    frame.col(filled++) = e / n;
  }
  return frame;
}

inline Matrix hyperplane_frame(const UnitDirection& v) { return hyperplane_frame(v.vec()); }

/// Oriented line in canonical foot-of-perpendicular form: point · direction = 0.
class OrientedLine {
 public:
  OrientedLine(Vector point, UnitDirection direction) : point_(std::move(point)), direction_(std::move(direction)) {
    if (point_.size() != direction_.dim()) throw PreconditionError("line point and direction dimensions differ");
    detail::require_finite(point_, "line point");
  }

  const Vector& point() const noexcept { return point_; }
  const UnitDirection& direction() const noexcept { return direction_; }
  Eigen::Index dim() const noexcept { return point_.size(); }

  Vector at(double t) const { return point_ + t * direction_.vec(); }
  OrientedLine reversed() const { return OrientedLine(point_, direction_.reversed()); }

 private:
  Vector point_;
  UnitDirection direction_;
};

/// Normalizes the direction and replaces the point by its foot of perpendicular from the origin.
inline OrientedLine canonicalize_line(const Vector& point, const Vector& direction) {
  if (point.size() != direction.size()) throw PreconditionError("line point and direction dimensions differ");
  const double n = direction.norm();
  if (!(n > 0.0)) throw PreconditionError("line direction must be non-zero");
  const Vector v = direction / n;
  Vector foot = point - point.dot(v) * v;
  foot -= foot.dot(v) * v;
  return OrientedLine(std::move(foot), UnitDirection(v / v.norm()));
}

inline double distance_to_line(const Vector& x, const OrientedLine& l) {
  const Vector a = x - l.point();
  const Vector perp = a - a.dot(l.direction().vec()) * l.direction().vec();
  return perp.norm();
}

/// Signed distance from the line to the ball surface: negative when the line crosses the interior.
inline double line_ball_gap(const OrientedLine& l, const Ball& b) {
  return distance_to_line(b.center(), l) - b.radius();
}

/// k-dimensional affine subspace of R^d with orthonormal basis (columns of `basis`).
class AffineSubspace {
 public:
  AffineSubspace(Vector base, Matrix basis, double tol = 1e-10) : base_(std::move(base)), basis_(std::move(basis)) {
    detail::require_finite(base_, "subspace base");
    if (basis_.rows() != base_.size()) throw PreconditionError("subspace basis rows must match ambient dimension");
    if (basis_.cols() < 1) throw PreconditionError("subspace must have dimension >= 1");
    const Matrix gram = basis_.transpose() * basis_;
    if ((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > tol)
      throw PreconditionError("subspace basis is not orthonormal");
  }

  /// Orthonormalizes `spanning` (columns) by Gram–Schmidt.
  static AffineSubspace from_span(const Vector& base, const Matrix& spanning) {
    Eigen::HouseholderQR<Matrix> qr(spanning);
    Matrix q = qr.householderQ() * Matrix::Identity(spanning.rows(), spanning.cols());
    return AffineSubspace(base, q);
  }

  /// Hyperplane {x : x · normal = offset}.
  static AffineSubspace hyperplane(const Vector& normal, double offset) {
    const Vector n = normal.normalized();
    return AffineSubspace(offset * n, hyperplane_frame(n));
  }

  const Vector& base() const noexcept { return base_; }
  const Matrix& basis() const noexcept { return basis_; }
  Eigen::Index ambient_dim() const noexcept { return base_.size(); }
  Eigen::Index dim() const noexcept { return basis_.cols(); }

  /// Coordinates of the orthogonal projection of x in this subspace's basis.
  Vector coordinates(const Vector& x) const { return basis_.transpose() * (x - base_); }
  Vector embed(const Vector& coords) const { return base_ + basis_ * coords; }
  double distance(const Vector& x) const {
    const Vector a = x - base_;
    return (a - basis_ * (basis_.transpose() * a)).norm();
  }

 private:
  Vector base_;
  Matrix basis_;
};

/// Orthogonal projection of a ball along v, expressed in the frame `hyperplane_frame(v)`.
inline Ball project_ball(const Ball& b, const UnitDirection& v) {
  if (b.dim() != v.dim()) throw PreconditionError("ball and direction dimensions differ");
  return Ball(hyperplane_frame(v).transpose() * b.center(), b.radius());
}

inline BallFamily project_family(const BallFamily& f, const UnitDirection& v) {
  const Matrix frame = hyperplane_frame(v);
  BallFamily out;
  out.reserve(f.size());
  for (const auto& b : f) out.emplace_back(frame.transpose() * b.center(), b.radius());
  return out;
}

/// Section B ∩ E in E's coordinates; empty when E misses the interior (tangency included).
inline std::optional<Ball> slice_ball(const Ball& b, const AffineSubspace& e) {
  if (b.dim() != e.ambient_dim()) throw PreconditionError("ball and subspace dimensions differ");
  const double delta = e.distance(b.center());
  if (delta >= b.radius()) return std::nullopt;
  const double rho = std::sqrt((b.radius() - delta) * (b.radius() + delta));
  if (!(rho > 0.0)) return std::nullopt;
  return Ball(e.coordinates(b.center()), rho);
}

/// Chord parameters of a line through a ball.
struct Chord {
  double t_in;
  double t_mid;
  double t_out;
};

inline std::optional<Chord> line_ball_intersection(const OrientedLine& l, const Ball& b) {
  if (b.dim() != l.dim()) throw PreconditionError("ball and line dimensions differ");
  const Vector a = b.center() - l.point();
  const double t_mid = a.dot(l.direction().vec());
  const double dist2 = std::max(0.0, (a - t_mid * l.direction().vec()).squaredNorm());
  const double r2 = b.radius() * b.radius();
  if (dist2 > r2) return std::nullopt;
  const double half = std::sqrt(r2 - dist2);
  return Chord{t_mid - half, t_mid, t_mid + half};
}

}  // namespace translab
