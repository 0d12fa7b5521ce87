// Copyright 2026 The placeplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file
/// \brief Planar poses, rigid transforms and yaw-only oriented boxes.
///
/// Everything here is templated on the scalar type and header-only. The
/// `double` aliases at the bottom are what the rest of the library uses.
#ifndef PLACEPLAN_GEOMETRY_HPP_
#define PLACEPLAN_GEOMETRY_HPP_

#include <cmath>
#include <numbers>

#include <Eigen/Core>

namespace placeplan {

/// Coordinate frame a quantity is expressed in.
///
/// Object is the Map frame translated to the projected object position.
/// Table has its origin at the grid-aligned short-edge corner of the table
/// with axes along the table edges (x along the short edge).
enum class FrameTag { kMap, kObject, kTable };

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// Wraps an angle to (-pi, pi].
template <typename Scalar>
Scalar normalize_angle(Scalar angle) {
  constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
  Scalar wrapped = std::remainder(angle, Scalar(2) * kPi);
  if (wrapped <= -kPi) wrapped += Scalar(2) * kPi;
  if (wrapped > kPi) wrapped -= Scalar(2) * kPi;
  return wrapped;
}

template <typename Scalar>
Matrix2<Scalar> rotation_matrix(Scalar angle) {
  const Scalar c = std::cos(angle);
  const Scalar s = std::sin(angle);
  Matrix2<Scalar> r;
  r << c, -s, s, c;
  return r;
}

/// Planar pose. The heading is kept normalized.
template <typename Scalar>
class Pose2 {
 public:
  Pose2() : position_(Vector2<Scalar>::Zero()), heading_(0) {}
  Pose2(Scalar x, Scalar y, Scalar heading)
      : position_(x, y), heading_(normalize_angle(heading)) {}
  Pose2(const Vector2<Scalar>& position, Scalar heading)
      : position_(position), heading_(normalize_angle(heading)) {}

  const Vector2<Scalar>& position() const { return position_; }
  Scalar x() const { return position_.x(); }
  Scalar y() const { return position_.y(); }
  Scalar heading() const { return heading_; }

  void set_heading(Scalar heading) { heading_ = normalize_angle(heading); }

  friend bool operator==(const Pose2& a, const Pose2& b) {
    return a.position_ == b.position_ && a.heading_ == b.heading_;
  }

 private:
  Vector2<Scalar> position_;
  Scalar heading_;
};

/// p -> R(rotation) p + translation.
template <typename Scalar>
struct RigidTransform2 {
  Vector2<Scalar> translation = Vector2<Scalar>::Zero();
  Scalar rotation = 0;

  static RigidTransform2 identity() { return {}; }
  static RigidTransform2 translate(Scalar x, Scalar y) {
    return {Vector2<Scalar>(x, y), Scalar(0)};
  }
  static RigidTransform2 rotate(Scalar angle) {
    return {Vector2<Scalar>::Zero(), normalize_angle(angle)};
  }
  /// Transform that maps coordinates expressed in `frame` into the parent.
  static RigidTransform2 from_pose(const Pose2<Scalar>& frame) {
    return {frame.position(), frame.heading()};
  }

  Vector2<Scalar> operator*(const Vector2<Scalar>& p) const {
    return rotation_matrix(rotation) * p + translation;
  }
};

template <typename Scalar>
RigidTransform2<Scalar> inverse(const RigidTransform2<Scalar>& t) {
  const Matrix2<Scalar> r_inv = rotation_matrix(-t.rotation);
  return {-(r_inv * t.translation), normalize_angle(-t.rotation)};
}

/// (a * b)(p) == a(b(p)).
template <typename Scalar>
RigidTransform2<Scalar> compose(const RigidTransform2<Scalar>& a,
                                const RigidTransform2<Scalar>& b) {
  return {rotation_matrix(a.rotation) * b.translation + a.translation,
          normalize_angle(a.rotation + b.rotation)};
}

template <typename Scalar>
Pose2<Scalar> transform_pose(const Pose2<Scalar>& pose,
                             const RigidTransform2<Scalar>& t) {
  return Pose2<Scalar>(t * pose.position(), pose.heading() + t.rotation);
}

/// Upright box: rotated about the vertical axis only.
template <typename Scalar>
struct OrientedBox {
  Vector3<Scalar> center = Vector3<Scalar>::Zero();
  Vector3<Scalar> half_extents = Vector3<Scalar>::Constant(Scalar(0.5));
  Scalar yaw = 0;

  bool valid() const { return (half_extents.array() > Scalar(0)).all(); }

  /// Point expressed in box-local axes, relative to the center.
  Vector3<Scalar> to_local(const Vector3<Scalar>& p) const {
    const Vector3<Scalar> d = p - center;
    const Scalar c = std::cos(yaw);
    const Scalar s = std::sin(yaw);
    return {c * d.x() + s * d.y(), -s * d.x() + c * d.y(), d.z()};
  }
};

/// Slack added to each half-extent in box_contains. Faces that coincide
/// with a surface by construction (a corridor resting on a table top) land
/// an ulp either side of it after rounding; the slack keeps them closed.
inline constexpr double kContainmentSlack = 1e-9;

/// Closed containment: boundary points are inside.
template <typename Scalar>
bool box_contains(const OrientedBox<Scalar>& box, const Vector3<Scalar>& p) {
  return (box.to_local(p).array().abs() <=
          box.half_extents.array() + static_cast<Scalar>(kContainmentSlack))
      .all();
}

using Point3 = Vector3<double>;
using Point2 = Vector2<double>;
using Pose2D = Pose2<double>;
using RigidTransform2D = RigidTransform2<double>;
using OrientedBox3 = OrientedBox<double>;

}  // namespace placeplan

#endif  // PLACEPLAN_GEOMETRY_HPP_
