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

#include "placeplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "placeplan/errors.hpp"

namespace placeplan {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Slack for comparing accumulated standoffs against d_max.
constexpr double kStandoffSlack = 1e-12;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void RobotParams::validate() const {
  if (!finite(footprint_radius) || footprint_radius <= 0.0) {
    throw ParamError("footprint_radius must be > 0");
  }
  if (!finite(robot_height) || robot_height <= 0.0) {
    throw ParamError("robot_height must be > 0");
  }
  if (!finite(reach_min) || reach_min <= 0.0) throw ParamError("reach_min must be > 0");
  if (!finite(reach_max) || reach_max < reach_min) {
    throw ParamError("reach_max must be >= reach_min");
  }
  if (!finite(angle_increment) || angle_increment < 0.0 || angle_increment > kTwoPi) {
    throw ParamError("angle_increment must lie in [0, 2 pi]");
  }
}

double default_angle_increment(const RobotParams& params) {
  const double r = params.footprint_radius;
  const double d = params.reach_min;
  if (!(r > 0.0) || !(d > 0.0) || r >= 2.0 * d) {
    throw ParamError("default angle increment needs 0 < footprint_radius < 2 reach_min");
  }
  return 2.0 * std::asin(r / (2.0 * d));
}

double resolve_angle_increment(const RobotParams& params) {
  return params.angle_increment > 0.0 ? params.angle_increment
                                      : default_angle_increment(params);
}

RadialVectorSet generate_radial_vectors(const Point3& object_position, double theta) {
  if (!(theta > 0.0) || theta > kTwoPi) {
    throw ParamError("angle increment must lie in (0, 2 pi]");
  }
  // The tolerance keeps exact divisors of 2 pi from gaining a spurious ray.
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(kTwoPi / theta - 1e-9)));
  RadialVectorSet set;
  set.origin = object_position.head<2>();
  set.vectors.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
    set.vectors.emplace_back(std::cos(a), std::sin(a));
  }
  return set;
}

OrientedBox3 body_box(const Point2& position, double heading, const RobotParams& params) {
  OrientedBox3 box;
  box.center = Point3(position.x(), position.y(), params.robot_height / 2.0);
  box.half_extents = Point3(params.footprint_radius, params.footprint_radius,
                            params.robot_height / 2.0);
  box.yaw = normalize_angle(heading);
  return box;
}

OrientedBox3 reach_box(const ObjectObservation& object, const Point2& position) {
  const Point2 from = object.position.head<2>();
  const Point2 segment = position - from;
  const double length = segment.norm();
  if (!(length > 0.0)) {
    throw GeometryError("reach box endpoints coincide");
  }
  const Point2 mid = from + segment / 2.0;
  OrientedBox3 box;
  box.center = Point3(mid.x(), mid.y(), object.position.z());
  box.half_extents = Point3(length / 2.0, object.width / 2.0, object.height / 2.0);
  box.yaw = std::atan2(segment.y(), segment.x());
  return box;
}

OrientedBox3 exclusion_box(const ObjectObservation& object, double margin) {
  OrientedBox3 box;
  box.center = object.position;
  box.half_extents = Point3(object.width / 2.0, object.width / 2.0, object.height / 2.0)
                         .array() + margin;
  return box;
}

std::size_t count_points_in_box(const PointCloud& cloud, const OrientedBox3& box,
                                const std::optional<OrientedBox3>& exclusion) {
  return static_cast<std::size_t>(
      std::count_if(cloud.points.begin(), cloud.points.end(), [&](const Point3& p) {
        return box_contains(box, p) && !(exclusion && box_contains(*exclusion, p));
      }));
}

bool footprint_occupied(const OccupancyGrid& grid, const Point2& center, double radius,
                        bool treat_unknown_as_occupied) {
  const double res = grid.resolution();
  const Point2 local = grid.to_grid_frame(center);
  const int i_lo = static_cast<int>(std::floor((local.x() - radius) / res)) - 1;
  const int i_hi = static_cast<int>(std::floor((local.x() + radius) / res)) + 1;
  const int j_lo = static_cast<int>(std::floor((local.y() - radius) / res)) - 1;
  const int j_hi = static_cast<int>(std::floor((local.y() + radius) / res)) + 1;
  const double r2 = radius * radius;

  for (int j = j_lo; j <= j_hi; ++j) {
    const double dy = (j + 0.5) * res - local.y();
    for (int i = i_lo; i <= i_hi; ++i) {
      const double dx = (i + 0.5) * res - local.x();
      if (dx * dx + dy * dy > r2) continue;
      const CellIndex cell{i, j};
      if (!grid.in_bounds(cell)) return true;
      const CellState s = grid.at(cell);
      if (s == CellState::kOccupied) return true;
      if (s == CellState::kUnknown && treat_unknown_as_occupied) return true;
    }
  }
  return false;
}

double heading_toward(const Point2& position, const Point3& object_position) {
  const Point2 d = object_position.head<2>() - position;
  return std::atan2(d.y(), d.x());
}

RiskAssessment assess_collision_risk(const Point2& position, const RobotParams& params,
                                     const ObjectObservation& object,
                                     const SceneSnapshot& snapshot,
                                     const CollisionPolicy& policy) {
  std::optional<OrientedBox3> exclusion;
  if (policy.exclude_target_points) exclusion = exclusion_box(object, policy.exclusion_margin);

  RiskAssessment risk;
  risk.footprint_blocked = footprint_occupied(snapshot.grid, position, params.footprint_radius,
                                              policy.treat_unknown_as_occupied);
  const double heading = heading_toward(position, object.position);
  risk.body_points = count_points_in_box(snapshot.cloud, body_box(position, heading, params),
                                         exclusion);
  risk.reach_points = count_points_in_box(snapshot.cloud, reach_box(object, position), exclusion);
  risk.body_blocked = risk.body_points > params.obstacle_point_threshold;
  risk.reach_blocked = risk.reach_points > params.obstacle_point_threshold;
  return risk;
}

bool has_collision_risk(const Point2& position, const RobotParams& params,
                        const ObjectObservation& object, const SceneSnapshot& snapshot,
                        const CollisionPolicy& policy) {
  return assess_collision_risk(position, params, object, snapshot, policy).at_risk();
}

std::vector<double> standoff_sequence(const RobotParams& params) {
  std::vector<double> standoffs;
  for (int k = 0;; ++k) {
    const double s = params.reach_min + k * params.footprint_radius;
    if (s > params.reach_max + kStandoffSlack) break;
    standoffs.push_back(std::min(s, params.reach_max));
  }
  return standoffs;
}

PlanResult plan_placements_traced(const SceneSnapshot& snapshot, const RobotParams& params,
                                  const CollisionPolicy& policy) {
  params.validate();
  const ObjectObservation& object = snapshot.object;
  const RadialVectorSet rays =
      generate_radial_vectors(object.position, resolve_angle_increment(params));
  const std::vector<double> standoffs = standoff_sequence(params);

  PlanResult result;
  for (std::size_t i = 0; i < rays.vectors.size(); ++i) {
    const Point2& dir = rays.vectors[i];
    for (double standoff : standoffs) {
      const Point2 position = rays.origin + standoff * dir;
      PlacementProbe probe{position, static_cast<int>(i), standoff,
                           assess_collision_risk(position, params, object, snapshot, policy)};
      result.probes.push_back(probe);
      if (!probe.risk.at_risk()) {
        // Facing the object means facing along -dir.
        result.candidates.candidates.push_back(
            {Pose2D(position, heading_toward(position, object.position)),
             static_cast<int>(i), standoff});
        break;
      }
    }
  }
  return result;
}

CandidateSet plan_placements(const SceneSnapshot& snapshot, const RobotParams& params,
                             const CollisionPolicy& policy) {
  return plan_placements_traced(snapshot, params, policy).candidates;
}

}  // namespace placeplan
