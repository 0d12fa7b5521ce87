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
/// \brief Base placement candidate generation and collision-risk pruning.
///
/// Candidates are searched along evenly spaced rays around the projected
/// object position. Along each ray the standoff starts at the minimum reach
/// and grows by one footprint radius until a pose without collision risk is
/// found or the maximum reach is exceeded. Risk is assessed three ways: point
/// count inside the robot body cuboid, point count inside the reach corridor
/// between object and base, and occupancy of the footprint circle.
#ifndef PLACEPLAN_PLANNER_HPP_
#define PLACEPLAN_PLANNER_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "placeplan/geometry.hpp"
#include "placeplan/scene.hpp"

namespace placeplan {

struct RobotParams {
  double footprint_radius = 0.25;
  double robot_height = 1.35;
  double reach_min = 0.4;
  double reach_max = 0.9;
  /// Radians between radial vectors; 0 selects default_angle_increment().
  double angle_increment = 0.0;
  /// A cuboid holding more than this many points is a collision risk.
  std::size_t obstacle_point_threshold = 50;

  /// Throws ParamError when an invariant does not hold.
  void validate() const;
};

/// How scene data is interpreted by the collision checks.
struct CollisionPolicy {
  bool treat_unknown_as_occupied = true;
  /// Carve the target object's own points out of both cuboid counts.
  bool exclude_target_points = true;
  /// Added to each half-extent of the exclusion box so points sampled on the
  /// object's surface are not lost to rounding.
  double exclusion_margin = 1e-6;
};

struct RadialVectorSet {
  Point2 origin = Point2::Zero();
  std::vector<Point2> vectors;
};

struct PlacementCandidate {
  Pose2D pose;  // Map frame
  int radial_index = 0;
  double standoff = 0.0;

  friend bool operator==(const PlacementCandidate&, const PlacementCandidate&) = default;
};

struct CandidateSet {
  std::vector<PlacementCandidate> candidates;

  std::size_t size() const { return candidates.size(); }
  bool empty() const { return candidates.empty(); }
};

/// Angle whose chord on the minimum-reach circle equals the footprint
/// diameter: 2 asin(r / (2 d_min)). Throws ParamError when r >= 2 d_min.
double default_angle_increment(const RobotParams& params);
double resolve_angle_increment(const RobotParams& params);

/// ceil(2 pi / theta) unit vectors, re-spaced evenly, first one along +x.
RadialVectorSet generate_radial_vectors(const Point3& object_position, double theta);

OrientedBox3 body_box(const Point2& position, double heading,
                      const RobotParams& params);
/// Corridor from the object to the candidate at the object's height, as wide
/// and tall as the object. Throws GeometryError for coincident endpoints.
OrientedBox3 reach_box(const ObjectObservation& object, const Point2& position);
OrientedBox3 exclusion_box(const ObjectObservation& object, double margin);

std::size_t count_points_in_box(const PointCloud& cloud, const OrientedBox3& box,
                                const std::optional<OrientedBox3>& exclusion = std::nullopt);

/// True if any cell whose center lies within `radius` of `center` is blocked.
/// Cells outside the grid are blocked.
bool footprint_occupied(const OccupancyGrid& grid, const Point2& center,
                        double radius, bool treat_unknown_as_occupied = true);

/// Individual outcome of the three collision checks for one position.
struct RiskAssessment {
  std::size_t body_points = 0;
  std::size_t reach_points = 0;
  bool footprint_blocked = false;
  bool body_blocked = false;
  bool reach_blocked = false;

  bool at_risk() const { return footprint_blocked || body_blocked || reach_blocked; }
};

RiskAssessment assess_collision_risk(const Point2& position, const RobotParams& params,
                                     const ObjectObservation& object,
                                     const SceneSnapshot& snapshot,
                                     const CollisionPolicy& policy = {});

bool has_collision_risk(const Point2& position, const RobotParams& params,
                        const ObjectObservation& object, const SceneSnapshot& snapshot,
                        const CollisionPolicy& policy = {});

/// Heading at `position` that faces the object.
double heading_toward(const Point2& position, const Point3& object_position);

/// Every position evaluated during planning, accepted or not.
struct PlacementProbe {
  Point2 position = Point2::Zero();
  int radial_index = 0;
  double standoff = 0.0;
  RiskAssessment risk;
};

struct PlanResult {
  CandidateSet candidates;
  std::vector<PlacementProbe> probes;

  std::size_t pruned() const { return probes.size() - candidates.size(); }
};

/// Standoffs tried along each ray: d_min + k r_r for every k with the value
/// not exceeding d_max.
std::vector<double> standoff_sequence(const RobotParams& params);

PlanResult plan_placements_traced(const SceneSnapshot& snapshot, const RobotParams& params,
                                  const CollisionPolicy& policy = {});
CandidateSet plan_placements(const SceneSnapshot& snapshot, const RobotParams& params,
                             const CollisionPolicy& policy = {});

}  // namespace placeplan

#endif  // PLACEPLAN_PLANNER_HPP_
