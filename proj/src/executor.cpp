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

#include "placeplan/executor.hpp"

#include <algorithm>
#include <cmath>

#include "placeplan/errors.hpp"

namespace placeplan {

namespace {

// Costs this close (relative) are ties and fall through to the index rule.
constexpr double kTieTolerance = 1e-12;

double planar_distance(const Point2& a, const Point2& b) { return (a - b).norm(); }

bool cost_ties(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

bool precedes(const PlacementCandidate& a, const PlacementCandidate& b) {
  if (a.radial_index != b.radial_index) return a.radial_index < b.radial_index;
  return a.standoff < b.standoff;
}

}  // namespace

void MotionCostWeights::validate() const {
  if (!(nav_weight >= 0.0) || !(manip_weight >= 0.0)) {
    throw ParamError("motion cost weights must be >= 0");
  }
  if (nav_weight == 0.0 && manip_weight == 0.0) {
    throw ParamError("motion cost weights must not both be 0");
  }
}

double motion_cost(const Pose2D& candidate, const Point3& object_position,
                   const Pose2D& current_pose, const MotionCostWeights& weights) {
  return weights.nav_weight * planar_distance(candidate.position(), current_pose.position()) +
         weights.manip_weight * planar_distance(candidate.position(), object_position.head<2>());
}

PlacementCandidate select_best(const CandidateSet& set, const Point3& object_position,
                               const Pose2D& current_pose, const MotionCostWeights& weights) {
  if (set.empty()) throw EmptySetError("select_best on an empty candidate set");
  const PlacementCandidate* best = &set.candidates.front();
  double best_cost = motion_cost(best->pose, object_position, current_pose, weights);
  for (const PlacementCandidate& c : set.candidates) {
    const double cost = motion_cost(c.pose, object_position, current_pose, weights);
    if (cost_ties(cost, best_cost) ? precedes(c, *best) : cost < best_cost) {
      best = &c;
      best_cost = cost;
    }
  }
  return *best;
}

std::string_view to_string(ExecutionStatus status) {
  switch (status) {
    case ExecutionStatus::kPickupSucceeded: return "PickupSucceeded";
    case ExecutionStatus::kPickupFailed: return "PickupFailed";
    case ExecutionStatus::kNoCandidates: return "NoCandidates";
    case ExecutionStatus::kAllNavigationFailed: return "AllNavigationFailed";
  }
  return "Unknown";
}

ExecutionOutcome execute_pickup(const Point3& object_position, CandidateSet& set,
                                MotionBackend& backend, const MotionCostWeights& weights) {
  weights.validate();
  ExecutionOutcome outcome;
  outcome.final_pose = backend.current_pose();
  if (set.empty()) {
    outcome.status = ExecutionStatus::kNoCandidates;
    return outcome;
  }

  while (!set.empty()) {
    const Pose2D current = backend.current_pose();
    const PlacementCandidate best = select_best(set, object_position, current, weights);
    set.candidates.erase(std::find(set.candidates.begin(), set.candidates.end(), best));

    Attempt attempt;
    attempt.candidate = best;
    attempt.pose_before = current;
    attempt.nav_cost = planar_distance(best.pose.position(), current.position());
    attempt.manip_cost = planar_distance(best.pose.position(), object_position.head<2>());
    attempt.motion_cost = motion_cost(best.pose, object_position, current, weights);
    attempt.nav_result = backend.navigate(best.pose);
    outcome.final_pose = backend.current_pose();

    if (!attempt.nav_result.success) {
      outcome.attempts.push_back(attempt);
      continue;
    }
    attempt.pickup_result = backend.pickup(object_position, backend.current_pose());
    outcome.attempts.push_back(attempt);
    outcome.status = *attempt.pickup_result ? ExecutionStatus::kPickupSucceeded
                                            : ExecutionStatus::kPickupFailed;
    return outcome;
  }
  outcome.status = ExecutionStatus::kAllNavigationFailed;
  return outcome;
}

SimulatedBackend::SimulatedBackend(const SceneSnapshot& snapshot, const RobotParams& params,
                                   const Pose2D& start, NavigationModel nav_model,
                                   PickupModel pickup_model, std::uint64_t seed,
                                   CollisionPolicy policy)
    : snapshot_(snapshot),
      params_(params),
      nav_model_(nav_model),
      pickup_model_(pickup_model),
      policy_(policy),
      rng_(seed),
      pose_(start) {
  params_.validate();
}

bool SimulatedBackend::segment_clear(const Point2& from, const Point2& to) const {
  const OccupancyGrid& grid = snapshot_.grid;
  const double res = grid.resolution();
  const double r = params_.footprint_radius;
  const Point2 a = grid.to_grid_frame(from);
  const Point2 b = grid.to_grid_frame(to);
  const Point2 ab = b - a;
  const double len2 = ab.squaredNorm();

  const int i_lo = static_cast<int>(std::floor((std::min(a.x(), b.x()) - r) / res)) - 1;
  const int i_hi = static_cast<int>(std::floor((std::max(a.x(), b.x()) + r) / res)) + 1;
  const int j_lo = static_cast<int>(std::floor((std::min(a.y(), b.y()) - r) / res)) - 1;
  const int j_hi = static_cast<int>(std::floor((std::max(a.y(), b.y()) + r) / res)) + 1;
  for (int j = j_lo; j <= j_hi; ++j) {
    for (int i = i_lo; i <= i_hi; ++i) {
      const Point2 c((i + 0.5) * res, (j + 0.5) * res);
      const double t = len2 > 0.0 ? std::clamp((c - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
      if ((a + t * ab - c).squaredNorm() > r * r) continue;
      const CellIndex cell{i, j};
      if (!grid.in_bounds(cell)) return false;
      const CellState s = grid.at(cell);
      if (s == CellState::kOccupied ||
          (s == CellState::kUnknown && policy_.treat_unknown_as_occupied)) {
        return false;
      }
    }
  }
  return true;
}

NavigationResult SimulatedBackend::navigate(const Pose2D& goal) {
  ++navigation_calls_;
  const Point2 from = pose_.position();
  const Point2 to = goal.position();

  if (!nav_model_.always_succeeds && !segment_clear(from, to)) {
    // Creep along the segment until the footprint would hit something.
    const double step = snapshot_.grid.resolution() / 2.0;
    const double length = (to - from).norm();
    const double heading = length > 0.0 ? std::atan2(to.y() - from.y(), to.x() - from.x())
                                        : pose_.heading();
    Point2 last_free = from;
    for (double s = step; s < length; s += step) {
      const Point2 p = from + (to - from) * (s / length);
      if (footprint_occupied(snapshot_.grid, p, params_.footprint_radius,
                             policy_.treat_unknown_as_occupied)) {
        break;
      }
      last_free = p;
    }
    pose_ = Pose2D(last_free, heading);
    return {false, pose_};
  }
  if (rng_.bernoulli(nav_model_.failure_prob)) {
    pose_ = Pose2D((from + to) / 2.0, pose_.heading());
    return {false, pose_};
  }
  pose_ = goal;
  return {true, pose_};
}

bool SimulatedBackend::pickup(const Point3& object_position, const Pose2D& from_pose) {
  ++pickup_calls_;
  const double distance = (from_pose.position() - object_position.head<2>()).norm();
  if (distance < params_.reach_min - kReachBandSlack ||
      distance > params_.reach_max + kReachBandSlack) {
    return false;
  }
  ObjectObservation object = snapshot_.object;
  object.position = object_position;
  std::optional<OrientedBox3> exclusion;
  if (policy_.exclude_target_points) exclusion = exclusion_box(object, policy_.exclusion_margin);
  const std::size_t points =
      count_points_in_box(snapshot_.cloud, reach_box(object, from_pose.position()), exclusion);
  if (points > params_.obstacle_point_threshold) return false;
  return !rng_.bernoulli(pickup_model_.failure_prob);
}

}  // namespace placeplan
