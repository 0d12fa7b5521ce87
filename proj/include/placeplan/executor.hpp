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
/// \brief Candidate ranking and the navigate-then-pick execution loop.
#ifndef PLACEPLAN_EXECUTOR_HPP_
#define PLACEPLAN_EXECUTOR_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "placeplan/geometry.hpp"
#include "placeplan/planner.hpp"
#include "placeplan/random.hpp"
#include "placeplan/scene.hpp"

namespace placeplan {

struct MotionCostWeights {
  double nav_weight = 1.0;
  double manip_weight = 1.0;

  void validate() const;
};

/// nav_weight * |candidate - current| + manip_weight * |candidate - object|,
/// all distances planar.
double motion_cost(const Pose2D& candidate, const Point3& object_position,
                   const Pose2D& current_pose, const MotionCostWeights& weights);

/// Lowest cost; ties go to the lower radial index, then the lower standoff.
/// Throws EmptySetError on an empty set.
PlacementCandidate select_best(const CandidateSet& set, const Point3& object_position,
                               const Pose2D& current_pose, const MotionCostWeights& weights);

struct NavigationResult {
  bool success = false;
  Pose2D resulting_pose;
};

/// Seam between the execution loop and a navigation/manipulation stack.
class MotionBackend {
 public:
  virtual ~MotionBackend() = default;

  virtual Pose2D current_pose() const = 0;
  virtual NavigationResult navigate(const Pose2D& goal) = 0;
  virtual bool pickup(const Point3& object_position, const Pose2D& from_pose) = 0;
};

enum class ExecutionStatus { kPickupSucceeded, kPickupFailed, kNoCandidates, kAllNavigationFailed };

std::string_view to_string(ExecutionStatus status);

struct Attempt {
  PlacementCandidate candidate;
  Pose2D pose_before;  // pose the candidate was ranked from
  double nav_cost = 0.0;
  double manip_cost = 0.0;
  double motion_cost = 0.0;
  NavigationResult nav_result;
  std::optional<bool> pickup_result;
};

struct ExecutionOutcome {
  ExecutionStatus status = ExecutionStatus::kNoCandidates;
  std::vector<Attempt> attempts;
  Pose2D final_pose;

  bool succeeded() const { return status == ExecutionStatus::kPickupSucceeded; }
};

/// Repeatedly picks the cheapest remaining candidate from the robot's
/// current pose and navigates to it. The first successful navigation is
/// followed by exactly one pickup whose result ends the run. Attempted
/// candidates are removed from `set`.
ExecutionOutcome execute_pickup(const Point3& object_position, CandidateSet& set,
                                MotionBackend& backend, const MotionCostWeights& weights = {});

struct NavigationModel {
  /// Skip the straight-line feasibility check.
  bool always_succeeds = true;
  double failure_prob = 0.0;
};

struct PickupModel {
  double failure_prob = 0.0;
};

/// Goal tolerance a successful navigation must meet.
inline constexpr double kGoalPositionTolerance = 0.05;
inline constexpr double kGoalHeadingTolerance = 0.1;

/// Kinematic stand-in for a real robot.
///
/// navigate() succeeds when the straight segment to the goal, inflated by
/// the footprint radius, touches no blocked cell (unless the model says it
/// always succeeds), subject to an optional random failure. A blocked
/// segment leaves the robot at the last free point before the obstacle; a
/// random failure leaves it halfway.
///
/// pickup() succeeds when the planar distance to the object lies in the reach
/// band and the reach corridor holds at most k_obs non-object points,
/// subject to an optional random failure.
class SimulatedBackend final : public MotionBackend {
 public:
  SimulatedBackend(const SceneSnapshot& snapshot, const RobotParams& params,
                   const Pose2D& start, NavigationModel nav_model, PickupModel pickup_model,
                   std::uint64_t seed, CollisionPolicy policy = {});

  Pose2D current_pose() const override { return pose_; }
  NavigationResult navigate(const Pose2D& goal) override;
  bool pickup(const Point3& object_position, const Pose2D& from_pose) override;

  /// Whether the inflated straight segment between two points is free.
  bool segment_clear(const Point2& from, const Point2& to) const;

  int navigation_calls() const { return navigation_calls_; }
  int pickup_calls() const { return pickup_calls_; }

 private:
  const SceneSnapshot& snapshot_;
  RobotParams params_;
  NavigationModel nav_model_;
  PickupModel pickup_model_;
  CollisionPolicy policy_;
  Rng rng_;
  Pose2D pose_;
  int navigation_calls_ = 0;
  int pickup_calls_ = 0;
};

/// Slack applied to the reach band when checking a pickup distance, so a
/// candidate planned exactly at d_max is not rejected by rounding.
inline constexpr double kReachBandSlack = 1e-9;

}  // namespace placeplan

#endif  // PLACEPLAN_EXECUTOR_HPP_
