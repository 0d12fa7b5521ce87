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

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "placeplan/errors.hpp"
#include "placeplan/random.hpp"

namespace placeplan {
namespace {

constexpr double kPi = std::numbers::pi;

// Object on an otherwise empty, free floor.
SceneSnapshot open_floor(CellState fill = CellState::kFree) {
  SceneSnapshot snap;
  snap.grid = OccupancyGrid(0.05, Pose2D(-3, -3, 0), 120, 120, fill);
  snap.object = ObjectObservation{Point3(0, 0, 0.84), 0.06, 0.20};
  return snap;
}

TEST(AngleIncrement, ChordOnMinimumReachCircle) {
  RobotParams p;
  p.footprint_radius = 0.4;
  p.reach_min = 0.4;
  p.reach_max = 0.9;
  EXPECT_NEAR(default_angle_increment(p), kPi / 3, 1e-12);  // 2 asin(1/2)

  const RobotParams defaults;
  EXPECT_NEAR(default_angle_increment(defaults), 0.635647, 1e-6);
  EXPECT_NEAR(2 * defaults.reach_min * std::sin(default_angle_increment(defaults) / 2),
              defaults.footprint_radius, 1e-12);
}

TEST(AngleIncrement, ExplicitValueWins) {
  RobotParams p;
  p.angle_increment = 0.5;
  EXPECT_DOUBLE_EQ(resolve_angle_increment(p), 0.5);
  p.angle_increment = 0.0;
  EXPECT_DOUBLE_EQ(resolve_angle_increment(p), default_angle_increment(p));
}

TEST(AngleIncrement, RejectsInvalidParams) {
  RobotParams p;
  p.footprint_radius = 0.9;  // r >= 2 d_min
  EXPECT_THROW(default_angle_increment(p), ParamError);
  p = RobotParams{};
  p.reach_max = 0.3;  // below d_min
  EXPECT_THROW(p.validate(), ParamError);
  p = RobotParams{};
  p.footprint_radius = -0.1;
  EXPECT_THROW(p.validate(), ParamError);
}

TEST(RadialVectors, Counts) {
  const Point3 obj(1, 2, 0.8);
  EXPECT_EQ(generate_radial_vectors(obj, kPi / 2).vectors.size(), 4u);
  EXPECT_EQ(generate_radial_vectors(obj, 2 * kPi).vectors.size(), 1u);
  EXPECT_EQ(generate_radial_vectors(obj, 0.635647).vectors.size(), 10u);
  // A non-divisor is rounded up and re-spaced.
  EXPECT_EQ(generate_radial_vectors(obj, 2.0).vectors.size(), 4u);
  EXPECT_THROW(generate_radial_vectors(obj, 0.0), ParamError);
  EXPECT_THROW(generate_radial_vectors(obj, 7.0), ParamError);
}

TEST(RadialVectors, EvenUnitSpacing) {
  const RadialVectorSet set = generate_radial_vectors(Point3(1, 2, 0.8), 0.7);
  EXPECT_EQ(set.origin, Point2(1, 2));
  const std::size_t n = set.vectors.size();
  ASSERT_EQ(n, 9u);
  EXPECT_NEAR(set.vectors[0].x(), 1.0, 1e-15);
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_NEAR(set.vectors[k].norm(), 1.0, 1e-12);
    const Point2& a = set.vectors[k];
    const Point2& b = set.vectors[(k + 1) % n];
    EXPECT_NEAR(std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b)), 2 * kPi / n, 1e-12);
  }
}

TEST(Standoffs, DefaultSequence) {
  const std::vector<double> s = standoff_sequence(RobotParams{});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s[0], 0.4);
  EXPECT_DOUBLE_EQ(s[1], 0.65);
  EXPECT_DOUBLE_EQ(s[2], 0.9);
  RobotParams p;
  p.reach_max = 0.4;
  EXPECT_EQ(standoff_sequence(p).size(), 1u);
}

TEST(Boxes, BodyBox) {
  const OrientedBox3 b = body_box(Point2(1, 2), 0.3, RobotParams{});
  EXPECT_EQ(b.center, Point3(1, 2, 0.675));
  EXPECT_EQ(b.half_extents, Point3(0.25, 0.25, 0.675));
  EXPECT_DOUBLE_EQ(b.yaw, 0.3);
}

TEST(Boxes, ReachBoxSpansObjectToBase) {
  const ObjectObservation obj{Point3(0, 0, 0.84), 0.06, 0.20};
  const OrientedBox3 r = reach_box(obj, Point2(0.6, 0));
  EXPECT_TRUE(r.center.isApprox(Point3(0.3, 0, 0.84)));
  EXPECT_TRUE(r.half_extents.isApprox(Point3(0.3, 0.03, 0.10)));
  EXPECT_DOUBLE_EQ(r.yaw, 0.0);
  // The bottom face sits on the table top, and containment is closed.
  EXPECT_TRUE(box_contains(r, Point3(0.3, 0, 0.74)));
  EXPECT_FALSE(box_contains(r, Point3(0.3, 0, 0.7399)));
  EXPECT_THROW(reach_box(obj, Point2(0, 0)), GeometryError);

  const OrientedBox3 diag = reach_box(obj, Point2(-0.3, -0.4));
  EXPECT_NEAR(diag.half_extents.x(), 0.25, 1e-15);
  EXPECT_NEAR(diag.yaw, std::atan2(-0.4, -0.3), 1e-15);
}

TEST(Boxes, TableTopPointsSitOnTheReachFloor) {
  // The corridor floor is computed as (t + h/2) - h/2, which can round an
  // ulp above t. Table-top points must still count.
  Rng rng(77);
  for (int k = 0; k < 2000; ++k) {
    const double table = rng.uniform(0.5, 1.0);
    const double height = rng.uniform(0.05, 0.4);
    const ObjectObservation obj{Point3(0, 0, table + height / 2), 0.06, height};
    const OrientedBox3 r = reach_box(obj, Point2(rng.uniform(0.4, 0.9), rng.uniform(-0.1, 0.1)));
    ASSERT_TRUE(box_contains(r, Point3(r.center.x(), r.center.y(), table))) << k;
  }
}

TEST(CountPoints, MatchesOracle) {
  Rng rng(101);
  for (int k = 0; k < 500; ++k) {
    PointCloud cloud;
    for (int n = 0; n < 200; ++n) {
      cloud.points.emplace_back(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-1, 3));
    }
    const OrientedBox3 box = testing::random_box(rng);
    std::optional<OrientedBox3> excl;
    if (k % 2) excl = testing::random_box(rng);
    ASSERT_EQ(count_points_in_box(cloud, box, excl), testing::oracle_count(cloud, box, excl));
  }
}

TEST(CountPoints, ExclusionRemovesPoints) {
  PointCloud cloud;
  cloud.points = {Point3(0, 0, 0), Point3(0.2, 0, 0), Point3(2, 0, 0)};
  OrientedBox3 box;
  box.half_extents = Point3(1, 1, 1);
  OrientedBox3 excl;
  excl.half_extents = Point3(0.1, 0.1, 0.1);
  EXPECT_EQ(count_points_in_box(cloud, box), 2u);
  EXPECT_EQ(count_points_in_box(cloud, box, excl), 1u);
}

TEST(Footprint, MatchesOracle) {
  Rng rng(202);
  int blocked = 0;
  for (int k = 0; k < 1000; ++k) {
    const OccupancyGrid g = testing::random_grid(rng);
    const Point2 center = testing::random_point_near(g, rng);
    const double r = rng.uniform(0.0, 0.6);
    const bool unknown_blocks = k % 3 != 0;
    const bool got = footprint_occupied(g, center, r, unknown_blocks);
    ASSERT_EQ(got, testing::oracle_footprint_occupied(g, center, r, unknown_blocks))
        << "case " << k;
    blocked += got;
  }
  EXPECT_GT(blocked, 100);
  EXPECT_LT(blocked, 900);
}

TEST(Footprint, SingleOccupiedCellIsSeenExactlyByCoveringCircles) {
  OccupancyGrid g(0.1, Pose2D(0, 0, 0), 20, 20);
  g.set({10, 10}, CellState::kOccupied);  // center (1.05, 1.05)
  EXPECT_TRUE(footprint_occupied(g, Point2(1.05, 1.05), 0.0));
  EXPECT_TRUE(footprint_occupied(g, Point2(1.30, 1.05), 0.25));
  EXPECT_FALSE(footprint_occupied(g, Point2(1.31, 1.05), 0.25));
  const auto cells = testing::oracle_footprint_cells(g, Point2(1.30, 1.05), 0.25);
  EXPECT_TRUE(std::any_of(cells.begin(), cells.end(),
                          [](const CellIndex& c) { return c.i == 10 && c.j == 10; }));
}

TEST(Footprint, UnknownAndOutOfBounds) {
  OccupancyGrid g(0.1, Pose2D(0, 0, 0), 10, 10, CellState::kUnknown);
  EXPECT_TRUE(footprint_occupied(g, Point2(0.5, 0.5), 0.2, true));
  EXPECT_FALSE(footprint_occupied(g, Point2(0.5, 0.5), 0.2, false));
  // Circle spilling past the edge.
  EXPECT_TRUE(footprint_occupied(g, Point2(0.95, 0.5), 0.2, false));
}

TEST(Plan, OpenFloorGivesOneCandidatePerRayAtMinimumReach) {
  const SceneSnapshot snap = open_floor();
  const PlanResult result = plan_placements_traced(snap, RobotParams{});
  ASSERT_EQ(result.candidates.size(), 10u);
  EXPECT_EQ(result.pruned(), 0u);
  for (std::size_t k = 0; k < 10; ++k) {
    const PlacementCandidate& c = result.candidates.candidates[k];
    EXPECT_EQ(c.radial_index, static_cast<int>(k));
    EXPECT_DOUBLE_EQ(c.standoff, 0.4);
    EXPECT_NEAR(c.pose.position().norm(), 0.4, 1e-12);
    EXPECT_EQ(testing::oracle_candidate_violation(snap, RobotParams{}, {}, c), "");
  }
}

TEST(Plan, FullyOccupiedGridGivesNothing) {
  const PlanResult result = plan_placements_traced(open_floor(CellState::kOccupied), RobotParams{});
  EXPECT_TRUE(result.candidates.empty());
  EXPECT_EQ(result.probes.size(), 30u);
  EXPECT_EQ(result.pruned(), 30u);
}

TEST(Plan, BodyObstacleMovesCandidateOutward) {
  SceneSnapshot snap = open_floor();
  // 60 points inside the body cuboid at standoff 0.4 on ray 0 only.
  for (int k = 0; k < 60; ++k) snap.cloud.points.emplace_back(0.45, 0.0, 0.1 + 0.01 * k);
  const CandidateSet set = plan_placements(snap, RobotParams{});
  ASSERT_EQ(set.size(), 10u);
  EXPECT_DOUBLE_EQ(set.candidates[0].standoff, 0.9);  // 0.65 still covers x = 0.45
  for (std::size_t k = 1; k < set.size(); ++k) {
    EXPECT_DOUBLE_EQ(set.candidates[k].standoff, 0.4) << k;
  }
}

TEST(Plan, ThresholdIsStrict) {
  SceneSnapshot snap = open_floor();
  for (int k = 0; k < 50; ++k) snap.cloud.points.emplace_back(0.45, 0.0, 0.1 + 0.01 * k);
  EXPECT_DOUBLE_EQ(plan_placements(snap, RobotParams{}).candidates[0].standoff, 0.4);
  snap.cloud.points.emplace_back(0.45, 0.0, 0.05);
  EXPECT_DOUBLE_EQ(plan_placements(snap, RobotParams{}).candidates[0].standoff, 0.9);
}

TEST(Plan, ReachCorridorObstacleDropsRay) {
  SceneSnapshot snap = open_floor();
  // Points between the object and every standoff on ray 0, at object height.
  for (int k = 0; k < 60; ++k) snap.cloud.points.emplace_back(0.1, 0.0, 0.80 + 0.001 * k);
  const PlanResult result = plan_placements_traced(snap, RobotParams{});
  EXPECT_EQ(result.candidates.size(), 9u);
  EXPECT_EQ(result.candidates.candidates[0].radial_index, 1);
  EXPECT_EQ(result.pruned(), 3u);
  for (const PlacementProbe& p : result.probes) {
    if (p.radial_index == 0) {
      EXPECT_TRUE(p.risk.reach_blocked);
      EXPECT_FALSE(p.risk.body_blocked);
    }
  }
}

TEST(Plan, TargetObjectPointsAreIgnored) {
  SceneSnapshot snap = open_floor();
  for (int k = 0; k < 500; ++k) snap.cloud.points.emplace_back(0.03, 0.0, 0.74 + 0.0004 * k);
  EXPECT_EQ(plan_placements(snap, RobotParams{}).size(), 10u);
  CollisionPolicy keep;
  keep.exclude_target_points = false;
  EXPECT_LT(plan_placements(snap, RobotParams{}, keep).size(), 10u);
}

TEST(Plan, RandomTabletopScenesSatisfyInvariants) {
  Rng rng(303);
  std::size_t total = 0;
  for (int k = 0; k < 30; ++k) {
    const SceneDescription scene = testing::random_scene(rng, 4);
    const SceneSnapshot snap = make_snapshot(scene, {1000, 0.05, 1.0, rng.index(1000)});
    const RobotParams params;
    const PlanResult result = plan_placements_traced(snap, params);
    const std::vector<double> standoffs = standoff_sequence(params);

    std::map<int, std::vector<const PlacementProbe*>> by_ray;
    for (const PlacementProbe& p : result.probes) by_ray[p.radial_index].push_back(&p);
    int last = -1;
    for (const PlacementCandidate& c : result.candidates.candidates) {
      EXPECT_EQ(testing::oracle_candidate_violation(snap, params, {}, c), "");
      EXPECT_GT(c.radial_index, last);  // one per ray, ray order
      last = c.radial_index;
      // Every probe before the accepted one on this ray was at risk.
      const auto& probes = by_ray[c.radial_index];
      ASSERT_FALSE(probes.empty());
      EXPECT_DOUBLE_EQ(probes.back()->standoff, c.standoff);
      for (std::size_t q = 0; q + 1 < probes.size(); ++q) EXPECT_TRUE(probes[q]->risk.at_risk());
    }
    for (const auto& [ray, probes] : by_ray) {
      if (probes.size() == standoffs.size() && probes.back()->risk.at_risk()) continue;
      EXPECT_FALSE(probes.back()->risk.at_risk()) << "ray " << ray;
    }
    total += result.candidates.size();
  }
  EXPECT_GT(total, 50u);
}

TEST(Plan, MoreObstaclesNeverHelp) {
  Rng rng(404);
  for (int k = 0; k < 20; ++k) {
    const SceneDescription scene = testing::random_scene(rng, 2);
    SceneSnapshot snap = make_snapshot(scene, {1000, 0.05, 1.0, 7});
    const CandidateSet before = plan_placements(snap, RobotParams{});
    OrientedBox3 box = testing::random_box(rng);
    box.center.head<2>() = snap.object.position.head<2>() +
                           Point2(rng.uniform(-1, 1), rng.uniform(-1, 1));
    box.center.z() = box.half_extents.z();
    testing::add_obstacle(snap, box, rng, 200);
    const CandidateSet after = plan_placements(snap, RobotParams{});
    EXPECT_LE(after.size(), before.size());
    for (const PlacementCandidate& c : after.candidates) {
      const auto it = std::find_if(before.candidates.begin(), before.candidates.end(),
                                   [&](const auto& b) { return b.radial_index == c.radial_index; });
      ASSERT_NE(it, before.candidates.end());
      EXPECT_GE(c.standoff, it->standoff);
    }
  }
}

TEST(Plan, Deterministic) {
  Rng rng(505);
  const SceneSnapshot snap = make_snapshot(testing::random_scene(rng, 3));
  EXPECT_EQ(plan_placements(snap, RobotParams{}).candidates,
            plan_placements(snap, RobotParams{}).candidates);
}

}  // namespace
}  // namespace placeplan
