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
/// \brief Tabletop grid experiment: one object placed in each cell of a
/// 3 x 4 grid taped on a dining table, several pickup trials per cell, for
/// either the planned placements or a fixed navigation goal near the table's
/// short edge.
///
/// Grid layout (Table frame, meters): the grid is centered across the table
/// width and one short side lies on the table's y = 0 edge, so
///   center(i, j) = ((width - columns * cell) / 2 + (i + 1/2) cell, (j + 1/2) cell).
#ifndef PLACEPLAN_HARNESS_HPP_
#define PLACEPLAN_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "placeplan/executor.hpp"
#include "placeplan/planner.hpp"
#include "placeplan/scene.hpp"

namespace placeplan {

enum class Approach { kProposed, kBaseline };

std::string_view to_string(Approach approach);
/// "proposed" or "baseline"; throws ConfigError otherwise.
Approach parse_approach(std::string_view name);

struct GridCell {
  int x = 0;
  int y = 0;

  friend bool operator==(const GridCell&, const GridCell&) = default;
};

struct GridExperimentConfig {
  TableSpec table;
  double cell_size = 0.20;
  int columns = 3;
  int rows = 4;
  int trials_per_cell = 5;
  Approach approach = Approach::kProposed;
  /// Map frame. Unset: centered on the y = 0 short edge, footprint radius
  /// plus `baseline_edge_clearance` outside the table, facing it.
  std::optional<Pose2D> baseline_goal;
  double baseline_edge_clearance = 0.10;
  /// Map frame. Unset: centered on the y = 0 short edge, 1 m away.
  std::optional<Pose2D> robot_start;
  SceneObject object_template{"target", Point2::Zero(), 0.06, 0.20, 0.06};
  RobotParams robot;
  MotionCostWeights weights;
  CollisionPolicy policy;
  NavigationModel nav_model;
  PickupModel pickup_model;
  double cloud_density = 1000.0;
  double grid_resolution = kDefaultGridResolution;
  double grid_margin = kDefaultGridMargin;
  std::uint64_t seed = 0;
  /// Worker threads for run_experiment; 0 = hardware concurrency.
  unsigned threads = 0;

  void validate() const;
};

Pose2D default_baseline_goal(const TableSpec& table, const RobotParams& robot,
                             double edge_clearance);
Pose2D baseline_goal(const GridExperimentConfig& config);
Pose2D robot_start(const GridExperimentConfig& config);

/// Table-frame center of a grid cell. Throws RangeError outside the grid.
Point2 cell_center(const GridCell& cell, const GridExperimentConfig& config);

SceneDescription build_cell_scene(const GridCell& cell, const GridExperimentConfig& config);

struct TrialResult {
  bool success = false;
  std::uint64_t seed = 0;
  std::size_t candidate_count = 0;
  ExecutionOutcome execution;
};

/// One pickup trial. Proposed: plan, then execute over the candidates.
/// Baseline: navigate to the fixed goal, then a single pickup from there.
TrialResult run_trial(const GridCell& cell, Approach approach,
                      const GridExperimentConfig& config, std::uint64_t seed);

std::uint64_t trial_seed(std::uint64_t base, const GridCell& cell, int trial);

struct CellResult {
  GridCell cell;
  int successes = 0;
  int failures = 0;
  std::vector<TrialResult> trials;
};

struct ExperimentReport {
  Approach approach = Approach::kProposed;
  GridExperimentConfig config;
  std::vector<CellResult> cells;  // ordered by y, then x

  int total_successes() const;
  int total_trials() const;
  double overall_success_rate() const;
  const CellResult& at(const GridCell& cell) const;
};

ExperimentReport run_experiment(const GridExperimentConfig& config);

/// Heatmap colors for 0..5 successes (scaled when trials differ from 5),
/// red through yellow to green.
inline constexpr unsigned char kHeatmapRamp[6][3] = {
    {215, 48, 39}, {252, 141, 89}, {254, 224, 139},
    {217, 239, 139}, {145, 207, 96}, {26, 152, 80}};
inline constexpr int kHeatmapCellPixels = 40;

int ramp_step(int successes, int trials);

/// "json", "csv", "ppm" or "svg". Throws FormatError otherwise.
std::string render_report(const ExperimentReport& report, std::string_view format,
                          int cell_px = kHeatmapCellPixels);
/// Several reports: json/csv concatenate; ppm/svg place heatmaps side by side.
std::string render_reports(const std::vector<ExperimentReport>& reports,
                           std::string_view format, int cell_px = kHeatmapCellPixels);

}  // namespace placeplan

#endif  // PLACEPLAN_HARNESS_HPP_
