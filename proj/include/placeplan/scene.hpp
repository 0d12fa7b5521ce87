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
/// \brief Scene inputs for the planner: occupancy grid, point cloud and the
/// observed target object, plus synthesis of all three from a declarative
/// tabletop scene.
#ifndef PLACEPLAN_SCENE_HPP_
#define PLACEPLAN_SCENE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "placeplan/geometry.hpp"

namespace placeplan {

enum class CellState : std::uint8_t { kFree, kOccupied, kUnknown };

struct CellIndex {
  int i = 0;  // column, along the grid x axis
  int j = 0;  // row, along the grid y axis

  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Row-major occupancy grid. Cell (0, 0) has its lower-left corner at
/// `origin`; row j grows along the origin's y axis.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(double resolution, const Pose2D& origin, int width, int height,
                CellState fill = CellState::kFree);

  double resolution() const { return resolution_; }
  const Pose2D& origin() const { return origin_; }
  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(const CellIndex& c) const {
    return c.i >= 0 && c.j >= 0 && c.i < width_ && c.j < height_;
  }
  CellState at(const CellIndex& c) const {
    return cells_[static_cast<std::size_t>(c.j) * width_ + c.i];
  }
  void set(const CellIndex& c, CellState s) {
    cells_[static_cast<std::size_t>(c.j) * width_ + c.i] = s;
  }

  /// Map-frame point to grid-local coordinates (meters, not cells).
  Point2 to_grid_frame(const Point2& world) const;
  Point2 cell_center(const CellIndex& c) const;
  /// Cell containing `world`; may be out of bounds.
  CellIndex world_to_cell(const Point2& world) const;

  std::size_t count(CellState s) const;

 private:
  double resolution_ = 0.05;
  Pose2D origin_;
  int width_ = 0;
  int height_ = 0;
  std::vector<CellState> cells_;
};

struct PointCloud {
  std::vector<Point3> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

struct ObjectObservation {
  Point3 position = Point3::Zero();  // Map-frame centroid
  double width = 0.0;
  double height = 0.0;
};

struct TableSpec {
  Pose2D center;  // Map frame
  double length = 1.80;  // along the table's local y axis
  double width = 0.80;   // along the table's local x axis (short edge)
  double height = 0.74;
};

struct SceneObject {
  std::string id;
  Point2 position = Point2::Zero();  // Table frame, base center
  double width = 0.06;   // extent along table x
  double height = 0.20;
  double depth = 0.06;   // extent along table y
};

struct SceneDescription {
  std::optional<TableSpec> table;
  std::vector<SceneObject> objects;
  std::vector<OrientedBox3> obstacles;
  Pose2D robot_start;
  std::string target_id;
  /// Fixed goal for the baseline approach; derived from the table when unset.
  std::optional<Pose2D> baseline_goal;

  const SceneObject& target() const;
};

struct SceneSnapshot {
  PointCloud cloud;
  OccupancyGrid grid;
  ObjectObservation object;
};

/// Transform taking Table-frame coordinates to the Map frame.
RigidTransform2D table_to_map(const TableSpec& table);

// Map-server style grid metadata.
struct GridMetadata {
  std::string image;
  double resolution = 0.05;
  Pose2D origin;
  bool negate = false;
  double occupied_thresh = 0.65;
  double free_thresh = 0.196;
};

GridMetadata parse_grid_metadata(std::string_view yaml_text);
OccupancyGrid load_grid(std::string_view pgm_bytes, const GridMetadata& meta);
OccupancyGrid load_grid(std::string_view pgm_bytes, std::string_view yaml_text);
/// Binary P5 image using 0 / 254 / 205 for occupied / free / unknown.
std::string save_grid_pgm(const OccupancyGrid& grid);
std::string save_grid_yaml(const OccupancyGrid& grid,
                           const std::string& image_name);

PointCloud load_cloud(std::string_view xyz_text);
/// One "x,y,z" line per point, 9 significant digits.
std::string save_cloud(const PointCloud& cloud);

inline constexpr double kDefaultCloudDensity = 2000.0;
inline constexpr double kDefaultGridResolution = 0.05;
inline constexpr double kDefaultGridMargin = 1.0;

PointCloud synthesize_cloud(const SceneDescription& scene, double density,
                            std::uint64_t seed);
OccupancyGrid synthesize_grid(const SceneDescription& scene,
                              double resolution, double margin);
ObjectObservation observe_object(const SceneDescription& scene);

struct SynthesisOptions {
  double density = kDefaultCloudDensity;
  double resolution = kDefaultGridResolution;
  double margin = kDefaultGridMargin;
  std::uint64_t seed = 0;
};

SceneSnapshot make_snapshot(const SceneDescription& scene,
                            const SynthesisOptions& options = {});

}  // namespace placeplan

#endif  // PLACEPLAN_SCENE_HPP_
