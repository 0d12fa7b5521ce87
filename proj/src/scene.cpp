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

#include "placeplan/scene.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "placeplan/errors.hpp"
#include "placeplan/random.hpp"

namespace placeplan {

OccupancyGrid::OccupancyGrid(double resolution, const Pose2D& origin,
                             int width, int height, CellState fill)
    : resolution_(resolution),
      origin_(origin),
      width_(width),
      height_(height),
      cells_(static_cast<std::size_t>(width) * height, fill) {
  if (!(resolution > 0.0)) throw ConfigError("grid resolution must be > 0");
  if (width < 0 || height < 0) throw ConfigError("negative grid dimensions");
}

Point2 OccupancyGrid::to_grid_frame(const Point2& world) const {
  return inverse(RigidTransform2D::from_pose(origin_)) * world;
}

Point2 OccupancyGrid::cell_center(const CellIndex& c) const {
  const Point2 local((c.i + 0.5) * resolution_, (c.j + 0.5) * resolution_);
  return RigidTransform2D::from_pose(origin_) * local;
}

CellIndex OccupancyGrid::world_to_cell(const Point2& world) const {
  const Point2 local = to_grid_frame(world);
  return {static_cast<int>(std::floor(local.x() / resolution_)),
          static_cast<int>(std::floor(local.y() / resolution_))};
}

std::size_t OccupancyGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

const SceneObject& SceneDescription::target() const {
  auto it = std::find_if(objects.begin(), objects.end(),
                         [&](const SceneObject& o) { return o.id == target_id; });
  if (it == objects.end()) {
    throw LookupError("unknown target object id '" + target_id + "'");
  }
  return *it;
}

RigidTransform2D table_to_map(const TableSpec& table) {
  const RigidTransform2D center = RigidTransform2D::from_pose(table.center);
  return compose(center, RigidTransform2D::translate(-table.width / 2.0,
                                                     -table.length / 2.0));
}

namespace {

RigidTransform2D table_transform(const SceneDescription& scene) {
  return scene.table ? table_to_map(*scene.table) : RigidTransform2D{};
}

double table_height(const SceneDescription& scene) {
  return scene.table ? scene.table->height : 0.0;
}

// ---------------------------------------------------------------------------
// PGM / YAML

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view magic() {
    if (bytes_.size() < 2) throw ParseError("PGM: truncated header");
    pos_ = 2;
    return bytes_.substr(0, 2);
  }

  long header_int(const char* what) {
    skip_space_and_comments();
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) throw ParseError(std::string("PGM: expected ") + what);
    long value = 0;
    std::from_chars(bytes_.data() + start, bytes_.data() + pos_, value);
    return value;
  }

  // Exactly one whitespace byte separates the header from binary data.
  void end_header() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw ParseError("PGM: missing whitespace after header");
    }
    ++pos_;
  }

  std::string_view rest() const { return bytes_.substr(pos_); }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

CellState classify(double value_255, const GridMetadata& meta) {
  const double p = meta.negate ? value_255 / 255.0 : (255.0 - value_255) / 255.0;
  if (p > meta.occupied_thresh) return CellState::kOccupied;
  if (p < meta.free_thresh) return CellState::kFree;
  return CellState::kUnknown;
}

}  // namespace

GridMetadata parse_grid_metadata(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("grid metadata: ") + e.what());
  }
  if (!root.IsMap()) throw ParseError("grid metadata: expected a mapping");
  auto require = [&](const char* key) {
    if (!root[key]) {
      throw ConfigError(std::string("grid metadata: missing key '") + key + "'");
    }
    return root[key];
  };
  GridMetadata meta;
  try {
    if (root["image"]) meta.image = root["image"].as<std::string>();
    meta.resolution = require("resolution").as<double>();
    const YAML::Node origin = require("origin");
    if (!origin.IsSequence() || origin.size() < 2) {
      throw ConfigError("grid metadata: origin must be [x, y, yaw]");
    }
    meta.origin = Pose2D(origin[0].as<double>(), origin[1].as<double>(),
                         origin.size() > 2 ? origin[2].as<double>() : 0.0);
    meta.negate = require("negate").as<int>() != 0;
    meta.occupied_thresh = require("occupied_thresh").as<double>();
    meta.free_thresh = require("free_thresh").as<double>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("grid metadata: ") + e.what());
  }
  if (!(meta.resolution > 0.0)) {
    throw ConfigError("grid metadata: resolution must be > 0");
  }
  return meta;
}

OccupancyGrid load_grid(std::string_view pgm_bytes, const GridMetadata& meta) {
  PgmReader reader(pgm_bytes);
  const std::string_view magic = reader.magic();
  const bool binary = magic == "P5";
  if (!binary && magic != "P2") throw ParseError("PGM: unsupported magic");
  const long width = reader.header_int("width");
  const long height = reader.header_int("height");
  const long maxval = reader.header_int("maxval");
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw ParseError("PGM: invalid dimensions or maxval");
  }
  reader.end_header();

  const std::size_t n = static_cast<std::size_t>(width) * height;
  std::vector<long> raw(n);
  const std::string_view data = reader.rest();
  if (binary) {
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    if (data.size() < n * bytes_per) throw ParseError("PGM: truncated pixel data");
    for (std::size_t k = 0; k < n; ++k) {
      if (bytes_per == 1) {
        raw[k] = static_cast<unsigned char>(data[k]);
      } else {
        raw[k] = (static_cast<unsigned char>(data[2 * k]) << 8) |
                 static_cast<unsigned char>(data[2 * k + 1]);
      }
    }
  } else {
    std::size_t pos = 0;
    for (std::size_t k = 0; k < n; ++k) {
      while (pos < data.size() && std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
      long v = 0;
      auto [end, ec] = std::from_chars(data.data() + pos, data.data() + data.size(), v);
      if (ec != std::errc()) throw ParseError("PGM: bad ASCII pixel value");
      raw[k] = v;
      pos = static_cast<std::size_t>(end - data.data());
    }
  }

  OccupancyGrid grid(meta.resolution, meta.origin, static_cast<int>(width),
                     static_cast<int>(height));
  for (long r = 0; r < height; ++r) {
    for (long c = 0; c < width; ++c) {
      double v = static_cast<double>(raw[static_cast<std::size_t>(r * width + c)]);
      if (v > maxval) throw ParseError("PGM: pixel exceeds maxval");
      if (maxval != 255) v = v * 255.0 / static_cast<double>(maxval);
      // Image row 0 is the top of the map.
      grid.set({static_cast<int>(c), static_cast<int>(height - 1 - r)},
               classify(v, meta));
    }
  }
  return grid;
}

OccupancyGrid load_grid(std::string_view pgm_bytes, std::string_view yaml_text) {
  return load_grid(pgm_bytes, parse_grid_metadata(yaml_text));
}

std::string save_grid_pgm(const OccupancyGrid& grid) {
  std::string out = "P5\n" + std::to_string(grid.width()) + " " +
                    std::to_string(grid.height()) + "\n255\n";
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) {
      switch (grid.at({c, grid.height() - 1 - r})) {
        case CellState::kOccupied: out.push_back(static_cast<char>(0)); break;
        case CellState::kFree: out.push_back(static_cast<char>(254)); break;
        case CellState::kUnknown: out.push_back(static_cast<char>(205)); break;
      }
    }
  }
  return out;
}

std::string save_grid_yaml(const OccupancyGrid& grid, const std::string& image_name) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "image: %s\nresolution: %.17g\norigin: [%.17g, %.17g, %.17g]\n"
                "negate: 0\noccupied_thresh: 0.65\nfree_thresh: 0.196\n",
                image_name.c_str(), grid.resolution(), grid.origin().x(),
                grid.origin().y(), grid.origin().heading());
  return buf;
}

// ---------------------------------------------------------------------------
// XYZ text

PointCloud load_cloud(std::string_view xyz_text) {
  PointCloud cloud;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= xyz_text.size()) {
    std::size_t eol = xyz_text.find('\n', pos);
    if (eol == std::string_view::npos) eol = xyz_text.size();
    std::string_view line = xyz_text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    std::array<double, 3> xyz{};
    std::size_t field = 0;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      std::string_view tok = trim(line.substr(
          start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (field >= 3) {
        throw ParseError("cloud line " + std::to_string(line_no) + ": expected 3 fields");
      }
      if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
      double v = 0.0;
      auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size() ||
          !std::isfinite(v)) {
        throw ParseError("cloud line " + std::to_string(line_no) +
                         ": non-numeric token '" + std::string(tok) + "'");
      }
      xyz[field++] = v;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (field != 3) {
      throw ParseError("cloud line " + std::to_string(line_no) + ": expected 3 fields");
    }
    cloud.points.emplace_back(xyz[0], xyz[1], xyz[2]);
  }
  return cloud;
}

std::string save_cloud(const PointCloud& cloud) {
  std::string out;
  out.reserve(cloud.size() * 40);
  char buf[96];
  for (const Point3& p : cloud.points) {
    const int n = std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g\n", p.x(), p.y(), p.z());
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthesis

namespace {

// Rectangle spanned by two orthogonal edges from a corner.
struct Face {
  Point3 corner;
  Point3 edge_u;
  Point3 edge_v;

  double area() const { return edge_u.norm() * edge_v.norm(); }
};

Point3 lift(const Point2& p, double z) { return {p.x(), p.y(), z}; }

void append_box_faces(const OrientedBox3& box, bool with_bottom,
                      std::vector<Face>& faces) {
  const Matrix2<double> r = rotation_matrix(box.yaw);
  const Point3 ax = lift(r.col(0), 0.0) * (2.0 * box.half_extents.x());
  const Point3 ay = lift(r.col(1), 0.0) * (2.0 * box.half_extents.y());
  const Point3 az(0.0, 0.0, 2.0 * box.half_extents.z());
  const Point3 lo = box.center - ax / 2.0 - ay / 2.0 - az / 2.0;

  faces.push_back({lo + az, ax, ay});  // top
  if (with_bottom) faces.push_back({lo, ax, ay});
  faces.push_back({lo, ay, az});        // -x
  faces.push_back({lo + ax, ay, az});   // +x
  faces.push_back({lo, ax, az});        // -y
  faces.push_back({lo + ay, ax, az});   // +y
}

std::vector<Face> scene_faces(const SceneDescription& scene) {
  std::vector<Face> faces;
  const RigidTransform2D to_map = table_transform(scene);
  const Matrix2<double> r = rotation_matrix(to_map.rotation);
  const double top = table_height(scene);

  if (scene.table && scene.table->width > 0.0 && scene.table->length > 0.0) {
    faces.push_back({lift(to_map * Point2::Zero(), top),
                     lift(r.col(0), 0.0) * scene.table->width,
                     lift(r.col(1), 0.0) * scene.table->length});
  }
  for (const SceneObject& obj : scene.objects) {
    OrientedBox3 box;
    box.center = lift(to_map * obj.position, top + obj.height / 2.0);
    box.half_extents = Point3(obj.width / 2.0, obj.depth / 2.0, obj.height / 2.0);
    box.yaw = to_map.rotation;
    append_box_faces(box, false, faces);
  }
  for (const OrientedBox3& box : scene.obstacles) {
    append_box_faces(box, true, faces);
  }
  return faces;
}

// Jittered-grid sampling of exactly floor(density * area) points.
void sample_face(const Face& face, double density, Rng& rng, PointCloud& cloud) {
  const double area = face.area();
  const auto count = static_cast<std::size_t>(std::floor(density * area + 1e-9));
  if (count == 0) return;
  const double lu = face.edge_u.norm();
  const double lv = face.edge_v.norm();
  const std::size_t nu = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(std::sqrt(count * lu / lv))));
  const std::size_t nv = (count + nu - 1) / nu;

  std::vector<std::size_t> cells(nu * nv);
  std::iota(cells.begin(), cells.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` entries become a random subset.
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t pick = k + rng.index(cells.size() - k);
    std::swap(cells[k], cells[pick]);
  }
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t ci = cells[k] % nu;
    const std::size_t cj = cells[k] / nu;
    const double u = (static_cast<double>(ci) + rng.uniform()) / static_cast<double>(nu);
    const double v = (static_cast<double>(cj) + rng.uniform()) / static_cast<double>(nv);
    cloud.points.push_back(face.corner + u * face.edge_u + v * face.edge_v);
  }
}

}  // namespace

PointCloud synthesize_cloud(const SceneDescription& scene, double density,
                            std::uint64_t seed) {
  if (!(density > 0.0)) throw ParamError("cloud density must be > 0");
  Rng rng(seed);
  PointCloud cloud;
  for (const Face& face : scene_faces(scene)) sample_face(face, density, rng, cloud);
  return cloud;
}

OccupancyGrid synthesize_grid(const SceneDescription& scene, double resolution,
                              double margin) {
  if (!(resolution > 0.0)) throw ParamError("grid resolution must be > 0");
  const RigidTransform2D to_map = table_transform(scene);

  Point2 lo = scene.robot_start.position();
  Point2 hi = lo;
  auto extend = [&](const Point2& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  auto extend_box = [&](const OrientedBox3& box) {
    const Matrix2<double> r = rotation_matrix(box.yaw);
    for (double sx : {-1.0, 1.0}) {
      for (double sy : {-1.0, 1.0}) {
        extend(box.center.head<2>() +
               r * Point2(sx * box.half_extents.x(), sy * box.half_extents.y()));
      }
    }
  };
  if (scene.table) {
    for (double x : {0.0, scene.table->width}) {
      for (double y : {0.0, scene.table->length}) extend(to_map * Point2(x, y));
    }
  }
  for (const SceneObject& obj : scene.objects) extend(to_map * obj.position);
  for (const OrientedBox3& box : scene.obstacles) extend_box(box);
  if (scene.baseline_goal) extend(scene.baseline_goal->position());

  // Snap the origin to the resolution lattice so axis-aligned edges that sit
  // on multiples of the resolution fall between cell centers.
  const Point2 origin = ((lo.array() - margin) / resolution).floor() * resolution;
  const int width = static_cast<int>(std::ceil((hi.x() + margin - origin.x()) / resolution));
  const int height = static_cast<int>(std::ceil((hi.y() + margin - origin.y()) / resolution));
  OccupancyGrid grid(resolution, Pose2D(origin, 0.0), std::max(width, 1),
                     std::max(height, 1));

  const RigidTransform2D to_table = inverse(to_map);
  for (int j = 0; j < grid.height(); ++j) {
    for (int i = 0; i < grid.width(); ++i) {
      const Point2 c = grid.cell_center({i, j});
      bool occupied = false;
      if (scene.table) {
        const Point2 t = to_table * c;
        occupied = t.x() >= 0.0 && t.x() <= scene.table->width && t.y() >= 0.0 &&
                   t.y() <= scene.table->length;
      }
      for (std::size_t k = 0; !occupied && k < scene.obstacles.size(); ++k) {
        const OrientedBox3& box = scene.obstacles[k];
        const Point3 local = box.to_local(Point3(c.x(), c.y(), box.center.z()));
        occupied = std::abs(local.x()) <= box.half_extents.x() &&
                   std::abs(local.y()) <= box.half_extents.y();
      }
      if (occupied) grid.set({i, j}, CellState::kOccupied);
    }
  }
  return grid;
}

ObjectObservation observe_object(const SceneDescription& scene) {
  const SceneObject& obj = scene.target();
  const Point2 planar = table_transform(scene) * obj.position;
  ObjectObservation obs;
  obs.position = Point3(planar.x(), planar.y(), table_height(scene) + obj.height / 2.0);
  obs.width = obj.width;
  obs.height = obj.height;
  return obs;
}

SceneSnapshot make_snapshot(const SceneDescription& scene,
                            const SynthesisOptions& options) {
  SceneSnapshot snap;
  snap.object = observe_object(scene);
  snap.cloud = synthesize_cloud(scene, options.density, options.seed);
  snap.grid = synthesize_grid(scene, options.resolution, options.margin);
  return snap;
}

}  // namespace placeplan
