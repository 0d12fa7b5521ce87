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

#include "placeplan/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

#include "placeplan/errors.hpp"
#include "placeplan/random.hpp"
#include "placeplan/serialization.hpp"

namespace placeplan {

std::string_view to_string(Approach approach) {
  return approach == Approach::kProposed ? "proposed" : "baseline";
}

Approach parse_approach(std::string_view name) {
  if (name == "proposed") return Approach::kProposed;
  if (name == "baseline") return Approach::kBaseline;
  throw ConfigError("unknown approach '" + std::string(name) + "'");
}

void GridExperimentConfig::validate() const {
  if (!(cell_size > 0.0) || columns <= 0 || rows <= 0) {
    throw ConfigError("grid needs a positive cell size and shape");
  }
  if (columns * cell_size > table.width + 1e-9 || rows * cell_size > table.length + 1e-9) {
    throw ConfigError("grid does not fit on the table");
  }
  if (trials_per_cell <= 0) throw ConfigError("trials_per_cell must be > 0");
  if (!(cloud_density > 0.0) || !(grid_resolution > 0.0) || grid_margin < 0.0) {
    throw ConfigError("invalid scene synthesis settings");
  }
  robot.validate();
  weights.validate();
}

Pose2D default_baseline_goal(const TableSpec& table, const RobotParams& robot,
                             double edge_clearance) {
  const Pose2D in_table(table.width / 2.0, -(robot.footprint_radius + edge_clearance),
                        std::numbers::pi / 2.0);
  return transform_pose(in_table, table_to_map(table));
}

Pose2D baseline_goal(const GridExperimentConfig& config) {
  return config.baseline_goal ? *config.baseline_goal
                              : default_baseline_goal(config.table, config.robot,
                                                      config.baseline_edge_clearance);
}

Pose2D robot_start(const GridExperimentConfig& config) {
  if (config.robot_start) return *config.robot_start;
  const Pose2D in_table(config.table.width / 2.0, -1.0, std::numbers::pi / 2.0);
  return transform_pose(in_table, table_to_map(config.table));
}

Point2 cell_center(const GridCell& cell, const GridExperimentConfig& config) {
  if (cell.x < 0 || cell.x >= config.columns || cell.y < 0 || cell.y >= config.rows) {
    throw RangeError("cell (" + std::to_string(cell.x) + ", " + std::to_string(cell.y) +
                     ") outside the grid");
  }
  const double margin_x = (config.table.width - config.columns * config.cell_size) / 2.0;
  return {margin_x + (cell.x + 0.5) * config.cell_size, (cell.y + 0.5) * config.cell_size};
}

SceneDescription build_cell_scene(const GridCell& cell, const GridExperimentConfig& config) {
  SceneDescription scene;
  scene.table = config.table;
  SceneObject object = config.object_template;
  object.position = cell_center(cell, config);
  scene.objects.push_back(object);
  scene.target_id = object.id;
  scene.robot_start = robot_start(config);
  scene.baseline_goal = baseline_goal(config);
  return scene;
}

std::uint64_t trial_seed(std::uint64_t base, const GridCell& cell, int trial) {
  return derive_seed({base, static_cast<std::uint64_t>(cell.x),
                      static_cast<std::uint64_t>(cell.y), static_cast<std::uint64_t>(trial)});
}

TrialResult run_trial(const GridCell& cell, Approach approach,
                      const GridExperimentConfig& config, std::uint64_t seed) {
  const SceneDescription scene = build_cell_scene(cell, config);
  SynthesisOptions synthesis;
  synthesis.density = config.cloud_density;
  synthesis.resolution = config.grid_resolution;
  synthesis.margin = config.grid_margin;
  synthesis.seed = derive_seed({seed, 1});
  const SceneSnapshot snapshot = make_snapshot(scene, synthesis);

  SimulatedBackend backend(snapshot, config.robot, scene.robot_start, config.nav_model,
                           config.pickup_model, derive_seed({seed, 2}), config.policy);
  TrialResult result;
  result.seed = seed;

  if (approach == Approach::kProposed) {
    CandidateSet candidates = plan_placements(snapshot, config.robot, config.policy);
    result.candidate_count = candidates.size();
    result.execution =
        execute_pickup(snapshot.object.position, candidates, backend, config.weights);
  } else {
    // The fixed goal is treated as a single, pre-chosen candidate.
    const Pose2D goal = *scene.baseline_goal;
    const double standoff = (goal.position() - snapshot.object.position.head<2>()).norm();
    CandidateSet fixed{{PlacementCandidate{goal, -1, standoff}}};
    result.candidate_count = 1;
    result.execution =
        execute_pickup(snapshot.object.position, fixed, backend, config.weights);
  }
  result.success = result.execution.succeeded();
  return result;
}

int ExperimentReport::total_successes() const {
  int n = 0;
  for (const CellResult& c : cells) n += c.successes;
  return n;
}

int ExperimentReport::total_trials() const {
  int n = 0;
  for (const CellResult& c : cells) n += c.successes + c.failures;
  return n;
}

double ExperimentReport::overall_success_rate() const {
  const int trials = total_trials();
  return trials == 0 ? 0.0 : static_cast<double>(total_successes()) / trials;
}

const CellResult& ExperimentReport::at(const GridCell& cell) const {
  for (const CellResult& c : cells) {
    if (c.cell == cell) return c;
  }
  throw RangeError("cell not in report");
}

ExperimentReport run_experiment(const GridExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  report.approach = config.approach;
  report.config = config;

  std::vector<GridCell> cells;
  for (int y = 0; y < config.rows; ++y) {
    for (int x = 0; x < config.columns; ++x) cells.push_back({x, y});
  }
  const std::size_t trials = static_cast<std::size_t>(config.trials_per_cell);
  const std::size_t jobs = cells.size() * trials;
  std::vector<TrialResult> results(jobs);

  // Each job writes only its own slot, so the output does not depend on
  // scheduling.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs; k = next++) {
      const GridCell& cell = cells[k / trials];
      const int t = static_cast<int>(k % trials);
      results[k] = run_trial(cell, config.approach, config, trial_seed(config.seed, cell, t));
    }
  };
  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(jobs, 1)));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult cell_result;
    cell_result.cell = cells[c];
    for (std::size_t t = 0; t < trials; ++t) {
      TrialResult& r = results[c * trials + t];
      (r.success ? cell_result.successes : cell_result.failures)++;
      cell_result.trials.push_back(std::move(r));
    }
    report.cells.push_back(std::move(cell_result));
  }
  return report;
}

int ramp_step(int successes, int trials) {
  if (trials <= 0) return 0;
  const double scaled = 5.0 * std::clamp(successes, 0, trials) / trials;
  return static_cast<int>(std::lround(scaled));
}

namespace {

const unsigned char* cell_color(const ExperimentReport& report, const GridCell& cell) {
  return kHeatmapRamp[ramp_step(report.at(cell).successes, report.config.trials_per_cell)];
}

// Heatmap raster: column = cell x, image row 0 = cell y 0 (the short edge).
void paint(const ExperimentReport& report, int cell_px, int x_offset, int image_width,
           std::string& pixels) {
  const int rows = report.config.rows;
  const int cols = report.config.columns;
  for (int py = 0; py < rows * cell_px; ++py) {
    for (int px = 0; px < cols * cell_px; ++px) {
      const unsigned char* rgb = cell_color(report, {px / cell_px, py / cell_px});
      const std::size_t at = 3 * (static_cast<std::size_t>(py) * image_width + x_offset + px);
      pixels[at] = static_cast<char>(rgb[0]);
      pixels[at + 1] = static_cast<char>(rgb[1]);
      pixels[at + 2] = static_cast<char>(rgb[2]);
    }
  }
}

std::string render_ppm(const std::vector<ExperimentReport>& reports, int cell_px) {
  int width = 0;
  int height = 0;
  for (const ExperimentReport& r : reports) {
    width += r.config.columns * cell_px;
    height = std::max(height, r.config.rows * cell_px);
  }
  std::string pixels(3 * static_cast<std::size_t>(width) * height, '\xff');
  int offset = 0;
  for (const ExperimentReport& r : reports) {
    paint(r, cell_px, offset, width, pixels);
    offset += r.config.columns * cell_px;
  }
  return "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n" + pixels;
}

std::string render_svg(const std::vector<ExperimentReport>& reports, int cell_px) {
  int width = 0;
  int height = 0;
  for (const ExperimentReport& r : reports) {
    width += r.config.columns * cell_px;
    height = std::max(height, r.config.rows * cell_px);
  }
  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  int offset = 0;
  char buf[384];
  for (const ExperimentReport& r : reports) {
    svg += "<g class=\"heatmap\" data-approach=\"" + std::string(to_string(r.approach)) + "\">\n";
    for (const CellResult& c : r.cells) {
      const unsigned char* rgb = cell_color(r, c.cell);
      const int x = offset + c.cell.x * cell_px;
      const int y = c.cell.y * cell_px;
      std::snprintf(buf, sizeof(buf),
                    "<rect class=\"cell\" data-cell=\"%d,%d\" x=\"%d\" y=\"%d\" width=\"%d\" "
                    "height=\"%d\" fill=\"#%02x%02x%02x\" stroke=\"#333333\"/>\n"
                    "<text x=\"%d\" y=\"%d\" text-anchor=\"middle\" font-size=\"%d\">%d/%d</text>\n",
                    c.cell.x, c.cell.y, x, y, cell_px, cell_px, rgb[0], rgb[1], rgb[2],
                    x + cell_px / 2, y + cell_px / 2 + cell_px / 8, std::max(cell_px / 4, 6),
                    c.successes, c.successes + c.failures);
      svg += buf;
    }
    svg += "</g>\n";
    offset += r.config.columns * cell_px;
  }
  svg += "</svg>\n";
  return svg;
}

std::string render_csv(const std::vector<ExperimentReport>& reports) {
  std::string csv = "approach,x,y,successes,failures\n";
  for (const ExperimentReport& r : reports) {
    for (const CellResult& c : r.cells) {
      csv += std::string(to_string(r.approach)) + "," + std::to_string(c.cell.x) + "," +
             std::to_string(c.cell.y) + "," + std::to_string(c.successes) + "," +
             std::to_string(c.failures) + "\n";
    }
  }
  return csv;
}

}  // namespace

std::string render_reports(const std::vector<ExperimentReport>& reports,
                           std::string_view format, int cell_px) {
  if (cell_px <= 0) throw FormatError("cell_px must be > 0");
  if (format == "json") {
    Json doc = Json::object();
    doc["reports"] = Json::array();
    for (const ExperimentReport& r : reports) doc["reports"].push_back(report_to_json(r));
    return doc.dump(2) + "\n";
  }
  if (format == "csv") return render_csv(reports);
  if (format == "ppm") return render_ppm(reports, cell_px);
  if (format == "svg") return render_svg(reports, cell_px);
  throw FormatError("unsupported report format '" + std::string(format) + "'");
}

std::string render_report(const ExperimentReport& report, std::string_view format,
                          int cell_px) {
  if (format == "json") return report_to_json(report).dump(2) + "\n";
  return render_reports({report}, format, cell_px);
}

}  // namespace placeplan
