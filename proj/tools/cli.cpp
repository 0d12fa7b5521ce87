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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "placeplan/errors.hpp"
#include "placeplan/executor.hpp"
#include "placeplan/harness.hpp"
#include "placeplan/planner.hpp"
#include "placeplan/random.hpp"
#include "placeplan/scene.hpp"
#include "placeplan/serialization.hpp"

namespace placeplan::cli {

namespace {

namespace fs = std::filesystem;

// Raised for unreadable or unwritable files; the message names the file.
class InputError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << contents;
}

// Wraps parse failures so the message names the offending file.
template <typename F>
auto load(const std::string& path, F&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

SceneDescription load_scene(const std::string& path) {
  return load(path, [](const std::string& t) { return scene_from_json(parse_json(t, "scene")); });
}

RobotParams load_params(const std::string& path) {
  if (path.empty()) return RobotParams{};
  return load(path, [](const std::string& t) { return parse_params(t); });
}

unsigned thread_cap() {
  if (const char* env = std::getenv("PLACEPLAN_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return 0;
}

struct GlobalOptions {
  bool json = false;
};

// ---------------------------------------------------------------------------
// plan

struct PlanOptions {
  std::string scene, grid, grid_meta, cloud, object, params, out;
  std::uint64_t seed = 0;
  double density = kDefaultCloudDensity;
  double resolution = kDefaultGridResolution;
};

int cmd_plan(const PlanOptions& o, const GlobalOptions& g, std::ostream& out,
             std::ostream& err) {
  const bool from_scene = !o.scene.empty();
  const bool from_files = !o.grid.empty() || !o.grid_meta.empty() || !o.cloud.empty() ||
                          !o.object.empty();
  if (from_scene == from_files ||
      (from_files && (o.grid.empty() || o.grid_meta.empty() || o.cloud.empty() ||
                      o.object.empty()))) {
    throw InputError("plan needs either --scene or all of --grid, --grid-meta, --cloud, --object");
  }
  const RobotParams params = load_params(o.params);

  SceneSnapshot snapshot;
  if (from_scene) {
    SynthesisOptions synthesis;
    synthesis.density = o.density;
    synthesis.resolution = o.resolution;
    synthesis.seed = o.seed;
    snapshot = make_snapshot(load_scene(o.scene), synthesis);
  } else {
    const std::string meta = read_file(o.grid_meta);
    snapshot.grid = load(o.grid, [&](const std::string& pgm) {
      try {
        return load_grid(pgm, meta);
      } catch (const ConfigError& e) {
        throw InputError(o.grid_meta + ": " + e.what());
      }
    });
    snapshot.cloud = load(o.cloud, [](const std::string& t) { return load_cloud(t); });
    snapshot.object = load(o.object, [](const std::string& t) {
      return observation_from_json(parse_json(t, "object"));
    });
  }

  const PlanResult plan = plan_placements_traced(snapshot, params);
  write_file(o.out, plan_to_json(plan, snapshot.object).dump(2) + "\n");
  err << "plan: " << plan.candidates.size() << " candidates, " << plan.pruned()
      << " pruned probes\n";
  if (g.json) {
    out << Json{{"candidates", plan.candidates.size()}, {"pruned", plan.pruned()},
                {"out", o.out}}.dump()
        << "\n";
  } else {
    for (const PlacementCandidate& c : plan.candidates.candidates) {
      char line[160];
      std::snprintf(line, sizeof(line), "ray %2d  standoff %.3f  pose (%.3f, %.3f, %.3f)\n",
                    c.radial_index, c.standoff, c.pose.x(), c.pose.y(), c.pose.heading());
      out << line;
    }
  }
  return plan.candidates.empty() ? kNoCandidates : kOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  std::string scene, params, approach = "proposed", out;
  std::uint64_t seed = 0;
  double density = kDefaultCloudDensity;
  double resolution = kDefaultGridResolution;
  bool straight_line_nav = false;
  double nav_failure_prob = 0.0;
  double pickup_failure_prob = 0.0;
};

int cmd_simulate(const SimulateOptions& o, const GlobalOptions& g, std::ostream& out,
                 std::ostream& err) {
  const SceneDescription scene = load_scene(o.scene);
  const RobotParams params = load_params(o.params);
  const Approach approach = parse_approach(o.approach);

  SynthesisOptions synthesis;
  synthesis.density = o.density;
  synthesis.resolution = o.resolution;
  synthesis.seed = derive_seed({o.seed, 1});
  const SceneSnapshot snapshot = make_snapshot(scene, synthesis);

  NavigationModel nav{!o.straight_line_nav, o.nav_failure_prob};
  PickupModel pick{o.pickup_failure_prob};
  SimulatedBackend backend(snapshot, params, scene.robot_start, nav, pick,
                           derive_seed({o.seed, 2}));

  CandidateSet candidates;
  if (approach == Approach::kProposed) {
    candidates = plan_placements(snapshot, params);
  } else {
    Pose2D goal;
    if (scene.baseline_goal) {
      goal = *scene.baseline_goal;
    } else if (scene.table) {
      goal = default_baseline_goal(*scene.table, params, 0.10);
    } else {
      throw InputError(o.scene + ": baseline needs a table or an explicit baseline_goal");
    }
    candidates.candidates.push_back(
        {goal, -1, (goal.position() - snapshot.object.position.head<2>()).norm()});
  }
  const std::size_t planned = candidates.size();
  const ExecutionOutcome outcome =
      execute_pickup(snapshot.object.position, candidates, backend, MotionCostWeights{});

  std::string jsonl;
  for (std::size_t k = 0; k < outcome.attempts.size(); ++k) {
    Json line{{"approach", to_string(approach)}, {"attempt", k}};
    const Json fields = attempt_to_json(outcome.attempts[k]);
    for (const auto& [key, value] : fields.items()) line[key] = value;
    jsonl += line.dump() + "\n";
  }
  const fs::path dir(o.out);
  write_file(dir / "attempts.jsonl", jsonl);
  Json result = outcome_to_json(outcome);
  result["approach"] = to_string(approach);
  result["seed"] = o.seed;
  result["candidates"] = planned;
  write_file(dir / "outcome.json", result.dump(2) + "\n");

  err << "simulate: " << to_string(outcome.status) << " after " << outcome.attempts.size()
      << " attempt(s)\n";
  if (g.json) {
    out << Json{{"status", to_string(outcome.status)},
                {"attempts", outcome.attempts.size()}}.dump()
        << "\n";
  } else {
    out << to_string(approach) << ": " << to_string(outcome.status) << " ("
        << outcome.attempts.size() << " attempt(s), " << planned << " candidate(s))\n";
  }
  return outcome.succeeded() ? kOk : kExecutionFailed;
}

// ---------------------------------------------------------------------------
// benchmark

int cmd_benchmark(const std::string& config_path, const std::string& out_dir,
                  const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  std::vector<Approach> approaches;
  GridExperimentConfig config = load(config_path, [&](const std::string& t) {
    return config_from_json(parse_json(t, "experiment config"), &approaches);
  });
  config.threads = thread_cap();

  std::vector<ExperimentReport> reports;
  std::string jsonl;
  for (Approach a : approaches) {
    config.approach = a;
    reports.push_back(run_experiment(config));
    jsonl += attempts_jsonl(reports.back());
  }

  const fs::path dir(out_dir);
  write_file(dir / "report.json", render_reports(reports, "json"));
  write_file(dir / "report.csv", render_reports(reports, "csv"));
  write_file(dir / "heatmap.ppm", render_reports(reports, "ppm"));
  write_file(dir / "heatmap.svg", render_reports(reports, "svg"));
  write_file(dir / "attempts.jsonl", jsonl);

  if (g.json) {
    Json summary = Json::array();
    for (const ExperimentReport& r : reports) {
      summary.push_back(Json{{"approach", to_string(r.approach)},
                             {"successes", r.total_successes()},
                             {"trials", r.total_trials()},
                             {"success_rate", r.overall_success_rate()}});
    }
    out << summary.dump() << "\n";
  } else {
    for (const ExperimentReport& r : reports) {
      out << to_string(r.approach) << ":\n";
      for (const CellResult& c : r.cells) {
        out << "  (" << c.cell.x << ", " << c.cell.y << ")  " << c.successes << " / "
            << (c.successes + c.failures) << "\n";
      }
      char line[96];
      std::snprintf(line, sizeof(line), "  overall %.1f%%\n", 100.0 * r.overall_success_rate());
      out << line;
    }
  }
  err << "benchmark: wrote " << (dir / "report.json").string() << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// render

std::string svg_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string render_scene_svg(const SceneDescription& scene, const CandidateSet& candidates,
                             const std::vector<PlacementProbe>& pruned) {
  const ObjectObservation object = observe_object(scene);
  std::vector<Point2> extent{object.position.head<2>(), scene.robot_start.position()};
  std::vector<std::vector<Point2>> polygons;
  if (scene.table) {
    const RigidTransform2D to_map = table_to_map(*scene.table);
    const double w = scene.table->width;
    const double l = scene.table->length;
    polygons.push_back({to_map * Point2(0, 0), to_map * Point2(w, 0), to_map * Point2(w, l),
                        to_map * Point2(0, l)});
  }
  for (const OrientedBox3& b : scene.obstacles) {
    const Matrix2<double> r = rotation_matrix(b.yaw);
    std::vector<Point2> poly;
    for (auto [sx, sy] : {std::pair{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}) {
      poly.push_back(b.center.head<2>() +
                     r * Point2(sx * b.half_extents.x(), sy * b.half_extents.y()));
    }
    polygons.push_back(poly);
  }
  for (const auto& poly : polygons) extent.insert(extent.end(), poly.begin(), poly.end());
  for (const auto& c : candidates.candidates) extent.push_back(c.pose.position());
  for (const auto& p : pruned) extent.push_back(p.position);

  Point2 lo = extent.front();
  Point2 hi = lo;
  for (const Point2& p : extent) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  lo.array() -= 0.5;
  hi.array() += 0.5;
  constexpr double kScale = 200.0;  // px per meter
  const double width = (hi.x() - lo.x()) * kScale;
  const double height = (hi.y() - lo.y()) * kScale;

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_number(width) +
                    "\" height=\"" + svg_number(height) + "\">\n";
  // World coordinates, y up.
  svg += "<g transform=\"matrix(" + svg_number(kScale) + " 0 0 " + svg_number(-kScale) + " " +
         svg_number(-lo.x() * kScale) + " " + svg_number(hi.y() * kScale) + ")\">\n";
  for (std::size_t k = 0; k < polygons.size(); ++k) {
    const bool table = scene.table && k == 0;
    svg += std::string("<polygon class=\"") + (table ? "table" : "obstacle") + "\" points=\"";
    for (const Point2& p : polygons[k]) svg += svg_number(p.x()) + "," + svg_number(p.y()) + " ";
    svg += std::string("\" fill=\"") + (table ? "#c8b48c" : "#777777") +
           "\" stroke=\"#333333\" stroke-width=\"0.01\"/>\n";
  }
  svg += "<circle class=\"object\" cx=\"" + svg_number(object.position.x()) + "\" cy=\"" +
         svg_number(object.position.y()) + "\" r=\"" +
         svg_number(std::max(object.width / 2.0, 0.02)) + "\" fill=\"#1f77b4\"/>\n";
  for (const PlacementProbe& p : pruned) {
    svg += "<circle class=\"pruned\" cx=\"" + svg_number(p.position.x()) + "\" cy=\"" +
           svg_number(p.position.y()) + "\" r=\"0.02\" fill=\"#d62728\"/>\n";
  }
  for (const PlacementCandidate& c : candidates.candidates) {
    const double deg = c.pose.heading() * 180.0 / std::numbers::pi;
    svg += "<g class=\"candidate\" data-radial-index=\"" + std::to_string(c.radial_index) +
           "\" data-heading=\"" + svg_number(c.pose.heading()) + "\" transform=\"translate(" +
           svg_number(c.pose.x()) + " " + svg_number(c.pose.y()) + ") rotate(" + svg_number(deg) +
           ")\"><line x1=\"-0.08\" y1=\"0\" x2=\"0.05\" y2=\"0\" stroke=\"#2ca02c\" "
           "stroke-width=\"0.015\"/><polygon points=\"0.1,0 0.04,0.035 0.04,-0.035\" "
           "fill=\"#2ca02c\"/></g>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

int cmd_render(const std::string& scene_path, const std::string& candidates_path,
               const std::string& out_path, std::ostream& err) {
  const SceneDescription scene = load_scene(scene_path);
  CandidateSet candidates;
  std::vector<PlacementProbe> pruned;
  const std::string text = read_file(candidates_path);
  if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
    try {
      const Json doc = parse_json(text, "candidates");
      candidates = candidates_from_json(doc);
      pruned = pruned_probes_from_json(doc);
    } catch (const std::exception& e) {
      throw InputError(candidates_path + ": " + e.what());
    }
  }
  write_file(out_path, render_scene_svg(scene, candidates, pruned));
  err << "render: " << candidates.size() << " candidates, " << pruned.size() << " pruned\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Base placement planning for mobile manipulation", "placeplan"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_flag("--json", global.json, "Machine-readable stdout");

  PlanOptions plan;
  auto* plan_cmd = app.add_subcommand("plan", "Plan base placement candidates");
  plan_cmd->add_option("--scene", plan.scene, "Scene JSON (synthesizes cloud and grid)");
  plan_cmd->add_option("--grid", plan.grid, "Occupancy grid PGM");
  plan_cmd->add_option("--grid-meta", plan.grid_meta, "Occupancy grid YAML metadata");
  plan_cmd->add_option("--cloud", plan.cloud, "Point cloud, x,y,z per line");
  plan_cmd->add_option("--object", plan.object, "Object observation JSON");
  plan_cmd->add_option("--params", plan.params, "Robot parameters (JSON or key = value)");
  plan_cmd->add_option("--out", plan.out, "Candidate set JSON")->required();
  plan_cmd->add_option("--seed", plan.seed, "Cloud synthesis seed");
  plan_cmd->add_option("--density", plan.density, "Synthesized points per square meter");
  plan_cmd->add_option("--resolution", plan.resolution, "Synthesized grid resolution");

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one simulated pickup trial");
  sim_cmd->add_option("--scene", sim.scene, "Scene JSON")->required();
  sim_cmd->add_option("--params", sim.params, "Robot parameters (JSON or key = value)");
  sim_cmd->add_option("--approach", sim.approach, "proposed | baseline")
      ->check(CLI::IsMember({"proposed", "baseline"}));
  sim_cmd->add_option("--seed", sim.seed, "Seed for synthesis and simulated failures");
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();
  sim_cmd->add_option("--density", sim.density, "Synthesized points per square meter");
  sim_cmd->add_option("--resolution", sim.resolution, "Synthesized grid resolution");
  sim_cmd->add_flag("--straight-line-nav", sim.straight_line_nav,
                    "Fail navigation whose straight path is blocked");
  sim_cmd->add_option("--nav-failure-prob", sim.nav_failure_prob)->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--pickup-failure-prob", sim.pickup_failure_prob)
      ->check(CLI::Range(0.0, 1.0));

  std::string bench_config, bench_out;
  auto* bench_cmd = app.add_subcommand("benchmark", "Run the tabletop grid experiment");
  bench_cmd->add_option("--config", bench_config, "Experiment config JSON")->required();
  bench_cmd->add_option("--out", bench_out, "Output directory")->required();

  std::string render_scene, render_candidates, render_out;
  auto* render_cmd = app.add_subcommand("render", "Top-down SVG of a scene and candidates");
  render_cmd->add_option("--scene", render_scene, "Scene JSON")->required();
  render_cmd->add_option("--candidates", render_candidates, "Candidate set JSON")->required();
  render_cmd->add_option("--out", render_out, "Output SVG")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    if (*plan_cmd) return cmd_plan(plan, global, out, err);
    if (*sim_cmd) return cmd_simulate(sim, global, out, err);
    if (*bench_cmd) return cmd_benchmark(bench_config, bench_out, global, out, err);
    if (*render_cmd) return cmd_render(render_scene, render_candidates, render_out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace placeplan::cli
