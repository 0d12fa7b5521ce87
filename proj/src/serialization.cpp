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

#include "placeplan/serialization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "placeplan/errors.hpp"

namespace placeplan {

namespace {

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("missing key '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("invalid value for '") + key + "'");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

void require_object(const Json& j, std::string_view what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
}

void reject_unknown(const Json& j, std::initializer_list<std::string_view> known,
                    std::string_view what) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
    }
  }
}

Json candidate_to_json(const PlacementCandidate& c) {
  return Json{{"pose", pose_to_json(c.pose)},
              {"radial_index", c.radial_index},
              {"standoff", c.standoff}};
}

}  // namespace

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

Json pose_to_json(const Pose2D& pose) {
  return Json{{"x", pose.x()}, {"y", pose.y()}, {"heading", pose.heading()}};
}

Pose2D pose_from_json(const Json& j) {
  if (j.is_array() && j.size() == 3) {
    return Pose2D(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  }
  require_object(j, "pose");
  reject_unknown(j, {"x", "y", "heading"}, "pose");
  return Pose2D(get<double>(j, "x"), get<double>(j, "y"), get_or<double>(j, "heading", 0.0));
}

Json point_to_json(const Point3& p) { return Json{{"x", p.x()}, {"y", p.y()}, {"z", p.z()}}; }

Point3 point_from_json(const Json& j) {
  if (j.is_array() && j.size() == 3) {
    return Point3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  }
  require_object(j, "point");
  return Point3(get<double>(j, "x"), get<double>(j, "y"), get<double>(j, "z"));
}

Json scene_to_json(const SceneDescription& scene) {
  Json j;
  if (scene.table) {
    j["table"] = Json{{"center", pose_to_json(scene.table->center)},
                      {"length", scene.table->length},
                      {"width", scene.table->width},
                      {"height", scene.table->height}};
  } else {
    j["table"] = nullptr;
  }
  j["objects"] = Json::array();
  for (const SceneObject& o : scene.objects) {
    j["objects"].push_back(Json{{"id", o.id},
                                {"position", Json{{"x", o.position.x()}, {"y", o.position.y()}}},
                                {"width", o.width},
                                {"height", o.height},
                                {"depth", o.depth}});
  }
  j["obstacles"] = Json::array();
  for (const OrientedBox3& b : scene.obstacles) {
    j["obstacles"].push_back(Json{
        {"center", point_to_json(b.center)},
        {"half_extents", {b.half_extents.x(), b.half_extents.y(), b.half_extents.z()}},
        {"yaw", b.yaw}});
  }
  j["robot_start"] = pose_to_json(scene.robot_start);
  j["target_id"] = scene.target_id;
  if (scene.baseline_goal) j["baseline_goal"] = pose_to_json(*scene.baseline_goal);
  return j;
}

SceneDescription scene_from_json(const Json& j) {
  require_object(j, "scene");
  reject_unknown(j, {"table", "objects", "obstacles", "robot_start", "target_id", "baseline_goal"},
                 "scene");
  SceneDescription scene;
  if (j.contains("table") && !j["table"].is_null()) {
    const Json& t = j["table"];
    require_object(t, "table");
    TableSpec table;
    if (t.contains("center")) table.center = pose_from_json(t["center"]);
    table.length = get<double>(t, "length");
    table.width = get<double>(t, "width");
    table.height = get<double>(t, "height");
    if (table.length < 0.0 || table.width < 0.0 || table.height < 0.0) {
      throw ConfigError("table dimensions must be >= 0");
    }
    scene.table = table;
  }
  for (const Json& o : get_or<Json>(j, "objects", Json::array())) {
    require_object(o, "object");
    SceneObject obj;
    obj.id = get<std::string>(o, "id");
    const Json& pos = o.at("position");
    obj.position = pos.is_array() ? Point2(pos[0].get<double>(), pos[1].get<double>())
                                  : Point2(get<double>(pos, "x"), get<double>(pos, "y"));
    obj.width = get<double>(o, "width");
    obj.height = get<double>(o, "height");
    obj.depth = get_or<double>(o, "depth", obj.width);
    if (!(obj.width > 0.0) || !(obj.height > 0.0) || !(obj.depth > 0.0)) {
      throw ConfigError("object '" + obj.id + "' needs positive dimensions");
    }
    scene.objects.push_back(obj);
  }
  for (const Json& b : get_or<Json>(j, "obstacles", Json::array())) {
    require_object(b, "obstacle");
    OrientedBox3 box;
    box.center = point_from_json(b.at("center"));
    box.half_extents = point_from_json(b.at("half_extents"));
    box.yaw = normalize_angle(get_or<double>(b, "yaw", 0.0));
    if (!box.valid()) throw ConfigError("obstacle half_extents must be > 0");
    scene.obstacles.push_back(box);
  }
  if (j.contains("robot_start")) scene.robot_start = pose_from_json(j["robot_start"]);
  scene.target_id = get<std::string>(j, "target_id");
  if (j.contains("baseline_goal")) scene.baseline_goal = pose_from_json(j["baseline_goal"]);
  scene.target();  // throws LookupError for a dangling id
  return scene;
}

Json observation_to_json(const ObjectObservation& object) {
  return Json{{"position", point_to_json(object.position)},
              {"width", object.width},
              {"height", object.height}};
}

ObjectObservation observation_from_json(const Json& j) {
  require_object(j, "object observation");
  ObjectObservation obs;
  obs.position = point_from_json(j.at("position"));
  obs.width = get<double>(j, "width");
  obs.height = get<double>(j, "height");
  if (!(obs.width > 0.0) || !(obs.height > 0.0) || obs.position.z() < 0.0) {
    throw ConfigError("object observation needs width > 0, height > 0 and z >= 0");
  }
  return obs;
}

Json params_to_json(const RobotParams& p) {
  return Json{{"footprint_radius", p.footprint_radius},
              {"robot_height", p.robot_height},
              {"reach_min", p.reach_min},
              {"reach_max", p.reach_max},
              {"angle_increment", p.angle_increment},
              {"obstacle_point_threshold", p.obstacle_point_threshold}};
}

namespace {

// Canonical field name for a params key, accepting the usual symbols.
std::string canonical_param(std::string_view key) {
  if (key == "r_r") return "footprint_radius";
  if (key == "h_r") return "robot_height";
  if (key == "d_min") return "reach_min";
  if (key == "d_max") return "reach_max";
  if (key == "theta") return "angle_increment";
  if (key == "k_obs") return "obstacle_point_threshold";
  return std::string(key);
}

void set_param(RobotParams& params, const std::string& key, double value) {
  if (key == "footprint_radius") {
    params.footprint_radius = value;
  } else if (key == "robot_height") {
    params.robot_height = value;
  } else if (key == "reach_min") {
    params.reach_min = value;
  } else if (key == "reach_max") {
    params.reach_max = value;
  } else if (key == "angle_increment") {
    params.angle_increment = value;
  } else if (key == "obstacle_point_threshold") {
    if (value < 0.0 || value != std::floor(value)) {
      throw ConfigError("obstacle_point_threshold must be a non-negative integer");
    }
    params.obstacle_point_threshold = static_cast<std::size_t>(value);
  } else {
    throw ConfigError("unknown robot parameter '" + key + "'");
  }
}

}  // namespace

void params_from_json(const Json& j, RobotParams& params) {
  require_object(j, "robot parameters");
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw ConfigError("robot parameter '" + key + "' must be a number");
    set_param(params, canonical_param(key), value.get<double>());
  }
}

RobotParams parse_params(std::string_view text) {
  RobotParams params;
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    params_from_json(parse_json(text, "robot parameters"), params);
  } else {
    std::size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
      std::size_t eol = text.find('\n', pos);
      if (eol == std::string_view::npos) eol = text.size();
      std::string line(text.substr(pos, eol - pos));
      pos = eol + 1;
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto not_space = line.find_first_not_of(" \t\r");
      if (not_space == std::string::npos) continue;
      const auto eq = line.find_first_of("=:");
      if (eq == std::string::npos) {
        throw ParseError("params line " + std::to_string(line_no) + ": expected key = value");
      }
      auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t\r\""));
        s.erase(s.find_last_not_of(" \t\r\"") + 1);
        return s;
      };
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      double v = 0.0;
      auto [end, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
      if (ec != std::errc() || end != val.data() + val.size()) {
        throw ParseError("params line " + std::to_string(line_no) + ": bad number '" + val + "'");
      }
      set_param(params, canonical_param(key), v);
    }
  }
  params.validate();
  return params;
}

Json candidates_to_json(const CandidateSet& set) {
  Json arr = Json::array();
  for (const PlacementCandidate& c : set.candidates) arr.push_back(candidate_to_json(c));
  return Json{{"candidates", arr}};
}

Json plan_to_json(const PlanResult& plan, const ObjectObservation& object) {
  Json j;
  j["object"] = observation_to_json(object);
  j["candidates"] = candidates_to_json(plan.candidates)["candidates"];
  j["pruned"] = Json::array();
  for (const PlacementProbe& p : plan.probes) {
    if (!p.risk.at_risk()) continue;
    j["pruned"].push_back(Json{{"x", p.position.x()},
                               {"y", p.position.y()},
                               {"radial_index", p.radial_index},
                               {"standoff", p.standoff},
                               {"footprint_blocked", p.risk.footprint_blocked},
                               {"body_points", p.risk.body_points},
                               {"reach_points", p.risk.reach_points}});
  }
  return j;
}

CandidateSet candidates_from_json(const Json& j) {
  const Json& arr = j.is_array() ? j : j.at("candidates");
  if (!arr.is_array()) throw ConfigError("candidates must be an array");
  CandidateSet set;
  for (const Json& c : arr) {
    set.candidates.push_back({pose_from_json(c.at("pose")), get<int>(c, "radial_index"),
                              get<double>(c, "standoff")});
  }
  return set;
}

std::vector<PlacementProbe> pruned_probes_from_json(const Json& j) {
  std::vector<PlacementProbe> probes;
  if (!j.is_object() || !j.contains("pruned")) return probes;
  for (const Json& p : j["pruned"]) {
    PlacementProbe probe;
    probe.position = Point2(get<double>(p, "x"), get<double>(p, "y"));
    probe.radial_index = get_or<int>(p, "radial_index", 0);
    probe.standoff = get_or<double>(p, "standoff", 0.0);
    probe.risk.footprint_blocked = get_or<bool>(p, "footprint_blocked", false);
    probes.push_back(probe);
  }
  return probes;
}

Json config_to_json(const GridExperimentConfig& c) {
  Json j;
  j["table"] = Json{{"center", pose_to_json(c.table.center)},
                    {"length", c.table.length},
                    {"width", c.table.width},
                    {"height", c.table.height}};
  j["cell_size"] = c.cell_size;
  j["columns"] = c.columns;
  j["rows"] = c.rows;
  j["trials_per_cell"] = c.trials_per_cell;
  j["approach"] = to_string(c.approach);
  j["baseline_goal"] = pose_to_json(baseline_goal(c));
  j["baseline_edge_clearance"] = c.baseline_edge_clearance;
  j["robot_start"] = pose_to_json(robot_start(c));
  j["object"] = Json{{"width", c.object_template.width},
                     {"height", c.object_template.height},
                     {"depth", c.object_template.depth}};
  j["robot"] = params_to_json(c.robot);
  j["weights"] = Json{{"nav_weight", c.weights.nav_weight},
                      {"manip_weight", c.weights.manip_weight}};
  j["collision"] = Json{{"treat_unknown_as_occupied", c.policy.treat_unknown_as_occupied},
                        {"exclude_target_points", c.policy.exclude_target_points},
                        {"exclusion_margin", c.policy.exclusion_margin}};
  j["navigation"] = Json{{"always_succeeds", c.nav_model.always_succeeds},
                         {"failure_prob", c.nav_model.failure_prob}};
  j["pickup"] = Json{{"failure_prob", c.pickup_model.failure_prob}};
  j["cloud_density"] = c.cloud_density;
  j["grid_resolution"] = c.grid_resolution;
  j["grid_margin"] = c.grid_margin;
  j["seed"] = c.seed;
  return j;
}

GridExperimentConfig config_from_json(const Json& j, std::vector<Approach>* approaches) {
  require_object(j, "experiment config");
  reject_unknown(j,
                 {"table", "cell_size", "columns", "rows", "trials_per_cell", "approach",
                  "approaches", "baseline_goal", "baseline_edge_clearance", "robot_start",
                  "object", "robot", "weights", "collision", "navigation", "pickup",
                  "cloud_density", "grid_resolution", "grid_margin", "seed"},
                 "experiment config");
  GridExperimentConfig c;
  if (j.contains("table")) {
    const Json& t = j["table"];
    require_object(t, "table");
    if (t.contains("center")) c.table.center = pose_from_json(t["center"]);
    c.table.length = get_or<double>(t, "length", c.table.length);
    c.table.width = get_or<double>(t, "width", c.table.width);
    c.table.height = get_or<double>(t, "height", c.table.height);
  }
  c.cell_size = get_or<double>(j, "cell_size", c.cell_size);
  c.columns = get_or<int>(j, "columns", c.columns);
  c.rows = get_or<int>(j, "rows", c.rows);
  c.trials_per_cell = get_or<int>(j, "trials_per_cell", c.trials_per_cell);

  std::vector<Approach> listed;
  if (j.contains("approaches")) {
    for (const Json& a : j["approaches"]) listed.push_back(parse_approach(a.get<std::string>()));
  } else if (j.contains("approach")) {
    listed.push_back(parse_approach(get<std::string>(j, "approach")));
  } else {
    listed = {Approach::kProposed, Approach::kBaseline};
  }
  if (listed.empty()) throw ConfigError("no approaches listed");
  c.approach = listed.front();
  if (approaches) *approaches = listed;

  if (j.contains("baseline_goal")) c.baseline_goal = pose_from_json(j["baseline_goal"]);
  c.baseline_edge_clearance = get_or<double>(j, "baseline_edge_clearance",
                                             c.baseline_edge_clearance);
  if (j.contains("robot_start")) c.robot_start = pose_from_json(j["robot_start"]);
  if (j.contains("object")) {
    const Json& o = j["object"];
    c.object_template.width = get_or<double>(o, "width", c.object_template.width);
    c.object_template.height = get_or<double>(o, "height", c.object_template.height);
    c.object_template.depth = get_or<double>(o, "depth", c.object_template.depth);
  }
  if (j.contains("robot")) params_from_json(j["robot"], c.robot);
  if (j.contains("weights")) {
    const Json& w = j["weights"];
    c.weights.nav_weight = get_or<double>(w, "nav_weight", c.weights.nav_weight);
    c.weights.manip_weight = get_or<double>(w, "manip_weight", c.weights.manip_weight);
  }
  if (j.contains("collision")) {
    const Json& p = j["collision"];
    c.policy.treat_unknown_as_occupied =
        get_or<bool>(p, "treat_unknown_as_occupied", c.policy.treat_unknown_as_occupied);
    c.policy.exclude_target_points =
        get_or<bool>(p, "exclude_target_points", c.policy.exclude_target_points);
    c.policy.exclusion_margin = get_or<double>(p, "exclusion_margin", c.policy.exclusion_margin);
  }
  if (j.contains("navigation")) {
    const Json& n = j["navigation"];
    c.nav_model.always_succeeds = get_or<bool>(n, "always_succeeds", c.nav_model.always_succeeds);
    c.nav_model.failure_prob = get_or<double>(n, "failure_prob", c.nav_model.failure_prob);
  }
  if (j.contains("pickup")) {
    c.pickup_model.failure_prob = get_or<double>(j["pickup"], "failure_prob",
                                                 c.pickup_model.failure_prob);
  }
  c.cloud_density = get_or<double>(j, "cloud_density", c.cloud_density);
  c.grid_resolution = get_or<double>(j, "grid_resolution", c.grid_resolution);
  c.grid_margin = get_or<double>(j, "grid_margin", c.grid_margin);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  for (double p : {c.nav_model.failure_prob, c.pickup_model.failure_prob}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("failure_prob must lie in [0, 1]");
  }
  c.validate();
  return c;
}

Json attempt_to_json(const Attempt& a) {
  Json j;
  j["candidate"] = candidate_to_json(a.candidate);
  j["pose_before"] = pose_to_json(a.pose_before);
  j["nav_cost"] = a.nav_cost;
  j["manip_cost"] = a.manip_cost;
  j["motion_cost"] = a.motion_cost;
  j["nav_success"] = a.nav_result.success;
  j["resulting_pose"] = pose_to_json(a.nav_result.resulting_pose);
  j["pickup"] = a.pickup_result ? Json(*a.pickup_result) : Json(nullptr);
  return j;
}

Json outcome_to_json(const ExecutionOutcome& outcome) {
  Json j;
  j["status"] = to_string(outcome.status);
  j["final_pose"] = pose_to_json(outcome.final_pose);
  j["attempts"] = Json::array();
  for (const Attempt& a : outcome.attempts) j["attempts"].push_back(attempt_to_json(a));
  return j;
}

Json report_to_json(const ExperimentReport& report) {
  Json j;
  j["approach"] = to_string(report.approach);
  j["trials_per_cell"] = report.config.trials_per_cell;
  j["total_successes"] = report.total_successes();
  j["total_trials"] = report.total_trials();
  j["overall_success_rate"] = report.overall_success_rate();
  j["cells"] = Json::array();
  for (const CellResult& c : report.cells) {
    Json cell{{"x", c.cell.x}, {"y", c.cell.y}, {"successes", c.successes},
              {"failures", c.failures}};
    cell["trials"] = Json::array();
    for (const TrialResult& t : c.trials) {
      cell["trials"].push_back(Json{{"success", t.success},
                                    {"status", to_string(t.execution.status)},
                                    {"seed", t.seed},
                                    {"candidates", t.candidate_count},
                                    {"attempts", t.execution.attempts.size()}});
    }
    j["cells"].push_back(cell);
  }
  j["config"] = config_to_json(report.config);
  return j;
}

std::string attempts_jsonl(const ExperimentReport& report) {
  std::string out;
  for (const CellResult& c : report.cells) {
    for (std::size_t t = 0; t < c.trials.size(); ++t) {
      const ExecutionOutcome& e = c.trials[t].execution;
      for (std::size_t k = 0; k < e.attempts.size(); ++k) {
        Json line{{"approach", to_string(report.approach)},
                  {"cell", {c.cell.x, c.cell.y}},
                  {"trial", t},
                  {"attempt", k}};
        const Json fields = attempt_to_json(e.attempts[k]);
        for (const auto& [key, value] : fields.items()) line[key] = value;
        out += line.dump() + "\n";
      }
    }
  }
  return out;
}

}  // namespace placeplan
