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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "oracles.hpp"
#include "placeplan/executor.hpp"
#include "placeplan/harness.hpp"
#include "placeplan/planner.hpp"
#include "placeplan/random.hpp"
#include "scripted_backend.hpp"

namespace placeplan {
namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string cell_name(const GridCell& c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

// The grid experiment for both approaches is shared by criteria 1 and 2.
struct Experiments {
  ExperimentReport proposed;
  ExperimentReport baseline;
  double seconds = 0.0;
};

const Experiments& experiments() {
  static const Experiments e = [] {
    Experiments out;
    const auto start = std::chrono::steady_clock::now();
    GridExperimentConfig config;
    config.approach = Approach::kProposed;
    out.proposed = run_experiment(config);
    config.approach = Approach::kBaseline;
    out.baseline = run_experiment(config);
    out.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }();
  return e;
}

Verdict baseline_pattern() {
  Verdict v;
  const Experiments& e = experiments();
  int zero_cells = 0;
  for (const CellResult& c : e.baseline.cells) {
    const bool far_row = c.cell.y == 3;
    if ((c.successes == 0) != far_row) {
      v.fail("baseline cell " + cell_name(c.cell) + " has " + std::to_string(c.successes) +
             " successes");
    }
    zero_cells += c.successes == 0;
  }
  for (const CellResult& c : e.proposed.cells) {
    if (c.successes == 0) v.fail("proposed cell " + cell_name(c.cell) + " never succeeded");
    for (const TrialResult& t : c.trials) {
      if (t.candidate_count == 0) v.fail("proposed cell " + cell_name(c.cell) + " had no candidates");
    }
  }
  if (!(e.seconds < 30.0)) v.fail("runtime " + std::to_string(e.seconds) + " s");
  if (v.pass) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "baseline zero cells = %d (row 3 only), proposed %d/%d, runtime %.2f s",
                  zero_cells, e.proposed.total_successes(), e.proposed.total_trials(), e.seconds);
    v.detail = buf;
  }
  return v;
}

Verdict dominance() {
  Verdict v;
  const Experiments& e = experiments();
  for (const CellResult& b : e.baseline.cells) {
    const CellResult& p = e.proposed.at(b.cell);
    if (p.successes < b.successes) {
      v.fail("cell " + cell_name(b.cell) + ": proposed " + std::to_string(p.successes) +
             " < baseline " + std::to_string(b.successes));
    }
  }
  if (v.pass) {
    v.detail = "12/12 cells, proposed " + std::to_string(e.proposed.total_successes()) +
               " vs baseline " + std::to_string(e.baseline.total_successes());
  }
  return v;
}

Verdict chord_formula() {
  Verdict v;
  Rng rng(3001);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    RobotParams p;
    p.reach_min = rng.uniform(0.05, 3.0);
    p.reach_max = p.reach_min + 1.0;
    p.footprint_radius = rng.uniform(1e-3, 1.999) * p.reach_min;
    const double theta = default_angle_increment(p);
    const double err = std::abs(2 * p.reach_min * std::sin(theta / 2) - p.footprint_radius);
    worst = std::max(worst, err);
    if (err > 1e-12) v.fail("pair " + std::to_string(k) + " off by " + std::to_string(err));
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "1000 pairs, max error %.3g", worst);
  if (v.pass) v.detail = buf;
  return v;
}

Verdict candidate_invariants() {
  Verdict v;
  Rng rng(4001);
  std::size_t candidates = 0;
  int violations = 0;
  for (int k = 0; k < 100; ++k) {
    const SceneDescription scene = testing::random_scene(rng, 1 + static_cast<int>(rng.index(5)));
    SynthesisOptions synthesis;
    synthesis.density = rng.uniform(500, 2500);
    synthesis.seed = rng.index(1u << 30);
    const SceneSnapshot snap = make_snapshot(scene, synthesis);
    const RobotParams params;
    const CollisionPolicy policy;
    for (const PlacementCandidate& c : plan_placements(snap, params, policy).candidates) {
      ++candidates;
      const std::string why = testing::oracle_candidate_violation(snap, params, policy, c);
      if (!why.empty()) {
        ++violations;
        v.fail("scene " + std::to_string(k) + " ray " + std::to_string(c.radial_index) + ": " + why);
      }
    }
  }
  if (candidates == 0) v.fail("no candidates were produced at all");
  if (v.pass) {
    v.detail = "100 scenes, " + std::to_string(candidates) + " candidates, " +
               std::to_string(violations) + " violations";
  }
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  Rng rng(5001);
  for (int k = 0; k < 10000; ++k) {
    PointCloud cloud;
    const int n = static_cast<int>(rng.index(200));
    for (int q = 0; q < n; ++q) {
      cloud.points.emplace_back(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-1, 3));
    }
    const OrientedBox3 box = testing::random_box(rng);
    std::optional<OrientedBox3> excl;
    if (rng.bernoulli(0.5)) excl = testing::random_box(rng);
    if (count_points_in_box(cloud, box, excl) != testing::oracle_count(cloud, box, excl)) {
      v.fail("box case " + std::to_string(k) + " disagrees");
    }
  }
  int blocked = 0;
  for (int k = 0; k < 1000; ++k) {
    const OccupancyGrid g = testing::random_grid(rng);
    const Point2 center = testing::random_point_near(g, rng);
    const double r = rng.uniform(0.0, 0.6);
    const bool unknown_blocks = rng.bernoulli(0.5);
    const bool got = footprint_occupied(g, center, r, unknown_blocks);
    if (got != testing::oracle_footprint_occupied(g, center, r, unknown_blocks)) {
      v.fail("circle case " + std::to_string(k) + " disagrees");
    }
    blocked += got;
  }
  if (v.pass) {
    v.detail = "10000 box cases, 1000 circle cases (" + std::to_string(blocked) + " blocked)";
  }
  return v;
}

Verdict executor_contract() {
  Verdict v;
  Rng rng(6001);
  for (int k = 0; k < 2000; ++k) {
    const std::string why = testing::execution_contract_violation(rng);
    if (!why.empty()) v.fail("script " + std::to_string(k) + ": " + why);
  }
  for (int k = 0; k < 2000; ++k) {
    if (!testing::argmin_scale_invariant(rng)) v.fail("weight scaling changed argmin");
  }
  // With navigation that always succeeds: one navigation, one pickup.
  for (int k = 0; k < 200; ++k) {
    CandidateSet set = testing::random_candidates(rng, 1 + rng.index(12));
    testing::ScriptedBackend backend(Pose2D(rng.uniform(-3, 3), rng.uniform(-3, 3), 0), {});
    execute_pickup(Point3(0, 0, 0.8), set, backend, {});
    if (backend.goals.size() != 1 || backend.pickups.size() != 1) {
      v.fail("always-succeeding navigation ran more than once");
    }
  }
  if (v.pass) v.detail = "2000 scripted executions, 2000 scaling checks, 200 single-shot runs";
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict benchmark_determinism() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "placeplan_acceptance_benchmark";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "config.json")
      << R"({"seed": 7, "navigation": {"always_succeeds": false, "failure_prob": 0.2},)"
      << R"( "pickup": {"failure_prob": 0.1}})";
  std::ostringstream out, err;
  for (const char* run : {"a", "b"}) {
    const int code = cli::run({"benchmark", "--config", (dir / "config.json").string(), "--out",
                               (dir / run).string()},
                              out, err);
    if (code != cli::kOk) v.fail(std::string("benchmark exited ") + std::to_string(code) + ": " + err.str());
  }
  for (const char* f : {"report.json", "heatmap.ppm"}) {
    const std::string a = slurp(dir / "a" / f);
    if (a.empty()) v.fail(std::string(f) + " is empty");
    if (a != slurp(dir / "b" / f)) v.fail(std::string(f) + " differs between runs");
  }
  if (v.pass) v.detail = "report.json and heatmap.ppm byte-identical (stochastic models on)";
  fs::remove_all(dir);
  return v;
}

Verdict monotonicity() {
  Verdict v;
  Rng rng(8001);
  int checked_rays = 0;
  for (int k = 0; k < 50; ++k) {
    const SceneDescription scene = testing::random_scene(rng, static_cast<int>(rng.index(3)));
    SynthesisOptions synthesis;
    synthesis.density = 1000;
    synthesis.seed = rng.index(1u << 30);
    SceneSnapshot snap = make_snapshot(scene, synthesis);
    const RobotParams params;
    const CandidateSet before = plan_placements(snap, params);
    const int added = 1 + static_cast<int>(rng.index(3));
    for (int b = 0; b < added; ++b) {
      OrientedBox3 box = testing::random_box(rng);
      box.center.head<2>() =
          snap.object.position.head<2>() + Point2(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2));
      box.center.z() = rng.bernoulli(0.5) ? box.half_extents.z()
                                          : snap.object.position.z() + rng.uniform(-0.2, 0.2);
      testing::add_obstacle(snap, box, rng, 50 + static_cast<int>(rng.index(300)));
    }
    const CandidateSet after = plan_placements(snap, params);
    if (after.size() > before.size()) {
      v.fail("scene " + std::to_string(k) + ": candidates grew from " +
             std::to_string(before.size()) + " to " + std::to_string(after.size()));
    }
    std::map<int, double> old_standoff;
    for (const PlacementCandidate& c : before.candidates) old_standoff[c.radial_index] = c.standoff;
    for (const PlacementCandidate& c : after.candidates) {
      const auto it = old_standoff.find(c.radial_index);
      if (it == old_standoff.end()) {
        v.fail("scene " + std::to_string(k) + ": ray " + std::to_string(c.radial_index) +
               " appeared");
      } else if (c.standoff < it->second) {
        v.fail("scene " + std::to_string(k) + ": ray " + std::to_string(c.radial_index) +
               " standoff decreased");
      }
      ++checked_rays;
    }
  }
  if (v.pass) v.detail = "50 scenes, " + std::to_string(checked_rays) + " surviving candidates";
  return v;
}

}  // namespace
}  // namespace placeplan

int main() {
  using namespace placeplan;
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"baseline infeasibility pattern", baseline_pattern},
      {"dominance direction", dominance},
      {"chord-angle formula", chord_formula},
      {"candidate invariants", candidate_invariants},
      {"oracle equivalence", oracle_equivalence},
      {"executor contract", executor_contract},
      {"benchmark determinism", benchmark_determinism},
      {"monotonicity", monotonicity},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", index++, name, v.detail.c_str());
    failed += !v.pass;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
