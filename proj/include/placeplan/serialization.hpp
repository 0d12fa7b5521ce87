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
/// \brief JSON forms of scenes, parameters, candidate sets, experiment
/// configs, reports and attempt logs. Readers throw ParseError on malformed
/// documents and ConfigError on missing or invalid fields.
#ifndef PLACEPLAN_SERIALIZATION_HPP_
#define PLACEPLAN_SERIALIZATION_HPP_

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "placeplan/executor.hpp"
#include "placeplan/harness.hpp"
#include "placeplan/planner.hpp"
#include "placeplan/scene.hpp"

namespace placeplan {

using Json = nlohmann::ordered_json;

Json parse_json(std::string_view text, std::string_view what);

Json pose_to_json(const Pose2D& pose);
Pose2D pose_from_json(const Json& j);
Json point_to_json(const Point3& p);
Point3 point_from_json(const Json& j);

Json scene_to_json(const SceneDescription& scene);
SceneDescription scene_from_json(const Json& j);

Json observation_to_json(const ObjectObservation& object);
ObjectObservation observation_from_json(const Json& j);

Json params_to_json(const RobotParams& params);
/// Updates `params` from a JSON object using RobotParams field names.
void params_from_json(const Json& j, RobotParams& params);
/// Either a JSON object or "key = value" lines (`#` comments allowed).
RobotParams parse_params(std::string_view text);

Json candidates_to_json(const CandidateSet& set);
Json plan_to_json(const PlanResult& plan, const ObjectObservation& object);
CandidateSet candidates_from_json(const Json& j);
/// Pruned probe positions, when the document carries them.
std::vector<PlacementProbe> pruned_probes_from_json(const Json& j);

Json config_to_json(const GridExperimentConfig& config);
/// Reads the config plus the list of approaches to run (default: both).
GridExperimentConfig config_from_json(const Json& j, std::vector<Approach>* approaches = nullptr);

Json attempt_to_json(const Attempt& attempt);
Json outcome_to_json(const ExecutionOutcome& outcome);
Json report_to_json(const ExperimentReport& report);

/// One JSON object per line for every attempt of every trial.
std::string attempts_jsonl(const ExperimentReport& report);

}  // namespace placeplan

#endif  // PLACEPLAN_SERIALIZATION_HPP_
