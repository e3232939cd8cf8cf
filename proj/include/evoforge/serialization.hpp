#pragma once

#include <nlohmann/json.hpp>

#include "evoforge/curriculum.hpp"
#include "evoforge/judgment.hpp"

namespace evoforge {

nlohmann::json to_json(const StateObservation& obs);
StateObservation observation_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Judgment& j);
Judgment judgment_from_json(const nlohmann::json& j);

nlohmann::json to_json(const StepLabels& l);
StepLabels labels_from_json(const nlohmann::json& j);

// One trajectory JSONL record: {episode_id, task_id, phase, steps:
// [{observation, action_text}], final_observation, judgment, labels}.
nlohmann::json trajectory_record(const Trajectory& traj, const Judgment* judgment,
                                 const StepLabels* labels);
Trajectory trajectory_from_record(const nlohmann::json& j);

}  // namespace evoforge
