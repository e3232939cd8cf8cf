#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evoforge/action.hpp"
#include "evoforge/errors.hpp"

namespace evoforge {

struct WidgetInfo {
    std::string id;
    std::string label;
    Box box;
    bool operator==(const WidgetInfo&) const = default;
};

// Structured textual observation standing in for a screenshot.
struct StateObservation {
    std::string screen_id;
    std::string caption;
    std::vector<WidgetInfo> widgets;
    bool operator==(const StateObservation&) const = default;
};

struct TrajectoryStep {
    StateObservation state;
    Action action;
};

struct Trajectory {
    std::string task;      // instruction text
    std::string task_id;   // id within the environment's task catalog
    std::vector<TrajectoryStep> steps;
    StateObservation final_state;
    std::string episode_id;
    int phase_index = 0;
};

// Structured verdict over a whole trajectory.
struct Judgment {
    bool correctness = false;
    std::optional<int> redundant_from;
    std::optional<int> first_error_step;
    std::vector<std::string> step_captions;
    std::string rationale;
    // Confidence in the correctness verdict, used by the evaluation
    // harness as a ranking score. Oracle judges emit exactly 1.0 / 0.0.
    double confidence = 1.0;
};

struct StepLabels {
    std::set<int> positive;
    std::set<int> negative;
    std::set<int> ignored;
};

struct ChangeDescription {
    std::string before_id;
    std::string after_id;
    std::string description;
};

class JudgeBackend {
  public:
    virtual ~JudgeBackend() = default;
    virtual Judgment judge(const Trajectory& traj) = 0;
    virtual ChangeDescription describe_change(const StateObservation& before,
                                              const StateObservation& after) = 0;
};

Judgment judge(const Trajectory& traj, JudgeBackend& backend);

// Extracts the LAST well-formed JSON object from free-form model text and
// maps keys Correctness / Redundant / FirstErrorStep / StepCaptions.
Judgment parse_judgment(const std::string& model_text);

// Throws InconsistentJudgment if the verdict violates its invariants
// against a trajectory of `num_steps` steps.
void check_judgment(const Judgment& j, int num_steps);

StepLabels label_steps(const Trajectory& traj, const Judgment& j);

ChangeDescription describe_change(const StateObservation& before,
                                  const StateObservation& after,
                                  JudgeBackend& backend);

// Deterministic widget-diff sentence; used by the oracle backend.
std::string diff_description(const StateObservation& before, const StateObservation& after);

// Text of the last balanced {...} span that parses as a JSON object.
std::optional<std::string> extract_last_json_text(const std::string& text);

}  // namespace evoforge
