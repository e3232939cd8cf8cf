#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "evoforge/action.hpp"
#include "evoforge/judgment.hpp"
#include "evoforge/reward.hpp"

namespace evoforge {

struct WidgetDef {
    std::string id;
    std::string label;
    Box box;
    std::string kind;  // "button", "text_field", ...
};

struct ScreenDef {
    std::string id;
    std::vector<WidgetDef> widgets;
};

struct TransitionDef {
    std::string screen;
    std::optional<std::string> widget;       // point-family trigger
    ActionType action = ActionType::click;   // kind required for widget triggers
    std::optional<std::string> text;         // text-family trigger (exact match)
    std::map<std::string, std::string> effects;
    std::optional<std::string> goto_screen;
};

struct GoalDef {
    std::optional<std::string> screen;
    std::map<std::string, std::string> vars;
    int conditions() const { return static_cast<int>(vars.size()) + (screen ? 1 : 0); }
};

struct TaskDef {
    std::string id;
    std::string instruction;
    GoalDef goal;
    int max_steps = 20;
};

struct EnvState {
    int screen_index = 0;
    std::map<std::string, std::string> variables;
    int step_count = 0;
    int max_steps = 20;
};

// A deterministic finite-state "software": screens, widgets, variables,
// transitions, and goal-checked tasks.
class EnvDefinition {
  public:
    static EnvDefinition load(const std::string& path);
    static EnvDefinition from_json_text(const std::string& text, const std::string& origin);

    const std::string& name() const { return name_; }
    ScreenGeometry geometry() const { return geometry_; }
    const std::vector<ScreenDef>& screens() const { return screens_; }
    const std::vector<TransitionDef>& transitions() const { return transitions_; }
    const std::vector<TaskDef>& tasks() const { return tasks_; }
    const std::vector<std::string>& load_warnings() const { return warnings_; }

    const TaskDef& task(const std::string& task_id) const;
    const ScreenDef& screen(int index) const { return screens_.at(index); }
    int screen_index(const std::string& id) const;

    EnvState reset(const TaskDef& task) const;
    EnvState step(const EnvState& state, const Action& a) const;
    StateObservation observe(const EnvState& state) const;

    bool goal_met(const GoalDef& goal, const EnvState& state) const;

    // BFS distance from `state` to the nearest goal state of `task`;
    // -1 when the goal is unreachable from there.
    int distance_to_goal(const TaskDef& task, const EnvState& state) const;

    Judgment oracle_judge(const Trajectory& traj, const TaskDef& task) const;

  private:
    void validate();
    void precompute_distances();
    std::string state_key(const EnvState& s) const;

    std::string name_;
    ScreenGeometry geometry_{800, 600};
    std::string start_screen_;
    std::map<std::string, std::string> initial_variables_;
    std::vector<ScreenDef> screens_;
    std::vector<TransitionDef> transitions_;
    std::vector<TaskDef> tasks_;
    std::vector<std::string> warnings_;
    // Per-task map from encoded state to distance-to-goal.
    std::vector<std::unordered_map<std::string, int>> distances_;
};

// Oracle World State Model over a simulated environment: exact BFS-based
// judgments and deterministic widget-diff change descriptions.
class OracleJudgeBackend : public JudgeBackend {
  public:
    explicit OracleJudgeBackend(std::shared_ptr<const EnvDefinition> env)
        : env_(std::move(env)) {}

    Judgment judge(const Trajectory& traj) override;
    ChangeDescription describe_change(const StateObservation& before,
                                      const StateObservation& after) override;

  private:
    std::shared_ptr<const EnvDefinition> env_;
};

}  // namespace evoforge
