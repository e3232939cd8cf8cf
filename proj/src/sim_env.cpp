#include "evoforge/sim_env.hpp"

#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace evoforge {

using nlohmann::json;

namespace {

ActionType action_type_from_name(const std::string& name, const std::string& where) {
    // Reuse the parser's alias table by parsing a minimal action name.
    static const std::map<std::string, ActionType> table = {
        {"click", ActionType::click},       {"left_single", ActionType::left_single},
        {"right_single", ActionType::right_single}, {"hover", ActionType::hover},
        {"left_double", ActionType::left_double},   {"double_click", ActionType::double_click},
        {"move_mouse", ActionType::move_mouse},
    };
    auto it = table.find(name);
    if (it == table.end())
        throw SchemaError(where + ": unsupported trigger action '" + name + "'");
    return it->second;
}

}  // namespace

EnvDefinition EnvDefinition::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EnvLoadError("cannot open environment file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str(), path);
}

EnvDefinition EnvDefinition::from_json_text(const std::string& text, const std::string& origin) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw SchemaError(origin + ": not valid JSON");
    EnvDefinition env;
    try {
        env.name_ = doc.at("name").get<std::string>();
        env.geometry_.width = doc.at("screen").at("width").get<int>();
        env.geometry_.height = doc.at("screen").at("height").get<int>();
        env.start_screen_ = doc.at("start_screen").get<std::string>();
        if (doc.contains("variables"))
            for (auto& [k, v] : doc["variables"].items())
                env.initial_variables_[k] = v.get<std::string>();
        for (const auto& s : doc.at("screens")) {
            ScreenDef sd;
            sd.id = s.at("id").get<std::string>();
            for (const auto& w : s.value("widgets", json::array())) {
                WidgetDef wd;
                wd.id = w.at("id").get<std::string>();
                wd.label = w.at("label").get<std::string>();
                auto b = w.at("box");
                wd.box = Box{b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(),
                             b.at(3).get<int>()};
                wd.kind = w.value("kind", "button");
                sd.widgets.push_back(std::move(wd));
            }
            env.screens_.push_back(std::move(sd));
        }
        for (const auto& t : doc.value("transitions", json::array())) {
            TransitionDef td;
            td.screen = t.at("screen").get<std::string>();
            if (t.contains("widget")) {
                td.widget = t["widget"].get<std::string>();
                td.action = action_type_from_name(t.value("action", "click"),
                                                  origin + " transition on " + td.screen);
            } else if (t.contains("text")) {
                td.text = t["text"].get<std::string>();
            } else {
                throw SchemaError(origin + ": transition needs a widget or text trigger");
            }
            if (t.contains("effects"))
                for (auto& [k, v] : t["effects"].items()) td.effects[k] = v.get<std::string>();
            if (t.contains("goto")) td.goto_screen = t["goto"].get<std::string>();
            env.transitions_.push_back(std::move(td));
        }
        for (const auto& t : doc.at("tasks")) {
            TaskDef td;
            td.id = t.at("id").get<std::string>();
            td.instruction = t.at("instruction").get<std::string>();
            const auto& g = t.at("goal");
            if (g.contains("screen")) td.goal.screen = g["screen"].get<std::string>();
            if (g.contains("vars"))
                for (auto& [k, v] : g["vars"].items()) td.goal.vars[k] = v.get<std::string>();
            td.max_steps = t.value("max_steps", 20);
            env.tasks_.push_back(std::move(td));
        }
    } catch (const json::exception& e) {
        throw SchemaError(origin + ": " + e.what());
    }
    env.validate();
    env.precompute_distances();
    return env;
}

void EnvDefinition::validate() {
    std::set<std::string> screen_ids;
    for (const auto& s : screens_) {
        if (!screen_ids.insert(s.id).second) throw SchemaError("duplicate screen id " + s.id);
        std::set<std::string> widget_ids;
        for (const auto& w : s.widgets)
            if (!widget_ids.insert(w.id).second)
                throw SchemaError("duplicate widget id " + w.id + " on screen " + s.id);
    }
    auto require_screen = [&](const std::string& id, const std::string& where) {
        if (!screen_ids.count(id))
            throw DanglingReference(where + " references missing screen '" + id + "'");
    };
    require_screen(start_screen_, "start_screen");
    for (const auto& t : transitions_) {
        require_screen(t.screen, "transition");
        if (t.goto_screen) require_screen(*t.goto_screen, "transition goto");
        if (t.widget) {
            const ScreenDef& s = screens_.at(static_cast<size_t>(screen_index(t.screen)));
            bool found = false;
            for (const auto& w : s.widgets) found = found || w.id == *t.widget;
            if (!found)
                throw DanglingReference("transition on screen '" + t.screen +
                                        "' references missing widget '" + *t.widget + "'");
        }
        for (const auto& [k, v] : t.effects)
            if (!initial_variables_.count(k))
                throw DanglingReference("transition effect references undeclared variable '" +
                                        k + "'");
    }
    std::set<std::string> task_ids;
    for (const auto& t : tasks_) {
        if (!task_ids.insert(t.id).second) throw SchemaError("duplicate task id " + t.id);
        if (t.goal.screen) require_screen(*t.goal.screen, "task " + t.id + " goal");
        for (const auto& [k, v] : t.goal.vars)
            if (!initial_variables_.count(k))
                throw DanglingReference("task " + t.id + " goal references undeclared variable '" +
                                        k + "'");
        if (t.max_steps < 1) throw SchemaError("task " + t.id + " max_steps must be >= 1");
        if (t.goal.conditions() == 0) throw SchemaError("task " + t.id + " has an empty goal");
    }
}

int EnvDefinition::screen_index(const std::string& id) const {
    for (size_t i = 0; i < screens_.size(); ++i)
        if (screens_[i].id == id) return static_cast<int>(i);
    throw DanglingReference("unknown screen '" + id + "'");
}

const TaskDef& EnvDefinition::task(const std::string& task_id) const {
    for (const auto& t : tasks_)
        if (t.id == task_id) return t;
    throw DanglingReference("unknown task '" + task_id + "'");
}

EnvState EnvDefinition::reset(const TaskDef& task) const {
    EnvState s;
    s.screen_index = screen_index(start_screen_);
    s.variables = initial_variables_;
    s.step_count = 0;
    s.max_steps = task.max_steps;
    return s;
}

namespace {

bool point_in_box(Point p, const Box& b) {
    return p.x >= b.x1 && p.x <= b.x2 && p.y >= b.y1 && p.y <= b.y2;
}

}  // namespace

EnvState EnvDefinition::step(const EnvState& state, const Action& a) const {
    if (state.step_count >= state.max_steps)
        throw EpisodeExhausted("episode already at max_steps");
    EnvState next = state;
    next.step_count += 1;
    const ScreenDef& screen = screens_.at(static_cast<size_t>(state.screen_index));
    for (const auto& t : transitions_) {
        if (t.screen != screen.id) continue;
        bool matched = false;
        if (t.widget && reward_family(a.kind) == RewardFamily::point && a.kind == t.action) {
            for (const auto& w : screen.widgets)
                if (w.id == *t.widget && point_in_box(*a.point, w.box)) matched = true;
        } else if (t.text && a.text && *a.text == *t.text) {
            matched = true;
        }
        if (!matched) continue;
        for (const auto& [k, v] : t.effects) next.variables[k] = v;
        if (t.goto_screen) next.screen_index = screen_index(*t.goto_screen);
        return next;
    }
    return next;  // no matching transition: no-op step
}

StateObservation EnvDefinition::observe(const EnvState& state) const {
    const ScreenDef& screen = screens_.at(static_cast<size_t>(state.screen_index));
    StateObservation obs;
    obs.screen_id = screen.id;
    std::string caption = "screen '" + screen.id + "'.";
    for (const auto& w : screen.widgets) {
        obs.widgets.push_back({w.id, w.label, w.box});
        caption += " " + w.kind + " '" + w.label + "' at (" + std::to_string(w.box.x1) + "," +
                   std::to_string(w.box.y1) + "," + std::to_string(w.box.x2) + "," +
                   std::to_string(w.box.y2) + ").";
    }
    for (const auto& [k, v] : state.variables) caption += " " + k + "=" + v + ".";
    obs.caption = caption;
    return obs;
}

bool EnvDefinition::goal_met(const GoalDef& goal, const EnvState& state) const {
    if (goal.screen && screens_.at(static_cast<size_t>(state.screen_index)).id != *goal.screen)
        return false;
    for (const auto& [k, v] : goal.vars) {
        auto it = state.variables.find(k);
        if (it == state.variables.end() || it->second != v) return false;
    }
    return true;
}

std::string EnvDefinition::state_key(const EnvState& s) const {
    std::string key = screens_.at(static_cast<size_t>(s.screen_index)).id;
    for (const auto& [k, v] : s.variables) key += "\x1f" + k + "=" + v;
    return key;
}

void EnvDefinition::precompute_distances() {
    // Forward-reachable state graph; step counters are not part of a state.
    struct Node {
        EnvState state;
    };
    std::vector<EnvState> nodes;
    std::unordered_map<std::string, int> index;
    std::vector<std::vector<int>> out_edges;

    EnvState start;
    start.screen_index = screen_index(start_screen_);
    start.variables = initial_variables_;
    start.max_steps = 1 << 30;

    auto intern = [&](const EnvState& s) {
        std::string key = state_key(s);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(nodes.size());
        index.emplace(key, id);
        nodes.push_back(s);
        out_edges.emplace_back();
        return id;
    };

    std::deque<int> frontier{intern(start)};
    while (!frontier.empty()) {
        int id = frontier.front();
        frontier.pop_front();
        EnvState cur = nodes[static_cast<size_t>(id)];
        const std::string cur_screen = screens_.at(static_cast<size_t>(cur.screen_index)).id;
        for (const auto& t : transitions_) {
            if (t.screen != cur_screen) continue;
            EnvState next = cur;
            for (const auto& [k, v] : t.effects) next.variables[k] = v;
            if (t.goto_screen) next.screen_index = screen_index(*t.goto_screen);
            std::string key = state_key(next);
            bool known = index.count(key) > 0;
            int nid = intern(next);
            out_edges[static_cast<size_t>(id)].push_back(nid);
            if (!known) frontier.push_back(nid);
        }
    }

    // Reverse BFS from goal states, per task.
    std::vector<std::vector<int>> in_edges(nodes.size());
    for (size_t u = 0; u < out_edges.size(); ++u)
        for (int v : out_edges[u]) in_edges[static_cast<size_t>(v)].push_back(static_cast<int>(u));

    distances_.clear();
    for (const auto& task : tasks_) {
        std::vector<int> dist(nodes.size(), -1);
        std::deque<int> q;
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (goal_met(task.goal, nodes[i])) {
                dist[i] = 0;
                q.push_back(static_cast<int>(i));
            }
        }
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (int u : in_edges[static_cast<size_t>(v)]) {
                if (dist[static_cast<size_t>(u)] < 0) {
                    dist[static_cast<size_t>(u)] = dist[static_cast<size_t>(v)] + 1;
                    q.push_back(u);
                }
            }
        }
        std::unordered_map<std::string, int> by_key;
        for (size_t i = 0; i < nodes.size(); ++i)
            by_key.emplace(state_key(nodes[i]), dist[i]);
        if (dist[0] < 0)
            warnings_.push_back("task '" + task.id + "' goal is unreachable from the start state");
        distances_.push_back(std::move(by_key));
    }
}

int EnvDefinition::distance_to_goal(const TaskDef& task, const EnvState& state) const {
    size_t ti = 0;
    for (; ti < tasks_.size(); ++ti)
        if (tasks_[ti].id == task.id) break;
    if (ti == tasks_.size()) throw DanglingReference("unknown task '" + task.id + "'");
    auto it = distances_[ti].find(state_key(state));
    if (it == distances_[ti].end()) return -1;  // state outside the reachable graph
    return it->second;
}

Judgment EnvDefinition::oracle_judge(const Trajectory& traj, const TaskDef& task) const {
    if (distance_to_goal(task, reset(task)) < 0)
        throw GoalUnreachable("task '" + task.id + "' has no reachable goal state");

    // Replay the action sequence from the start state; the environment is
    // deterministic so this reconstructs the exact visited states.
    std::vector<EnvState> states;
    EnvState s = reset(task);
    states.push_back(s);
    for (const auto& step_rec : traj.steps) {
        s = step(s, step_rec.action);
        states.push_back(s);
    }

    Judgment j;
    j.correctness = goal_met(task.goal, states.back()) &&
                    static_cast<int>(traj.steps.size()) <= task.max_steps;

    std::optional<int> first_non_progress;
    for (size_t t = 0; t + 1 < states.size(); ++t) {
        int d0 = distance_to_goal(task, states[t]);
        int d1 = distance_to_goal(task, states[t + 1]);
        bool progress = d0 > 0 && d1 >= 0 && d1 == d0 - 1;
        if (!progress && !first_non_progress) first_non_progress = static_cast<int>(t);
    }
    if (j.correctness) {
        j.redundant_from = first_non_progress;
    } else {
        // A failed trajectory with only progress steps ran out of budget;
        // the last step is then the one that sealed the failure.
        j.first_error_step = first_non_progress
                                 ? first_non_progress
                                 : std::optional<int>(static_cast<int>(traj.steps.size()) - 1);
    }
    for (size_t t = 0; t + 1 < states.size(); ++t)
        j.step_captions.push_back(diff_description(observe(states[t]), observe(states[t + 1])));
    j.rationale = j.correctness ? "goal reached within budget" : "goal not met at final state";
    j.confidence = j.correctness ? 1.0 : 0.0;
    return j;
}

Judgment OracleJudgeBackend::judge(const Trajectory& traj) {
    return env_->oracle_judge(traj, env_->task(traj.task_id));
}

ChangeDescription OracleJudgeBackend::describe_change(const StateObservation& before,
                                                      const StateObservation& after) {
    return {before.screen_id, after.screen_id, diff_description(before, after)};
}

}  // namespace evoforge
