#include "evoforge/serialization.hpp"

namespace evoforge {

using nlohmann::json;

json to_json(const StateObservation& obs) {
    json widgets = json::array();
    for (const auto& w : obs.widgets)
        widgets.push_back({{"id", w.id},
                           {"label", w.label},
                           {"box", {w.box.x1, w.box.y1, w.box.x2, w.box.y2}}});
    return {{"screen_id", obs.screen_id}, {"caption", obs.caption}, {"widgets", widgets}};
}

StateObservation observation_from_json(const json& j) {
    StateObservation obs;
    obs.screen_id = j.at("screen_id").get<std::string>();
    obs.caption = j.at("caption").get<std::string>();
    for (const auto& w : j.value("widgets", json::array())) {
        const auto& b = w.at("box");
        obs.widgets.push_back({w.at("id").get<std::string>(), w.at("label").get<std::string>(),
                               Box{b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(),
                                   b.at(3).get<int>()}});
    }
    return obs;
}

json to_json(const Judgment& j) {
    json out;
    out["Correctness"] = j.correctness;
    out["Redundant"] = j.redundant_from ? json(*j.redundant_from) : json(false);
    if (j.first_error_step) out["FirstErrorStep"] = *j.first_error_step;
    out["StepCaptions"] = j.step_captions;
    out["Rationale"] = j.rationale;
    out["Confidence"] = j.confidence;
    return out;
}

Judgment judgment_from_json(const json& j) {
    Judgment out;
    out.correctness = j.at("Correctness").get<bool>();
    if (j.contains("Redundant") && j["Redundant"].is_number_integer())
        out.redundant_from = j["Redundant"].get<int>();
    if (j.contains("FirstErrorStep") && j["FirstErrorStep"].is_number_integer())
        out.first_error_step = j["FirstErrorStep"].get<int>();
    for (const auto& c : j.value("StepCaptions", json::array()))
        out.step_captions.push_back(c.get<std::string>());
    out.rationale = j.value("Rationale", std::string{});
    out.confidence = j.value("Confidence", 1.0);
    return out;
}

json to_json(const StepLabels& l) {
    return {{"positive", l.positive}, {"negative", l.negative}, {"ignored", l.ignored}};
}

StepLabels labels_from_json(const json& j) {
    StepLabels l;
    for (int i : j.value("positive", std::vector<int>{})) l.positive.insert(i);
    for (int i : j.value("negative", std::vector<int>{})) l.negative.insert(i);
    for (int i : j.value("ignored", std::vector<int>{})) l.ignored.insert(i);
    return l;
}

json trajectory_record(const Trajectory& traj, const Judgment* judgment,
                       const StepLabels* labels) {
    json steps = json::array();
    for (const auto& s : traj.steps)
        steps.push_back({{"observation", to_json(s.state)},
                         {"action_text", serialize_action(s.action)}});
    json out{{"episode_id", traj.episode_id},
             {"task_id", traj.task_id},
             {"task", traj.task},
             {"phase", traj.phase_index},
             {"steps", steps},
             {"final_observation", to_json(traj.final_state)}};
    if (judgment) out["judgment"] = to_json(*judgment);
    if (labels) out["labels"] = to_json(*labels);
    return out;
}

Trajectory trajectory_from_record(const json& j) {
    Trajectory traj;
    traj.episode_id = j.at("episode_id").get<std::string>();
    traj.task_id = j.at("task_id").get<std::string>();
    traj.task = j.value("task", std::string{});
    traj.phase_index = j.value("phase", 0);
    for (const auto& s : j.at("steps"))
        traj.steps.push_back({observation_from_json(s.at("observation")),
                              parse_action(s.at("action_text").get<std::string>())});
    traj.final_state = observation_from_json(j.at("final_observation"));
    return traj;
}

}  // namespace evoforge
