#include "evoforge/remote.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace evoforge {

using nlohmann::json;

ChatClient::ChatClient(Options opts) : opts_(std::move(opts)) {
    std::string url = opts_.base_url;
    if (url.rfind("http://", 0) == 0) url = url.substr(7);
    size_t slash = url.find('/');
    if (slash != std::string::npos) {
        path_prefix_ = url.substr(slash);
        if (path_prefix_ == "/") path_prefix_.clear();
        url = url.substr(0, slash);
    }
    size_t colon = url.find(':');
    if (colon != std::string::npos) {
        host_ = url.substr(0, colon);
        port_ = std::stoi(url.substr(colon + 1));
    } else {
        host_ = url;
        port_ = 80;
    }
    if (host_.empty()) throw ConfigError("remote backend URL has no host");
}

std::string ChatClient::complete(const std::vector<ChatMessage>& messages) const {
    json body;
    body["model"] = opts_.model;
    body["temperature"] = 0;
    json msgs = json::array();
    for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    body["messages"] = msgs;
    std::string payload = body.dump();

    int backoff = opts_.backoff_ms;
    std::string last_error = "no attempts made";
    for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
            backoff *= 2;
        }
        httplib::Client cli(host_, port_);
        cli.set_connection_timeout(opts_.timeout_sec);
        cli.set_read_timeout(opts_.timeout_sec);
        auto res = cli.Post(path_prefix_ + "/v1/chat/completions", payload, "application/json");
        if (!res) {
            last_error = "connection failed";
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty()) {
            last_error = "reply is not a chat completion";
            continue;
        }
        try {
            return reply["choices"][0]["message"]["content"].get<std::string>();
        } catch (const json::exception&) {
            last_error = "reply has no message content";
        }
    }
    throw BackendUnavailable(host_ + ":" + std::to_string(port_) + " (" + last_error + ")");
}

std::string render_judge_prompt(const Trajectory& traj) {
    std::string p = "Task instruction: " + traj.task + "\n\n";
    p += "Trajectory:\n";
    for (size_t i = 0; i < traj.steps.size(); ++i) {
        p += "step " + std::to_string(i) + " observation: " + traj.steps[i].state.caption + "\n";
        p += "step " + std::to_string(i) + " action: " + serialize_action(traj.steps[i].action) +
             "\n";
    }
    p += "final observation: " + traj.final_state.caption + "\n\n";
    p += "Judge the trajectory. Reply with reasoning followed by one JSON object with keys "
         "Correctness (bool), Redundant (false or first redundant step index), FirstErrorStep "
         "(int, failed trajectories only), StepCaptions (array of strings), Confidence "
         "(number in [0,1]).";
    return p;
}

Judgment RemoteJudgeBackend::judge(const Trajectory& traj) {
    std::string reply = client_.complete({{"system", "You judge GUI agent trajectories."},
                                          {"user", render_judge_prompt(traj)}});
    Judgment j = parse_judgment(reply);
    check_judgment(j, static_cast<int>(traj.steps.size()));
    return j;
}

ChangeDescription RemoteJudgeBackend::describe_change(const StateObservation& before,
                                                      const StateObservation& after) {
    std::string prompt = "Describe the GUI state change.\nbefore: " + before.caption +
                         "\nafter: " + after.caption;
    std::string reply = client_.complete(
        {{"system", "You describe GUI state changes."}, {"user", prompt}});
    return {before.screen_id, after.screen_id, reply};
}

namespace {

json last_object_or_throw(const std::string& text) {
    auto span = extract_last_json_text(text);
    if (!span) throw BackendUnavailable("curriculum reply contains no JSON object");
    return json::parse(*span);
}

}  // namespace

std::pair<Guidebook, TaskSet> RemoteCurriculumBackend::init_tasks(
    const std::vector<std::string>& initial_captions) {
    if (initial_captions.empty()) throw EmptyCaptions("no initial captions");
    std::string prompt = "Initial GUI captions:\n";
    for (const auto& c : initial_captions) prompt += "- " + c + "\n";
    prompt += "\nGenerate basic tasks and a software guidebook. Reply with one JSON object: "
              "{\"guidebook\": [{\"feature\", \"how_to\"}], \"tasks\": [{\"id\", \"text\", "
              "\"tier\"}]}.";
    json o = last_object_or_throw(
        client_.complete({{"system", "You generate GUI curricula."}, {"user", prompt}}));
    Guidebook g;
    g.version = 0;
    for (const auto& e : o.value("guidebook", json::array()))
        g.entries.push_back({e.at("feature").get<std::string>(),
                             e.value("how_to", std::string{}), 0});
    TaskSet ts;
    ts.phase = 0;
    for (const auto& t : o.value("tasks", json::array()))
        ts.tasks.push_back({t.at("id").get<std::string>(), t.at("text").get<std::string>(),
                            t.value("tier", 0), 0});
    if (ts.tasks.empty()) throw BackendUnavailable("curriculum reply has no tasks");
    return {g, ts};
}

std::pair<Guidebook, TaskSet> RemoteCurriculumBackend::evolve(const Guidebook& guidebook,
                                                              const TaskSet& tasks,
                                                              const PhaseFeedback& feedback,
                                                              int n_tasks) {
    std::string prompt = "Current guidebook:\n" + guidebook_to_text(guidebook) + "\n";
    prompt += "Exam results for phase " + std::to_string(tasks.phase) + ":\n";
    for (const auto& e : feedback.exam)
        prompt += "- " + e.task_id + ": " + (e.success ? "success" : "failure") + "\n";
    prompt += "Observed state changes:\n";
    for (const auto& cd : cap_descriptions(feedback.change_descriptions, 100))
        prompt += "- " + cd.description + "\n";
    prompt += "\nUpdate the guidebook and produce " + std::to_string(n_tasks) +
              " harder tasks in a curriculum manner; retry failed tasks. Reply with one JSON "
              "object: {\"guidebook_additions\": [{\"feature\", \"how_to\"}], \"tasks\": "
              "[{\"id\", \"text\", \"tier\"}]}.";
    json o = last_object_or_throw(
        client_.complete({{"system", "You generate GUI curricula."}, {"user", prompt}}));
    Guidebook g = guidebook;
    g.version = guidebook.version + 1;
    for (const auto& e : o.value("guidebook_additions", json::array()))
        g.entries.push_back({e.at("feature").get<std::string>(),
                             e.value("how_to", std::string{}), g.version});
    TaskSet ts;
    ts.phase = tasks.phase + 1;
    for (const auto& t : o.value("tasks", json::array()))
        ts.tasks.push_back({t.at("id").get<std::string>(), t.at("text").get<std::string>(),
                            t.value("tier", ts.phase), ts.phase});
    if (ts.tasks.empty()) throw BackendUnavailable("curriculum reply has no tasks");
    return {g, ts};
}

}  // namespace evoforge
