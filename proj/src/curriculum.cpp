#include "evoforge/curriculum.hpp"

#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace evoforge {

using nlohmann::json;

std::pair<Guidebook, TaskSet> init_tasks(const std::vector<std::string>& initial_captions,
                                         CurriculumBackend& backend) {
    if (initial_captions.empty()) throw EmptyCaptions("no initial captions");
    return backend.init_tasks(initial_captions);
}

std::pair<Guidebook, TaskSet> evolve(const Guidebook& guidebook, const TaskSet& tasks,
                                     const PhaseFeedback& feedback, CurriculumBackend& backend,
                                     int n_tasks) {
    std::set<std::string> known;
    for (const auto& t : tasks.tasks) known.insert(t.id);
    for (const auto& e : feedback.exam)
        if (!known.count(e.task_id))
            throw InconsistentFeedback("exam references unknown task '" + e.task_id + "'");
    return backend.evolve(guidebook, tasks, feedback, n_tasks);
}

std::vector<ChangeDescription> cap_descriptions(const std::vector<ChangeDescription>& cds,
                                                int cap) {
    if (cap <= 0) throw ConfigError("description cap must be positive");
    std::vector<ChangeDescription> out;
    std::set<std::string> seen;
    for (const auto& cd : cds) {
        if (static_cast<int>(out.size()) >= cap) break;
        if (seen.insert(cd.description).second) out.push_back(cd);
    }
    return out;
}

namespace {

// Pulls the first single-quoted span out of a caption, e.g. the widget
// label from "button 'Shapes' at (...)".
std::string extract_feature(const std::string& caption) {
    size_t a = caption.find('\'');
    if (a == std::string::npos) return caption;
    size_t b = caption.find('\'', a + 1);
    if (b == std::string::npos) return caption;
    return caption.substr(a + 1, b - a - 1);
}

}  // namespace

std::pair<Guidebook, TaskSet> ScriptedCurriculumBackend::init_tasks(
    const std::vector<std::string>& initial_captions) {
    if (initial_captions.empty()) throw EmptyCaptions("no initial captions");
    Guidebook g;
    g.version = 0;
    for (const auto& caption : initial_captions)
        g.entries.push_back({extract_feature(caption), caption, 0});

    // One "activate <widget>" task per interactive start-screen widget:
    // simulate the widget's trigger once and emit the single-condition
    // catalog task whose goal that activation satisfies.
    TaskSet ts;
    ts.phase = 0;
    if (env_->tasks().empty()) throw EmptyCaptions("environment has no tasks");
    EnvState start = env_->reset(env_->tasks().front());
    StateObservation obs = env_->observe(start);
    std::set<std::string> emitted;
    for (const auto& w : obs.widgets) {
        Point center{(w.box.x1 + w.box.x2) / 2, (w.box.y1 + w.box.y2) / 2};
        EnvState next = env_->step(start, Action::point_action(ActionType::click, center));
        for (const auto& t : env_->tasks()) {
            if (t.goal.conditions() != 1) continue;
            if (env_->goal_met(t.goal, start) || !env_->goal_met(t.goal, next)) continue;
            if (emitted.insert(t.id).second) ts.tasks.push_back({t.id, t.instruction, 0, 0});
            break;
        }
    }
    if (ts.tasks.empty())
        for (const auto& t : env_->tasks())
            if (t.goal.conditions() == 1) ts.tasks.push_back({t.id, t.instruction, 0, 0});
    return {g, ts};
}

std::pair<Guidebook, TaskSet> ScriptedCurriculumBackend::evolve(const Guidebook& guidebook,
                                                                const TaskSet& tasks,
                                                                const PhaseFeedback& feedback,
                                                                int n_tasks) {
    int next_phase = tasks.phase + 1;

    Guidebook g = guidebook;  // append-only
    g.version = guidebook.version + 1;
    std::set<std::string> known_features;
    for (const auto& e : g.entries) known_features.insert(e.feature);
    for (const auto& cd : cap_descriptions(feedback.change_descriptions, description_cap_)) {
        if (known_features.insert(cd.description).second)
            g.entries.push_back({cd.description, cd.description, next_phase});
    }

    TaskSet ts;
    ts.phase = next_phase;

    // Failed tasks are retried verbatim (same id, text, and tier).
    std::set<std::string> failed;
    for (const auto& e : feedback.exam)
        if (!e.success) failed.insert(e.task_id);
    for (const auto& t : tasks.tasks)
        if (failed.count(t.id)) ts.tasks.push_back(t);

    // Fill with compositions: catalog tasks whose goal combines >= 2
    // conditions, i.e. references several guidebook features at once.
    std::vector<const TaskDef*> compositions;
    for (const auto& t : env_->tasks())
        if (t.goal.conditions() >= 2) compositions.push_back(&t);
    if (compositions.empty())
        for (const auto& t : env_->tasks()) compositions.push_back(&t);

    int serial = 0;
    while (static_cast<int>(ts.tasks.size()) < n_tasks) {
        const TaskDef* t = compositions[static_cast<size_t>(serial) % compositions.size()];
        TaskInstruction ti;
        ti.id = "p" + std::to_string(next_phase) + "_c" + std::to_string(serial);
        ti.text = t->instruction;
        ti.difficulty_tier = next_phase;
        ti.source_phase = next_phase;
        ts.tasks.push_back(std::move(ti));
        ++serial;
    }
    return {g, ts};
}

std::string guidebook_to_text(const Guidebook& g) {
    std::string out = "# Guidebook v" + std::to_string(g.version) + "\n";
    for (const auto& e : g.entries) {
        out += "\n## " + e.feature + "\n";
        out += "phase: " + std::to_string(e.discovered_phase) + "\n";
        out += e.how_to + "\n";
    }
    return out;
}

Guidebook guidebook_from_text(const std::string& text) {
    Guidebook g;
    std::istringstream in(text);
    std::string line;
    GuidebookEntry* current = nullptr;
    while (std::getline(in, line)) {
        if (line.rfind("# Guidebook v", 0) == 0) {
            g.version = std::stoi(line.substr(13));
        } else if (line.rfind("## ", 0) == 0) {
            g.entries.push_back({line.substr(3), "", 0});
            current = &g.entries.back();
        } else if (current && line.rfind("phase: ", 0) == 0) {
            current->discovered_phase = std::stoi(line.substr(7));
        } else if (current && !line.empty()) {
            if (!current->how_to.empty()) current->how_to += "\n";
            current->how_to += line;
        }
    }
    return g;
}

std::string taskset_to_json(const TaskSet& t) {
    json doc;
    doc["phase"] = t.phase;
    json arr = json::array();
    for (const auto& task : t.tasks)
        arr.push_back({{"id", task.id},
                       {"text", task.text},
                       {"difficulty_tier", task.difficulty_tier},
                       {"source_phase", task.source_phase}});
    doc["tasks"] = arr;
    return doc.dump(2);
}

TaskSet taskset_from_json(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("task set file is not valid JSON");
    TaskSet t;
    t.phase = doc.value("phase", 0);
    for (const auto& task : doc.value("tasks", json::array()))
        t.tasks.push_back({task.at("id").get<std::string>(), task.at("text").get<std::string>(),
                           task.value("difficulty_tier", 0), task.value("source_phase", 0)});
    return t;
}

}  // namespace evoforge
