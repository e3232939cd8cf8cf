#include "evoforge/judgment.hpp"

#include <nlohmann/json.hpp>

namespace evoforge {

using nlohmann::json;

Judgment judge(const Trajectory& traj, JudgeBackend& backend) {
    if (traj.steps.empty()) throw IndexOutOfRange("trajectory has no steps");
    Judgment j = backend.judge(traj);
    check_judgment(j, static_cast<int>(traj.steps.size()));
    return j;
}

void check_judgment(const Judgment& j, int num_steps) {
    if (j.correctness && j.first_error_step)
        throw InconsistentJudgment("correct trajectory cannot have an error step");
    if (!j.correctness && !j.first_error_step)
        throw InconsistentJudgment("failed trajectory must name its first error step");
    if (j.redundant_from && !j.correctness)
        throw InconsistentJudgment("redundancy applies to successful trajectories only");
    if (j.redundant_from && (*j.redundant_from < 0 || *j.redundant_from >= num_steps))
        throw InconsistentJudgment("redundant_from out of range");
    if (j.first_error_step && (*j.first_error_step < 0 || *j.first_error_step >= num_steps))
        throw InconsistentJudgment("first_error_step out of range");
}

std::optional<std::string> extract_last_json_text(const std::string& text) {
    std::optional<std::string> best;
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') continue;
        int depth = 0;
        bool in_string = false;
        for (size_t k = i; k < text.size(); ++k) {
            char c = text[k];
            if (in_string) {
                if (c == '\\')
                    ++k;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"') in_string = true;
            else if (c == '{') ++depth;
            else if (c == '}') {
                --depth;
                if (depth == 0) {
                    std::string span = text.substr(i, k - i + 1);
                    json parsed = json::parse(span, nullptr, false);
                    if (!parsed.is_discarded() && parsed.is_object()) {
                        best = std::move(span);
                        // Skip the whole span so objects nested inside a
                        // well-formed reply are not picked over it.
                        i = k;
                    }
                    break;
                }
            }
        }
    }
    return best;
}

Judgment parse_judgment(const std::string& model_text) {
    auto obj_text = extract_last_json_text(model_text);
    if (!obj_text) throw MalformedModelOutput("no JSON object found in model reply");
    const json o = json::parse(*obj_text);
    if (!o.contains("Correctness") || !o["Correctness"].is_boolean())
        throw MalformedModelOutput("missing boolean Correctness");
    Judgment j;
    j.correctness = o["Correctness"].get<bool>();
    if (o.contains("Redundant")) {
        const json& r = o["Redundant"];
        if (r.is_number_integer())
            j.redundant_from = r.get<int>();
        else if (r.is_boolean() && r.get<bool>())
            // A bare flag without a start index is unusable for labeling.
            throw InconsistentJudgment("Redundant=true without a start index");
    }
    if (o.contains("FirstErrorStep") && !o["FirstErrorStep"].is_null()) {
        if (!o["FirstErrorStep"].is_number_integer())
            throw MalformedModelOutput("FirstErrorStep must be an integer");
        j.first_error_step = o["FirstErrorStep"].get<int>();
    }
    if (o.contains("StepCaptions")) {
        if (!o["StepCaptions"].is_array())
            throw MalformedModelOutput("StepCaptions must be an array");
        for (const auto& c : o["StepCaptions"]) j.step_captions.push_back(c.get<std::string>());
    }
    if (o.contains("Confidence") && o["Confidence"].is_number())
        j.confidence = o["Confidence"].get<double>();
    if (o.contains("Rationale") && o["Rationale"].is_string())
        j.rationale = o["Rationale"].get<std::string>();
    // Range checks are done by the caller against the trajectory; here we
    // enforce the internal invariants that need no length.
    if (j.correctness && j.first_error_step)
        throw InconsistentJudgment("Correctness=true with FirstErrorStep set");
    if (!j.correctness && !j.first_error_step)
        throw InconsistentJudgment("Correctness=false without FirstErrorStep");
    if (j.redundant_from && !j.correctness)
        throw InconsistentJudgment("Redundant set on a failed trajectory");
    return j;
}

StepLabels label_steps(const Trajectory& traj, const Judgment& j) {
    int n = static_cast<int>(traj.steps.size());
    if (j.redundant_from && (*j.redundant_from < 0 || *j.redundant_from >= n))
        throw IndexOutOfRange("redundant_from outside trajectory");
    if (j.first_error_step && (*j.first_error_step < 0 || *j.first_error_step >= n))
        throw IndexOutOfRange("first_error_step outside trajectory");
    StepLabels labels;
    if (j.correctness && !j.redundant_from) {
        for (int i = 0; i < n; ++i) labels.positive.insert(i);
    } else if (j.correctness) {
        int k = *j.redundant_from;
        for (int i = 0; i < k; ++i) labels.positive.insert(i);
        for (int i = k; i < n; ++i) labels.ignored.insert(i);
    } else {
        int e = *j.first_error_step;
        for (int i = 0; i < e; ++i) labels.positive.insert(i);
        labels.negative.insert(e);
        for (int i = e + 1; i < n; ++i) labels.ignored.insert(i);
    }
    return labels;
}

ChangeDescription describe_change(const StateObservation& before,
                                  const StateObservation& after,
                                  JudgeBackend& backend) {
    return backend.describe_change(before, after);
}

std::string diff_description(const StateObservation& before, const StateObservation& after) {
    std::string out;
    auto find = [](const std::vector<WidgetInfo>& ws, const std::string& id) -> const WidgetInfo* {
        for (const auto& w : ws)
            if (w.id == id) return &w;
        return nullptr;
    };
    if (before.screen_id != after.screen_id)
        out += "screen changed from '" + before.screen_id + "' to '" + after.screen_id + "'. ";
    for (const auto& w : after.widgets) {
        const WidgetInfo* prev = find(before.widgets, w.id);
        if (!prev)
            out += "widget '" + w.label + "' appeared. ";
        else if (prev->label != w.label)
            out += "widget label changed from '" + prev->label + "' to '" + w.label + "'. ";
    }
    for (const auto& w : before.widgets) {
        if (!find(after.widgets, w.id)) out += "widget '" + w.label + "' disappeared. ";
    }
    if (before.caption != after.caption && out.empty())
        out = "state details changed: " + after.caption;
    if (out.empty()) out = "no visible change";
    return out;
}

}  // namespace evoforge
