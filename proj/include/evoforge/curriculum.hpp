#pragma once

#include <memory>
#include <string>
#include <vector>

#include "evoforge/judgment.hpp"
#include "evoforge/sim_env.hpp"

namespace evoforge {

struct GuidebookEntry {
    std::string feature;
    std::string how_to;
    int discovered_phase = 0;
};

// Append-only software feature memory (U_p).
struct Guidebook {
    std::vector<GuidebookEntry> entries;
    int version = 0;
};

struct TaskInstruction {
    std::string id;
    std::string text;
    int difficulty_tier = 0;
    int source_phase = 0;
};

struct TaskSet {
    std::vector<TaskInstruction> tasks;
    int phase = 0;
};

struct ExamResult {
    std::string task_id;
    bool success = false;
};

struct PhaseFeedback {
    std::vector<ExamResult> exam;
    std::vector<ChangeDescription> change_descriptions;
};

class CurriculumBackend {
  public:
    virtual ~CurriculumBackend() = default;
    virtual std::pair<Guidebook, TaskSet> init_tasks(
        const std::vector<std::string>& initial_captions) = 0;
    virtual std::pair<Guidebook, TaskSet> evolve(const Guidebook& guidebook,
                                                 const TaskSet& tasks,
                                                 const PhaseFeedback& feedback,
                                                 int n_tasks) = 0;
};

std::pair<Guidebook, TaskSet> init_tasks(const std::vector<std::string>& initial_captions,
                                         CurriculumBackend& backend);
std::pair<Guidebook, TaskSet> evolve(const Guidebook& guidebook, const TaskSet& tasks,
                                     const PhaseFeedback& feedback, CurriculumBackend& backend,
                                     int n_tasks);

// First-seen unique descriptions, truncated to `cap`.
std::vector<ChangeDescription> cap_descriptions(const std::vector<ChangeDescription>& cds,
                                                int cap);

// Deterministic stand-in for an LLM curriculum generator, driven by the
// environment's task catalog: tier-0 tasks are the single-condition tasks,
// failed tasks are retried verbatim, and harder phases draw on tasks whose
// goals combine two or more conditions.
class ScriptedCurriculumBackend : public CurriculumBackend {
  public:
    explicit ScriptedCurriculumBackend(std::shared_ptr<const EnvDefinition> env,
                                       int description_cap = 100)
        : env_(std::move(env)), description_cap_(description_cap) {}

    std::pair<Guidebook, TaskSet> init_tasks(
        const std::vector<std::string>& initial_captions) override;
    std::pair<Guidebook, TaskSet> evolve(const Guidebook& guidebook, const TaskSet& tasks,
                                         const PhaseFeedback& feedback, int n_tasks) override;

  private:
    std::shared_ptr<const EnvDefinition> env_;
    int description_cap_;
};

std::string guidebook_to_text(const Guidebook& g);
Guidebook guidebook_from_text(const std::string& text);
std::string taskset_to_json(const TaskSet& t);
TaskSet taskset_from_json(const std::string& text);

}  // namespace evoforge
