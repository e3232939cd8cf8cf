#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evoforge/curriculum.hpp"
#include "evoforge/grpo.hpp"
#include "evoforge/policy.hpp"
#include "evoforge/sim_env.hpp"

namespace evoforge {

struct RunConfig {
    int phases = 3;
    int tasks_per_phase = 100;
    int group_size = 8;
    int batch_size = 16;
    int epochs = 1;                 // training passes over a phase's items
    double lr = 2e-5;               // cosine-decayed within each phase
    double eps = 0.2;
    double beta = 0.04;
    double gamma = 0.2;
    double temperature = 0.0;       // training-rollout sampling temperature
    double clamp_m = 5.0;
    double init_sigma = 0.01;
    double eval_fraction = 0.2;
    int description_cap = 100;
    std::uint64_t seed = 0;
    int parallelism = 0;            // 0 = hardware concurrency
    std::string backend = "oracle"; // "oracle" or "remote"
    std::string backend_url;
    std::vector<std::string> envs;
    std::string out_dir = "run_out";
};

void validate_config(const RunConfig& cfg);
RunConfig load_config(const std::string& path);
std::string config_to_text(const RunConfig& cfg);

struct PhaseReport {
    int phase = 0;
    int successes = 0;
    int failures = 0;
    int discarded = 0;
    double mean_reward = 0.0;
    std::vector<double> loss_curve;
    double eval_success_rate = 0.0;
};

struct EvolutionReport {
    double initial_eval_success_rate = 0.0;
    std::vector<PhaseReport> phases;
    std::string out_dir;
};

struct EpisodeRecord {
    Trajectory traj;
    std::optional<Judgment> judgment;
    std::optional<StepLabels> labels;
    bool discarded = false;
    bool success = false;
    bool held_out = false;  // excluded from training batches
};

// Rolls out one episode: sampled actions at `temperature` (greedy when 0),
// episode ends on finished() or at the task's step budget.
Trajectory rollout(const EnvDefinition& env, const TaskDef& task,
                   const std::string& instruction, const Policy& policy, double temperature,
                   std::uint64_t episode_seed, int phase, const std::string& episode_id);

// Fraction of tasks whose greedy rollout the judge deems correct.
double evaluate_greedy(const EnvDefinition& env, const std::vector<TaskInstruction>& tasks,
                       const ToyPolicy& policy, JudgeBackend& judge_backend, int phase);

struct PhaseOutput {
    PhaseReport report;
    PhaseFeedback feedback;
};

// One explore -> judge -> label -> train cycle over `taskset`; trajectories
// are persisted to `phase_dir` before the first gradient step.
PhaseOutput run_phase(const RunConfig& cfg, ToyPolicy& policy,
                      const std::shared_ptr<const EnvDefinition>& env, const TaskSet& taskset,
                      JudgeBackend& judge_backend, const std::string& phase_dir,
                      std::ostream& metrics, int phase_index, int* global_step);

EvolutionReport run_evolution(const RunConfig& cfg);
EvolutionReport run_evolution(const RunConfig& cfg, ToyPolicy& policy);

// Collects positive steps from successful trajectories persisted under the
// given run directories and behavior-clones them into a fresh base policy.
std::unique_ptr<ToyPolicy> distill_generalist(const std::vector<std::string>& run_dirs,
                                              const ToyPolicy& base_policy,
                                              const RunConfig& cfg);

// Per-widget caption lines for the start state, used to seed the curriculum.
std::vector<std::string> initial_captions(const EnvDefinition& env);

}  // namespace evoforge
