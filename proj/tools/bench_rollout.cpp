// Compares the serial reference episode loop against the OpenMP path:
// same exploration workload, identical results required, wall times printed.
#include <chrono>
#include <iostream>
#include <sstream>

#include "evoforge/loop.hpp"

using namespace evoforge;

namespace {

struct BenchResult {
    double seconds = 0.0;
    PhaseOutput out;
    std::string metrics;
};

BenchResult run_once(const RunConfig& cfg, const std::shared_ptr<const EnvDefinition>& env,
                     const TaskSet& taskset, const std::string& dir) {
    ToyPolicy policy(cfg.seed, cfg.init_sigma);
    OracleJudgeBackend judge(env);
    std::ostringstream metrics;
    int step = 0;
    auto t0 = std::chrono::steady_clock::now();
    PhaseOutput out = run_phase(cfg, policy, env, taskset, judge, dir, metrics, 0, &step);
    auto t1 = std::chrono::steady_clock::now();
    return {std::chrono::duration<double>(t1 - t0).count(), std::move(out), metrics.str()};
}

}  // namespace

int main(int argc, char** argv) {
    std::string env_path = argc > 1 ? argv[1] : "fixtures/paint-lite.env";
    int n_tasks = argc > 2 ? std::stoi(argv[2]) : 400;

    auto env = std::make_shared<const EnvDefinition>(EnvDefinition::load(env_path));
    ScriptedCurriculumBackend curriculum(env);
    auto [guidebook, seed_tasks] = curriculum.init_tasks(initial_captions(*env));
    PhaseFeedback feedback;
    for (const auto& t : seed_tasks.tasks) feedback.exam.push_back({t.id, false});
    auto [g2, taskset] = curriculum.evolve(guidebook, seed_tasks, feedback, n_tasks);

    RunConfig cfg;
    cfg.seed = 7;
    cfg.temperature = 1.0;
    cfg.lr = 0.0;  // exploration-only benchmark; keep the policy fixed
    cfg.envs = {env_path};

    cfg.parallelism = 1;
    BenchResult serial = run_once(cfg, env, taskset, "bench_out/serial");
    cfg.parallelism = 0;
    BenchResult parallel = run_once(cfg, env, taskset, "bench_out/parallel");

    bool same = serial.out.report.successes == parallel.out.report.successes &&
                serial.out.report.failures == parallel.out.report.failures &&
                serial.out.feedback.exam.size() == parallel.out.feedback.exam.size() &&
                serial.metrics == parallel.metrics;
    for (size_t i = 0; same && i < serial.out.feedback.exam.size(); ++i)
        same = serial.out.feedback.exam[i].success == parallel.out.feedback.exam[i].success;

    std::cout << "tasks: " << taskset.tasks.size() << "\n";
    std::cout << "serial:   " << serial.seconds << " s\n";
    std::cout << "parallel: " << parallel.seconds << " s\n";
    std::cout << "speedup:  " << (parallel.seconds > 0 ? serial.seconds / parallel.seconds : 0)
              << "x\n";
    std::cout << "results identical: " << (same ? "yes" : "NO") << "\n";
    return same ? 0 : 1;
}
