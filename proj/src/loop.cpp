#include "evoforge/loop.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "evoforge/remote.hpp"
#include "evoforge/serialization.hpp"

namespace evoforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t episode_seed(std::uint64_t run_seed, int phase, size_t index) {
    return mix64(run_seed ^ mix64((static_cast<std::uint64_t>(phase) << 32) ^ index));
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void validate_config(const RunConfig& cfg) {
    if (cfg.phases < 1) throw ConfigError("phases must be >= 1");
    if (cfg.tasks_per_phase < 1) throw ConfigError("tasks_per_phase must be >= 1");
    if (cfg.group_size < 2) throw ConfigError("group must be >= 2");
    if (cfg.batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
    if (cfg.gamma < 0.0 || cfg.gamma > 1.0) throw ConfigError("gamma must be in [0,1]");
    if (cfg.eval_fraction < 0.0 || cfg.eval_fraction >= 1.0)
        throw ConfigError("eval_fraction must be in [0,1)");
    if (cfg.backend != "oracle" && cfg.backend != "remote")
        throw ConfigError("backend must be 'oracle' or 'remote'");
    if (cfg.backend == "remote" && cfg.backend_url.empty())
        throw ConfigError("remote backend requires backend_url");
    if (cfg.envs.empty()) throw ConfigError("at least one env file is required");
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t a = item.find_first_not_of(" \t");
        size_t b = item.find_last_not_of(" \t");
        if (a != std::string::npos) out.push_back(item.substr(a, b - a + 1));
    }
    return out;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string{};
            size_t b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "phases") cfg.phases = std::stoi(value);
            else if (key == "tasks_per_phase") cfg.tasks_per_phase = std::stoi(value);
            else if (key == "group") cfg.group_size = std::stoi(value);
            else if (key == "batch_size") cfg.batch_size = std::stoi(value);
            else if (key == "epochs") cfg.epochs = std::stoi(value);
            else if (key == "lr") cfg.lr = std::stod(value);
            else if (key == "eps") cfg.eps = std::stod(value);
            else if (key == "beta") cfg.beta = std::stod(value);
            else if (key == "gamma") cfg.gamma = std::stod(value);
            else if (key == "temperature") cfg.temperature = std::stod(value);
            else if (key == "clamp_m") cfg.clamp_m = std::stod(value);
            else if (key == "init_sigma") cfg.init_sigma = std::stod(value);
            else if (key == "eval_fraction") cfg.eval_fraction = std::stod(value);
            else if (key == "description_cap") cfg.description_cap = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "parallelism") cfg.parallelism = std::stoi(value);
            else if (key == "backend") cfg.backend = value;
            else if (key == "backend_url") cfg.backend_url = value;
            else if (key == "envs") cfg.envs = split_list(value);
            else if (key == "out_dir") cfg.out_dir = value;
            else throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'");
        }
    }
    return cfg;
}

std::string config_to_text(const RunConfig& cfg) {
    std::ostringstream out;
    out << "phases = " << cfg.phases << "\n";
    out << "tasks_per_phase = " << cfg.tasks_per_phase << "\n";
    out << "group = " << cfg.group_size << "\n";
    out << "batch_size = " << cfg.batch_size << "\n";
    out << "epochs = " << cfg.epochs << "\n";
    out << "lr = " << cfg.lr << "\n";
    out << "eps = " << cfg.eps << "\n";
    out << "beta = " << cfg.beta << "\n";
    out << "gamma = " << cfg.gamma << "\n";
    out << "temperature = " << cfg.temperature << "\n";
    out << "clamp_m = " << cfg.clamp_m << "\n";
    out << "init_sigma = " << cfg.init_sigma << "\n";
    out << "eval_fraction = " << cfg.eval_fraction << "\n";
    out << "description_cap = " << cfg.description_cap << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "parallelism = " << cfg.parallelism << "\n";
    out << "backend = " << cfg.backend << "\n";
    if (!cfg.backend_url.empty()) out << "backend_url = " << cfg.backend_url << "\n";
    out << "envs = ";
    for (size_t i = 0; i < cfg.envs.size(); ++i) out << (i ? "," : "") << cfg.envs[i];
    out << "\n";
    out << "out_dir = " << cfg.out_dir << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Rollout and evaluation

namespace {

// The curriculum emits fresh instruction ids for repeated catalog tasks;
// map an instruction back to its catalog entry by id or instruction text.
const TaskDef& resolve_task(const EnvDefinition& env, const TaskInstruction& ti) {
    for (const auto& t : env.tasks())
        if (t.id == ti.id) return t;
    for (const auto& t : env.tasks())
        if (t.instruction == ti.text) return t;
    throw InconsistentFeedback("task '" + ti.id + "' does not match the environment catalog");
}

}  // namespace


Trajectory rollout(const EnvDefinition& env, const TaskDef& task,
                   const std::string& instruction, const Policy& policy, double temperature,
                   std::uint64_t seed, int phase, const std::string& episode_id) {
    std::mt19937_64 rng(seed);
    Trajectory traj;
    traj.task = instruction;
    traj.task_id = task.id;
    traj.episode_id = episode_id;
    traj.phase_index = phase;
    EnvState state = env.reset(task);
    while (state.step_count < state.max_steps) {
        StateObservation obs = env.observe(state);
        TokenSequence seq = policy.sample(obs, instruction, 1, temperature, rng)[0];
        Action act = parse_action(detokenize(seq));
        traj.steps.push_back({obs, act});
        state = env.step(state, act);
        if (act.kind == ActionType::finished) break;
    }
    traj.final_state = env.observe(state);
    return traj;
}

double evaluate_greedy(const EnvDefinition& env, const std::vector<TaskInstruction>& tasks,
                       const ToyPolicy& policy, JudgeBackend& judge_backend, int phase) {
    if (tasks.empty()) return 0.0;
    int successes = 0;
    for (size_t i = 0; i < tasks.size(); ++i) {
        const TaskDef& task = resolve_task(env, tasks[i]);
        Trajectory traj = rollout(env, task, tasks[i].text, policy, 0.0, 0, phase,
                                  "eval_p" + std::to_string(phase) + "_" + std::to_string(i));
        try {
            Judgment j = judge(traj, judge_backend);
            if (j.correctness) ++successes;
        } catch (const Error&) {
            // unjudgeable episode counts as a failure
        }
    }
    return static_cast<double>(successes) / static_cast<double>(tasks.size());
}

// ---------------------------------------------------------------------------
// Phase loop

namespace {

// Held-out membership is a stable function of the task id so the split is
// reproducible and immune to ordering patterns in the task set (a stride-based
// split can resonate with the round-robin fill order and starve a task).
bool is_held_out(const std::string& task_id, double eval_fraction) {
    if (eval_fraction <= 0.0) return false;
    size_t stride = static_cast<size_t>(std::lround(1.0 / eval_fraction));
    if (stride < 1) stride = 1;
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : task_id) h = (h ^ c) * 1099511628211ull;
    return h % stride == 0;
}

}  // namespace

PhaseOutput run_phase(const RunConfig& cfg, ToyPolicy& policy,
                      const std::shared_ptr<const EnvDefinition>& env, const TaskSet& taskset,
                      JudgeBackend& judge_backend, const std::string& phase_dir,
                      std::ostream& metrics, int phase_index, int* global_step) {
    if (taskset.tasks.empty()) throw EmptyBatch("task set is empty");
    fs::create_directories(phase_dir);

    std::vector<size_t> train_idx;
    std::vector<TaskInstruction> eval_tasks;
    for (size_t i = 0; i < taskset.tasks.size(); ++i) {
        if (is_held_out(taskset.tasks[i].id, cfg.eval_fraction))
            eval_tasks.push_back(taskset.tasks[i]);
        else
            train_idx.push_back(i);
    }

    // --- Autonomous exploration: one sampled episode per training task.
    std::vector<EpisodeRecord> episodes(train_idx.size());
    std::vector<std::string> episode_errors(train_idx.size());
    int threads = cfg.parallelism;
#ifdef _OPENMP
    if (threads <= 0) threads = omp_get_max_threads();
#else
    threads = 1;
#endif

    auto explore_one = [&](size_t k) {
        const TaskInstruction& ti = taskset.tasks[train_idx[k]];
        EpisodeRecord& rec = episodes[k];
        try {
            const TaskDef& task = resolve_task(*env, ti);
            rec.traj = rollout(*env, task, ti.text, policy, cfg.temperature,
                               episode_seed(cfg.seed, phase_index, k), phase_index,
                               "p" + std::to_string(phase_index) + "_e" + std::to_string(k));
            Judgment j = judge(rec.traj, judge_backend);
            rec.labels = label_steps(rec.traj, j);
            rec.judgment = std::move(j);
            rec.success = rec.judgment->correctness;
        } catch (const Error& e) {
            rec.discarded = true;
            episode_errors[k] = e.what();
        }
    };

    if (threads == 1) {
        for (size_t k = 0; k < train_idx.size(); ++k) explore_one(k);
    } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
        for (long long k = 0; k < static_cast<long long>(train_idx.size()); ++k)
            explore_one(static_cast<size_t>(k));
    }

    for (size_t k = 0; k < episodes.size(); ++k) {
        if (!episode_errors[k].empty())
            std::cerr << "episode " << k << " of phase " << phase_index
                      << " discarded: " << episode_errors[k] << "\n";
    }

    // --- Persist all exploration trajectories before any gradient step.
    std::ofstream traj_out(phase_dir + "/trajectories.jsonl");
    for (const auto& rec : episodes) {
        if (rec.discarded) continue;
        traj_out << trajectory_record(rec.traj, rec.judgment ? &*rec.judgment : nullptr,
                                      rec.labels ? &*rec.labels : nullptr)
                 << "\n";
    }
    traj_out.flush();

    // --- Split labeled steps into positive/negative training items.
    std::vector<BatchItem> items;
    for (const auto& rec : episodes) {
        if (rec.discarded) continue;
        for (int s : rec.labels->positive)
            items.push_back({rec.traj.steps[static_cast<size_t>(s)].state, rec.traj.task,
                             rec.traj.steps[static_cast<size_t>(s)].action, true,
                             env->geometry()});
        for (int s : rec.labels->negative)
            items.push_back({rec.traj.steps[static_cast<size_t>(s)].state, rec.traj.task,
                             rec.traj.steps[static_cast<size_t>(s)].action, false,
                             env->geometry()});
    }

    PhaseReport report;
    report.phase = phase_index;

    // --- Policy update (RFT): GRPO + gamma * adversarial imitation.
    StepConfig step_cfg;
    step_cfg.group_size = cfg.group_size;
    step_cfg.eps = cfg.eps;
    step_cfg.beta = cfg.beta;
    step_cfg.gamma = cfg.gamma;
    step_cfg.clamp_m = cfg.clamp_m;

    if (!items.empty()) {
        std::unique_ptr<ToyPolicy> ref = policy.clone();
        std::mt19937_64 train_rng(mix64(cfg.seed ^ (0x7261696eULL + phase_index)));
        size_t steps_per_epoch = (items.size() + cfg.batch_size - 1) / cfg.batch_size;
        size_t total_steps = steps_per_epoch * static_cast<size_t>(cfg.epochs);
        size_t step_index = 0;
        double reward_acc = 0.0;
        size_t reward_steps = 0;
        for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
            std::vector<size_t> order(items.size());
            for (size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::shuffle(order.begin(), order.end(), train_rng);
            for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
                TrainingBatch batch;
                for (size_t i = start; i < std::min(order.size(), start + cfg.batch_size); ++i)
                    batch.items.push_back(items[order[i]]);
                step_cfg.lr = cfg.lr * 0.5 *
                              (1.0 + std::cos(M_PI * static_cast<double>(step_index) /
                                              static_cast<double>(total_steps)));
                LossReport lr_report = combined_step(batch, policy, *ref, step_cfg, train_rng);
                report.loss_curve.push_back(lr_report.total);
                reward_acc += lr_report.mean_reward;
                ++reward_steps;
                json line{{"step", *global_step},
                          {"phase", phase_index},
                          {"grpo", lr_report.grpo},
                          {"ai", lr_report.ai},
                          {"total", lr_report.total},
                          {"mean_reward", lr_report.mean_reward}};
                metrics << line << "\n";
                ++*global_step;
                ++step_index;
            }
        }
        if (reward_steps > 0) report.mean_reward = reward_acc / static_cast<double>(reward_steps);
    }

    // --- Held-out greedy evaluation with the updated policy.
    report.eval_success_rate =
        evaluate_greedy(*env, eval_tasks, policy, judge_backend, phase_index);

    // --- Exam feedback for the curriculum generator.
    PhaseOutput out;
    for (size_t k = 0; k < episodes.size(); ++k) {
        const auto& rec = episodes[k];
        const TaskInstruction& ti = taskset.tasks[train_idx[k]];
        if (rec.discarded) {
            ++report.discarded;
            out.feedback.exam.push_back({ti.id, false});
            continue;
        }
        (rec.success ? report.successes : report.failures)++;
        out.feedback.exam.push_back({ti.id, rec.success});
        const auto& captions = rec.judgment->step_captions;
        for (size_t s = 0; s < captions.size(); ++s) {
            if (captions[s] == "no visible change") continue;
            std::string before = rec.traj.steps[s].state.screen_id;
            std::string after = s + 1 < rec.traj.steps.size()
                                    ? rec.traj.steps[s + 1].state.screen_id
                                    : rec.traj.final_state.screen_id;
            out.feedback.change_descriptions.push_back({before, after, captions[s]});
        }
    }
    for (const auto& ti : eval_tasks) {
        const TaskDef& task = resolve_task(*env, ti);
        Trajectory traj = rollout(*env, task, ti.text, policy, 0.0, 0, phase_index, "exam");
        bool ok = false;
        try {
            ok = judge(traj, judge_backend).correctness;
        } catch (const Error&) {
        }
        (ok ? report.successes : report.failures)++;
        out.feedback.exam.push_back({ti.id, ok});
    }

    out.report = std::move(report);
    return out;
}

// ---------------------------------------------------------------------------
// Evolution loop

std::vector<std::string> initial_captions(const EnvDefinition& env) {
    EnvState start;
    if (env.tasks().empty()) throw EnvLoadError("environment has no tasks");
    start = env.reset(env.tasks().front());
    const ScreenDef& screen = env.screen(start.screen_index);
    std::vector<std::string> captions;
    for (const auto& w : screen.widgets)
        captions.push_back(w.kind + " '" + w.label + "' at (" + std::to_string(w.box.x1) + "," +
                           std::to_string(w.box.y1) + "," + std::to_string(w.box.x2) + "," +
                           std::to_string(w.box.y2) + ") on screen '" + screen.id + "'");
    return captions;
}

namespace {

struct EnvContext {
    std::shared_ptr<const EnvDefinition> env;
    std::unique_ptr<JudgeBackend> judge;
    std::unique_ptr<CurriculumBackend> curriculum;
    Guidebook guidebook;
    TaskSet taskset;
    std::string tag;  // file suffix when several envs run together
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::vector<TaskInstruction> held_out_tasks(const TaskSet& ts, double eval_fraction) {
    std::vector<TaskInstruction> out;
    for (size_t i = 0; i < ts.tasks.size(); ++i)
        if (is_held_out(ts.tasks[i].id, eval_fraction)) out.push_back(ts.tasks[i]);
    return out;
}

}  // namespace

EvolutionReport run_evolution(const RunConfig& cfg) {
    ToyPolicy policy(cfg.seed, cfg.init_sigma);
    return run_evolution(cfg, policy);
}

EvolutionReport run_evolution(const RunConfig& cfg, ToyPolicy& policy) {
    validate_config(cfg);
    fs::create_directories(cfg.out_dir);
    write_file(cfg.out_dir + "/config", config_to_text(cfg));

    std::vector<EnvContext> contexts;
    for (const auto& path : cfg.envs) {
        EnvContext ctx;
        try {
            ctx.env = std::make_shared<EnvDefinition>(EnvDefinition::load(path));
        } catch (const Error& e) {
            throw EnvLoadError(std::string("loading ") + path + ": " + e.what());
        }
        if (cfg.backend == "oracle") {
            ctx.judge = std::make_unique<OracleJudgeBackend>(ctx.env);
            ctx.curriculum =
                std::make_unique<ScriptedCurriculumBackend>(ctx.env, cfg.description_cap);
        } else {
            ChatClient::Options opts;
            opts.base_url = cfg.backend_url;
            ctx.judge = std::make_unique<RemoteJudgeBackend>(ChatClient(opts));
            ctx.curriculum = std::make_unique<RemoteCurriculumBackend>(ChatClient(opts));
        }
        ctx.tag = cfg.envs.size() > 1 ? "_" + ctx.env->name() : "";
        contexts.push_back(std::move(ctx));
    }

    // Task initiation.
    for (auto& ctx : contexts) {
        auto [g, ts] = init_tasks(initial_captions(*ctx.env), *ctx.curriculum);
        ctx.guidebook = std::move(g);
        ctx.taskset = std::move(ts);
        write_file(cfg.out_dir + "/guidebook" + ctx.tag + "_v0.txt",
                   guidebook_to_text(ctx.guidebook));
        write_file(cfg.out_dir + "/tasks" + ctx.tag + "_v0.json", taskset_to_json(ctx.taskset));
    }
    policy.save(cfg.out_dir + "/policy_v0.json");

    EvolutionReport evo;
    evo.out_dir = cfg.out_dir;
    {
        double acc = 0.0;
        for (auto& ctx : contexts)
            acc += evaluate_greedy(*ctx.env, held_out_tasks(ctx.taskset, cfg.eval_fraction),
                                   policy, *ctx.judge, -1);
        evo.initial_eval_success_rate = acc / static_cast<double>(contexts.size());
    }

    std::ofstream metrics(cfg.out_dir + "/metrics.jsonl");
    int global_step = 0;

    for (int p = 0; p < cfg.phases; ++p) {
        std::string phase_dir = cfg.out_dir + "/phase_" + std::to_string(p);
        PhaseReport combined;
        combined.phase = p;
        double eval_acc = 0.0;
        for (auto& ctx : contexts) {
            std::string dir = contexts.size() > 1 ? phase_dir + "/" + ctx.env->name() : phase_dir;
            PhaseOutput out = run_phase(cfg, policy, ctx.env, ctx.taskset, *ctx.judge, dir,
                                        metrics, p, &global_step);
            combined.successes += out.report.successes;
            combined.failures += out.report.failures;
            combined.discarded += out.report.discarded;
            combined.mean_reward += out.report.mean_reward;
            eval_acc += out.report.eval_success_rate;
            combined.loss_curve.insert(combined.loss_curve.end(),
                                       out.report.loss_curve.begin(),
                                       out.report.loss_curve.end());
            auto [g, ts] =
                evolve(ctx.guidebook, ctx.taskset, out.feedback, *ctx.curriculum,
                       cfg.tasks_per_phase);
            ctx.guidebook = std::move(g);
            ctx.taskset = std::move(ts);
            write_file(cfg.out_dir + "/guidebook" + ctx.tag + "_v" + std::to_string(p + 1) +
                           ".txt",
                       guidebook_to_text(ctx.guidebook));
            write_file(cfg.out_dir + "/tasks" + ctx.tag + "_v" + std::to_string(p + 1) + ".json",
                       taskset_to_json(ctx.taskset));
        }
        combined.mean_reward /= static_cast<double>(contexts.size());
        combined.eval_success_rate = eval_acc / static_cast<double>(contexts.size());

        json report_json{{"phase", combined.phase},
                         {"successes", combined.successes},
                         {"failures", combined.failures},
                         {"discarded", combined.discarded},
                         {"mean_reward", combined.mean_reward},
                         {"eval_success_rate", combined.eval_success_rate},
                         {"loss_curve", combined.loss_curve}};
        write_file(phase_dir + "/report.json", report_json.dump(2) + "\n");
        policy.save(cfg.out_dir + "/policy_v" + std::to_string(p + 1) + ".json");
        evo.phases.push_back(std::move(combined));
    }

    json evo_json{{"initial_eval_success_rate", evo.initial_eval_success_rate},
                  {"out_dir", evo.out_dir}};
    json phase_arr = json::array();
    for (const auto& pr : evo.phases)
        phase_arr.push_back({{"phase", pr.phase},
                             {"successes", pr.successes},
                             {"failures", pr.failures},
                             {"discarded", pr.discarded},
                             {"mean_reward", pr.mean_reward},
                             {"eval_success_rate", pr.eval_success_rate}});
    evo_json["phases"] = phase_arr;
    write_file(cfg.out_dir + "/evolution_report.json", evo_json.dump(2) + "\n");
    return evo;
}

std::unique_ptr<ToyPolicy> distill_generalist(const std::vector<std::string>& run_dirs,
                                              const ToyPolicy& base_policy,
                                              const RunConfig& cfg) {
    std::vector<BatchItem> items;
    for (const auto& dir : run_dirs) {
        if (!fs::exists(dir)) throw ConfigError("run directory not found: " + dir);
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(dir))
            if (entry.is_regular_file() && entry.path().filename() == "trajectories.jsonl")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            std::ifstream in(file);
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                json rec = json::parse(line, nullptr, false);
                if (rec.is_discarded()) continue;
                if (!rec.contains("judgment") || !rec.contains("labels")) continue;
                Judgment j = judgment_from_json(rec["judgment"]);
                if (!j.correctness) continue;
                Trajectory traj = trajectory_from_record(rec);
                StepLabels labels = labels_from_json(rec["labels"]);
                for (int s : labels.positive)
                    items.push_back({traj.steps[static_cast<size_t>(s)].state, traj.task,
                                     traj.steps[static_cast<size_t>(s)].action, true,
                                     ScreenGeometry{1, 1}});
            }
        }
    }
    if (items.empty())
        throw NoSuccessfulTrajectories("no positive steps found in the given runs");

    auto policy = base_policy.clone();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch)
        behavior_cloning_step(items, *policy, cfg.lr);
    return policy;
}

}  // namespace evoforge
