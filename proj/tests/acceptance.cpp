// Acceptance suite: one pass/fail line per criterion, exit code 4 on any
// failure. Run from the repository root so configs/ and fixtures/ resolve.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "evoforge/grpo.hpp"
#include "evoforge/loop.hpp"
#include "evoforge/metrics.hpp"
#include "evoforge/reward.hpp"
#include "helpers.hpp"

using namespace evoforge;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("evoforge_accept_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

bool expect(bool ok, const std::string& what) {
    if (!ok) std::cerr << "  check failed: " << what << "\n";
    return ok;
}

// ---------------------------------------------------------------------------
// A1: reward suite frozen values + range fuzz, < 10 s.

bool a1() {
    auto t0 = Clock::now();
    bool ok = true;
    ok &= expect(std::abs(iou_reward({0, 0, 10, 10}, {5, 5, 15, 15}) - 1.0 / 7.0) <= 1e-6,
                 "IoU of the offset unit boxes is 1/7");
    ok &= expect(std::abs(l1_point_reward({60, 50}, {50, 50}, {100, 100}) - 0.95) <= 1e-6,
                 "L1 reward of a 10px miss on a 100x100 screen is 0.95");
    ok &= expect(std::abs(char_bleu("abcd", "abce") - std::pow(0.2, 0.25)) <= 1e-6,
                 "character BLEU of abcd/abce is (0.2)^(1/4) = 0.6687...");

    std::mt19937_64 rng(1);
    for (int i = 0; i < 100000 && ok; ++i) {
        Action pred = testing::random_action(rng);
        Action ref = testing::random_action(rng);
        try {
            RewardBreakdown r = reward(pred, ref, {2000, 2000});
            ok &= expect(r.total >= 0.0 && r.total <= 2.0, "reward total in [0,2]");
        } catch (const DegenerateBoxes&) {
            // zero-area box pairs are defined as an error, not a reward
        }
    }
    ok &= expect(seconds_since(t0) < 10.0, "A1 finishes in under 10 s");
    return ok;
}

// ---------------------------------------------------------------------------
// A2: analytic vs central finite-difference gradients, 100 seeds, < 60 s.

constexpr double kFdStep = 1e-5;
constexpr double kGradTol = 1e-4;

bool grads_agree(const GradientMap& analytic, ToyPolicy& theta,
                 const std::function<double()>& eval) {
    for (const auto& [ctx, row] : analytic) {
        for (int tok = 0; tok < static_cast<int>(row.size()); ++tok) {
            theta.perturb(ctx, tok, kFdStep);
            double up = eval();
            theta.perturb(ctx, tok, -2.0 * kFdStep);
            double down = eval();
            theta.perturb(ctx, tok, kFdStep);
            double fd = (up - down) / (2.0 * kFdStep);
            double a = row[static_cast<size_t>(tok)];
            double rel = std::abs(a - fd) / std::max({1.0, std::abs(a), std::abs(fd)});
            if (rel > kGradTol) {
                std::cerr << "  gradient mismatch: analytic " << a << " vs fd " << fd << "\n";
                return false;
            }
        }
    }
    return true;
}

bool a2() {
    auto t0 = Clock::now();
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 100 && ok; ++seed) {
        std::mt19937_64 rng(seed * 7919 + 1);
        std::uniform_real_distribution<double> jitter(-0.05, 0.05);
        std::uniform_real_distribution<double> rew(0.0, 2.0);

        StateObservation state = testing::simple_observation(
            "s" + std::to_string(seed),
            {{"w1", "Alpha", Box{0, 0, 20, 20}}, {"w2", "Beta", Box{30, 0, 50, 20}}});
        std::string instr = "task " + std::to_string(seed);

        ToyPolicy ref(seed, 0.1);
        auto theta = ref.clone();

        // GRPO: group sampled from the reference, small theta offsets so
        // every ratio stays inside the clip window (no kink at eps = 0.5).
        std::vector<TokenSequence> group = ref.sample(state, instr, 4, 1.0, rng);
        for (const auto& seq : group)
            for (size_t t = 0; t < seq.tokens.size(); ++t)
                theta->perturb(ToyPolicy::context_key(state.screen_id, instr,
                                                      static_cast<int>(t)),
                               seq.tokens[t], jitter(rng));
        std::vector<double> rewards;
        for (size_t i = 0; i < group.size(); ++i) rewards.push_back(rew(rng));
        std::vector<double> adv = group_advantages(rewards);

        GradientMap grad;
        grpo_loss(*theta, ref, state, instr, group, adv, 0.5, 0.04, &grad);
        ok &= grads_agree(grad, *theta, [&] {
            return grpo_loss(*theta, ref, state, instr, group, adv, 0.5, 0.04);
        });

        // Adversarial imitation, away from the clamp floor.
        TokenSequence failure = tokenize_action(Action::simple(ActionType::wait));
        GradientMap ai_grad;
        ai_loss(*theta, ref, state, instr, failure, 5.0, &ai_grad);
        ok &= expect(!ai_grad.empty(), "ai_loss gradient is live off the floor");
        ok &= grads_agree(ai_grad, *theta,
                          [&] { return ai_loss(*theta, ref, state, instr, failure, 5.0); });

        // Behavior cloning: apply_gradient is exact, so one lr=1 step
        // exposes the analytic gradient as (theta_before - theta_after).
        std::vector<BatchItem> items = {
            {state, instr, Action::point_action(ActionType::click, {10, 10}), true, {100, 100}},
            {state, instr, Action::simple(ActionType::wait), true, {100, 100}},
        };
        auto before = theta->clone();
        auto stepped = theta->clone();
        behavior_cloning_step(items, *stepped, 1.0);
        GradientMap bc_grad;
        for (const auto& item : items) {
            TokenSequence seq = tokenize_action(item.reference);
            for (size_t t = 0; t < seq.tokens.size(); ++t) {
                std::uint64_t ctx = ToyPolicy::context_key(state.screen_id, instr,
                                                           static_cast<int>(t));
                if (!bc_grad.count(ctx)) {
                    auto& row = bc_grad[ctx];
                    row.resize(static_cast<size_t>(before->vocab_size()));
                    for (int tok = 0; tok < before->vocab_size(); ++tok)
                        row[static_cast<size_t>(tok)] =
                            before->logit(ctx, tok) - stepped->logit(ctx, tok);
                }
            }
        }
        auto probe = before->clone();
        ok &= grads_agree(bc_grad, *probe, [&] {
            auto copy = probe->clone();
            return behavior_cloning_step(items, *copy, 0.0);
        });
    }
    ok &= expect(seconds_since(t0) < 60.0, "A2 finishes in under 60 s");
    return ok;
}

// ---------------------------------------------------------------------------
// A3: end-to-end self-evolution on paint-lite, < 5 min.

bool a3() {
    auto t0 = Clock::now();
    RunConfig cfg = load_config("configs/paint-lite.cfg");
    cfg.out_dir = (fresh_dir("a3") / "run").string();
    EvolutionReport evo = run_evolution(cfg);

    bool ok = expect(evo.initial_eval_success_rate < 0.30,
                     "held-out success starts below 30%");
    ok &= expect(!evo.phases.empty(), "at least one phase ran");
    double prev = evo.initial_eval_success_rate;
    for (const auto& p : evo.phases) {
        ok &= expect(p.eval_success_rate >= prev - 1e-12, "eval curve is non-decreasing");
        prev = p.eval_success_rate;
    }
    ok &= expect(evo.phases.back().eval_success_rate >= 0.90,
                 "held-out success reaches 90% after " + std::to_string(cfg.phases) +
                     " phases (got " + std::to_string(evo.phases.back().eval_success_rate) +
                     ")");
    ok &= expect(seconds_since(t0) < 300.0, "A3 finishes in under 5 min");
    return ok;
}

// ---------------------------------------------------------------------------
// A4: oracle labeling equals an independent brute-force BFS labeler.

struct IndependentLabeler {
    const EnvDefinition& env;
    std::map<std::string, std::map<std::string, int>> cache;  // task -> state -> d

    static std::string key(const EnvState& s) {
        std::string k = std::to_string(s.screen_index);
        for (const auto& [name, value] : s.variables) k += "|" + name + "=" + value;
        return k;
    }

    // Trigger actions reconstructed from the transition table itself.
    std::vector<Action> triggers(const EnvState& s) const {
        std::vector<Action> out;
        const ScreenDef& screen = env.screen(s.screen_index);
        for (const auto& tr : env.transitions()) {
            if (tr.screen != screen.id) continue;
            if (tr.widget) {
                for (const auto& w : screen.widgets)
                    if (w.id == *tr.widget)
                        out.push_back(Action::point_action(
                            tr.action,
                            {(w.box.x1 + w.box.x2) / 2, (w.box.y1 + w.box.y2) / 2}));
            } else if (tr.text) {
                out.push_back(Action::text_action(ActionType::type_text, *tr.text));
            }
        }
        return out;
    }

    int distance(const TaskDef& task, const EnvState& from) {
        auto& per_task = cache[task.id];
        auto hit = per_task.find(key(from));
        if (hit != per_task.end()) return hit->second;

        std::vector<EnvState> frontier{from};
        frontier[0].step_count = 0;
        frontier[0].max_steps = 1 << 20;
        std::map<std::string, int> dist{{key(from), 0}};
        int result = -1;
        if (env.goal_met(task.goal, from)) result = 0;
        for (size_t i = 0; i < frontier.size() && result < 0; ++i) {
            EnvState cur = frontier[i];
            for (const auto& a : triggers(cur)) {
                EnvState next = env.step(cur, a);
                next.step_count = 0;
                std::string k = key(next);
                if (dist.count(k)) continue;
                dist[k] = dist[key(cur)] + 1;
                if (env.goal_met(task.goal, next)) {
                    result = dist[k];
                    break;
                }
                frontier.push_back(next);
            }
        }
        per_task[key(from)] = result;
        return result;
    }

    StepLabels label(const TaskDef& task, const std::vector<EnvState>& states,
                     const EnvState& final_state) {
        int n = static_cast<int>(states.size());
        std::vector<bool> progress(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            int d0 = distance(task, states[static_cast<size_t>(i)]);
            int d1 = distance(task, i + 1 < n ? states[static_cast<size_t>(i + 1)]
                                              : final_state);
            progress[static_cast<size_t>(i)] = d0 > 0 && d1 >= 0 && d1 == d0 - 1;
        }
        bool correct = env.goal_met(task.goal, final_state) &&
                       final_state.step_count <= task.max_steps;
        int first_bad = n;
        for (int i = 0; i < n; ++i)
            if (!progress[static_cast<size_t>(i)]) {
                first_bad = i;
                break;
            }
        StepLabels l;
        if (correct) {
            for (int i = 0; i < std::min(first_bad, n); ++i) l.positive.insert(i);
            for (int i = first_bad; i < n; ++i) l.ignored.insert(i);
        } else {
            int err = first_bad < n ? first_bad : n - 1;
            for (int i = 0; i < err; ++i) l.positive.insert(i);
            l.negative.insert(err);
            for (int i = err + 1; i < n; ++i) l.ignored.insert(i);
        }
        return l;
    }
};

bool a4() {
    bool ok = true;
    std::mt19937_64 rng(41);
    for (const char* fixture : {"fixtures/paint-lite.env", "fixtures/editor-lite.env"}) {
        EnvDefinition env = EnvDefinition::load(fixture);
        IndependentLabeler brute{env, {}};
        for (int trial = 0; trial < 500 && ok; ++trial) {
            const TaskDef& task = env.tasks()[rng() % env.tasks().size()];
            EnvState s = env.reset(task);
            Trajectory traj;
            traj.task = task.instruction;
            traj.task_id = task.id;
            std::vector<EnvState> states;
            int len = 1 + static_cast<int>(rng() % task.max_steps);
            for (int i = 0; i < len; ++i) {
                StateObservation obs = env.observe(s);
                std::vector<Action> cands = candidate_actions(obs);
                Action a = cands[rng() % cands.size()];
                states.push_back(s);
                traj.steps.push_back({obs, a});
                s = env.step(s, a);
                if (a.kind == ActionType::finished) break;
            }
            traj.final_state = env.observe(s);

            StepLabels oracle = label_steps(traj, env.oracle_judge(traj, task));
            StepLabels expected = brute.label(task, states, s);
            ok &= expect(oracle.positive == expected.positive &&
                             oracle.negative == expected.negative &&
                             oracle.ignored == expected.ignored,
                         std::string(fixture) + ": labels disagree on task " + task.id);
        }
    }
    return ok;
}

// ---------------------------------------------------------------------------
// A5: gamma = 0.2 does not underperform gamma = 0 (mean over 5 seeds).

bool a5() {
    auto final_eval = [](std::uint64_t seed, double gamma) {
        RunConfig cfg = load_config("configs/paint-lite.cfg");
        cfg.seed = seed;
        cfg.gamma = gamma;
        cfg.out_dir = (fresh_dir("a5_s" + std::to_string(seed) + "_g" +
                                 std::to_string(gamma != 0.0)) /
                       "run")
                          .string();
        return run_evolution(cfg).phases.back().eval_success_rate;
    };
    double with_ai = 0.0, without_ai = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        with_ai += final_eval(seed, 0.2);
        without_ai += final_eval(seed, 0.0);
    }
    with_ai /= 5.0;
    without_ai /= 5.0;
    std::cerr << "  gamma=0.2 mean " << with_ai << ", gamma=0 mean " << without_ai << "\n";
    return expect(with_ai >= without_ai - 0.02,
                  "gamma=0.2 final success within 2 points of gamma=0 or better");
}

// ---------------------------------------------------------------------------
// A6: judge-eval metrics, exact values + AP monotone invariance.

bool a6() {
    bool ok = true;
    ConfusionMatrix m = confusion({true, false, true, false}, {true, true, false, false});
    ok &= expect(m.tp == 1 && m.fn == 1 && m.fp == 1 && m.tn == 1, "2x2 confusion counts");

    PrecisionNpv pn = precision_npv({3, 1, 5, 1});
    ok &= expect(pn.precision && *pn.precision == 0.75, "precision 3/4");
    ok &= expect(pn.npv && std::abs(*pn.npv - 5.0 / 6.0) < 1e-15, "NPV 5/6");
    ok &= expect(!precision_npv({0, 0, 1, 1}).precision, "precision undefined without tp+fp");

    ok &= expect(std::abs(average_precision({0.9, 0.8, 0.7}, {true, false, true}) - 5.0 / 6.0) <
                     1e-15,
                 "AP of T F T is 5/6");
    ok &= expect(average_precision({3, 2, 1}, {true, true, false}) == 1.0, "perfect AP is 1");
    ok &= expect(average_precision({4, 3, 2, 1}, {false, false, false, true}) == 0.25,
                 "single positive ranked last scores 1/n");

    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        size_t n = 2 + rng() % 30;
        std::vector<double> scores(n);
        std::vector<bool> truth(n);
        for (size_t i = 0; i < n; ++i) {
            scores[i] = u(rng);
            truth[i] = rng() % 2 == 0;
        }
        truth[rng() % n] = true;
        double base = average_precision(scores, truth);
        std::vector<double> mono(n);
        for (size_t i = 0; i < n; ++i) mono[i] = 2.0 * std::atan(scores[i]) + 5.0;
        ok &= expect(std::abs(average_precision(mono, truth) - base) < 1e-12,
                     "AP invariant under a strictly monotone transform");
    }
    return ok;
}

// ---------------------------------------------------------------------------
// A7: distilled generalist vs cross-environment specialists.

std::vector<TaskInstruction> full_catalog(const EnvDefinition& env) {
    std::vector<TaskInstruction> out;
    for (const auto& t : env.tasks()) out.push_back({t.id, t.instruction, 0, 0});
    return out;
}

bool a7() {
    fs::path base = fresh_dir("a7");

    RunConfig paint_cfg = load_config("configs/paint-lite.cfg");
    paint_cfg.out_dir = (base / "paint").string();
    run_evolution(paint_cfg);

    RunConfig editor_cfg = load_config("configs/editor-lite.cfg");
    editor_cfg.out_dir = (base / "editor").string();
    run_evolution(editor_cfg);

    auto paint_env =
        std::make_shared<EnvDefinition>(EnvDefinition::load("fixtures/paint-lite.env"));
    auto editor_env =
        std::make_shared<EnvDefinition>(EnvDefinition::load("fixtures/editor-lite.env"));
    OracleJudgeBackend paint_judge(paint_env), editor_judge(editor_env);

    auto paint_specialist = ToyPolicy::load_file((base / "paint" / "policy_v3.json").string());
    auto editor_specialist = ToyPolicy::load_file((base / "editor" / "policy_v3.json").string());
    double cross = (evaluate_greedy(*editor_env, full_catalog(*editor_env), *paint_specialist,
                                    editor_judge, 0) +
                    evaluate_greedy(*paint_env, full_catalog(*paint_env), *editor_specialist,
                                    paint_judge, 0)) /
                   2.0;

    ToyPolicy seed_policy(paint_cfg.seed, paint_cfg.init_sigma);
    auto generalist =
        distill_generalist({(base / "paint").string(), (base / "editor").string()}, seed_policy,
                           paint_cfg);

    RunConfig general_cfg = paint_cfg;
    general_cfg.phases = 1;
    general_cfg.envs = {"fixtures/paint-lite.env", "fixtures/editor-lite.env"};
    general_cfg.out_dir = (base / "general").string();
    run_evolution(general_cfg, *generalist);

    double gen = (evaluate_greedy(*paint_env, full_catalog(*paint_env), *generalist,
                                  paint_judge, 1) +
                  evaluate_greedy(*editor_env, full_catalog(*editor_env), *generalist,
                                  editor_judge, 1)) /
                 2.0;
    std::cerr << "  generalist mean " << gen << ", specialist cross-env mean " << cross << "\n";
    return expect(gen >= cross - 0.02,
                  "generalist within 2 points of the cross-env specialist mean or better");
}

// ---------------------------------------------------------------------------
// A8: identical runs are byte-identical in metrics and reports.

bool a8() {
    RunConfig cfg = load_config("configs/paint-lite.cfg");
    cfg.out_dir = (fresh_dir("a8") / "run").string();

    std::vector<fs::path> tracked{fs::path(cfg.out_dir) / "metrics.jsonl",
                                  fs::path(cfg.out_dir) / "evolution_report.json"};
    for (int p = 0; p < cfg.phases; ++p)
        tracked.push_back(fs::path(cfg.out_dir) / ("phase_" + std::to_string(p)) /
                          "report.json");

    run_evolution(cfg);
    std::vector<std::string> first;
    for (const auto& f : tracked) first.push_back(slurp(f));

    run_evolution(cfg);
    bool ok = true;
    for (size_t i = 0; i < tracked.size(); ++i)
        ok &= expect(slurp(tracked[i]) == first[i],
                     tracked[i].string() + " is byte-identical across runs");
    return ok;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        bool (*fn)();
    };
    const Criterion criteria[] = {{"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},
                                  {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8}};
    bool all_ok = true;
    for (const auto& c : criteria) {
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            std::cerr << "  " << c.name << " raised: " << e.what() << "\n";
        }
        std::cout << c.name << ": " << (ok ? "PASS" : "FAIL") << std::endl;
        all_ok &= ok;
    }
    return all_ok ? 0 : 4;
}
