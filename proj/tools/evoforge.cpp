#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "evoforge/loop.hpp"
#include "evoforge/metrics.hpp"
#include "evoforge/remote.hpp"
#include "evoforge/serialization.hpp"

using nlohmann::json;
using namespace evoforge;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kBackend = 3, kCheck = 4 };

struct GlobalOpts {
    std::optional<std::uint64_t> seed;
    std::optional<int> parallelism;
    bool json_out = false;
};

void emit(const GlobalOpts& g, const json& doc, const std::string& plain) {
    if (g.json_out)
        std::cout << doc.dump(2) << "\n";
    else
        std::cout << plain;
}

int classify(const Error& e) {
    const std::string code = e.code();
    if (code == "BackendUnavailable" || code == "MalformedModelOutput") return kBackend;
    if (code == "ConfigError" || code == "SchemaError" || code == "DanglingReference" ||
        code == "EnvLoadError")
        return kConfig;
    return kUsage;
}

int cmd_run(const GlobalOpts& g, const std::string& config_path) {
    RunConfig cfg = load_config(config_path);
    if (g.seed) cfg.seed = *g.seed;
    if (g.parallelism) cfg.parallelism = *g.parallelism;
    if (const char* url = std::getenv("EVOFORGE_BACKEND_URL")) {
        cfg.backend = "remote";
        cfg.backend_url = url;
    }
    EvolutionReport rep = run_evolution(cfg);
    json doc{{"initial_eval_success_rate", rep.initial_eval_success_rate},
             {"out_dir", rep.out_dir}};
    json phases = json::array();
    std::ostringstream plain;
    plain << "initial eval success rate: " << rep.initial_eval_success_rate << "\n";
    for (const auto& p : rep.phases) {
        phases.push_back({{"phase", p.phase},
                          {"successes", p.successes},
                          {"failures", p.failures},
                          {"discarded", p.discarded},
                          {"mean_reward", p.mean_reward},
                          {"eval_success_rate", p.eval_success_rate}});
        plain << "phase " << p.phase << ": successes=" << p.successes
              << " failures=" << p.failures << " discarded=" << p.discarded
              << " eval=" << p.eval_success_rate << "\n";
    }
    doc["phases"] = phases;
    plain << "artifacts written to " << rep.out_dir << "\n";
    emit(g, doc, plain.str());
    return kOk;
}

int cmd_distill(const GlobalOpts& g, const std::vector<std::string>& runs,
                const std::string& out_dir, const std::string& config_path) {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (g.seed) cfg.seed = *g.seed;
    ToyPolicy base(cfg.seed, cfg.init_sigma);
    auto policy = distill_generalist(runs, base, cfg);
    std::filesystem::create_directories(out_dir);
    std::string path = out_dir + "/policy_distilled.json";
    policy->save(path);
    emit(g, json{{"policy", path}, {"runs", runs}}, "distilled policy saved to " + path + "\n");
    return kOk;
}

int cmd_reward(const GlobalOpts& g, const std::string& pred_text, const std::string& ref_text,
               const std::string& geom_text) {
    size_t x = geom_text.find('x');
    if (x == std::string::npos) throw ConfigError("--geom must look like WxH, e.g. 800x600");
    ScreenGeometry geom{std::stoi(geom_text.substr(0, x)), std::stoi(geom_text.substr(x + 1))};
    Action pred = parse_action(pred_text);
    Action ref = parse_action(ref_text);
    RewardBreakdown r = reward(pred, ref, geom);
    json doc{{"type_match", r.type_match}, {"r_dist", r.r_dist}, {"total", r.total}};
    std::ostringstream plain;
    plain << "type_match: " << (r.type_match ? 1 : 0) << "\nr_dist: " << r.r_dist
          << "\ntotal: " << r.total << "\n";
    emit(g, doc, plain.str());
    return kOk;
}

struct JudgmentLine {
    bool correctness = false;
    double confidence = 0.0;
};

std::map<std::string, JudgmentLine> read_judgment_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::map<std::string, JudgmentLine> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.contains("episode_id"))
            throw SchemaError(path + ":" + std::to_string(lineno) + ": bad judgment record");
        JudgmentLine jl;
        if (rec.contains("Correctness")) {
            jl.correctness = rec["Correctness"].get<bool>();
            jl.confidence = rec.value("Confidence", jl.correctness ? 1.0 : 0.0);
        } else if (rec.contains("judgment")) {
            Judgment j = judgment_from_json(rec["judgment"]);
            jl.correctness = j.correctness;
            jl.confidence = j.confidence;
        } else {
            throw SchemaError(path + ":" + std::to_string(lineno) + ": no verdict in record");
        }
        out[rec["episode_id"].get<std::string>()] = jl;
    }
    return out;
}

int cmd_bench_judge(const GlobalOpts& g, const std::vector<std::string>& pred_paths,
                    const std::string& gt_path, const std::string& csv_path) {
    auto gt = read_judgment_jsonl(gt_path);
    json reports = json::array();
    std::ostringstream plain;
    std::ostringstream csv;
    csv << "pred_file,n,ap\n";
    for (const auto& pred_path : pred_paths) {
        auto preds = read_judgment_jsonl(pred_path);
        std::vector<bool> p, t;
        std::vector<double> scores;
        for (const auto& [id, jl] : gt) {
            auto it = preds.find(id);
            if (it == preds.end())
                throw SchemaError(pred_path + ": missing prediction for episode '" + id + "'");
            p.push_back(it->second.correctness);
            scores.push_back(it->second.confidence);
            t.push_back(jl.correctness);
        }
        ConfusionMatrix m = confusion(p, t);
        PrecisionNpv pn = precision_npv(m);
        double ap = average_precision(scores, t);
        json rep{{"pred_file", pred_path},
                 {"n", p.size()},
                 {"tp", m.tp},
                 {"fp", m.fp},
                 {"tn", m.tn},
                 {"fn", m.fn},
                 {"precision", pn.precision ? json(*pn.precision) : json(nullptr)},
                 {"npv", pn.npv ? json(*pn.npv) : json(nullptr)},
                 {"average_precision", ap}};
        reports.push_back(rep);
        plain << pred_path << ": tp=" << m.tp << " fp=" << m.fp << " tn=" << m.tn
              << " fn=" << m.fn;
        if (pn.precision) plain << " precision=" << *pn.precision;
        if (pn.npv) plain << " npv=" << *pn.npv;
        plain << " ap=" << ap << "\n";
        csv << pred_path << "," << p.size() << "," << ap << "\n";
    }
    if (pred_paths.size() > 1) {
        std::ofstream out(csv_path);
        out << csv.str();
        plain << "AP curve written to " << csv_path << "\n";
    }
    emit(g, pred_paths.size() == 1 ? reports[0] : json{{"reports", reports}}, plain.str());
    return kOk;
}

int cmd_inspect(const GlobalOpts& g, const std::string& traj_path, const std::string& episode) {
    std::ifstream in(traj_path);
    if (!in) throw ConfigError("cannot open " + traj_path);
    json out = json::array();
    std::ostringstream plain;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded())
            throw SchemaError(traj_path + ":" + std::to_string(lineno) + ": bad record");
        std::string id = rec.value("episode_id", std::string{});
        if (!episode.empty() && id != episode) continue;
        Trajectory traj = trajectory_from_record(rec);
        json summary{{"episode_id", traj.episode_id},
                     {"task_id", traj.task_id},
                     {"task", traj.task},
                     {"phase", traj.phase_index},
                     {"steps", traj.steps.size()}};
        if (rec.contains("judgment")) summary["judgment"] = rec["judgment"];
        if (rec.contains("labels")) summary["labels"] = rec["labels"];
        out.push_back(summary);
        plain << traj.episode_id << " task=" << traj.task_id << " steps=" << traj.steps.size();
        if (rec.contains("judgment"))
            plain << " correct=" << (rec["judgment"]["Correctness"].get<bool>() ? "yes" : "no");
        plain << "\n";
        for (const auto& s : traj.steps)
            plain << "  [" << s.state.screen_id << "] " << serialize_action(s.action) << "\n";
    }
    if (!episode.empty() && out.empty())
        throw ConfigError("episode '" + episode + "' not found in " + traj_path);
    emit(g, out, plain.str());
    return kOk;
}

int cmd_validate_env(const GlobalOpts& g, const std::string& path) {
    EnvDefinition env = EnvDefinition::load(path);
    json doc{{"name", env.name()},
             {"screens", env.screens().size()},
             {"transitions", env.transitions().size()},
             {"tasks", env.tasks().size()},
             {"warnings", env.load_warnings()}};
    std::ostringstream plain;
    plain << env.name() << ": " << env.screens().size() << " screens, "
          << env.transitions().size() << " transitions, " << env.tasks().size() << " tasks\n";
    for (const auto& w : env.load_warnings()) plain << "warning: " << w << "\n";
    emit(g, doc, plain.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evoforge: self-evolving GUI-agent training pipeline"};
    app.require_subcommand(1);

    GlobalOpts g;
    std::uint64_t seed_val = 0;
    int par_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "Override run seed");
    auto* par_opt = app.add_option("--parallelism", par_val, "Concurrent episode bound");
    app.add_flag("--json", g.json_out, "Machine-readable output (single JSON document)");

    std::string config_path, out_dir, pred_action, ref_action, geom = "800x600";
    std::string gt_path, csv_path = "ap_curve.csv", traj_path, episode, env_path;
    std::vector<std::string> run_dirs, pred_paths;

    auto* run = app.add_subcommand("run", "Run the evolution loop");
    run->fallthrough();
    run->add_option("--config", config_path, "Run configuration file")->required();

    auto* distill = app.add_subcommand("distill", "Distill specialists into one policy");
    distill->fallthrough();
    distill->add_option("--runs", run_dirs, "Specialist run directories")->required();
    distill->add_option("--out", out_dir, "Output directory")->required();
    distill->add_option("--config", config_path, "Training configuration file");

    auto* reward_cmd = app.add_subcommand("reward", "Score one action against a reference");
    reward_cmd->fallthrough();
    reward_cmd->add_option("--pred", pred_action, "Predicted action text")->required();
    reward_cmd->add_option("--ref", ref_action, "Reference action text")->required();
    reward_cmd->add_option("--geom", geom, "Screen geometry WxH");

    auto* bench = app.add_subcommand("bench-judge", "Evaluate judge predictions");
    bench->fallthrough();
    bench->add_option("--pred", pred_paths, "Prediction JSONL file(s)")->required();
    bench->add_option("--gt", gt_path, "Ground-truth JSONL file")->required();
    bench->add_option("--csv", csv_path, "AP curve CSV path (multi-file mode)");

    auto* inspect = app.add_subcommand("inspect", "Summarize a trajectory dump");
    inspect->fallthrough();
    inspect->add_option("--traj", traj_path, "Trajectory JSONL file")->required();
    inspect->add_option("--episode", episode, "Only this episode id");

    auto* validate = app.add_subcommand("validate-env", "Check an environment file");
    validate->fallthrough();
    validate->add_option("file", env_path, "Environment JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::ostringstream usage;
        usage << app.help();
        std::cerr << e.what() << "\n" << usage.str();
        return kUsage;
    }
    if (*seed_opt) g.seed = seed_val;
    if (*par_opt) g.parallelism = par_val;

    try {
        if (*run) return cmd_run(g, config_path);
        if (*distill) return cmd_distill(g, run_dirs, out_dir, config_path);
        if (*reward_cmd) return cmd_reward(g, pred_action, ref_action, geom);
        if (*bench) return cmd_bench_judge(g, pred_paths, gt_path, csv_path);
        if (*inspect) return cmd_inspect(g, traj_path, episode);
        if (*validate) return cmd_validate_env(g, env_path);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return classify(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    std::cerr << "unknown subcommand\n" << app.help();
    return kUsage;
}
