#pragma once

#include <string>
#include <vector>

#include "evoforge/curriculum.hpp"
#include "evoforge/judgment.hpp"

namespace evoforge {

struct ChatMessage {
    std::string role;
    std::string content;
};

// Minimal OpenAI-compatible chat-completion client. Temperature is pinned
// to 0 so remote replies are as reproducible as the backend allows.
class ChatClient {
  public:
    struct Options {
        std::string base_url;         // e.g. http://127.0.0.1:8080
        std::string model = "judge";
        int max_retries = 3;
        int backoff_ms = 100;         // doubled per retry
        int timeout_sec = 30;
    };

    explicit ChatClient(Options opts);

    // Returns the first choice's message content; throws BackendUnavailable
    // once the retry budget is spent.
    std::string complete(const std::vector<ChatMessage>& messages) const;

    const Options& options() const { return opts_; }

  private:
    Options opts_;
    std::string host_;
    int port_ = 80;
    std::string path_prefix_;
};

class RemoteJudgeBackend : public JudgeBackend {
  public:
    explicit RemoteJudgeBackend(ChatClient client) : client_(std::move(client)) {}

    Judgment judge(const Trajectory& traj) override;
    ChangeDescription describe_change(const StateObservation& before,
                                      const StateObservation& after) override;

  private:
    ChatClient client_;
};

// Remote curriculum generator. Replies must end with a JSON object:
//   init:   {"guidebook": [{"feature","how_to"}...], "tasks": [{"id","text","tier"}...]}
//   evolve: {"guidebook_additions": [...], "tasks": [...]}
class RemoteCurriculumBackend : public CurriculumBackend {
  public:
    explicit RemoteCurriculumBackend(ChatClient client) : client_(std::move(client)) {}

    std::pair<Guidebook, TaskSet> init_tasks(
        const std::vector<std::string>& initial_captions) override;
    std::pair<Guidebook, TaskSet> evolve(const Guidebook& guidebook, const TaskSet& tasks,
                                         const PhaseFeedback& feedback, int n_tasks) override;

  private:
    ChatClient client_;
};

// Renders a trajectory as the judge prompt (instruction, per-step
// observation captions and action texts, final observation).
std::string render_judge_prompt(const Trajectory& traj);

}  // namespace evoforge
