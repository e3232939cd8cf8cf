#pragma once

#include <stdexcept>
#include <string>

namespace evoforge {

// Base class for all library errors; `code` names the error contract
// (e.g. "UnknownActionName") so callers and tests can match on it.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

#define EVOFORGE_DEFINE_ERROR(Name)                                           \
    class Name : public Error {                                               \
      public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}        \
    }

// action_model
EVOFORGE_DEFINE_ERROR(UnknownActionName);
EVOFORGE_DEFINE_ERROR(MalformedPayload);
EVOFORGE_DEFINE_ERROR(OutOfRangeCoordinate);

// reward_verifiers
EVOFORGE_DEFINE_ERROR(ZeroGeometry);
EVOFORGE_DEFINE_ERROR(DegenerateBoxes);

// judgment
EVOFORGE_DEFINE_ERROR(BackendUnavailable);
EVOFORGE_DEFINE_ERROR(MalformedModelOutput);
EVOFORGE_DEFINE_ERROR(InconsistentJudgment);
EVOFORGE_DEFINE_ERROR(IndexOutOfRange);

// grpo_engine
EVOFORGE_DEFINE_ERROR(GroupTooSmall);
EVOFORGE_DEFINE_ERROR(LengthMismatch);
EVOFORGE_DEFINE_ERROR(EmptyBatch);

// curriculum
EVOFORGE_DEFINE_ERROR(EmptyCaptions);
EVOFORGE_DEFINE_ERROR(InconsistentFeedback);

// sim_env
EVOFORGE_DEFINE_ERROR(SchemaError);
EVOFORGE_DEFINE_ERROR(DanglingReference);
EVOFORGE_DEFINE_ERROR(EpisodeExhausted);
EVOFORGE_DEFINE_ERROR(GoalUnreachable);

// evolution_loop
EVOFORGE_DEFINE_ERROR(ConfigError);
EVOFORGE_DEFINE_ERROR(EnvLoadError);
EVOFORGE_DEFINE_ERROR(NoSuccessfulTrajectories);

// judge_eval
EVOFORGE_DEFINE_ERROR(NoPositives);
EVOFORGE_DEFINE_ERROR(EmptyInput);

#undef EVOFORGE_DEFINE_ERROR

}  // namespace evoforge
