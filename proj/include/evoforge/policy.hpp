#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "evoforge/action.hpp"
#include "evoforge/judgment.hpp"

namespace evoforge {

// Deterministic candidate action menu derived from an observation:
// a point action at each widget center, a typed string per widget label,
// then wait() and finished(). Policies choose among these when acting.
std::vector<Action> candidate_actions(const StateObservation& obs);

class Policy {
  public:
    virtual ~Policy() = default;

    // Draws `g` action token sequences for (state, instruction). At
    // temperature 0 this is a deterministic argmax.
    virtual std::vector<TokenSequence> sample(const StateObservation& state,
                                              const std::string& instruction, int g,
                                              double temperature,
                                              std::mt19937_64& rng) const = 0;

    // Per-token log-probabilities of `tokens` under this policy.
    virtual std::vector<double> token_logprobs(const StateObservation& state,
                                               const std::string& instruction,
                                               const TokenSequence& tokens) const = 0;

    // Frozen reference copy (π_ref).
    virtual std::unique_ptr<Policy> snapshot() const = 0;
};

// Sparse gradient w.r.t. a ToyPolicy parameter table: context -> per-token
// partial derivatives.
using GradientMap = std::unordered_map<std::uint64_t, std::vector<double>>;

// Tabular softmax policy over the action DSL vocabulary, indexed by a
// stable hash of (screen_id, instruction, token position). Base logits are
// a pure function of (seed, context, token) so initialization is
// order-independent; learned deltas live in the table.
class ToyPolicy : public Policy {
  public:
    explicit ToyPolicy(std::uint64_t init_seed = 0, double init_sigma = 0.0);

    std::vector<TokenSequence> sample(const StateObservation& state,
                                      const std::string& instruction, int g,
                                      double temperature, std::mt19937_64& rng) const override;
    std::vector<double> token_logprobs(const StateObservation& state,
                                       const std::string& instruction,
                                       const TokenSequence& tokens) const override;
    std::unique_ptr<Policy> snapshot() const override;
    std::unique_ptr<ToyPolicy> clone() const;

    // Greedy candidate (argmax of mean token log-probability).
    Action greedy_action(const StateObservation& state, const std::string& instruction) const;

    static std::uint64_t context_key(const std::string& screen_id,
                                     const std::string& instruction, int position);

    double logit(std::uint64_t ctx, int token) const;
    std::vector<double> log_softmax(std::uint64_t ctx) const;
    std::vector<double> probs(std::uint64_t ctx) const;
    double sequence_logprob(const std::string& screen_id, const std::string& instruction,
                            const TokenSequence& tokens) const;

    // Adds `coeff * d logp(token at position)/d θ` into `grad` (softmax
    // jacobian at the position's context).
    void accumulate_logprob_grad(std::uint64_t ctx, int token, double coeff,
                                 GradientMap& grad) const;

    // θ <- θ - lr * grad
    void apply_gradient(const GradientMap& grad, double lr);

    void perturb(std::uint64_t ctx, int token, double delta);  // for finite differences

    void save(const std::string& path) const;
    static std::unique_ptr<ToyPolicy> load_file(const std::string& path);

    int vocab_size() const { return vocab_size_; }

  private:
    int vocab_size_;
    std::uint64_t init_seed_;
    double init_sigma_;
    std::unordered_map<std::uint64_t, std::vector<double>> deltas_;
};

}  // namespace evoforge
