#pragma once

#include <random>
#include <vector>

#include "evoforge/policy.hpp"
#include "evoforge/reward.hpp"

namespace evoforge {

// Group-standardized advantages: (r - mean) / population std; the zero
// vector when the group is degenerate (std = 0).
std::vector<double> group_advantages(const std::vector<double>& rewards);

// Unbiased nonnegative KL estimator: exp(d) - 1 - d with d = logp_ref - logp_theta.
double kl_estimate(double logp_ref, double logp_theta);

// Clipped GRPO loss from precomputed per-token log-probabilities.
double grpo_loss_value(const std::vector<std::vector<double>>& logp_theta,
                       const std::vector<std::vector<double>>& logp_ref,
                       const std::vector<double>& advantages, double eps, double beta);

// Same loss evaluated against a ToyPolicy pair; optionally accumulates
// scale * dLoss/dθ into `grad`.
double grpo_loss(const ToyPolicy& theta, const ToyPolicy& ref, const StateObservation& state,
                 const std::string& instruction, const std::vector<TokenSequence>& group,
                 const std::vector<double>& advantages, double eps, double beta,
                 GradientMap* grad = nullptr, double scale = 1.0);

// Adversarial-imitation loss: clamp(sum_t log pi_theta - log pi_ref, floor -M).
// Minimizing pushes the failure action's probability below the reference.
double ai_loss_value(double seq_logp_theta, double seq_logp_ref, double clamp_m);
double ai_loss(const ToyPolicy& theta, const ToyPolicy& ref, const StateObservation& state,
               const std::string& instruction, const TokenSequence& failure_action,
               double clamp_m, GradientMap* grad = nullptr, double scale = 1.0);

struct BatchItem {
    StateObservation state;
    std::string instruction;
    Action reference;     // a_T for positive items, a_F for negative items
    bool positive = true;
    ScreenGeometry geom;
};

struct TrainingBatch {
    std::vector<BatchItem> items;
};

struct StepConfig {
    int group_size = 8;
    double eps = 0.2;
    double beta = 0.04;
    double gamma = 0.2;
    double lr = 2e-5;
    double clamp_m = 5.0;
    double group_temperature = 1.0;  // sampling temperature for group rollouts
};

struct LossReport {
    double grpo = 0.0;
    double ai = 0.0;
    double total = 0.0;
    double mean_reward = 0.0;
};

// One combined gradient step: GRPO over positive items (groups sampled
// from the reference policy), adversarial imitation over negative items,
// total = L_GRPO + gamma * L_AI.
LossReport combined_step(const TrainingBatch& batch, ToyPolicy& policy, const ToyPolicy& ref,
                         const StepConfig& cfg, std::mt19937_64& rng);

// One supervised step maximizing mean log-likelihood of the given actions.
// Returns the loss (negative mean sequence log-likelihood).
double behavior_cloning_step(const std::vector<BatchItem>& successes, ToyPolicy& policy,
                             double lr);

}  // namespace evoforge
