#include "evoforge/grpo.hpp"

#include <cmath>
#include <numeric>

#include "evoforge/errors.hpp"

namespace evoforge {

std::vector<double> group_advantages(const std::vector<double>& rewards) {
    size_t g = rewards.size();
    if (g < 2) throw GroupTooSmall("group size must be >= 2");
    double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / static_cast<double>(g);
    double var = 0.0;
    for (double r : rewards) var += (r - mean) * (r - mean);
    var /= static_cast<double>(g);
    double sd = std::sqrt(var);
    std::vector<double> adv(g, 0.0);
    if (sd == 0.0) return adv;  // degenerate group carries no signal
    for (size_t i = 0; i < g; ++i) adv[i] = (rewards[i] - mean) / sd;
    return adv;
}

double kl_estimate(double logp_ref, double logp_theta) {
    double d = logp_ref - logp_theta;
    return std::exp(d) - 1.0 - d;
}

namespace {

// Clipped-surrogate term and its derivative w.r.t. logp_theta at one token.
struct TokenTerm {
    double value;
    double dvalue_dlogp;
};

TokenTerm token_objective(double logp_theta, double logp_ref, double adv, double eps,
                          double beta) {
    double ratio = std::exp(logp_theta - logp_ref);
    double clipped = std::min(std::max(ratio, 1.0 - eps), 1.0 + eps);
    double u = ratio * adv;
    double v = clipped * adv;
    double obj;
    double dobj;
    if (u <= v) {
        obj = u;
        dobj = adv * ratio;
    } else {
        obj = v;
        bool interior = ratio > 1.0 - eps && ratio < 1.0 + eps;
        dobj = interior ? adv * ratio : 0.0;
    }
    double kl = kl_estimate(logp_ref, logp_theta);
    double dkl = 1.0 - std::exp(logp_ref - logp_theta);
    return {obj - beta * kl, dobj - beta * dkl};
}

}  // namespace

double grpo_loss_value(const std::vector<std::vector<double>>& logp_theta,
                       const std::vector<std::vector<double>>& logp_ref,
                       const std::vector<double>& advantages, double eps, double beta) {
    if (logp_theta.size() != logp_ref.size() || logp_theta.size() != advantages.size())
        throw LengthMismatch("group sizes differ");
    double acc = 0.0;
    for (size_t i = 0; i < logp_theta.size(); ++i) {
        if (logp_theta[i].size() != logp_ref[i].size())
            throw LengthMismatch("token counts differ between theta and ref");
        if (logp_theta[i].empty()) throw LengthMismatch("empty token sequence");
        double seq = 0.0;
        for (size_t t = 0; t < logp_theta[i].size(); ++t)
            seq += token_objective(logp_theta[i][t], logp_ref[i][t], advantages[i], eps, beta)
                       .value;
        acc += seq / static_cast<double>(logp_theta[i].size());
    }
    return -acc / static_cast<double>(logp_theta.size());
}

double grpo_loss(const ToyPolicy& theta, const ToyPolicy& ref, const StateObservation& state,
                 const std::string& instruction, const std::vector<TokenSequence>& group,
                 const std::vector<double>& advantages, double eps, double beta,
                 GradientMap* grad, double scale) {
    if (group.size() != advantages.size()) throw LengthMismatch("group sizes differ");
    double g = static_cast<double>(group.size());
    double acc = 0.0;
    for (size_t i = 0; i < group.size(); ++i) {
        std::vector<double> lt = theta.token_logprobs(state, instruction, group[i]);
        std::vector<double> lr = ref.token_logprobs(state, instruction, group[i]);
        double len = static_cast<double>(lt.size());
        double seq = 0.0;
        for (size_t t = 0; t < lt.size(); ++t) {
            TokenTerm term = token_objective(lt[t], lr[t], advantages[i], eps, beta);
            seq += term.value;
            if (grad) {
                // loss = -(1/G)(1/|a|) sum term  =>  dloss/dlogp = -term'/(G*|a|)
                double coeff = -scale * term.dvalue_dlogp / (g * len);
                std::uint64_t ctx = ToyPolicy::context_key(state.screen_id, instruction,
                                                           static_cast<int>(t));
                theta.accumulate_logprob_grad(ctx, group[i].tokens[t], coeff, *grad);
            }
        }
        acc += seq / len;
    }
    return -acc / g;
}

double ai_loss_value(double seq_logp_theta, double seq_logp_ref, double clamp_m) {
    return std::max(-clamp_m, seq_logp_theta - seq_logp_ref);
}

double ai_loss(const ToyPolicy& theta, const ToyPolicy& ref, const StateObservation& state,
               const std::string& instruction, const TokenSequence& failure_action,
               double clamp_m, GradientMap* grad, double scale) {
    double lt = theta.sequence_logprob(state.screen_id, instruction, failure_action);
    double lr = ref.sequence_logprob(state.screen_id, instruction, failure_action);
    double s = lt - lr;
    if (s <= -clamp_m) return -clamp_m;  // at the floor, gradient is zero
    if (grad) {
        for (size_t t = 0; t < failure_action.tokens.size(); ++t) {
            std::uint64_t ctx =
                ToyPolicy::context_key(state.screen_id, instruction, static_cast<int>(t));
            theta.accumulate_logprob_grad(ctx, failure_action.tokens[t], scale, *grad);
        }
    }
    return s;
}

LossReport combined_step(const TrainingBatch& batch, ToyPolicy& policy, const ToyPolicy& ref,
                         const StepConfig& cfg, std::mt19937_64& rng) {
    if (batch.items.empty()) throw EmptyBatch("training batch is empty");
    int n_pos = 0, n_neg = 0;
    for (const auto& item : batch.items) (item.positive ? n_pos : n_neg)++;

    GradientMap grad;
    LossReport report;
    double reward_sum = 0.0;
    int reward_count = 0;

    for (const auto& item : batch.items) {
        if (item.positive) {
            std::vector<TokenSequence> group = ref.sample(
                item.state, item.instruction, cfg.group_size, cfg.group_temperature, rng);
            std::vector<double> rewards;
            rewards.reserve(group.size());
            for (const auto& seq : group) {
                Action sampled = parse_action(detokenize(seq));
                rewards.push_back(reward(sampled, item.reference, item.geom).total);
                reward_sum += rewards.back();
                ++reward_count;
            }
            std::vector<double> adv = group_advantages(rewards);
            report.grpo += grpo_loss(policy, ref, item.state, item.instruction, group, adv,
                                     cfg.eps, cfg.beta, &grad, 1.0 / n_pos);
        } else {
            TokenSequence a_f = tokenize_action(item.reference);
            report.ai += ai_loss(policy, ref, item.state, item.instruction, a_f, cfg.clamp_m,
                                 &grad, cfg.gamma / n_neg);
        }
    }
    if (n_pos > 0) report.grpo /= n_pos;
    if (n_neg > 0) report.ai /= n_neg;
    report.total = report.grpo + cfg.gamma * report.ai;
    report.mean_reward = reward_count > 0 ? reward_sum / reward_count : 0.0;

    policy.apply_gradient(grad, cfg.lr);
    return report;
}

double behavior_cloning_step(const std::vector<BatchItem>& successes, ToyPolicy& policy,
                             double lr) {
    if (successes.empty()) throw EmptyBatch("behavior cloning batch is empty");
    GradientMap grad;
    double n = static_cast<double>(successes.size());
    double loss = 0.0;
    for (const auto& item : successes) {
        TokenSequence seq = tokenize_action(item.reference);
        loss -= policy.sequence_logprob(item.state.screen_id, item.instruction, seq);
        for (size_t t = 0; t < seq.tokens.size(); ++t) {
            std::uint64_t ctx = ToyPolicy::context_key(item.state.screen_id, item.instruction,
                                                       static_cast<int>(t));
            policy.accumulate_logprob_grad(ctx, seq.tokens[t], -1.0 / n, grad);
        }
    }
    policy.apply_gradient(grad, lr);
    return loss / n;
}

}  // namespace evoforge
