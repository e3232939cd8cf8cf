#include "evoforge/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace evoforge {

using nlohmann::json;

std::vector<Action> candidate_actions(const StateObservation& obs) {
    std::vector<Action> out;
    for (const auto& w : obs.widgets) {
        Point center{(w.box.x1 + w.box.x2) / 2, (w.box.y1 + w.box.y2) / 2};
        out.push_back(Action::point_action(ActionType::click, center));
    }
    for (const auto& w : obs.widgets)
        out.push_back(Action::text_action(ActionType::type_text, w.label));
    out.push_back(Action::simple(ActionType::wait));
    out.push_back(Action::simple(ActionType::finished));
    return out;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(std::uint64_t h, const void* data, size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

std::uint64_t mix(std::uint64_t x) {
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t ToyPolicy::context_key(const std::string& screen_id,
                                     const std::string& instruction, int position) {
    std::uint64_t h = kFnvOffset;
    h = fnv1a(h, screen_id.data(), screen_id.size());
    h = fnv1a(h, "\x1f", 1);
    h = fnv1a(h, instruction.data(), instruction.size());
    h = fnv1a(h, "\x1f", 1);
    h = fnv1a(h, &position, sizeof(position));
    return h;
}

ToyPolicy::ToyPolicy(std::uint64_t init_seed, double init_sigma)
    : vocab_size_(Vocabulary::instance().size()),
      init_seed_(init_seed),
      init_sigma_(init_sigma) {}

double ToyPolicy::logit(std::uint64_t ctx, int token) const {
    double base = 0.0;
    if (init_sigma_ != 0.0) {
        std::uint64_t h = mix(ctx ^ mix(init_seed_ ^ static_cast<std::uint64_t>(token)));
        // uniform in [-1, 1]
        double u = (static_cast<double>(h >> 11) / 9007199254740992.0) * 2.0 - 1.0;
        base = init_sigma_ * u;
    }
    auto it = deltas_.find(ctx);
    if (it != deltas_.end()) base += it->second[static_cast<size_t>(token)];
    return base;
}

std::vector<double> ToyPolicy::log_softmax(std::uint64_t ctx) const {
    std::vector<double> logits(static_cast<size_t>(vocab_size_));
    for (int v = 0; v < vocab_size_; ++v) logits[static_cast<size_t>(v)] = logit(ctx, v);
    double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double l : logits) sum += std::exp(l - mx);
    double lse = mx + std::log(sum);
    for (double& l : logits) l -= lse;
    return logits;
}

std::vector<double> ToyPolicy::probs(std::uint64_t ctx) const {
    std::vector<double> lp = log_softmax(ctx);
    for (double& v : lp) v = std::exp(v);
    return lp;
}

std::vector<double> ToyPolicy::token_logprobs(const StateObservation& state,
                                              const std::string& instruction,
                                              const TokenSequence& tokens) const {
    std::vector<double> out;
    out.reserve(tokens.tokens.size());
    for (size_t t = 0; t < tokens.tokens.size(); ++t) {
        std::uint64_t ctx = context_key(state.screen_id, instruction, static_cast<int>(t));
        out.push_back(log_softmax(ctx)[static_cast<size_t>(tokens.tokens[t])]);
    }
    return out;
}

double ToyPolicy::sequence_logprob(const std::string& screen_id, const std::string& instruction,
                                   const TokenSequence& tokens) const {
    double sum = 0.0;
    for (size_t t = 0; t < tokens.tokens.size(); ++t) {
        std::uint64_t ctx = context_key(screen_id, instruction, static_cast<int>(t));
        sum += log_softmax(ctx)[static_cast<size_t>(tokens.tokens[t])];
    }
    return sum;
}

namespace {

// Length-normalized score so candidates of different lengths compete fairly.
double mean_logprob(const ToyPolicy& p, const StateObservation& s, const std::string& instr,
                    const TokenSequence& seq) {
    return p.sequence_logprob(s.screen_id, instr, seq) /
           static_cast<double>(seq.tokens.size());
}

}  // namespace

std::vector<TokenSequence> ToyPolicy::sample(const StateObservation& state,
                                             const std::string& instruction, int g,
                                             double temperature, std::mt19937_64& rng) const {
    std::vector<Action> cands = candidate_actions(state);
    std::vector<TokenSequence> seqs;
    std::vector<double> scores;
    seqs.reserve(cands.size());
    for (const auto& c : cands) {
        seqs.push_back(tokenize_action(c));
        scores.push_back(mean_logprob(*this, state, instruction, seqs.back()));
    }
    std::vector<TokenSequence> out;
    out.reserve(static_cast<size_t>(g));
    if (temperature <= 0.0) {
        size_t best = 0;
        for (size_t i = 1; i < scores.size(); ++i)
            if (scores[i] > scores[best]) best = i;
        for (int i = 0; i < g; ++i) out.push_back(seqs[best]);
        return out;
    }
    double mx = *std::max_element(scores.begin(), scores.end());
    std::vector<double> weights;
    weights.reserve(scores.size());
    for (double s : scores) weights.push_back(std::exp((s - mx) / temperature));
    std::discrete_distribution<size_t> dist(weights.begin(), weights.end());
    for (int i = 0; i < g; ++i) out.push_back(seqs[dist(rng)]);
    return out;
}

Action ToyPolicy::greedy_action(const StateObservation& state,
                                const std::string& instruction) const {
    std::mt19937_64 rng(0);
    TokenSequence seq = sample(state, instruction, 1, 0.0, rng)[0];
    return parse_action(detokenize(seq));
}

std::unique_ptr<Policy> ToyPolicy::snapshot() const { return clone(); }

std::unique_ptr<ToyPolicy> ToyPolicy::clone() const {
    auto copy = std::make_unique<ToyPolicy>(init_seed_, init_sigma_);
    copy->deltas_ = deltas_;
    return copy;
}

void ToyPolicy::accumulate_logprob_grad(std::uint64_t ctx, int token, double coeff,
                                        GradientMap& grad) const {
    std::vector<double> p = probs(ctx);
    auto& g = grad[ctx];
    if (g.empty()) g.assign(static_cast<size_t>(vocab_size_), 0.0);
    for (int v = 0; v < vocab_size_; ++v)
        g[static_cast<size_t>(v)] -= coeff * p[static_cast<size_t>(v)];
    g[static_cast<size_t>(token)] += coeff;
}

void ToyPolicy::apply_gradient(const GradientMap& grad, double lr) {
    for (const auto& [ctx, g] : grad) {
        auto& d = deltas_[ctx];
        if (d.empty()) d.assign(static_cast<size_t>(vocab_size_), 0.0);
        for (int v = 0; v < vocab_size_; ++v)
            d[static_cast<size_t>(v)] -= lr * g[static_cast<size_t>(v)];
    }
}

void ToyPolicy::perturb(std::uint64_t ctx, int token, double delta) {
    auto& d = deltas_[ctx];
    if (d.empty()) d.assign(static_cast<size_t>(vocab_size_), 0.0);
    d[static_cast<size_t>(token)] += delta;
}

void ToyPolicy::save(const std::string& path) const {
    json doc;
    doc["init_seed"] = init_seed_;
    doc["init_sigma"] = init_sigma_;
    json table = json::object();
    for (const auto& [ctx, d] : deltas_) table[std::to_string(ctx)] = d;
    doc["deltas"] = table;
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
}

std::unique_ptr<ToyPolicy> ToyPolicy::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open policy file: " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("policy file is not valid JSON: " + path);
    auto p = std::make_unique<ToyPolicy>(doc.value("init_seed", 0ULL),
                                         doc.value("init_sigma", 0.0));
    if (doc.contains("deltas"))
        for (auto& [k, v] : doc["deltas"].items())
            p->deltas_[std::stoull(k)] = v.get<std::vector<double>>();
    return p;
}

}  // namespace evoforge
