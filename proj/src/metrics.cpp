#include "evoforge/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace evoforge {

ConfusionMatrix confusion(const std::vector<bool>& preds, const std::vector<bool>& truth) {
    if (preds.size() != truth.size()) throw LengthMismatch("prediction/truth length mismatch");
    if (preds.empty()) throw EmptyInput("no samples");
    ConfusionMatrix m;
    for (size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] && truth[i]) ++m.tp;
        else if (preds[i] && !truth[i]) ++m.fp;
        else if (!preds[i] && !truth[i]) ++m.tn;
        else ++m.fn;
    }
    return m;
}

PrecisionNpv precision_npv(const ConfusionMatrix& m) {
    PrecisionNpv out;
    if (m.tp + m.fp > 0) out.precision = static_cast<double>(m.tp) / (m.tp + m.fp);
    if (m.tn + m.fn > 0) out.npv = static_cast<double>(m.tn) / (m.tn + m.fn);
    return out;
}

double average_precision(const std::vector<double>& scores, const std::vector<bool>& truth) {
    if (scores.size() != truth.size()) throw LengthMismatch("score/truth length mismatch");
    size_t n_pos = static_cast<size_t>(std::count(truth.begin(), truth.end(), true));
    if (n_pos == 0) throw NoPositives("average precision needs at least one positive");
    std::vector<size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return scores[a] > scores[b]; });
    double ap = 0.0;
    int seen_pos = 0;
    for (size_t rank = 0; rank < order.size(); ++rank) {
        if (truth[order[rank]]) {
            ++seen_pos;
            ap += static_cast<double>(seen_pos) / static_cast<double>(rank + 1);
        }
    }
    return ap / static_cast<double>(n_pos);
}

}  // namespace evoforge
