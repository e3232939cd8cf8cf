#include "evoforge/reward.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace evoforge {

double l1_point_reward(Point pred, Point ref, ScreenGeometry geom) {
    if (geom.width <= 0 || geom.height <= 0) throw ZeroGeometry("screen geometry must be positive");
    auto clamp = [&](Point p) {
        p.x = std::clamp(p.x, 0, geom.width);
        p.y = std::clamp(p.y, 0, geom.height);
        return p;
    };
    pred = clamp(pred);
    ref = clamp(ref);
    double dx = std::abs(pred.x - ref.x) / static_cast<double>(geom.width);
    double dy = std::abs(pred.y - ref.y) / static_cast<double>(geom.height);
    return std::max(0.0, 1.0 - (dx + dy) / 2.0);
}

double iou_reward(const Box& pred, const Box& ref) {
    double ap = pred.area();
    double ar = ref.area();
    if (ap == 0.0 && ar == 0.0) throw DegenerateBoxes("both boxes have zero area");
    double ix = std::max(0, std::min(pred.x2, ref.x2) - std::max(pred.x1, ref.x1));
    double iy = std::max(0, std::min(pred.y2, ref.y2) - std::max(pred.y1, ref.y1));
    double inter = ix * iy;
    double uni = ap + ar - inter;
    return inter / uni;
}

namespace {

// Count of common n-grams, clipped by reference counts.
int clipped_matches(const std::string& pred, const std::string& ref, int n) {
    std::unordered_map<std::string, int> ref_counts;
    for (size_t i = 0; i + n <= ref.size(); ++i) ref_counts[ref.substr(i, n)]++;
    int matches = 0;
    for (size_t i = 0; i + n <= pred.size(); ++i) {
        auto it = ref_counts.find(pred.substr(i, n));
        if (it != ref_counts.end() && it->second > 0) {
            --it->second;
            ++matches;
        }
    }
    return matches;
}

}  // namespace

double char_bleu(const std::string& pred, const std::string& ref) {
    if (pred.empty() && ref.empty()) return 1.0;
    if (pred.empty() || ref.empty()) return 0.0;
    int n_max = static_cast<int>(std::min({size_t{4}, pred.size(), ref.size()}));
    double log_sum = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        int candidates = static_cast<int>(pred.size()) - n + 1;
        int matches = clipped_matches(pred, ref, n);
        log_sum += std::log((matches + 1.0) / (candidates + 1.0));
    }
    double geo_mean = std::exp(log_sum / n_max);
    double bp = std::min(1.0, std::exp(1.0 - static_cast<double>(ref.size()) / pred.size()));
    return bp * geo_mean;
}

RewardBreakdown reward(const Action& pred, const Action& ref, ScreenGeometry geom) {
    RewardBreakdown out;
    out.type_match = (pred.kind == ref.kind) ? 1 : 0;
    if (out.type_match == 0) {
        // Cross-family distance is undefined; r_dist stays 0.
        out.total = 0.0;
        return out;
    }
    switch (reward_family(ref.kind)) {
        case RewardFamily::point:
            out.r_dist = l1_point_reward(*pred.point, *ref.point, geom);
            break;
        case RewardFamily::box:
            out.r_dist = iou_reward(*pred.box, *ref.box);
            break;
        case RewardFamily::text:
        case RewardFamily::direction:
            out.r_dist = char_bleu(pred.payload_string(), ref.payload_string());
            break;
        case RewardFamily::fixed:
            out.r_dist = 1.0;
            break;
    }
    out.total = out.type_match + out.r_dist;
    return out;
}

}  // namespace evoforge
