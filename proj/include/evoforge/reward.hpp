#pragma once

#include "evoforge/action.hpp"
#include "evoforge/errors.hpp"

namespace evoforge {

struct ScreenGeometry {
    int width = 0;
    int height = 0;
};

// Verifiable per-action reward: type-match indicator plus a type-specific
// distance reward in [0,1]; total in [0,2].
struct RewardBreakdown {
    int type_match = 0;
    double r_dist = 0.0;
    double total = 0.0;
};

// max(0, 1 - (|dx|/W + |dy|/H)/2); points clamped into the screen first.
double l1_point_reward(Point pred, Point ref, ScreenGeometry geom);

// area(pred ∩ ref) / area(pred ∪ ref).
double iou_reward(const Box& pred, const Box& ref);

// Character-level BLEU with n-grams up to N = min(4,|pred|,|ref|),
// add-one smoothing on every precision, standard brevity penalty.
double char_bleu(const std::string& pred, const std::string& ref);

RewardBreakdown reward(const Action& pred, const Action& ref, ScreenGeometry geom);

}  // namespace evoforge
