#pragma once

#include <optional>
#include <vector>

#include "evoforge/errors.hpp"

namespace evoforge {

struct ConfusionMatrix {
    int tp = 0, fp = 0, tn = 0, fn = 0;
    int total() const { return tp + fp + tn + fn; }
};

ConfusionMatrix confusion(const std::vector<bool>& preds, const std::vector<bool>& truth);

struct PrecisionNpv {
    std::optional<double> precision;  // absent when tp + fp = 0
    std::optional<double> npv;        // absent when tn + fn = 0
};

PrecisionNpv precision_npv(const ConfusionMatrix& m);

// Mean precision-at-rank over positives, scores ranked descending with
// stable ties by input order.
double average_precision(const std::vector<double>& scores, const std::vector<bool>& truth);

}  // namespace evoforge
