#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <numeric>
#include <span>
#include <vector>

#include "remod/error.hpp"

namespace remod::roc {

// ROC AUC with midrank tie handling (equivalent to the Mann-Whitney U
// statistic). Requires both label values to be present.
inline double roc_auc(std::span<const double> scores, std::span<const bool> labels) {
    if (scores.size() != labels.size()) throw Error("scores and labels differ in length");
    std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (bool b : labels) n_pos += b ? 1 : 0;
    std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw Error("ROC AUC undefined: both positive and negative labels required");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (labels[order[k]]) rank_sum_pos += midrank;
        i = j;
    }
    double auc = (rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0) /
                 (static_cast<double>(n_pos) * static_cast<double>(n_neg));
    return auc;
}

inline double roc_auc(std::span<const double> scores, const std::vector<bool>& labels) {
    std::unique_ptr<bool[]> flat(new bool[labels.size()]);
    for (std::size_t i = 0; i < labels.size(); ++i) flat[i] = labels[i];
    return roc_auc(scores, std::span<const bool>(flat.get(), labels.size()));
}

} // namespace remod::roc
