#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace propaxis::eval {

/// Binary side labels per assertion. Neutral assertions keep a (randomly
/// assigned) side label but are tracked separately so callers can exclude
/// them from evaluation.
struct GroundTruth {
    std::map<std::int64_t, int> labels; // assertion_id -> 0|1
    std::set<std::int64_t> neutral;
};

GroundTruth load_truth_jsonl(const std::string& path);
void save_truth_jsonl(const GroundTruth& truth, const std::string& path);

struct AxisAssignment {
    int axis = 0;
    bool tie = false;
};

/// Argmax coordinate of an embedding row; ties resolve to the lowest index
/// and are flagged.
AxisAssignment assign_axis(std::span<const double> mu_row);

/// True for rows near the origin (max-norm < delta) or near the diagonal
/// (min/max coordinate ratio > 1 - delta). Reporting only.
bool neutral_flag(std::span<const double> mu_row, double delta);

enum class MappingMode {
    BestPermutation, // unsupervised: pick the axis->label permutation maximizing macro-F1
    Identity,        // semi-supervised: axis k is label k, as pinned by the anchors
};

struct MetricsReport {
    double precision = 0.0; // macro-averaged over the two classes
    double recall = 0.0;
    double f1 = 0.0;
    double purity = 0.0;
    std::vector<int> axis_mapping; // axis -> label
    std::size_t n_evaluated = 0;
};

/// Evaluates axis assignments (assertion_id -> axis in {0,1}) against ground
/// truth. Assertions in `exclude` are dropped first; every remaining
/// assertion must carry a truth label. Precision/recall/F1 are
/// macro-averaged; purity is the fraction of assertions matching their
/// cluster's majority label.
MetricsReport evaluate(const std::map<std::int64_t, int>& assignments, const GroundTruth& truth,
                       const std::set<std::int64_t>& exclude,
                       MappingMode mode = MappingMode::BestPermutation);

void save_report_json(const MetricsReport& r, const std::string& path);

} // namespace propaxis::eval
