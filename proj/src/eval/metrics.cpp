#include "propaxis/eval/metrics.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include <json.hpp>

#include "propaxis/common/error.hpp"

namespace propaxis::eval {

GroundTruth load_truth_jsonl(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::Io, "cannot read " + path);
    GroundTruth out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("assertion_id") || !j.contains("label"))
            raise(ErrorKind::Malformed,
                  path + ": malformed truth record at line " + std::to_string(lineno));
        const std::int64_t id = j["assertion_id"].get<std::int64_t>();
        const int label = j["label"].get<int>();
        if (label != 0 && label != 1)
            raise(ErrorKind::Malformed,
                  path + ": label must be 0 or 1 at line " + std::to_string(lineno));
        out.labels[id] = label;
        if (j.value("neutral", false)) out.neutral.insert(id);
    }
    return out;
}

void save_truth_jsonl(const GroundTruth& truth, const std::string& path) {
    std::ofstream f(path);
    if (!f) raise(ErrorKind::Io, "cannot write " + path);
    for (const auto& [id, label] : truth.labels) {
        nlohmann::json j;
        j["assertion_id"] = id;
        j["label"] = label;
        if (truth.neutral.count(id)) j["neutral"] = true;
        f << j.dump() << '\n';
    }
}

AxisAssignment assign_axis(std::span<const double> mu_row) {
    if (mu_row.empty()) raise(ErrorKind::Domain, "assign_axis: empty row");
    int best = 0;
    bool tie = false;
    for (int k = 1; k < static_cast<int>(mu_row.size()); ++k) {
        if (mu_row[k] > mu_row[best]) {
            best = k;
            tie = false;
        } else if (mu_row[k] == mu_row[best]) {
            tie = true;
        }
    }
    return {best, tie};
}

bool neutral_flag(std::span<const double> mu_row, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) raise(ErrorKind::Domain, "neutral_flag: delta outside (0,1)");
    double lo = mu_row[0], hi = mu_row[0], maxabs = 0.0;
    for (double v : mu_row) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        maxabs = std::max(maxabs, std::fabs(v));
    }
    if (maxabs < delta) return true;
    if (hi > 0.0 && lo / hi > 1.0 - delta) return true;
    return false;
}

namespace {

struct Counts {
    // confusion[predicted][actual]
    std::array<std::array<std::size_t, 2>, 2> confusion{};
    std::size_t n = 0;
};

MetricsReport metrics_for_mapping(const Counts& c, const std::vector<int>& mapping) {
    MetricsReport r;
    r.axis_mapping = mapping;
    r.n_evaluated = c.n;
    double psum = 0.0, rsum = 0.0, fsum = 0.0;
    for (int cls = 0; cls < 2; ++cls) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (int axis = 0; axis < 2; ++axis) {
            for (int actual = 0; actual < 2; ++actual) {
                const int predicted = mapping[axis];
                const std::size_t n = c.confusion[axis][actual];
                if (predicted == cls && actual == cls) tp += n;
                if (predicted == cls && actual != cls) fp += n;
                if (predicted != cls && actual == cls) fn += n;
            }
        }
        const double p = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 0.0;
        const double rec = (tp + fn) ? static_cast<double>(tp) / (tp + fn) : 0.0;
        const double f = (p + rec > 0.0) ? 2.0 * p * rec / (p + rec) : 0.0;
        psum += p;
        rsum += rec;
        fsum += f;
    }
    r.precision = psum / 2.0;
    r.recall = rsum / 2.0;
    r.f1 = fsum / 2.0;
    // Purity is mapping-independent: majority label per axis cluster.
    std::size_t pure = 0;
    for (int axis = 0; axis < 2; ++axis)
        pure += std::max(c.confusion[axis][0], c.confusion[axis][1]);
    r.purity = c.n ? static_cast<double>(pure) / static_cast<double>(c.n) : 0.0;
    return r;
}

} // namespace

MetricsReport evaluate(const std::map<std::int64_t, int>& assignments, const GroundTruth& truth,
                       const std::set<std::int64_t>& exclude, MappingMode mode) {
    Counts c;
    for (const auto& [id, axis] : assignments) {
        if (exclude.count(id)) continue;
        auto it = truth.labels.find(id);
        if (it == truth.labels.end())
            raise(ErrorKind::Data,
                  "evaluate: assertion " + std::to_string(id) + " has no truth label");
        if (axis != 0 && axis != 1)
            raise(ErrorKind::Data, "evaluate: axis assignment " + std::to_string(axis) +
                                       " outside {0,1} for assertion " + std::to_string(id));
        ++c.confusion[axis][it->second];
        ++c.n;
    }
    if (c.n == 0) raise(ErrorKind::Data, "evaluate: empty evaluation set");

    if (mode == MappingMode::Identity) return metrics_for_mapping(c, {0, 1});

    MetricsReport ident = metrics_for_mapping(c, {0, 1});
    MetricsReport swapped = metrics_for_mapping(c, {1, 0});
    return swapped.f1 > ident.f1 ? swapped : ident;
}

void save_report_json(const MetricsReport& r, const std::string& path) {
    nlohmann::json j;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["f1"] = r.f1;
    j["purity"] = r.purity;
    j["axis_mapping"] = r.axis_mapping;
    j["n_evaluated"] = r.n_evaluated;
    std::ofstream f(path);
    if (!f) raise(ErrorKind::Io, "cannot write " + path);
    f << j.dump(2) << '\n';
}

} // namespace propaxis::eval
