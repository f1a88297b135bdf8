#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "propaxis/bhin/graph.hpp"
#include "propaxis/eval/metrics.hpp"
#include "propaxis/ndup/assertions.hpp"

namespace propaxis::synth {

/// Planted two-camp bipartite generator. Each side's users link to same-side
/// assertions with p_in and to the other side with p_out. Neutral assertions
/// make up neutral_fraction of the final assertion total and link to any
/// user with p_neutral (default (p_in + p_out) / 2).
struct SynthGraphConfig {
    int users_per_side = 100;
    int assertions_per_side = 200;
    double neutral_fraction = 0.0; // in [0, 1)
    double p_in = 0.05;
    double p_out = 0.001;
    std::optional<double> p_neutral; // defaults to (p_in + p_out) / 2
    std::uint64_t seed = 42;

    void validate() const;
};

struct SynthGraph {
    std::vector<bhin::PostRecord> posts;
    std::vector<ndup::VisualAssertion> assertions; // one synthetic image each
    eval::GroundTruth truth; // neutral assertions carry a uniform side label and the neutral flag
};

SynthGraph gen_graph(const SynthGraphConfig& cfg);

} // namespace propaxis::synth
