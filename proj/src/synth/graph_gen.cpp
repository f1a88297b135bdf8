#include "propaxis/synth/graph_gen.hpp"

#include <cmath>
#include <cstdio>

#include "propaxis/common/error.hpp"
#include "propaxis/num/rng.hpp"

namespace propaxis::synth {

void SynthGraphConfig::validate() const {
    if (users_per_side < 1 || assertions_per_side < 1)
        raise(ErrorKind::Domain, "synth config: counts must be >= 1");
    if (!(neutral_fraction >= 0.0 && neutral_fraction < 1.0))
        raise(ErrorKind::Domain, "synth config: neutral_fraction must be in [0, 1)");
    auto in01 = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!in01(p_in) || !in01(p_out) || (p_neutral && !in01(*p_neutral)))
        raise(ErrorKind::Domain, "synth config: probabilities must be in [0, 1]");
}

namespace {
std::string padded(const char* prefix, int value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%05d", prefix, value);
    return buf;
}
} // namespace

SynthGraph gen_graph(const SynthGraphConfig& cfg) {
    cfg.validate();
    if (cfg.p_out >= cfg.p_in)
        std::fprintf(stderr,
                     "warning: p_out >= p_in; the planted two-camp structure is degenerate\n");

    const int users = 2 * cfg.users_per_side;
    const int sided = 2 * cfg.assertions_per_side;
    // neutral_fraction is the share of the final assertion total:
    // n / (sided + n) = f  =>  n = sided * f / (1 - f).
    const int n_neutral = static_cast<int>(
        std::llround(static_cast<double>(sided) * cfg.neutral_fraction /
                     (1.0 - cfg.neutral_fraction)));
    const int assertions = sided + n_neutral;
    const double p_neutral = cfg.p_neutral.value_or((cfg.p_in + cfg.p_out) / 2.0);

    num::RngState rng(cfg.seed);
    SynthGraph out;

    // Assertion a < sided belongs to side a / assertions_per_side; the rest
    // are neutral with a uniformly drawn side label recorded as neutral.
    std::vector<int> side(assertions);
    for (int a = 0; a < assertions; ++a) {
        if (a < sided) {
            side[a] = a / cfg.assertions_per_side;
        } else {
            side[a] = static_cast<int>(rng.next_below(2));
            out.truth.neutral.insert(a);
        }
        out.truth.labels[a] = side[a];
        out.assertions.push_back(
            ndup::VisualAssertion{a, {padded("img", a)}});
    }

    for (int u = 0; u < users; ++u) {
        const int user_side = u / cfg.users_per_side;
        const std::string uid = padded("u", u);
        for (int a = 0; a < assertions; ++a) {
            double p;
            if (a >= sided) p = p_neutral;
            else p = side[a] == user_side ? cfg.p_in : cfg.p_out;
            if (rng.next_bernoulli(p))
                out.posts.push_back({uid, padded("img", a)});
        }
    }
    return out;
}

} // namespace propaxis::synth
