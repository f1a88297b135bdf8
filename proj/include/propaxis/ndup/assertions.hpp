#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace propaxis::ndup {

/// A connected component of near-duplicate images. Assertion sets partition
/// the corpus: every image belongs to exactly one assertion (singletons
/// allowed).
struct VisualAssertion {
    std::int64_t assertion_id = 0;
    std::vector<std::string> image_ids; // sorted
};

/// Connected components over verified near-duplicate pairs (union-find).
/// Components are ordered by their smallest member image id and numbered
/// 0, 1, 2, ... in that order. Unknown pair endpoints are an error.
std::vector<VisualAssertion> cluster_assertions(
    std::span<const std::pair<std::string, std::string>> verified_pairs,
    std::span<const std::string> all_ids);

/// JSON-lines persistence: {"assertion_id": int, "image_ids": [...]}.
void save_assertions_jsonl(std::span<const VisualAssertion> assertions, const std::string& path);
std::vector<VisualAssertion> load_assertions_jsonl(const std::string& path);

} // namespace propaxis::ndup
