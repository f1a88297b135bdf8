#include "propaxis/ndup/assertions.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>

#include <json.hpp>

#include "propaxis/common/error.hpp"

namespace propaxis::ndup {

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

std::vector<VisualAssertion> cluster_assertions(
    std::span<const std::pair<std::string, std::string>> verified_pairs,
    std::span<const std::string> all_ids) {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < all_ids.size(); ++i) {
        if (!index.emplace(all_ids[i], i).second)
            raise(ErrorKind::Data, "cluster_assertions: duplicate image id '" + all_ids[i] + "'");
    }

    UnionFind uf(all_ids.size());
    for (const auto& [a, b] : verified_pairs) {
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia == index.end())
            raise(ErrorKind::Data, "cluster_assertions: pair references unknown image id '" + a + "'");
        if (ib == index.end())
            raise(ErrorKind::Data, "cluster_assertions: pair references unknown image id '" + b + "'");
        uf.unite(ia->second, ib->second);
    }

    // Group members per root, keyed by the smallest member id for ordering.
    std::map<std::string, std::vector<std::string>> components;
    std::map<std::size_t, std::string> root_key;
    for (const auto& [id, idx] : index) {
        const std::size_t root = uf.find(idx);
        auto it = root_key.find(root);
        if (it == root_key.end()) {
            // index is iterated in id order, so the first member seen is the
            // smallest id of its component.
            root_key.emplace(root, id);
            components[id].push_back(id);
        } else {
            components[it->second].push_back(id);
        }
    }

    std::vector<VisualAssertion> out;
    out.reserve(components.size());
    std::int64_t next_id = 0;
    for (auto& [key, members] : components) {
        std::sort(members.begin(), members.end());
        out.push_back(VisualAssertion{next_id++, std::move(members)});
    }
    return out;
}

void save_assertions_jsonl(std::span<const VisualAssertion> assertions, const std::string& path) {
    std::ofstream f(path);
    if (!f) raise(ErrorKind::Io, "cannot write " + path);
    for (const auto& a : assertions) {
        nlohmann::json j;
        j["assertion_id"] = a.assertion_id;
        j["image_ids"] = a.image_ids;
        f << j.dump() << '\n';
    }
}

std::vector<VisualAssertion> load_assertions_jsonl(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::Io, "cannot read " + path);
    std::vector<VisualAssertion> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("assertion_id") || !j.contains("image_ids"))
            raise(ErrorKind::Malformed,
                  path + ": malformed assertion record at line " + std::to_string(lineno));
        VisualAssertion a;
        a.assertion_id = j["assertion_id"].get<std::int64_t>();
        a.image_ids = j["image_ids"].get<std::vector<std::string>>();
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace propaxis::ndup
