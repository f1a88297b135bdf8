#include "propaxis/bhin/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "propaxis/common/error.hpp"

namespace propaxis::bhin {

std::vector<std::size_t> BhinGraph::degrees() const {
    std::vector<std::size_t> deg(nodes.size(), 0);
    for (const auto& [u, a] : edges) {
        ++deg[u];
        ++deg[a];
    }
    return deg;
}

std::vector<PostRecord> ingest_posts(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::Io, "cannot read " + path);
    std::vector<PostRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("user_id") ||
            !j.contains("image_id") || !j["user_id"].is_string() || !j["image_id"].is_string())
            raise(ErrorKind::Malformed,
                  path + ": malformed post record at line " + std::to_string(lineno));
        PostRecord r{j["user_id"].get<std::string>(), j["image_id"].get<std::string>()};
        if (r.user_id.empty() || r.image_id.empty())
            raise(ErrorKind::Malformed,
                  path + ": empty user_id or image_id at line " + std::to_string(lineno));
        out.push_back(std::move(r));
    }
    return out;
}

BhinGraph build_graph(std::span<const PostRecord> posts,
                      std::span<const ndup::VisualAssertion> assertions) {
    std::map<std::string, std::int64_t> image_to_assertion;
    for (const auto& a : assertions)
        for (const auto& img : a.image_ids)
            if (!image_to_assertion.emplace(img, a.assertion_id).second)
                raise(ErrorKind::Data,
                      "build_graph: image '" + img + "' appears in more than one assertion");

    std::set<std::string> user_ids;
    for (const auto& p : posts) user_ids.insert(p.user_id);

    BhinGraph g;
    std::map<std::string, std::size_t> user_index;
    for (const auto& uid : user_ids) {
        user_index.emplace(uid, g.nodes.size());
        g.nodes.push_back({uid, NodeKind::User});
    }

    std::vector<std::int64_t> assertion_ids;
    assertion_ids.reserve(assertions.size());
    for (const auto& a : assertions) assertion_ids.push_back(a.assertion_id);
    std::sort(assertion_ids.begin(), assertion_ids.end());
    std::map<std::int64_t, std::size_t> assertion_index;
    for (std::int64_t aid : assertion_ids) {
        assertion_index.emplace(aid, g.nodes.size());
        g.nodes.push_back({std::to_string(aid), NodeKind::Assertion});
    }

    std::set<std::pair<std::size_t, std::size_t>> edge_set;
    for (const auto& p : posts) {
        auto it = image_to_assertion.find(p.image_id);
        if (it == image_to_assertion.end())
            raise(ErrorKind::Data,
                  "build_graph: post by '" + p.user_id + "' references image '" + p.image_id +
                      "' that belongs to no assertion");
        edge_set.emplace(user_index.at(p.user_id), assertion_index.at(it->second));
    }
    g.edges.assign(edge_set.begin(), edge_set.end());
    return g;
}

BhinGraph filter_min_degree(const BhinGraph& g, std::size_t min_deg, bool to_fixpoint) {
    BhinGraph cur = g;
    for (;;) {
        const std::vector<std::size_t> deg = cur.degrees();
        std::vector<std::size_t> remap(cur.nodes.size(), static_cast<std::size_t>(-1));
        BhinGraph next;
        for (std::size_t i = 0; i < cur.nodes.size(); ++i) {
            if (deg[i] > min_deg) {
                remap[i] = next.nodes.size();
                next.nodes.push_back(cur.nodes[i]);
            }
        }
        for (const auto& [u, a] : cur.edges)
            if (remap[u] != static_cast<std::size_t>(-1) && remap[a] != static_cast<std::size_t>(-1))
                next.edges.emplace_back(remap[u], remap[a]);

        const bool changed = next.nodes.size() != cur.nodes.size();
        cur = std::move(next);
        if (!to_fixpoint || !changed) break;
    }
    if (cur.nodes.empty())
        raise(ErrorKind::Data, "filter_min_degree: no node has degree > " +
                                   std::to_string(min_deg) + "; lower the threshold");
    return cur;
}

PreparedInputs prepare_inputs(const BhinGraph& g) {
    if (g.nodes.empty()) raise(ErrorKind::Data, "prepare_inputs: empty graph");
    const std::size_t n = g.nodes.size();
    PreparedInputs out;
    out.a = num::Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) out.a.at(i, i) = 1.0;
    for (const auto& [u, v] : g.edges) {
        out.a.at(u, v) = 1.0;
        out.a.at(v, u) = 1.0;
    }
    std::vector<double> dinvsqrt(n);
    for (std::size_t i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (std::size_t j = 0; j < n; ++j) rowsum += out.a.at(i, j);
        dinvsqrt[i] = 1.0 / std::sqrt(rowsum);
    }
    out.atilde = num::Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.atilde.at(i, j) = dinvsqrt[i] * out.a.at(i, j) * dinvsqrt[j];
    out.x = num::Matrix::identity(n);
    out.x_is_identity = true;
    return out;
}

namespace {
const char* kind_str(NodeKind k) { return k == NodeKind::User ? "user" : "assertion"; }
} // namespace

void save_graph_json(const BhinGraph& g, const std::string& path) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : g.nodes)
        j["nodes"].push_back({{"id", n.id}, {"kind", kind_str(n.kind)}});
    j["edges"] = nlohmann::json::array();
    for (const auto& [u, a] : g.edges)
        j["edges"].push_back({g.nodes[u].id, g.nodes[a].id});
    std::ofstream f(path);
    if (!f) raise(ErrorKind::Io, "cannot write " + path);
    f << j.dump(2) << '\n';
}

BhinGraph load_graph_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::Io, "cannot read " + path);
    nlohmann::json j = nlohmann::json::parse(f, nullptr, false);
    if (j.is_discarded() || !j.contains("nodes") || !j.contains("edges"))
        raise(ErrorKind::Malformed, path + ": malformed graph document");

    BhinGraph g;
    std::map<std::string, std::size_t> user_idx, assertion_idx;
    for (const auto& n : j["nodes"]) {
        const std::string id = n.at("id").get<std::string>();
        const std::string kind = n.at("kind").get<std::string>();
        if (kind == "user") {
            user_idx.emplace(id, g.nodes.size());
            g.nodes.push_back({id, NodeKind::User});
        } else if (kind == "assertion") {
            assertion_idx.emplace(id, g.nodes.size());
            g.nodes.push_back({id, NodeKind::Assertion});
        } else {
            raise(ErrorKind::Malformed, path + ": unknown node kind '" + kind + "'");
        }
    }
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2)
            raise(ErrorKind::Malformed, path + ": edge is not a pair");
        const std::string uid = e[0].get<std::string>();
        const std::string aid = e[1].get<std::string>();
        auto ui = user_idx.find(uid);
        auto ai = assertion_idx.find(aid);
        if (ui == user_idx.end() || ai == assertion_idx.end())
            raise(ErrorKind::Malformed,
                  path + ": edge [" + uid + ", " + aid + "] does not join a user to an assertion");
        g.edges.emplace_back(ui->second, ai->second);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

} // namespace propaxis::bhin
