#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "propaxis/ndup/assertions.hpp"
#include "propaxis/num/matrix.hpp"

namespace propaxis::bhin {

struct PostRecord {
    std::string user_id;
    std::string image_id;
};

enum class NodeKind { User, Assertion };

/// Bipartite user-assertion interaction graph. Nodes are ordered users first
/// (sorted by id), then assertions (sorted by id); every edge joins a User to
/// an Assertion; edges are unique, undirected and unweighted. A single edge
/// kind (post/repost) is used; the persisted schema keeps a kind slot free
/// for future relation types.
struct BhinGraph {
    struct Node {
        std::string id;
        NodeKind kind;
    };

    std::vector<Node> nodes;
    // (user index, assertion index) into nodes, sorted, no duplicates.
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const { return edges.size(); }
    std::vector<std::size_t> degrees() const;
};

/// Inputs to the encoder: adjacency with self-loops, symmetrically normalized
/// adjacency, and the identity feature matrix (featureless nodes).
struct PreparedInputs {
    num::Matrix a;      // adjacency + I, symmetric 0/1 with unit diagonal
    num::Matrix atilde; // D^{-1/2} A D^{-1/2}
    num::Matrix x;      // identity, F = N
    bool x_is_identity = true;
};

/// Parses JSON-lines {"user_id": ..., "image_id": ...}. Malformed lines
/// raise an error carrying the 1-based line number. Duplicates are retained.
std::vector<PostRecord> ingest_posts(const std::string& path);

/// One User node per distinct user id, one Assertion node per assertion;
/// edge (u, a) iff u posted any image of a. A post whose image belongs to no
/// assertion is an error.
BhinGraph build_graph(std::span<const PostRecord> posts,
                      std::span<const ndup::VisualAssertion> assertions);

/// Single pass: drops every node whose degree in the input graph is
/// <= min_deg, along with incident edges; node order is preserved. With
/// to_fixpoint the pass repeats until no node is dropped. An empty result is
/// an error suggesting a lower threshold.
BhinGraph filter_min_degree(const BhinGraph& g, std::size_t min_deg, bool to_fixpoint = false);

PreparedInputs prepare_inputs(const BhinGraph& g);

/// JSON persistence: {"nodes":[{"id","kind"}...], "edges":[[uid,aid]...]}.
void save_graph_json(const BhinGraph& g, const std::string& path);
BhinGraph load_graph_json(const std::string& path);

} // namespace propaxis::bhin
