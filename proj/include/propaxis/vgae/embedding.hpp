#pragma once

#include <string>
#include <vector>

#include "propaxis/bhin/graph.hpp"
#include "propaxis/num/matrix.hpp"

namespace propaxis::vgae {

/// The embedding export schema shared by the InfoVGAE and NMF paths:
/// CSV with header node_id,kind,mu_0,...,mu_{T-1},assigned_axis.
/// Values are printed with %.17g, so identical embeddings round-trip to
/// byte-identical files.
struct EmbeddingTable {
    std::vector<std::string> node_ids;
    std::vector<bhin::NodeKind> kinds;
    num::Matrix mu;                 // node-aligned rows
    std::vector<int> assigned_axis; // argmax per row

    std::size_t t_dims() const { return mu.cols; }
};

EmbeddingTable make_embedding_table(const bhin::BhinGraph& g, const num::Matrix& mu);

void save_embedding_csv(const EmbeddingTable& table, const std::string& path);
EmbeddingTable load_embedding_csv(const std::string& path);

} // namespace propaxis::vgae
