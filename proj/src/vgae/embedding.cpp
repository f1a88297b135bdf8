#include "propaxis/vgae/embedding.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "propaxis/common/error.hpp"
#include "propaxis/eval/metrics.hpp"

namespace propaxis::vgae {

EmbeddingTable make_embedding_table(const bhin::BhinGraph& g, const num::Matrix& mu) {
    if (g.nodes.size() != mu.rows)
        raise(ErrorKind::Shape, "embedding: graph has " + std::to_string(g.nodes.size()) +
                                    " nodes but mu has " + std::to_string(mu.rows) + " rows");
    EmbeddingTable t;
    t.mu = mu;
    t.node_ids.reserve(g.nodes.size());
    t.kinds.reserve(g.nodes.size());
    t.assigned_axis.reserve(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        t.node_ids.push_back(g.nodes[i].id);
        t.kinds.push_back(g.nodes[i].kind);
        std::span<const double> row(mu.data.data() + i * mu.cols, mu.cols);
        t.assigned_axis.push_back(eval::assign_axis(row).axis);
    }
    return t;
}

void save_embedding_csv(const EmbeddingTable& table, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::Io, "cannot write " + path);
    f << "node_id,kind";
    for (std::size_t k = 0; k < table.t_dims(); ++k) f << ",mu_" << k;
    f << ",assigned_axis\n";
    char buf[64];
    for (std::size_t i = 0; i < table.node_ids.size(); ++i) {
        f << table.node_ids[i] << ','
          << (table.kinds[i] == bhin::NodeKind::User ? "user" : "assertion");
        for (std::size_t k = 0; k < table.t_dims(); ++k) {
            std::snprintf(buf, sizeof(buf), "%.17g", table.mu.at(i, k));
            f << ',' << buf;
        }
        f << ',' << table.assigned_axis[i] << '\n';
    }
}

EmbeddingTable load_embedding_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) raise(ErrorKind::Io, "cannot read " + path);
    std::string line;
    if (!std::getline(f, line))
        raise(ErrorKind::Malformed, path + ": empty embedding file");

    std::size_t t_dims = 0;
    {
        std::stringstream header(line);
        std::string col;
        std::vector<std::string> cols;
        while (std::getline(header, col, ',')) cols.push_back(col);
        if (cols.size() < 4 || cols[0] != "node_id" || cols[1] != "kind" ||
            cols.back() != "assigned_axis")
            raise(ErrorKind::Malformed, path + ": unexpected embedding header");
        t_dims = cols.size() - 3;
    }

    std::vector<std::string> ids;
    std::vector<bhin::NodeKind> kinds;
    std::vector<double> values;
    std::vector<int> axes;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != t_dims + 3)
            raise(ErrorKind::Malformed,
                  path + ": wrong column count at line " + std::to_string(lineno));
        ids.push_back(cells[0]);
        if (cells[1] == "user") kinds.push_back(bhin::NodeKind::User);
        else if (cells[1] == "assertion") kinds.push_back(bhin::NodeKind::Assertion);
        else raise(ErrorKind::Malformed, path + ": unknown kind at line " + std::to_string(lineno));
        for (std::size_t k = 0; k < t_dims; ++k) values.push_back(std::stod(cells[2 + k]));
        axes.push_back(std::stoi(cells.back()));
    }

    EmbeddingTable t;
    t.node_ids = std::move(ids);
    t.kinds = std::move(kinds);
    t.mu = num::Matrix(t.node_ids.size(), t_dims);
    t.mu.data = std::move(values);
    t.assigned_axis = std::move(axes);
    return t;
}

} // namespace propaxis::vgae
