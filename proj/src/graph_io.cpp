#include <kbn/graph_io.hpp>
#include <kbn/bn_io.hpp>
#include <kbn/csv.hpp>
#include <kbn/error.hpp>

#include <fstream>
#include <sstream>

namespace kbn::io {

std::vector<NamedEdge> read_edge_list(std::istream& in) {
    auto rows = csv::read(in);
    if (rows.empty()) throw Error(ErrorKind::MalformedRow, "edge list has no header");
    const auto& header = rows.front();
    if (header.size() != 3 || csv::trim(header[1]) != "Parent" || csv::trim(header[2]) != "Child") {
        throw Error(ErrorKind::MalformedRow, "edge list header must be ID,Parent,Child");
    }
    std::vector<NamedEdge> edges;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 3 || csv::trim(row[1]).empty() || csv::trim(row[2]).empty()) {
            throw Error(ErrorKind::MalformedRow, "malformed edge row " + std::to_string(r + 1));
        }
        edges.emplace_back(csv::trim(row[1]), csv::trim(row[2]));
    }
    return edges;
}

std::vector<NamedEdge> read_edge_list_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Dag& dag) {
    csv::write_row(out, {"ID", "Parent", "Child"});
    std::size_t id = 1;
    for (const auto& e : dag.edges()) {
        csv::write_row(out, {std::to_string(id++), dag.name(e.parent), dag.name(e.child)});
    }
}

void write_edge_list_file(const std::string& path, const Dag& dag) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    write_edge_list(out, dag);
}

std::vector<std::string> read_variable_manifest(const std::string& path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        return read_network_json_file(path).variables;
    }
    auto rows = csv::read_file(path);
    std::vector<std::string> names;
    if (rows.size() == 1 || (!rows.empty() && rows[0].size() > 1)) {
        for (const auto& c : rows[0]) names.push_back(csv::trim(c));
    } else {
        for (const auto& r : rows)
            if (!r.empty() && !csv::trim(r[0]).empty()) names.push_back(csv::trim(r[0]));
    }
    return names;
}

}  // namespace kbn::io
