#ifndef KBN_GRAPH_IO_HPP
#define KBN_GRAPH_IO_HPP

#include <kbn/graph.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace kbn::io {

// Edge list CSV, header `ID,Parent,Child`. Rows keep file order.
std::vector<NamedEdge> read_edge_list(std::istream& in);
std::vector<NamedEdge> read_edge_list_file(const std::string& path);

void write_edge_list(std::ostream& out, const Dag& dag);
void write_edge_list_file(const std::string& path, const Dag& dag);

/// One name per line, or a CSV whose header row lists the names.
std::vector<std::string> read_variable_manifest(const std::string& path);

}  // namespace kbn::io

#endif  // KBN_GRAPH_IO_HPP
