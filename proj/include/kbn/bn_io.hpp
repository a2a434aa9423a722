#ifndef KBN_BN_IO_HPP
#define KBN_BN_IO_HPP

#include <kbn/bn.hpp>
#include <kbn/dataset.hpp>
#include <kbn/graph.hpp>

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kbn::io {

/// Network JSON:
///   {"variables": [{"name": "A", "states": ["no", "yes"]}, ...],
///    "edges": [["A", "B"], ...],
///    "cpts": {"B": [[0.9, 0.1], [0.2, 0.8]], ...}}
/// `states` and `cpts` are optional. CPT rows follow the parents in
/// variable-declaration order, first parent most significant.
struct NetworkDocument {
    std::vector<std::string> variables;
    std::vector<std::vector<std::string>> states;
    std::vector<NamedEdge> edges;
    std::optional<std::map<std::string, Cpt>> cpts;
};

NetworkDocument read_network_json(std::istream& in);
NetworkDocument read_network_json_file(const std::string& path);

Dag network_dag(const NetworkDocument& doc);
/// Throws InvalidArgument when the document carries no CPTs.
DiscreteBn network_bn(const NetworkDocument& doc);

void write_network_json(std::ostream& out, const DiscreteBn& bn);
void write_graph_json(std::ostream& out, const Dag& dag);

/// Header row of variable names; cells are state labels. Labels map to
/// indices in first-appearance order, unless `states` (from a network file)
/// fixes the order, in which case unknown labels are MalformedRow.
Dataset read_dataset_csv(std::istream& in, const NetworkDocument* states = nullptr);
Dataset read_dataset_csv_file(const std::string& path, const NetworkDocument* states = nullptr);

void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv_file(const std::string& path, const Dataset& data);

}  // namespace kbn::io

#endif  // KBN_BN_IO_HPP
