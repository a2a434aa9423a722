#ifndef KBN_KNOWLEDGE_IO_HPP
#define KBN_KNOWLEDGE_IO_HPP

#include <kbn/graph.hpp>
#include <kbn/knowledge.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace kbn::io {

enum class PairHeader { Directed, Undirected };

/// `ID,Parent,Child` for directed pairs, `ID,Var1,Var2` for undirected ones.
/// Pairs keep file order. Throws MalformedRow, or DuplicateConstraint when a
/// pair repeats (in either orientation for undirected files).
std::vector<NamedEdge> parse_edge_constraints(std::istream& in, PairHeader header);
std::vector<NamedEdge> parse_edge_constraints_file(const std::string& path, PairHeader header);

void write_edge_constraints(std::ostream& out, const std::vector<NamedEdge>& pairs, PairHeader header);
void write_edge_constraints_file(const std::string& path, const std::vector<NamedEdge>& pairs, PairHeader header);

/// `ID,Tier 1,...,Tier k`; blank cells are allowed. Throws VariableInTwoTiers.
TemporalTiers parse_tiers(std::istream& in);
TemporalTiers parse_tiers_file(const std::string& path);

void write_tiers(std::ostream& out, const TemporalTiers& tiers);
void write_tiers_file(const std::string& path, const TemporalTiers& tiers);

/// `ID,Decision,Utility`; blank cells are allowed.
BdnAnnotation parse_bdn_roles(std::istream& in);
BdnAnnotation parse_bdn_roles_file(const std::string& path);

void write_bdn_roles(std::ostream& out, const BdnAnnotation& roles);
void write_bdn_roles_file(const std::string& path, const BdnAnnotation& roles);

}  // namespace kbn::io

#endif  // KBN_KNOWLEDGE_IO_HPP
