#ifndef KBN_GRAPH_HPP
#define KBN_GRAPH_HPP

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace kbn {

using VarIndex = std::size_t;

/// Ordered, uniquely named variables. The index of a name is its position
/// in the canonical ordering (the dataset column order) and never changes.
class VariableSet {
public:
    VariableSet() = default;
    explicit VariableSet(std::vector<std::string> names);

    std::size_t size() const { return m_names.size(); }
    const std::vector<std::string>& names() const { return m_names; }
    const std::string& name(VarIndex i) const { return m_names.at(i); }

    std::optional<VarIndex> find(std::string_view name) const;
    /// Throws UnknownVariable.
    VarIndex index_of(std::string_view name) const;

    bool operator==(const VariableSet& other) const { return m_names == other.m_names; }

private:
    std::vector<std::string> m_names;
    std::unordered_map<std::string, VarIndex> m_lookup;
};

using VariablesPtr = std::shared_ptr<const VariableSet>;

VariablesPtr make_variables(std::vector<std::string> names);

struct Edge {
    VarIndex parent = 0;
    VarIndex child = 0;

    auto operator<=>(const Edge&) const = default;
};

/// Unordered pair stored with first < second.
struct VarPair {
    VarIndex first = 0;
    VarIndex second = 0;

    VarPair() = default;
    VarPair(VarIndex a, VarIndex b) : first(a < b ? a : b), second(a < b ? b : a) {}

    auto operator<=>(const VarPair&) const = default;
};

using NamedEdge = std::pair<std::string, std::string>;

/// Directed acyclic graph over a shared variable set.
///
/// Values are immutable from the outside: the with_*/without_* members return
/// modified copies and refuse to create a cycle.
class Dag {
public:
    Dag() = default;
    explicit Dag(VariablesPtr variables);
    /// Throws CycleDetected / DuplicateEdge.
    Dag(VariablesPtr variables, const std::vector<Edge>& edges);

    std::size_t size() const { return m_parents.size(); }
    const VariableSet& variables() const { return *m_variables; }
    const VariablesPtr& variables_ptr() const { return m_variables; }
    const std::string& name(VarIndex v) const { return m_variables->name(v); }

    bool has_edge(VarIndex parent, VarIndex child) const;
    bool has_edge(const Edge& e) const { return has_edge(e.parent, e.child); }
    bool adjacent(VarIndex a, VarIndex b) const { return has_edge(a, b) || has_edge(b, a); }

    /// Sorted ascending.
    const std::vector<VarIndex>& parents(VarIndex v) const { return m_parents.at(v); }
    const std::vector<VarIndex>& children(VarIndex v) const { return m_children.at(v); }
    std::size_t in_degree(VarIndex v) const { return m_parents.at(v).size(); }

    std::size_t edge_count() const { return m_edge_count; }
    /// Sorted by (parent, child).
    std::vector<Edge> edges() const;

    /// True iff a directed path of length >= 1 leads from `from` to `to`.
    bool reaches(VarIndex from, VarIndex to) const;
    /// Same, ignoring one edge of the graph.
    bool reaches_without(VarIndex from, VarIndex to, const Edge& ignored) const;

    std::vector<VarIndex> topological_order() const;

    Dag with_edge(const Edge& e) const;
    Dag without_edge(const Edge& e) const;
    Dag with_reversed(const Edge& e) const;

    bool operator==(const Dag& other) const;

private:
    void insert(const Edge& e);
    void erase(const Edge& e);

    VariablesPtr m_variables;
    std::vector<std::vector<VarIndex>> m_parents;
    std::vector<std::vector<VarIndex>> m_children;
    std::size_t m_edge_count = 0;
};

/// Partially directed graph representing a Markov equivalence class.
struct Cpdag {
    VariablesPtr variables;
    std::set<Edge> directed;
    std::set<VarPair> undirected;

    bool operator==(const Cpdag& other) const {
        return *variables == *other.variables && directed == other.directed &&
               undirected == other.undirected;
    }
};

/// Incomplete temporal ordering; tier 0 is the earliest. Variables absent
/// from every tier are unconstrained.
struct TemporalTiers {
    std::vector<std::vector<std::string>> tiers;

    std::optional<std::size_t> tier_of(std::string_view name) const;
    std::size_t variable_count() const;
    bool operator==(const TemporalTiers&) const = default;
};

/// Builds a Dag from names. Throws UnknownVariable, DuplicateEdge, or
/// CycleDetected (the message spells out one cycle).
Dag validate_dag(const std::vector<std::string>& variables, const std::vector<NamedEdge>& edges);
Dag validate_dag(VariablesPtr variables, const std::vector<NamedEdge>& edges);

/// Every vertex with a directed path to v, v excluded. Sorted.
std::vector<VarIndex> ancestors(const Dag& dag, VarIndex v);
std::vector<VarIndex> ancestors(const Dag& dag, std::string_view v);
std::vector<VarIndex> descendants(const Dag& dag, VarIndex v);

/// Blocks ordered by smallest member; members sorted.
std::vector<std::vector<VarIndex>> weakly_connected_components(const Dag& dag);
bool is_weakly_connected(const Dag& dag);

Cpdag to_cpdag(const Dag& dag);

/// Tier of v is the number of vertices on the longest directed path ending
/// at v, so roots share the first tier and every parent precedes its child.
TemporalTiers layer_by_longest_path(const Dag& dag);

}  // namespace kbn

#endif  // KBN_GRAPH_HPP
