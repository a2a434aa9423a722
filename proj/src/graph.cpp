#include <kbn/graph.hpp>
#include <kbn/error.hpp>

#include <algorithm>
#include <numeric>

namespace kbn {

VariableSet::VariableSet(std::vector<std::string> names) : m_names(std::move(names)) {
    m_lookup.reserve(m_names.size());
    for (VarIndex i = 0; i < m_names.size(); ++i) {
        if (!m_lookup.emplace(m_names[i], i).second) {
            throw Error(ErrorKind::InvalidArgument, "duplicate variable name '" + m_names[i] + "'");
        }
    }
}

std::optional<VarIndex> VariableSet::find(std::string_view name) const {
    auto it = m_lookup.find(std::string(name));
    if (it == m_lookup.end()) return std::nullopt;
    return it->second;
}

VarIndex VariableSet::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw Error(ErrorKind::UnknownVariable, "unknown variable '" + std::string(name) + "'");
}

VariablesPtr make_variables(std::vector<std::string> names) {
    return std::make_shared<const VariableSet>(std::move(names));
}

// ---------------------------------------------------------------------------

Dag::Dag(VariablesPtr variables)
    : m_variables(std::move(variables)),
      m_parents(m_variables->size()),
      m_children(m_variables->size()) {}

Dag::Dag(VariablesPtr variables, const std::vector<Edge>& edges) : Dag(std::move(variables)) {
    const auto n = size();
    for (const auto& e : edges) {
        if (e.parent >= n || e.child >= n) {
            throw Error(ErrorKind::UnknownVariable, "edge endpoint out of range");
        }
        if (e.parent == e.child) {
            throw Error(ErrorKind::CycleDetected, "self-loop on '" + name(e.parent) + "'");
        }
        if (has_edge(e)) {
            throw Error(ErrorKind::DuplicateEdge,
                        "duplicate edge " + name(e.parent) + " -> " + name(e.child));
        }
        insert(e);
    }
    if (topological_order().size() != n) {
        // Recover one cycle for the message: walk back along parents that are
        // still inside the cyclic remainder.
        std::vector<std::size_t> indeg(n);
        for (VarIndex v = 0; v < n; ++v) indeg[v] = m_parents[v].size();
        std::vector<VarIndex> queue;
        for (VarIndex v = 0; v < n; ++v)
            if (indeg[v] == 0) queue.push_back(v);
        std::vector<bool> removed(n, false);
        while (!queue.empty()) {
            auto v = queue.back();
            queue.pop_back();
            removed[v] = true;
            for (auto c : m_children[v])
                if (--indeg[c] == 0) queue.push_back(c);
        }
        VarIndex start = 0;
        while (removed[start]) ++start;
        std::vector<VarIndex> walk{start};
        std::vector<std::size_t> seen_at(n, n);
        seen_at[start] = 0;
        VarIndex cur = start;
        for (;;) {
            VarIndex next = n;
            for (auto p : m_parents[cur])
                if (!removed[p]) {
                    next = p;
                    break;
                }
            if (seen_at[next] != n) {
                std::string msg = "cycle: ";
                std::vector<VarIndex> cycle(walk.begin() + static_cast<std::ptrdiff_t>(seen_at[next]),
                                            walk.end());
                std::reverse(cycle.begin(), cycle.end());
                for (auto v : cycle) msg += name(v) + " -> ";
                msg += name(cycle.front());
                throw Error(ErrorKind::CycleDetected, msg);
            }
            seen_at[next] = walk.size();
            walk.push_back(next);
            cur = next;
        }
    }
}

bool Dag::has_edge(VarIndex parent, VarIndex child) const {
    const auto& ps = m_parents.at(child);
    return std::binary_search(ps.begin(), ps.end(), parent);
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    out.reserve(m_edge_count);
    for (VarIndex p = 0; p < size(); ++p)
        for (auto c : m_children[p]) out.push_back({p, c});
    return out;
}

bool Dag::reaches(VarIndex from, VarIndex to) const {
    return reaches_without(from, to, Edge{size(), size()});
}

bool Dag::reaches_without(VarIndex from, VarIndex to, const Edge& ignored) const {
    std::vector<bool> seen(size(), false);
    std::vector<VarIndex> stack{from};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto c : m_children[v]) {
            if (v == ignored.parent && c == ignored.child) continue;
            if (c == to) return true;
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
        }
    }
    return false;
}

std::vector<VarIndex> Dag::topological_order() const {
    const auto n = size();
    std::vector<std::size_t> indeg(n);
    for (VarIndex v = 0; v < n; ++v) indeg[v] = m_parents[v].size();
    std::vector<VarIndex> order;
    order.reserve(n);
    // Smallest-index-first Kahn: deterministic.
    std::set<VarIndex> ready;
    for (VarIndex v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.insert(v);
    while (!ready.empty()) {
        auto v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (auto c : m_children[v])
            if (--indeg[c] == 0) ready.insert(c);
    }
    return order;
}

void Dag::insert(const Edge& e) {
    auto& ps = m_parents[e.child];
    ps.insert(std::lower_bound(ps.begin(), ps.end(), e.parent), e.parent);
    auto& cs = m_children[e.parent];
    cs.insert(std::lower_bound(cs.begin(), cs.end(), e.child), e.child);
    ++m_edge_count;
}

void Dag::erase(const Edge& e) {
    auto& ps = m_parents[e.child];
    ps.erase(std::lower_bound(ps.begin(), ps.end(), e.parent));
    auto& cs = m_children[e.parent];
    cs.erase(std::lower_bound(cs.begin(), cs.end(), e.child));
    --m_edge_count;
}

Dag Dag::with_edge(const Edge& e) const {
    if (e.parent == e.child || e.parent >= size() || e.child >= size()) {
        throw Error(ErrorKind::InvalidArgument, "invalid edge");
    }
    if (adjacent(e.parent, e.child)) {
        throw Error(ErrorKind::DuplicateEdge, "pair already adjacent");
    }
    if (reaches(e.child, e.parent)) {
        throw Error(ErrorKind::CycleDetected,
                    "adding " + name(e.parent) + " -> " + name(e.child) + " creates a cycle");
    }
    Dag out = *this;
    out.insert(e);
    return out;
}

Dag Dag::without_edge(const Edge& e) const {
    if (!has_edge(e)) throw Error(ErrorKind::InvalidArgument, "edge not present");
    Dag out = *this;
    out.erase(e);
    return out;
}

Dag Dag::with_reversed(const Edge& e) const {
    if (!has_edge(e)) throw Error(ErrorKind::InvalidArgument, "edge not present");
    if (reaches_without(e.parent, e.child, e)) {
        throw Error(ErrorKind::CycleDetected, "reversal creates a cycle");
    }
    Dag out = *this;
    out.erase(e);
    out.insert({e.child, e.parent});
    return out;
}

bool Dag::operator==(const Dag& other) const {
    if (size() != other.size()) return false;
    if (m_variables != other.m_variables && !(*m_variables == *other.m_variables)) return false;
    return m_parents == other.m_parents;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> TemporalTiers::tier_of(std::string_view name) const {
    for (std::size_t t = 0; t < tiers.size(); ++t)
        for (const auto& v : tiers[t])
            if (v == name) return t;
    return std::nullopt;
}

std::size_t TemporalTiers::variable_count() const {
    std::size_t n = 0;
    for (const auto& t : tiers) n += t.size();
    return n;
}

Dag validate_dag(const std::vector<std::string>& variables, const std::vector<NamedEdge>& edges) {
    return validate_dag(make_variables(variables), edges);
}

Dag validate_dag(VariablesPtr variables, const std::vector<NamedEdge>& edges) {
    std::vector<Edge> bound;
    bound.reserve(edges.size());
    for (const auto& [p, c] : edges) {
        bound.push_back({variables->index_of(p), variables->index_of(c)});
    }
    return Dag(std::move(variables), bound);
}

namespace {

std::vector<VarIndex> reach_set(const Dag& dag, VarIndex v, bool upward) {
    std::vector<bool> seen(dag.size(), false);
    std::vector<VarIndex> stack{v};
    while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        const auto& next = upward ? dag.parents(u) : dag.children(u);
        for (auto w : next) {
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    std::vector<VarIndex> out;
    for (VarIndex u = 0; u < dag.size(); ++u)
        if (seen[u] && u != v) out.push_back(u);
    return out;
}

}  // namespace

std::vector<VarIndex> ancestors(const Dag& dag, VarIndex v) {
    if (v >= dag.size()) throw Error(ErrorKind::UnknownVariable, "variable index out of range");
    return reach_set(dag, v, true);
}

std::vector<VarIndex> ancestors(const Dag& dag, std::string_view v) {
    return ancestors(dag, dag.variables().index_of(v));
}

std::vector<VarIndex> descendants(const Dag& dag, VarIndex v) {
    if (v >= dag.size()) throw Error(ErrorKind::UnknownVariable, "variable index out of range");
    return reach_set(dag, v, false);
}

std::vector<std::vector<VarIndex>> weakly_connected_components(const Dag& dag) {
    const auto n = dag.size();
    std::vector<VarIndex> parent(n);
    std::iota(parent.begin(), parent.end(), VarIndex{0});
    auto find = [&](VarIndex x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : dag.edges()) {
        auto a = find(e.parent), b = find(e.child);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::vector<VarIndex>> blocks;
    std::vector<std::size_t> block_of(n, n);
    for (VarIndex v = 0; v < n; ++v) {
        auto r = find(v);
        if (block_of[r] == n) {
            block_of[r] = blocks.size();
            blocks.emplace_back();
        }
        blocks[block_of[r]].push_back(v);
    }
    return blocks;
}

bool is_weakly_connected(const Dag& dag) {
    return weakly_connected_components(dag).size() <= 1;
}

Cpdag to_cpdag(const Dag& dag) {
    const auto n = dag.size();
    // dir[a][b]: a -> b oriented; und[a][b] symmetric.
    std::vector<std::vector<char>> dir(n, std::vector<char>(n, 0)), und(n, std::vector<char>(n, 0));
    auto adj = [&](VarIndex a, VarIndex b) { return dir[a][b] || dir[b][a] || und[a][b]; };

    for (const auto& e : dag.edges()) und[e.parent][e.child] = und[e.child][e.parent] = 1;

    // v-structures a -> c <- b with a, b non-adjacent
    for (VarIndex c = 0; c < n; ++c) {
        const auto& ps = dag.parents(c);
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                auto a = ps[i], b = ps[j];
                if (!dag.adjacent(a, b)) {
                    for (auto p : {a, b}) {
                        und[p][c] = und[c][p] = 0;
                        dir[p][c] = 1;
                    }
                }
            }
    }

    auto orient = [&](VarIndex a, VarIndex b) {
        und[a][b] = und[b][a] = 0;
        dir[a][b] = 1;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (VarIndex a = 0; a < n; ++a) {
            for (VarIndex b = 0; b < n; ++b) {
                if (!und[a][b]) continue;
                // R1: c -> a - b, c and b non-adjacent => a -> b
                bool fire = false;
                for (VarIndex c = 0; c < n && !fire; ++c)
                    if (dir[c][a] && c != b && !adj(c, b)) fire = true;
                // R2: a -> c -> b and a - b => a -> b
                for (VarIndex c = 0; c < n && !fire; ++c)
                    if (dir[a][c] && dir[c][b]) fire = true;
                // R3: a - c -> b, a - d -> b, c and d non-adjacent => a -> b
                for (VarIndex c = 0; c < n && !fire; ++c) {
                    if (!(und[a][c] && dir[c][b])) continue;
                    for (VarIndex d = c + 1; d < n && !fire; ++d)
                        if (und[a][d] && dir[d][b] && !adj(c, d)) fire = true;
                }
                if (fire) {
                    orient(a, b);
                    changed = true;
                }
            }
        }
    }

    Cpdag out{dag.variables_ptr(), {}, {}};
    for (VarIndex a = 0; a < n; ++a)
        for (VarIndex b = 0; b < n; ++b) {
            if (dir[a][b]) out.directed.insert({a, b});
            if (a < b && und[a][b]) out.undirected.insert({a, b});
        }
    return out;
}

TemporalTiers layer_by_longest_path(const Dag& dag) {
    std::vector<std::size_t> level(dag.size(), 0);
    std::size_t depth = 0;
    for (auto v : dag.topological_order()) {
        for (auto p : dag.parents(v)) level[v] = std::max(level[v], level[p] + 1);
        depth = std::max(depth, level[v] + 1);
    }
    TemporalTiers tiers;
    tiers.tiers.resize(depth);
    for (VarIndex v = 0; v < dag.size(); ++v) tiers.tiers[level[v]].push_back(dag.name(v));
    return tiers;
}

}  // namespace kbn
