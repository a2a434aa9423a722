#include <kbn/knowledge.hpp>
#include <kbn/error.hpp>
#include <kbn/random.hpp>

#include <algorithm>
#include <set>

namespace kbn {

namespace {

std::string pair_text(const VariableSet& vars, VarIndex a, VarIndex b, const char* sep) {
    return vars.name(a) + sep + vars.name(b);
}

}  // namespace

KnowledgeSpec::KnowledgeSpec(VariablesPtr variables)
    : m_variables(std::move(variables)),
      m_flags(m_variables->size() * m_variables->size(), 0),
      m_tier_of(m_variables->size()) {}

KnowledgeSpec KnowledgeSpec::bind(VariablesPtr variables, const KnowledgeInput& input) {
    KnowledgeSpec spec(variables);
    const auto& vars = *variables;
    const auto n = vars.size();
    auto at = [&](VarIndex a, VarIndex b) -> std::uint8_t& { return spec.m_flags[a * n + b]; };

    std::set<Edge> seen_directed;
    for (const auto& [p, c] : input.directed) {
        Edge e{vars.index_of(p), vars.index_of(c)};
        if (e.parent == e.child) throw Error(ErrorKind::ConstraintConflict, "directed edge on a single variable '" + p + "'");
        if (!seen_directed.insert(e).second) {
            throw Error(ErrorKind::DuplicateConstraint, "directed edge " + p + " -> " + c + " listed twice");
        }
        spec.m_directed.push_back(e);
        at(e.parent, e.child) |= kRequired;
    }
    auto bind_pairs = [&](const std::vector<NamedEdge>& named, std::vector<VarPair>& out, std::uint8_t bit,
                          const char* what) {
        std::set<VarPair> seen;
        for (const auto& [a, b] : named) {
            VarPair pr(vars.index_of(a), vars.index_of(b));
            if (pr.first == pr.second) {
                throw Error(ErrorKind::ConstraintConflict, std::string(what) + " on a single variable '" + a + "'");
            }
            if (!seen.insert(pr).second) {
                throw Error(ErrorKind::DuplicateConstraint,
                            std::string(what) + " " + a + " - " + b + " listed twice");
            }
            out.push_back(pr);
            at(pr.first, pr.second) |= bit;
            at(pr.second, pr.first) |= bit;
        }
    };
    bind_pairs(input.undirected, spec.m_undirected, kAdjacent, "undirected edge");
    bind_pairs(input.forbidden, spec.m_forbidden, kForbidden, "forbidden edge");

    for (const auto& e : spec.m_directed) {
        if (spec.forbids(e.parent, e.child)) {
            throw Error(ErrorKind::ConstraintConflict,
                        "pair " + pair_text(vars, e.parent, e.child, " -> ") + " is both required and forbidden");
        }
    }
    for (const auto& pr : spec.m_undirected) {
        if (spec.forbids(pr.first, pr.second)) {
            throw Error(ErrorKind::ConstraintConflict,
                        "pair " + pair_text(vars, pr.first, pr.second, " - ") + " is both required and forbidden");
        }
    }

    Dag required(variables);
    try {
        required = Dag(variables, spec.m_directed);
    } catch (const Error& e) {
        throw Error(ErrorKind::ConstraintConflict, std::string("directed edges are cyclic: ") + e.what());
    }

    if (input.tiers) {
        spec.m_tiers = input.tiers;
        spec.m_tiers_strict = input.tiers_strict;
        for (std::size_t t = 0; t < input.tiers->tiers.size(); ++t) {
            for (const auto& name : input.tiers->tiers[t]) {
                auto v = vars.index_of(name);
                if (spec.m_tier_of[v]) {
                    throw Error(ErrorKind::VariableInTwoTiers, "variable '" + name + "' appears in two tiers");
                }
                spec.m_tier_of[v] = t;
                spec.m_tiered.push_back(v);
            }
        }
        std::sort(spec.m_tiered.begin(), spec.m_tiered.end());
        if (!satisfies_tiers(required, spec)) {
            throw Error(ErrorKind::ConstraintConflict, "directed edges contradict the temporal tiers");
        }
        if (spec.m_tiers_strict) {
            for (const auto& pr : spec.m_undirected) {
                if (spec.tiers_forbid_arc(pr.first, pr.second) && spec.tiers_forbid_arc(pr.second, pr.first)) {
                    throw Error(ErrorKind::ConstraintConflict,
                                "undirected edge " + pair_text(vars, pr.first, pr.second, " - ") +
                                    " joins two variables of the same tier");
                }
            }
        }
    }

    if (input.initial_graph) spec.m_initial = validate_dag(variables, *input.initial_graph);
    spec.m_variables_relevant = input.variables_relevant;
    for (const auto& [name, r] : input.targets) spec.m_weights.set(vars.index_of(name), r);

    if (input.bdn) {
        BdnRoles roles;
        std::set<VarIndex> decisions;
        for (const auto& d : input.bdn->decisions) {
            auto v = vars.index_of(d);
            if (!decisions.insert(v).second) {
                throw Error(ErrorKind::DuplicateConstraint, "decision '" + d + "' listed twice");
            }
            roles.decisions.push_back(v);
        }
        std::set<VarIndex> utilities;
        for (const auto& u : input.bdn->utilities) {
            auto v = vars.index_of(u);
            if (decisions.count(v)) {
                throw Error(ErrorKind::OverlappingRoles, "'" + u + "' is both a decision and a utility");
            }
            if (!utilities.insert(v).second) {
                throw Error(ErrorKind::DuplicateConstraint, "utility '" + u + "' listed twice");
            }
            roles.utilities.push_back(v);
        }
        spec.m_bdn = std::move(roles);
        spec.m_bdn_strict = input.bdn_strict;
    }
    return spec;
}

std::optional<std::size_t> KnowledgeSpec::tier(VarIndex v) const { return m_tier_of.at(v); }

bool KnowledgeSpec::tiers_forbid_arc(VarIndex parent, VarIndex child) const {
    const auto& tp = m_tier_of[parent];
    const auto& tc = m_tier_of[child];
    if (!tp || !tc) return false;
    return *tp > *tc || (m_tiers_strict && *tp == *tc);
}

std::vector<std::string> KnowledgeSpec::applied_approaches() const {
    std::vector<std::string> out;
    if (!m_directed.empty()) out.push_back("DIR-EDG");
    if (!m_undirected.empty()) out.push_back("UND-EDG");
    if (!m_forbidden.empty()) out.push_back("FOR-EDG");
    if (m_tiers) out.push_back(m_tiers_strict ? "STR-TEM" : "REL-TEM");
    if (m_initial) out.push_back("INI-GRA");
    if (m_variables_relevant) out.push_back("VAR-REL");
    if (!m_weights.all_unit()) out.push_back("TAR-VAR");
    if (m_bdn) out.push_back(m_bdn_strict ? "STR-BDN" : "REL-BDN");
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Children of v in the graph that results from applying `move` (or the graph
// itself when move is null), without copying it.
template <typename F>
void for_each_child(const Dag& dag, const Move* move, VarIndex v, F&& f) {
    for (auto c : dag.children(v)) {
        if (move && move->kind != MoveKind::Add && v == move->parent && c == move->child) continue;
        f(c);
    }
    if (!move) return;
    if (move->kind == MoveKind::Add && v == move->parent) f(move->child);
    if (move->kind == MoveKind::Reverse && v == move->child) f(move->parent);
}

bool tiers_ok(const Dag& dag, const KnowledgeSpec& spec, const Move* move, std::vector<Violation>* out) {
    if (!spec.has_tiers()) return true;
    bool ok = true;
    const auto n = dag.size();
    std::vector<char> seen(n);
    std::vector<VarIndex> stack;
    for (auto u : spec.tiered_variables()) {
        const auto tu = *spec.tier(u);
        if (tu == 0) continue;
        std::fill(seen.begin(), seen.end(), 0);
        stack.assign(1, u);
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            bool stop = false;
            for_each_child(dag, move, v, [&](VarIndex c) {
                if (stop || seen[c]) return;
                seen[c] = 1;
                stack.push_back(c);
                auto tc = spec.tier(c);
                if (tc && *tc < tu) {
                    ok = false;
                    if (!out) {
                        stop = true;
                        return;
                    }
                    const bool direct = v == u;
                    out->push_back({spec.strict_tiers() ? "STR-TEM" : "REL-TEM",
                                    dag.name(u) + " (tier " + std::to_string(tu + 1) + ") is " +
                                        (direct ? "a parent" : "an ancestor") + " of " + dag.name(c) +
                                        " (tier " + std::to_string(*tc + 1) + ")"});
                }
            });
            if (stop) return false;
        }
    }
    if (spec.strict_tiers()) {
        for (VarIndex v = 0; v < n; ++v) {
            auto tv = spec.tier(v);
            if (!tv) continue;
            bool stop = false;
            for_each_child(dag, move, v, [&](VarIndex c) {
                if (stop) return;
                auto tc = spec.tier(c);
                if (tc && *tc == *tv) {
                    ok = false;
                    if (!out) {
                        stop = true;
                        return;
                    }
                    out->push_back({"STR-TEM", dag.name(v) + " -> " + dag.name(c) + " joins two variables of tier " +
                                                   std::to_string(*tv + 1)});
                }
            });
            if (stop) return false;
        }
    }
    return ok;
}

bool connected_after_removal(const Dag& dag, const Edge& removed) {
    // Removing one edge splits a component iff its endpoints become
    // disconnected.
    const auto n = dag.size();
    std::vector<char> seen(n, 0);
    std::vector<VarIndex> stack{removed.parent};
    seen[removed.parent] = 1;
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        auto visit = [&](VarIndex w, bool is_removed) {
            if (is_removed || seen[w]) return;
            seen[w] = 1;
            stack.push_back(w);
        };
        for (auto c : dag.children(v)) visit(c, v == removed.parent && c == removed.child);
        for (auto p : dag.parents(v)) visit(p, p == removed.parent && v == removed.child);
        if (seen[removed.child]) return true;
    }
    return seen[removed.child] != 0;
}

}  // namespace

bool satisfies_tiers(const Dag& dag, const KnowledgeSpec& spec) {
    return tiers_ok(dag, spec, nullptr, nullptr);
}

Verdict graph_satisfies(const Dag& dag, const KnowledgeSpec& spec) {
    Verdict verdict;
    auto& out = verdict.violations;
    const auto& vars = spec.variables();
    if (!(dag.variables() == vars)) {
        out.push_back({"VARIABLES", "graph and knowledge use different variables"});
        return verdict;
    }
    for (const auto& e : spec.directed_edges()) {
        if (!dag.has_edge(e)) {
            out.push_back({"DIR-EDG", "missing " + pair_text(vars, e.parent, e.child, " -> ")});
        }
    }
    for (const auto& pr : spec.undirected_edges()) {
        if (!dag.adjacent(pr.first, pr.second)) {
            out.push_back({"UND-EDG", "missing " + pair_text(vars, pr.first, pr.second, " - ")});
        }
    }
    for (const auto& pr : spec.forbidden_edges()) {
        if (dag.adjacent(pr.first, pr.second)) {
            out.push_back({"FOR-EDG", "present " + pair_text(vars, pr.first, pr.second, " - ")});
        }
    }
    tiers_ok(dag, spec, nullptr, &out);
    if (spec.variables_relevant()) {
        auto blocks = weakly_connected_components(dag);
        if (blocks.size() > 1) {
            out.push_back({"VAR-REL", std::to_string(blocks.size()) + " weakly connected components"});
        }
    }
    if (spec.bdn() && spec.bdn_strict()) {
        for (auto d : spec.bdn()->decisions)
            if (dag.children(d).empty()) out.push_back({"STR-BDN", "decision " + vars.name(d) + " has no child"});
        for (auto u : spec.bdn()->utilities)
            if (dag.parents(u).empty()) out.push_back({"STR-BDN", "utility " + vars.name(u) + " has no parent"});
    }
    return verdict;
}

// ---------------------------------------------------------------------------

Dag apply(const Dag& dag, const Move& move) {
    switch (move.kind) {
        case MoveKind::Add: return dag.with_edge({move.parent, move.child});
        case MoveKind::Remove: return dag.without_edge({move.parent, move.child});
        case MoveKind::Reverse: return dag.with_reversed({move.parent, move.child});
    }
    return dag;
}

bool move_is_admissible(const Dag& dag, const Move& move, const KnowledgeSpec& spec, const MoveLimits& limits) {
    const auto n = dag.size();
    const auto p = move.parent, c = move.child;
    if (p >= n || c >= n || p == c) return false;
    auto banned = [&](VarIndex from, VarIndex to) {
        return limits.banned_arcs && (*limits.banned_arcs)[from * n + to];
    };
    auto indegree_ok = [&](VarIndex v) {
        return !limits.max_indegree || dag.in_degree(v) < *limits.max_indegree;
    };

    switch (move.kind) {
        case MoveKind::Add:
            if (dag.adjacent(p, c)) return false;
            if (spec.forbids(p, c) || banned(p, c)) return false;
            if (!indegree_ok(c)) return false;
            if (dag.reaches(c, p)) return false;
            break;
        case MoveKind::Remove:
            if (!dag.has_edge(p, c)) return false;
            if (spec.requires_arc(p, c) || spec.requires_adjacency(p, c)) return false;
            if (spec.forbids(p, c)) break;  // dropping a forbidden pair is always fine
            if (limits.keep_connected && !connected_after_removal(dag, {p, c})) return false;
            break;
        case MoveKind::Reverse:
            if (!dag.has_edge(p, c)) return false;
            if (spec.requires_arc(p, c) || spec.forbids(p, c) || banned(c, p)) return false;
            if (!indegree_ok(p)) return false;
            if (dag.reaches_without(p, c, {p, c})) return false;
            break;
    }
    return tiers_ok(dag, spec, &move, nullptr);
}

std::vector<Move> admissible_moves(const Dag& dag, const KnowledgeSpec& spec, const MoveLimits& limits) {
    std::vector<Move> out;
    const auto n = dag.size();
    for (VarIndex p = 0; p < n; ++p)
        for (VarIndex c = 0; c < n; ++c) {
            Move m{MoveKind::Add, p, c};
            if (p != c && move_is_admissible(dag, m, spec, limits)) out.push_back(m);
        }
    for (auto kind : {MoveKind::Remove, MoveKind::Reverse})
        for (const auto& e : dag.edges()) {
            Move m{kind, e.parent, e.child};
            if (move_is_admissible(dag, m, spec, limits)) out.push_back(m);
        }
    return out;
}

// ---------------------------------------------------------------------------

Dag seed_graph(const KnowledgeSpec& spec, std::uint64_t seed, std::optional<std::size_t> max_indegree) {
    if (spec.initial_graph()) return *spec.initial_graph();

    Dag g(spec.variables_ptr());
    auto fits = [&](const Dag& graph, VarIndex p, VarIndex c) {
        if (graph.adjacent(p, c)) return false;
        if (max_indegree && graph.in_degree(c) >= *max_indegree) return false;
        if (graph.reaches(c, p)) return false;
        Move m{MoveKind::Add, p, c};
        return tiers_ok(graph, spec, &m, nullptr);
    };

    for (const auto& e : spec.directed_edges()) {
        if (max_indegree && g.in_degree(e.child) >= *max_indegree) {
            throw Error(ErrorKind::UnsatisfiableSeed,
                        "required arcs into '" + g.name(e.child) + "' exceed the maximum in-degree");
        }
        g = g.with_edge(e);  // acyclic: checked when the spec was bound
    }

    const auto& pairs = spec.undirected_edges();
    std::size_t budget = pairs.size() * pairs.size();
    Rng rng(seed);
    std::vector<VarPair> deferred;
    for (const auto& pr : pairs) {
        if (g.adjacent(pr.first, pr.second)) continue;
        bool tried[2] = {false, false};
        bool placed = false;
        while (budget > 0 && !(tried[0] && tried[1])) {
            --budget;
            const bool flip = rng.coin();
            const VarIndex p = flip ? pr.second : pr.first;
            const VarIndex c = flip ? pr.first : pr.second;
            if (fits(g, p, c)) {
                g = g.with_edge({p, c});
                placed = true;
                break;
            }
            tried[flip ? 1 : 0] = true;
        }
        if (!placed) deferred.push_back(pr);
    }
    for (const auto& pr : deferred) {
        if (fits(g, pr.first, pr.second)) {
            g = g.with_edge({pr.first, pr.second});
        } else if (fits(g, pr.second, pr.first)) {
            g = g.with_edge({pr.second, pr.first});
        } else {
            throw Error(ErrorKind::UnsatisfiableSeed, "cannot orient undirected edge " + g.name(pr.first) + " - " +
                                                          g.name(pr.second) + " without breaking other constraints");
        }
    }
    return g;
}

// ---------------------------------------------------------------------------

BdnGraph to_bdn(const Dag& dag, const BdnAnnotation& annotation) {
    const auto& vars = dag.variables();
    BdnGraph out{dag, std::vector<NodeKind>(dag.size(), NodeKind::Chance), {}};
    for (const auto& d : annotation.decisions) out.kinds[vars.index_of(d)] = NodeKind::Decision;
    for (const auto& u : annotation.utilities) {
        auto v = vars.index_of(u);
        if (out.kinds[v] == NodeKind::Decision) {
            throw Error(ErrorKind::OverlappingRoles, "'" + u + "' is both a decision and a utility");
        }
        out.kinds[v] = NodeKind::Utility;
    }
    for (const auto& e : dag.edges()) {
        out.arcs.push_back({e, out.kinds[e.child] == NodeKind::Decision ? ArcKind::Informational : ArcKind::Conditional});
    }
    return out;
}

std::string_view node_kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::Chance: return "chance";
        case NodeKind::Decision: return "decision";
        case NodeKind::Utility: return "utility";
    }
    return "chance";
}

std::string_view arc_kind_name(ArcKind kind) {
    return kind == ArcKind::Informational ? "informational" : "conditional";
}

}  // namespace kbn
