#include "test_support.hpp"

#include <kbn/fixtures.hpp>
#include <kbn/graph.hpp>
#include <kbn/graph_io.hpp>

#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <sstream>

namespace kbn {
namespace {

using test::letters;
using test::parse_dag;

std::vector<std::string> names_of(const Dag& g, const std::vector<VarIndex>& vs) {
    std::vector<std::string> out;
    for (auto v : vs) out.push_back(g.name(v));
    return out;
}

TEST(VariableSet, LooksUpNamesByPosition) {
    VariableSet vars({"X", "Y", "Z"});
    EXPECT_EQ(vars.size(), 3u);
    EXPECT_EQ(vars.index_of("Z"), 2u);
    EXPECT_FALSE(vars.find("W").has_value());
    EXPECT_KBN_ERROR(vars.index_of("W"), ErrorKind::UnknownVariable);
}

TEST(VariableSet, RejectsDuplicateNames) {
    EXPECT_THROW(VariableSet({"X", "X"}), Error);
}

TEST(ValidateDag, AcceptsChain) {
    auto g = validate_dag({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_TRUE(g.has_edge(0, 1));
    EXPECT_TRUE(g.has_edge(1, 2));
}

TEST(ValidateDag, RejectsTwoCycle) {
    EXPECT_KBN_ERROR(validate_dag({"A", "B"}, {{"A", "B"}, {"B", "A"}}), ErrorKind::CycleDetected);
}

TEST(ValidateDag, RejectsSelfLoop) {
    EXPECT_KBN_ERROR(validate_dag({"A"}, {{"A", "A"}}), ErrorKind::CycleDetected);
}

TEST(ValidateDag, CycleMessageNamesTheCycle) {
    try {
        validate_dag({"A", "B", "C", "D"}, {{"A", "B"}, {"B", "C"}, {"C", "A"}, {"C", "D"}});
        FAIL();
    } catch (const Error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find('A'), std::string::npos);
        EXPECT_NE(msg.find('B'), std::string::npos);
        EXPECT_NE(msg.find('C'), std::string::npos);
    }
}

TEST(ValidateDag, RejectsUnknownAndDuplicate) {
    EXPECT_KBN_ERROR(validate_dag({"A", "B"}, {{"A", "Q"}}), ErrorKind::UnknownVariable);
    EXPECT_KBN_ERROR(validate_dag({"A", "B"}, {{"A", "B"}, {"A", "B"}}), ErrorKind::DuplicateEdge);
}

// Every digraph on up to four nodes without self-loops: validation must
// succeed exactly when the digraph is acyclic by the closure oracle.
TEST(ValidateDag, RejectsExactlyTheCyclicDigraphs) {
    for (std::size_t n = 1; n <= 4; ++n) {
        auto vars = letters(n);
        std::vector<std::pair<VarIndex, VarIndex>> slots;
        for (VarIndex a = 0; a < n; ++a)
            for (VarIndex b = 0; b < n; ++b)
                if (a != b) slots.emplace_back(a, b);
        std::size_t accepted = 0;
        for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
            std::vector<NamedEdge> edges;
            std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
            for (std::size_t i = 0; i < slots.size(); ++i) {
                if (!(mask >> i & 1u)) continue;
                edges.emplace_back(vars->name(slots[i].first), vars->name(slots[i].second));
                reach[slots[i].first][slots[i].second] = true;
            }
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
            bool cyclic = false;
            for (std::size_t i = 0; i < n; ++i) cyclic = cyclic || reach[i][i];
            bool ok = true;
            try {
                validate_dag(vars, edges);
            } catch (const Error& e) {
                ok = false;
                EXPECT_EQ(e.kind(), ErrorKind::CycleDetected);
            }
            EXPECT_EQ(ok, !cyclic) << "n=" << n << " mask=" << mask;
            accepted += ok;
        }
        const std::size_t expected[] = {0, 1, 3, 25, 543};
        EXPECT_EQ(accepted, expected[n]);
    }
}

TEST(Dag, WithEdgeRefusesCyclesAndDuplicates) {
    auto vars = letters(3);
    auto g = parse_dag(vars, "A>B,B>C");
    EXPECT_KBN_ERROR(g.with_edge({2, 0}), ErrorKind::CycleDetected);
    EXPECT_KBN_ERROR(g.with_edge({1, 0}), ErrorKind::DuplicateEdge);
    auto h = g.with_edge({0, 2});
    EXPECT_EQ(h.edge_count(), 3u);
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_KBN_ERROR(h.with_reversed({0, 2}), ErrorKind::CycleDetected);
    EXPECT_EQ(h.without_edge({0, 1}).edge_count(), 2u);
}

TEST(Ancestors, Chain) {
    auto g = parse_dag(letters(3), "A>B,B>C");
    EXPECT_EQ(names_of(g, ancestors(g, "C")), (std::vector<std::string>{"A", "B"}));
}

TEST(Ancestors, EmptyGraph) {
    Dag g(letters(3));
    EXPECT_TRUE(ancestors(g, "A").empty());
    EXPECT_KBN_ERROR(ancestors(g, "Q"), ErrorKind::UnknownVariable);
}

TEST(Ancestors, Diamond) {
    auto g = parse_dag(letters(4), "A>B,A>C,B>D,C>D");
    EXPECT_EQ(names_of(g, ancestors(g, "D")), (std::vector<std::string>{"A", "B", "C"}));
}

TEST(Ancestors, MatchesClosureOracle) {
    Rng rng(11);
    for (std::size_t n = 1; n <= 6; ++n) {
        auto vars = letters(n);
        for (int trial = 0; trial < 60; ++trial) {
            auto g = test::random_dag(vars, 0.1 + 0.15 * (trial % 6), rng);
            auto reach = test::closure(g);
            for (VarIndex v = 0; v < n; ++v) {
                std::vector<VarIndex> expected;
                std::vector<VarIndex> below;
                for (VarIndex u = 0; u < n; ++u) {
                    if (reach[u][v]) expected.push_back(u);
                    if (reach[v][u]) below.push_back(u);
                }
                EXPECT_EQ(ancestors(g, v), expected);
                EXPECT_EQ(descendants(g, v), below);
                for (VarIndex u = 0; u < n; ++u) EXPECT_EQ(g.reaches(u, v), bool(reach[u][v]));
            }
        }
    }
}

TEST(Components, IsolatedNode) {
    auto g = parse_dag(letters(3), "A>B");
    EXPECT_EQ(weakly_connected_components(g), (std::vector<std::vector<VarIndex>>{{0, 1}, {2}}));
    EXPECT_FALSE(is_weakly_connected(g));
}

TEST(Components, ConnectedChain) {
    auto g = parse_dag(letters(4), "A>B,C>B,C>D");
    EXPECT_EQ(weakly_connected_components(g).size(), 1u);
    EXPECT_TRUE(is_weakly_connected(g));
}

TEST(Components, TwoPairs) {
    auto g = parse_dag(letters(4), "A>B,C>D");
    EXPECT_EQ(weakly_connected_components(g), (std::vector<std::vector<VarIndex>>{{0, 1}, {2, 3}}));
}

TEST(Components, MatchesUnionFind) {
    Rng rng(5);
    auto vars = letters(7);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = test::random_dag(vars, 0.12, rng);
        std::vector<VarIndex> root(7);
        std::iota(root.begin(), root.end(), 0);
        auto find = [&](VarIndex x) {
            while (root[x] != x) x = root[x];
            return x;
        };
        for (const auto& e : g.edges()) root[find(e.parent)] = find(e.child);
        auto blocks = weakly_connected_components(g);
        std::vector<std::size_t> block_of(7);
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (auto v : blocks[b]) block_of[v] = b;
        for (VarIndex a = 0; a < 7; ++a)
            for (VarIndex b = 0; b < 7; ++b)
                EXPECT_EQ(block_of[a] == block_of[b], find(a) == find(b));
    }
}

TEST(Cpdag, ChainIsUndirected) {
    auto c = to_cpdag(parse_dag(letters(3), "A>B,B>C"));
    EXPECT_TRUE(c.directed.empty());
    EXPECT_EQ(c.undirected, (std::set<VarPair>{{0, 1}, {1, 2}}));
}

TEST(Cpdag, ColliderIsCompelled) {
    auto c = to_cpdag(parse_dag(letters(3), "A>B,C>B"));
    EXPECT_EQ(c.directed, (std::set<Edge>{{0, 1}, {2, 1}}));
    EXPECT_TRUE(c.undirected.empty());
}

TEST(Cpdag, SingleEdge) {
    auto c = to_cpdag(parse_dag(letters(2), "A>B"));
    EXPECT_TRUE(c.directed.empty());
    EXPECT_EQ(c.undirected.size(), 1u);
}

TEST(Cpdag, PropagatesBelowCollider) {
    // A -> C <- B, C - D must be oriented C -> D to avoid a new v-structure.
    auto c = to_cpdag(parse_dag(letters(4), "A>C,B>C,C>D"));
    EXPECT_EQ(c.directed, (std::set<Edge>{{0, 2}, {1, 2}, {2, 3}}));
}

using Signature = std::pair<std::set<VarPair>, std::set<std::tuple<VarIndex, VarIndex, VarIndex>>>;

Signature signature(const Dag& g) {
    Signature s;
    for (const auto& e : g.edges()) s.first.insert(VarPair(e.parent, e.child));
    for (VarIndex c = 0; c < g.size(); ++c) {
        const auto& ps = g.parents(c);
        for (std::size_t i = 0; i < ps.size(); ++i)
            for (std::size_t j = i + 1; j < ps.size(); ++j)
                if (!g.adjacent(ps[i], ps[j])) s.second.insert({ps[i], c, ps[j]});
    }
    return s;
}

// Equivalence classes by skeleton and v-structures. Within a class every
// DAG maps to the same CPDAG; a directed CPDAG edge is shared by all members
// and an undirected one appears in both orientations.
TEST(Cpdag, ExhaustiveEquivalenceClasses) {
    for (std::size_t n = 2; n <= 4; ++n) {
        auto vars = letters(n);
        std::map<Signature, std::vector<Dag>> classes;
        for (auto& g : fixtures::enumerate_dags(vars)) classes[signature(g)].push_back(g);
        std::set<std::pair<std::set<Edge>, std::set<VarPair>>> seen;
        for (const auto& [sig, members] : classes) {
            const auto c = to_cpdag(members.front());
            for (const auto& g : members) EXPECT_TRUE(to_cpdag(g) == c);
            EXPECT_TRUE(seen.insert({c.directed, c.undirected}).second);
            for (const auto& e : c.directed)
                for (const auto& g : members) EXPECT_TRUE(g.has_edge(e));
            for (const auto& p : c.undirected) {
                bool fwd = false, back = false;
                for (const auto& g : members) {
                    fwd = fwd || g.has_edge(p.first, p.second);
                    back = back || g.has_edge(p.second, p.first);
                }
                EXPECT_TRUE(fwd && back);
            }
            EXPECT_EQ(c.directed.size() + c.undirected.size(), sig.first.size());
        }
    }
}

TEST(Layering, HandTrace) {
    auto g = parse_dag(letters(4), "A>B,A>C,B>D");
    auto t = layer_by_longest_path(g);
    EXPECT_EQ(t.tiers, (std::vector<std::vector<std::string>>{{"A"}, {"B", "C"}, {"D"}}));
}

TEST(Layering, EdgelessAndChain) {
    EXPECT_EQ(layer_by_longest_path(Dag(letters(3))).tiers.size(), 1u);
    auto t = layer_by_longest_path(parse_dag(letters(5), "A>B,B>C,C>D,D>E"));
    ASSERT_EQ(t.tiers.size(), 5u);
    for (const auto& tier : t.tiers) EXPECT_EQ(tier.size(), 1u);
}

TEST(Layering, ParentsPrecedeChildren) {
    Rng rng(3);
    auto vars = letters(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = test::random_dag(vars, 0.3, rng);
        auto t = layer_by_longest_path(g);
        EXPECT_EQ(t.variable_count(), 8u);
        for (const auto& e : g.edges())
            EXPECT_LT(*t.tier_of(g.name(e.parent)), *t.tier_of(g.name(e.child)));
    }
}

TEST(EdgeList, RoundTrip) {
    auto g = parse_dag(letters(4), "A>B,C>B,B>D");
    std::stringstream buffer;
    io::write_edge_list(buffer, g);
    EXPECT_EQ(buffer.str().substr(0, 15), "ID,Parent,Child");
    auto edges = io::read_edge_list(buffer);
    EXPECT_TRUE(validate_dag(g.variables_ptr(), edges) == g);
}

TEST(EdgeList, MalformedRows) {
    std::stringstream bad_header("From,To\nA,B\n");
    EXPECT_KBN_ERROR(io::read_edge_list(bad_header), ErrorKind::MalformedRow);
    std::stringstream short_row("ID,Parent,Child\n1,A\n");
    EXPECT_KBN_ERROR(io::read_edge_list(short_row), ErrorKind::MalformedRow);
}

}  // namespace
}  // namespace kbn
