#include "test_support.hpp"

#include <kbn/knowledge.hpp>
#include <kbn/knowledge_io.hpp>

#include <gtest/gtest.h>

#include <set>
#include <sstream>

namespace kbn {
namespace {

using test::letters;
using test::parse_dag;

const std::string kData = KBN_TEST_DATA;

TemporalTiers tiers(std::vector<std::vector<std::string>> t) { return TemporalTiers{std::move(t)}; }

KnowledgeSpec bind_spec(const VariablesPtr& vars, const KnowledgeInput& in) { return KnowledgeSpec::bind(vars, in); }

// ---------------------------------------------------------------------------
// Files

TEST(ConstraintFiles, DirectedTableRow) {
    auto pairs = io::parse_edge_constraints_file(kData + "/alarm_directed_20.csv", io::PairHeader::Directed);
    ASSERT_EQ(pairs.size(), 9u);
    EXPECT_EQ(pairs[2], (NamedEdge{"TPR", "CATECHOL"}));
}

TEST(ConstraintFiles, EmptyBody) {
    std::stringstream in("ID,Parent,Child\n");
    EXPECT_TRUE(io::parse_edge_constraints(in, io::PairHeader::Directed).empty());
}

TEST(ConstraintFiles, DuplicatePair) {
    std::stringstream directed("ID,Parent,Child\n1,A,B\n2,A,B\n");
    EXPECT_KBN_ERROR(io::parse_edge_constraints(directed, io::PairHeader::Directed), ErrorKind::DuplicateConstraint);
    std::stringstream undirected("ID,Var1,Var2\n1,A,B\n2,B,A\n");
    EXPECT_KBN_ERROR(io::parse_edge_constraints(undirected, io::PairHeader::Undirected),
                     ErrorKind::DuplicateConstraint);
}

TEST(ConstraintFiles, WrongHeader) {
    std::stringstream in("ID,Var1,Var2\n1,A,B\n");
    EXPECT_KBN_ERROR(io::parse_edge_constraints(in, io::PairHeader::Directed), ErrorKind::MalformedRow);
}

TEST(ConstraintFiles, RoundTrip) {
    std::vector<NamedEdge> pairs{{"A", "B"}, {"C", "A"}};
    std::stringstream buffer;
    io::write_edge_constraints(buffer, pairs, io::PairHeader::Directed);
    EXPECT_EQ(io::parse_edge_constraints(buffer, io::PairHeader::Directed), pairs);
}

TEST(TierFiles, TableContent) {
    auto t = io::parse_tiers_file(kData + "/alarm_tiers_20.csv");
    ASSERT_EQ(t.tiers.size(), 6u);
    EXPECT_EQ(std::set<std::string>(t.tiers[3].begin(), t.tiers[3].end()),
              (std::set<std::string>{"LVFAILURE", "HYPOVOLEMIA"}));
    EXPECT_EQ(t.tiers[0], (std::vector<std::string>{"VENTMACH"}));
    EXPECT_EQ(t.variable_count(), 7u);
}

TEST(TierFiles, SingleColumn) {
    std::stringstream in("ID,Tier 1\n1,A\n2,B\n");
    auto t = io::parse_tiers(in);
    EXPECT_EQ(t.tiers, (std::vector<std::vector<std::string>>{{"A", "B"}}));
}

TEST(TierFiles, VariableInTwoTiers) {
    std::stringstream in("ID,Tier 1,Tier 2\n1,A,A\n");
    EXPECT_KBN_ERROR(io::parse_tiers(in), ErrorKind::VariableInTwoTiers);
}

TEST(TierFiles, RoundTrip) {
    auto t = tiers({{"A"}, {"B", "C"}, {"D"}});
    std::stringstream buffer;
    io::write_tiers(buffer, t);
    EXPECT_EQ(io::parse_tiers(buffer), t);
}

TEST(BdnFiles, RolesWithBlankCells) {
    std::stringstream in("ID,Decision,Utility\n1,asia,smoke\n2,tub,\n");
    auto roles = io::parse_bdn_roles(in);
    EXPECT_EQ(roles.decisions, (std::vector<std::string>{"asia", "tub"}));
    EXPECT_EQ(roles.utilities, (std::vector<std::string>{"smoke"}));
    std::stringstream buffer;
    io::write_bdn_roles(buffer, roles);
    auto back = io::parse_bdn_roles(buffer);
    EXPECT_EQ(back.decisions, roles.decisions);
    EXPECT_EQ(back.utilities, roles.utilities);
}

// ---------------------------------------------------------------------------
// Binding

TEST(Bind, RejectsUnknownVariable) {
    KnowledgeInput in;
    in.directed = {{"A", "Q"}};
    EXPECT_KBN_ERROR(bind_spec(letters(3), in), ErrorKind::UnknownVariable);
}

TEST(Bind, RejectsRequiredAndForbidden) {
    KnowledgeInput in;
    in.directed = {{"A", "B"}};
    in.forbidden = {{"B", "A"}};
    EXPECT_KBN_ERROR(bind_spec(letters(3), in), ErrorKind::ConstraintConflict);
    KnowledgeInput und;
    und.undirected = {{"A", "C"}};
    und.forbidden = {{"A", "C"}};
    EXPECT_KBN_ERROR(bind_spec(letters(3), und), ErrorKind::ConstraintConflict);
}

TEST(Bind, RejectsCyclicRequiredArcs) {
    KnowledgeInput in;
    in.directed = {{"A", "B"}, {"B", "C"}, {"C", "A"}};
    EXPECT_KBN_ERROR(bind_spec(letters(3), in), ErrorKind::ConstraintConflict);
}

TEST(Bind, RejectsRequiredArcAgainstTiers) {
    KnowledgeInput in;
    in.directed = {{"B", "A"}};
    in.tiers = tiers({{"A"}, {"B"}});
    EXPECT_KBN_ERROR(bind_spec(letters(3), in), ErrorKind::ConstraintConflict);
}

TEST(Bind, RejectsDuplicatesAndRoleOverlap) {
    KnowledgeInput dup;
    dup.forbidden = {{"A", "B"}, {"B", "A"}};
    EXPECT_KBN_ERROR(bind_spec(letters(3), dup), ErrorKind::DuplicateConstraint);
    KnowledgeInput roles;
    roles.bdn = BdnAnnotation{{"A"}, {"A"}};
    EXPECT_KBN_ERROR(bind_spec(letters(3), roles), ErrorKind::OverlappingRoles);
    KnowledgeInput twice;
    twice.tiers = tiers({{"A"}, {"A", "B"}});
    EXPECT_KBN_ERROR(bind_spec(letters(3), twice), ErrorKind::VariableInTwoTiers);
}

TEST(Bind, TargetsAndApproaches) {
    KnowledgeInput in;
    in.targets = {{"B", 2.0}};
    in.variables_relevant = true;
    in.tiers = tiers({{"A"}, {"B"}});
    in.tiers_strict = true;
    auto spec = bind_spec(letters(3), in);
    EXPECT_EQ(spec.target_weights()[1], 2.0);
    EXPECT_EQ(spec.applied_approaches(), (std::vector<std::string>{"STR-TEM", "VAR-REL", "TAR-VAR"}));
    KnowledgeInput low;
    low.targets = {{"B", 0.5}};
    EXPECT_KBN_ERROR(bind_spec(letters(3), low), ErrorKind::InvalidArgument);
}

TEST(Bind, TierRelations) {
    KnowledgeInput in;
    in.tiers = tiers({{"A", "B"}, {"C"}});
    auto relaxed = bind_spec(letters(4), in);
    EXPECT_TRUE(relaxed.tiers_forbid_arc(2, 0));
    EXPECT_FALSE(relaxed.tiers_forbid_arc(0, 2));
    EXPECT_FALSE(relaxed.tiers_forbid_arc(0, 1));
    EXPECT_FALSE(relaxed.tiers_forbid_arc(3, 0));
    in.tiers_strict = true;
    EXPECT_TRUE(bind_spec(letters(4), in).tiers_forbid_arc(0, 1));
}

// ---------------------------------------------------------------------------
// graph_satisfies

TEST(GraphSatisfies, AncestralTemporalViolation) {
    auto vars = letters(3);
    KnowledgeInput in;
    in.tiers = tiers({{"C"}, {"A"}});
    auto spec = bind_spec(vars, in);
    auto verdict = graph_satisfies(parse_dag(vars, "A>B,B>C"), spec);
    ASSERT_FALSE(verdict.ok());
    EXPECT_EQ(verdict.violations[0].approach, "REL-TEM");
    EXPECT_TRUE(graph_satisfies(parse_dag(vars, "C>B,B>A"), spec).ok());
}

TEST(GraphSatisfies, RequiredArcPresent) {
    auto vars = letters(3);
    KnowledgeInput in;
    in.directed = {{"A", "B"}};
    auto spec = bind_spec(vars, in);
    EXPECT_TRUE(graph_satisfies(parse_dag(vars, "A>B"), spec).ok());
    EXPECT_FALSE(graph_satisfies(parse_dag(vars, "B>A"), spec).ok());
}

TEST(GraphSatisfies, StrictSameTierEdge) {
    auto vars = letters(2);
    KnowledgeInput in;
    in.tiers = tiers({{"A", "B"}});
    in.tiers_strict = true;
    auto verdict = graph_satisfies(parse_dag(vars, "A>B"), bind_spec(vars, in));
    ASSERT_EQ(verdict.violations.size(), 1u);
    EXPECT_EQ(verdict.violations[0].approach, "STR-TEM");
    in.tiers_strict = false;
    EXPECT_TRUE(graph_satisfies(parse_dag(vars, "A>B"), bind_spec(vars, in)).ok());
}

TEST(GraphSatisfies, ReportsEveryFamilyInOrder) {
    auto vars = letters(4);
    KnowledgeInput in;
    in.directed = {{"A", "B"}};
    in.undirected = {{"C", "D"}};
    in.forbidden = {{"A", "C"}};
    in.variables_relevant = true;
    in.bdn = BdnAnnotation{{"D"}, {"B"}};
    in.bdn_strict = true;
    auto verdict = graph_satisfies(parse_dag(vars, "C>A"), bind_spec(vars, in));
    std::vector<std::string> approaches;
    for (const auto& v : verdict.violations) approaches.push_back(v.approach);
    EXPECT_EQ(approaches, (std::vector<std::string>{"DIR-EDG", "UND-EDG", "FOR-EDG", "VAR-REL", "STR-BDN", "STR-BDN"}));
}

TEST(GraphSatisfies, TruthPassesItsOwnSingletonTiers) {
    for (const auto& f : fixtures::all()) {
        const auto& g = f.bn.dag();
        TemporalTiers t;
        for (auto v : g.topological_order()) t.tiers.push_back({g.name(v)});
        KnowledgeInput in;
        in.tiers = t;
        in.tiers_strict = true;
        EXPECT_TRUE(graph_satisfies(g, bind_spec(g.variables_ptr(), in)).ok()) << f.name;
    }
}

// ---------------------------------------------------------------------------
// Moves

TEST(Moves, RequiredArcIsNeverRemovedOrReversed) {
    auto vars = letters(3);
    KnowledgeInput in;
    in.directed = {{"A", "B"}};
    auto spec = bind_spec(vars, in);
    auto g = parse_dag(vars, "A>B");
    EXPECT_FALSE(move_is_admissible(g, {MoveKind::Remove, 0, 1}, spec));
    EXPECT_FALSE(move_is_admissible(g, {MoveKind::Reverse, 0, 1}, spec));
}

TEST(Moves, UndirectedPairMayReverseButNotVanish) {
    auto vars = letters(3);
    KnowledgeInput in;
    in.undirected = {{"A", "B"}};
    auto spec = bind_spec(vars, in);
    auto g = parse_dag(vars, "A>B");
    EXPECT_TRUE(move_is_admissible(g, {MoveKind::Reverse, 0, 1}, spec));
    EXPECT_FALSE(move_is_admissible(g, {MoveKind::Remove, 0, 1}, spec));
    auto h = parse_dag(vars, "A>C,C>B,A>B");
    EXPECT_FALSE(move_is_admissible(h, {MoveKind::Reverse, 0, 1}, spec));
}

TEST(Moves, AncestralTierCheckOnAdd) {
    auto vars = letters(3);
    KnowledgeInput in;
    in.tiers = tiers({{"A"}, {"C"}});
    auto spec = bind_spec(vars, in);
    auto g = parse_dag(vars, "B>A");
    EXPECT_FALSE(move_is_admissible(g, {MoveKind::Add, 2, 1}, spec));
    EXPECT_TRUE(move_is_admissible(g, {MoveKind::Add, 1, 2}, spec));
}

TEST(Moves, InDegreeLimit) {
    auto vars = letters(3);
    KnowledgeSpec spec(vars);
    auto g = parse_dag(vars, "A>C");
    MoveLimits limits;
    limits.max_indegree = 1;
    EXPECT_FALSE(move_is_admissible(g, {MoveKind::Add, 1, 2}, spec, limits));
    EXPECT_TRUE(move_is_admissible(g, {MoveKind::Add, 1, 0}, spec, limits));
}

TEST(Moves, TieBreakOrder) {
    auto vars = letters(3);
    KnowledgeSpec spec(vars);
    auto moves = admissible_moves(parse_dag(vars, "A>B"), spec);
    ASSERT_FALSE(moves.empty());
    for (std::size_t i = 1; i < moves.size(); ++i) {
        if (moves[i - 1].kind == moves[i].kind)
            EXPECT_LT(std::pair(moves[i - 1].parent, moves[i - 1].child), std::pair(moves[i].parent, moves[i].child));
        else
            EXPECT_LT(static_cast<int>(moves[i - 1].kind), static_cast<int>(moves[i].kind));
    }
    EXPECT_EQ(moves.size(), 4u + 1u + 1u);
}

bool oracle_admissible(const Dag& g, const Move& m, const KnowledgeSpec& spec, std::size_t max_indegree) {
    Dag next;
    try {
        next = apply(g, m);
    } catch (const Error&) {
        return false;
    }
    for (VarIndex v = 0; v < next.size(); ++v)
        if (next.in_degree(v) > max_indegree) return false;
    return graph_satisfies(next, spec).ok();
}

// Every graph on up to four variables that already satisfies a random spec:
// a move is admissible exactly when the resulting graph satisfies the spec.
TEST(Moves, AdmissibilityMatchesVerdictExhaustively) {
    Rng rng(101);
    for (std::size_t n = 2; n <= 4; ++n) {
        auto vars = letters(n);
        const auto all = fixtures::enumerate_dags(vars);
        const int specs = n == 4 ? 25 : 40;
        for (int s = 0; s < specs; ++s) {
            const auto& truth = all[rng.below(all.size())];
            auto spec = bind_spec(vars, test::random_knowledge(truth, rng, 0.4));
            MoveLimits limits;
            const std::size_t m = 1 + rng.below(n);
            limits.max_indegree = m;
            for (const auto& g : all) {
                if (!graph_satisfies(g, spec).ok()) continue;
                bool fits = true;
                for (VarIndex v = 0; v < n; ++v) fits = fits && g.in_degree(v) <= m;
                if (!fits) continue;
                std::set<Move> listed;
                for (const auto& mv : admissible_moves(g, spec, limits)) listed.insert(mv);
                for (VarIndex p = 0; p < n; ++p)
                    for (VarIndex c = 0; c < n; ++c) {
                        if (p == c) continue;
                        for (auto kind : {MoveKind::Add, MoveKind::Remove, MoveKind::Reverse}) {
                            Move mv{kind, p, c};
                            const bool expected = oracle_admissible(g, mv, spec, m);
                            ASSERT_EQ(move_is_admissible(g, mv, spec, limits), expected)
                                << "n=" << n << " kind=" << static_cast<int>(kind) << " " << p << "->" << c;
                            EXPECT_EQ(listed.count(mv) > 0, expected);
                        }
                    }
            }
        }
    }
}

TEST(Moves, KeepConnectedRejectsSplittingRemovals) {
    auto vars = letters(3);
    KnowledgeSpec spec(vars);
    MoveLimits limits;
    limits.keep_connected = true;
    auto chain = parse_dag(vars, "A>B,B>C");
    EXPECT_FALSE(move_is_admissible(chain, {MoveKind::Remove, 0, 1}, spec, limits));
    auto triangle = parse_dag(vars, "A>B,B>C,A>C");
    EXPECT_TRUE(move_is_admissible(triangle, {MoveKind::Remove, 0, 1}, spec, limits));
}

// ---------------------------------------------------------------------------
// Seeding

TEST(SeedGraph, InitialGraphVerbatim) {
    auto vars = letters(4);
    KnowledgeInput in;
    in.initial_graph = std::vector<NamedEdge>{{"D", "A"}, {"A", "C"}};
    auto spec = bind_spec(vars, in);
    EXPECT_TRUE(seed_graph(spec, 1) == parse_dag(vars, "D>A,A>C"));
}

TEST(SeedGraph, RequiredArcsOnly) {
    auto vars = letters(3);
    KnowledgeInput in;
    in.directed = {{"A", "B"}, {"B", "C"}};
    EXPECT_TRUE(seed_graph(bind_spec(vars, in), 7) == parse_dag(vars, "A>B,B>C"));
}

TEST(SeedGraph, BothOrientationsReachable) {
    auto vars = letters(2);
    KnowledgeInput in;
    in.undirected = {{"A", "B"}};
    auto spec = bind_spec(vars, in);
    std::set<bool> forward;
    for (std::uint64_t seed = 0; seed < 32; ++seed) {
        auto g = seed_graph(spec, seed);
        EXPECT_TRUE(g == seed_graph(spec, seed));
        EXPECT_EQ(g.edge_count(), 1u);
        forward.insert(g.has_edge(0, 1));
    }
    EXPECT_EQ(forward.size(), 2u);
}

TEST(SeedGraph, RequiredArcsBeyondLimit) {
    auto vars = letters(3);
    KnowledgeInput in;
    in.directed = {{"A", "C"}, {"B", "C"}};
    EXPECT_KBN_ERROR(seed_graph(bind_spec(vars, in), 1, 1), ErrorKind::UnsatisfiableSeed);
}

TEST(SeedGraph, AlwaysSatisfiesPresenceAndAbsence) {
    Rng rng(55);
    auto vars = letters(7);
    for (int trial = 0; trial < 150; ++trial) {
        auto truth = test::random_dag(vars, 0.4, rng);
        auto spec = bind_spec(vars, test::random_knowledge(truth, rng, 0.5));
        auto g = seed_graph(spec, trial);
        EXPECT_TRUE(graph_satisfies(g, spec).ok()) << trial;
        EXPECT_EQ(g.edge_count(), spec.directed_edges().size() + spec.undirected_edges().size());
    }
}

// ---------------------------------------------------------------------------
// Decision networks

TEST(Bdn, AsiaScenario) {
    auto g = fixtures::asia8().bn.dag();
    auto b = to_bdn(g, BdnAnnotation{{"asia"}, {"smoke"}});
    const auto asia = g.variables().index_of("asia");
    const auto smoke = g.variables().index_of("smoke");
    EXPECT_EQ(b.kinds[asia], NodeKind::Decision);
    EXPECT_EQ(b.kinds[smoke], NodeKind::Utility);
    EXPECT_TRUE(b.dag == g);
    ASSERT_EQ(b.arcs.size(), g.edge_count());
    for (const auto& arc : b.arcs) EXPECT_EQ(arc.kind == ArcKind::Informational, arc.edge.child == asia);
}

TEST(Bdn, EmptyAnnotation) {
    auto g = fixtures::sports9().bn.dag();
    auto b = to_bdn(g, {});
    for (auto k : b.kinds) EXPECT_EQ(k, NodeKind::Chance);
    for (const auto& arc : b.arcs) EXPECT_EQ(arc.kind, ArcKind::Conditional);
}

TEST(Bdn, DecisionIntoWhichArcsFlow) {
    auto vars = letters(3);
    auto g = parse_dag(vars, "A>B,C>B");
    auto b = to_bdn(g, BdnAnnotation{{"B"}, {}});
    std::size_t informational = 0;
    for (const auto& arc : b.arcs) informational += arc.kind == ArcKind::Informational;
    EXPECT_EQ(informational, 2u);
    EXPECT_EQ(node_kind_name(b.kinds[1]), "decision");
    EXPECT_EQ(arc_kind_name(ArcKind::Informational), "informational");
    EXPECT_KBN_ERROR(to_bdn(g, BdnAnnotation{{"A"}, {"A"}}), ErrorKind::OverlappingRoles);
    EXPECT_EQ(to_bdn(g, BdnAnnotation{{"A"}, {}}).kinds[0], NodeKind::Decision);
}

}  // namespace
}  // namespace kbn
