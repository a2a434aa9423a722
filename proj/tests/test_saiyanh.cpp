#include "test_support.hpp"

#include <kbn/saiyanh.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

namespace kbn {
namespace {

using test::letters;
using test::parse_dag;

KnowledgeSpec bind_spec(const VariablesPtr& vars, const KnowledgeInput& in) {
    return KnowledgeSpec::bind(vars, in);
}

Dataset columns(const VariablesPtr& vars, std::vector<std::size_t> arity, std::vector<std::vector<State>> cols) {
    return Dataset(vars, std::move(arity), std::move(cols));
}

MmdTable table_of(std::size_t n, std::initializer_list<std::tuple<VarIndex, VarIndex, double>> values) {
    MmdTable t(n);
    for (auto [a, b, v] : values) t.set(a, b, v);
    return t;
}

// Removal rule applied naively: sort the pairs, then for each one look for
// any current common neighbour that beats it on both sides.
std::set<VarPair> naive_emsg(const MmdTable& s) {
    const auto n = s.size();
    std::set<VarPair> edges;
    std::vector<VarPair> pairs;
    for (VarIndex a = 0; a < n; ++a)
        for (VarIndex b = a + 1; b < n; ++b) {
            edges.emplace(a, b);
            pairs.emplace_back(a, b);
        }
    std::sort(pairs.begin(), pairs.end(), [&](const VarPair& x, const VarPair& y) {
        const double sx = s(x.first, x.second), sy = s(y.first, y.second);
        return sx != sy ? sx < sy : x < y;
    });
    auto has = [&](VarIndex a, VarIndex b) { return edges.count(VarPair(std::min(a, b), std::max(a, b))) > 0; };
    for (const auto& [a, b] : pairs) {
        bool drop = false;
        for (VarIndex c = 0; c < n && !drop; ++c)
            drop = c != a && c != b && has(a, c) && has(b, c) && s(a, c) > s(a, b) && s(b, c) > s(a, b);
        if (drop) edges.erase(VarPair(a, b));
    }
    return edges;
}

bool skeleton_connected(std::size_t n, const std::set<VarPair>& edges) {
    std::vector<VarIndex> seen{0}, todo{0};
    while (!todo.empty()) {
        const auto v = todo.back();
        todo.pop_back();
        for (const auto& [a, b] : edges) {
            const VarIndex u = a == v ? b : b == v ? a : v;
            if (u != v && std::find(seen.begin(), seen.end(), u) == seen.end()) {
                seen.push_back(u);
                todo.push_back(u);
            }
        }
    }
    return seen.size() == n;
}

TEST(Mmd, ExactIndependenceIsZero) {
    auto data = columns(letters(2), {2, 2}, {{0, 0, 1, 1}, {0, 1, 0, 1}});
    EXPECT_DOUBLE_EQ(mmd(data, 0, 1), 0.0);
}

TEST(Mmd, UniformCopyIsOneHalf) {
    auto data = columns(letters(2), {2, 2}, {{0, 1, 0, 1}, {0, 1, 0, 1}});
    EXPECT_DOUBLE_EQ(mmd(data, 0, 1), 0.5);
}

TEST(Mmd, SampledCases) {
    auto vars = letters(3);
    Rng rng(5);
    std::vector<std::vector<State>> cols(3);
    for (int r = 0; r < 100000; ++r) {
        cols[0].push_back(static_cast<State>(rng.below(2)));
        cols[1].push_back(static_cast<State>(rng.below(2)));
        cols[2].push_back(cols[0].back());
    }
    auto data = columns(vars, {2, 2, 2}, cols);
    EXPECT_LT(mmd(data, 0, 1), 0.02);
    EXPECT_NEAR(mmd(data, 0, 2), 0.5, 0.01);
}

TEST(Mmd, RangeAndSymmetry) {
    Rng rng(6);
    auto vars = letters(2);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::vector<std::size_t> arity{2 + rng.below(3), 2 + rng.below(3)};
        std::vector<std::vector<State>> cols(2);
        const auto rows = 1 + rng.below(30);
        for (std::size_t r = 0; r < rows; ++r)
            for (int v = 0; v < 2; ++v) cols[v].push_back(static_cast<State>(rng.below(arity[v])));
        auto data = columns(vars, arity, cols);
        const double ab = mmd(data, 0, 1);
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 1.0);
        EXPECT_EQ(ab, mmd(data, 1, 0));
    }
}

TEST(Mmd, UnobservedStatesAreLeftOut) {
    // B never takes its third state; A still explains B completely.
    auto data = columns(letters(2), {2, 3}, {{0, 1, 0, 1}, {0, 1, 0, 1}});
    const double v = mmd(data, 0, 1);
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
}

TEST(Mmd, ConditionalOnAColliderChild) {
    // C = A xor B: marginally independent, dependent given C.
    auto data = columns(letters(3), {2, 2, 2}, {{0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 0}});
    EXPECT_DOUBLE_EQ(mmd(data, 0, 1), 0.0);
    EXPECT_DOUBLE_EQ(conditional_mmd(data, 0, 1, 2), 0.5);
    EXPECT_EQ(classify(0.0, 0.5), Dependence::Dependent);
    EXPECT_EQ(classify(0.4, 0.1), Dependence::Independent);
    EXPECT_EQ(classify(0.3, 0.3), Dependence::Insignificant);
}

TEST(Emsg, HandTrace) {
    auto g = build_emsg(table_of(3, {{0, 1, 0.6}, {1, 2, 0.5}, {0, 2, 0.2}}));
    EXPECT_EQ(g.edges, (std::set<VarPair>{{0, 1}, {1, 2}}));
}

TEST(Emsg, TwoVariablesKeepTheirEdge) {
    auto g = build_emsg(table_of(2, {{0, 1, 0.0}}));
    EXPECT_EQ(g.edges.size(), 1u);
}

TEST(Emsg, EqualScoresRemoveNothing) {
    MmdTable t(5);
    for (VarIndex a = 0; a < 5; ++a)
        for (VarIndex b = a + 1; b < 5; ++b) t.set(a, b, 0.3);
    EXPECT_EQ(build_emsg(t).edges.size(), 10u);
}

TEST(Emsg, MatchesNaiveRemovalAndStaysConnected) {
    Rng rng(12);
    for (int trial = 0; trial < 500; ++trial) {
        MmdTable t(5);
        for (VarIndex a = 0; a < 5; ++a)
            for (VarIndex b = a + 1; b < 5; ++b) t.set(a, b, rng.uniform());
        const auto g = build_emsg(t);
        EXPECT_EQ(g.edges, naive_emsg(t));
        EXPECT_TRUE(skeleton_connected(5, g.edges));
    }
}

TEST(PinScores, KnowledgeOverridesAssociation) {
    auto vars = letters(4);
    KnowledgeInput in;
    in.directed = {{"A", "B"}};
    in.forbidden = {{"C", "D"}};
    in.tiers = TemporalTiers{{{"A"}, {"D"}}};
    MmdTable raw(4);
    for (VarIndex a = 0; a < 4; ++a)
        for (VarIndex b = a + 1; b < 4; ++b) raw.set(a, b, 0.4);
    auto pinned = pin_scores(raw, bind_spec(vars, in));
    EXPECT_EQ(pinned(0, 1), 1.0);
    EXPECT_EQ(pinned(2, 3), 0.0);
    EXPECT_EQ(pinned(0, 3), 0.4);  // A before D still allows A -> D
    EXPECT_EQ(pinned(1, 2), 0.4);
}

TEST(Saiyanh, ChainIsRecoveredUpToEquivalence) {
    auto f = fixtures::chain3();
    auto data = test::sample(f, 10000, 1);
    KnowledgeSpec spec(data.variables_ptr());
    auto r = saiyanh(data, spec);
    auto best = fixtures::exhaustive_best_dag(data, spec);
    EXPECT_TRUE(to_cpdag(r.dag) == to_cpdag(f.bn.dag()) || r.score >= best.score - 1e-6);
    EXPECT_TRUE(is_weakly_connected(r.dag));
    EXPECT_EQ(r.phase_durations.size(), 3u);
}

TEST(Saiyanh, IndependentColumnsStillConnected) {
    auto vars = letters(4);
    Rng rng(3);
    std::vector<std::vector<State>> cols(4);
    for (auto& col : cols)
        for (int r = 0; r < 2000; ++r) col.push_back(static_cast<State>(rng.below(2)));
    auto r = saiyanh(columns(vars, {2, 2, 2, 2}, cols), KnowledgeSpec(vars));
    EXPECT_TRUE(is_weakly_connected(r.dag));
    EXPECT_EQ(r.arcs, 3u);
}

TEST(Saiyanh, ForbiddenPairStaysApart) {
    auto f = fixtures::chain3();
    auto data = test::sample(f, 5000, 2);
    KnowledgeInput in;
    in.forbidden = {{"A", "B"}};
    auto spec = bind_spec(data.variables_ptr(), in);
    auto r = saiyanh(data, spec);
    EXPECT_FALSE(r.dag.adjacent(0, 1));
    EXPECT_TRUE(is_weakly_connected(r.dag));
    EXPECT_TRUE(graph_satisfies(r.dag, spec).ok());
}

TEST(Saiyanh, RandomRunsSatisfyEverything) {
    Rng rng(44);
    for (int trial = 0; trial < 20; ++trial) {
        auto bn = fixtures::random_bn(6, 0.4, 900 + trial);
        auto data = forward_sample(bn, 500, trial);
        auto input = test::random_knowledge(bn.dag(), rng, 0.3);
        auto spec = bind_spec(data.variables_ptr(), input);
        SearchConfig config;
        if (trial % 2) config.max_indegree = 2;
        LearnResult r;
        try {
            r = saiyanh(data, spec, config);
        } catch (const Error& e) {
            // FOR pairs can cut a variable off from everything.
            EXPECT_EQ(e.kind(), ErrorKind::NoAdmissibleConnector) << trial;
            continue;
        }
        EXPECT_TRUE(is_weakly_connected(r.dag)) << trial;
        EXPECT_TRUE(graph_satisfies(r.dag, spec).ok()) << trial;
        if (config.max_indegree) {
            for (VarIndex v = 0; v < 6; ++v) EXPECT_LE(r.dag.in_degree(v), 2u);
        }
    }
}

TEST(Saiyanh, Deterministic) {
    auto data = test::sample(fixtures::sports9(), 2000, 5);
    KnowledgeSpec spec(data.variables_ptr());
    SearchConfig parallel;
    parallel.parallel_neighbors = true;
    parallel.threads = 4;
    auto a = saiyanh(data, spec);
    auto b = saiyanh(data, spec, parallel);
    EXPECT_TRUE(a.dag == b.dag);
    EXPECT_EQ(a.score, b.score);
}

}  // namespace
}  // namespace kbn
