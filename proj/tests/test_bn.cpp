#include "test_support.hpp"

#include <kbn/bn.hpp>
#include <kbn/bn_io.hpp>
#include <kbn/dataset.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace kbn {
namespace {

using test::letters;
using test::parse_dag;

Dataset binary_data(const VariablesPtr& vars, std::vector<std::vector<State>> columns) {
    return Dataset(vars, std::vector<std::size_t>(vars->size(), 2), std::move(columns));
}

DiscreteBn copy_bn() {
    auto vars = letters(2);
    auto g = parse_dag(vars, "A>B");
    return DiscreteBn(g, {2, 2}, {{{0.4, 0.6}}, {{1.0, 0.0}, {0.0, 1.0}}});
}

TEST(Dataset, RejectsOutOfRangeCells) {
    EXPECT_KBN_ERROR(binary_data(letters(1), {{0, 2}}), ErrorKind::ArityMismatch);
    EXPECT_KBN_ERROR(binary_data(letters(2), {{0, 1}, {0}}), ErrorKind::ArityMismatch);
}

TEST(DiscreteBn, ValidatesTables) {
    auto g = parse_dag(letters(2), "A>B");
    EXPECT_THROW(DiscreteBn(g, {2, 2}, {{{0.5, 0.6}}, {{1, 0}, {0, 1}}}), Error);
    EXPECT_THROW(DiscreteBn(g, {2, 2}, {{{0.5, 0.5}}, {{1, 0}}}), Error);
    EXPECT_THROW(DiscreteBn(g, {1, 2}, {{{1.0}}, {{1, 0}}}), Error);
}

TEST(FamilyCounts, UniformMarginal) {
    auto data = binary_data(letters(1), {{0, 1, 0, 1}});
    auto t = family_counts(data, 0, {});
    EXPECT_EQ(t.counts, (std::vector<std::uint64_t>{2, 2}));
}

TEST(FamilyCounts, DeterministicCopy) {
    auto data = forward_sample(copy_bn(), 10, 4);
    const std::vector<VarIndex> parents{0};
    auto t = family_counts(data, 1, parents);
    EXPECT_EQ(t.count(0, 1), 0u);
    EXPECT_EQ(t.count(1, 0), 0u);
    EXPECT_EQ(t.total(), 10u);
}

TEST(FamilyCounts, RejectsChildAmongParents) {
    auto data = binary_data(letters(2), {{0, 1}, {1, 0}});
    const std::vector<VarIndex> parents{0, 1};
    EXPECT_KBN_ERROR(family_counts(data, 1, parents), ErrorKind::ArityMismatch);
}

TEST(FamilyCounts, MatchesRowScan) {
    Rng rng(21);
    auto vars = letters(4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> arity{2, 3, 2, 4};
        std::vector<std::vector<State>> cols(4);
        for (VarIndex v = 0; v < 4; ++v)
            for (int r = 0; r < 6; ++r) cols[v].push_back(static_cast<State>(rng.below(arity[v])));
        Dataset data(vars, arity, cols);
        const std::vector<VarIndex> parents{3, 1};
        auto t = family_counts(data, 0, parents);
        ASSERT_EQ(t.configurations(), 12u);
        for (std::size_t j = 0; j < 12; ++j) {
            const std::size_t p3 = j / 3, p1 = j % 3;
            for (State k = 0; k < 2; ++k) {
                std::uint64_t n = 0;
                for (int r = 0; r < 6; ++r) n += cols[3][r] == p3 && cols[1][r] == p1 && cols[0][r] == k;
                EXPECT_EQ(t.count(j, k), n);
            }
            EXPECT_EQ(t.config_total(j), t.count(j, 0) + t.count(j, 1));
        }
        EXPECT_EQ(t.total(), 6u);
    }
}

TEST(MleFit, DeterministicCopy) {
    auto vars = letters(2);
    auto data = binary_data(vars, {{0, 0, 1, 1}, {0, 0, 1, 1}});
    auto bn = mle_fit(parse_dag(vars, "A>B"), data);
    EXPECT_DOUBLE_EQ(bn.cpt(1)[0][0], 1.0);
    EXPECT_DOUBLE_EQ(bn.cpt(1)[1][1], 1.0);
}

TEST(MleFit, Marginal) {
    auto vars = letters(1);
    auto bn = mle_fit(Dag(vars), binary_data(vars, {{0, 1, 1, 0}}));
    EXPECT_DOUBLE_EQ(bn.cpt(0)[0][0], 0.5);
}

TEST(MleFit, UnobservedConfigurationIsUniform) {
    auto vars = letters(2);
    auto data = binary_data(vars, {{0, 0, 0}, {0, 1, 1}});
    auto bn = mle_fit(parse_dag(vars, "A>B"), data);
    EXPECT_DOUBLE_EQ(bn.cpt(1)[0][1], 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(bn.cpt(1)[1][0], 0.5);
    EXPECT_DOUBLE_EQ(bn.cpt(1)[1][1], 0.5);
}

TEST(MleFit, RejectsForeignVariables) {
    auto data = binary_data(letters(2), {{0, 1}, {1, 0}});
    EXPECT_KBN_ERROR(mle_fit(Dag(letters(3)), data), ErrorKind::ArityMismatch);
}

TEST(ForwardSample, DeterministicTableCopies) {
    auto data = forward_sample(copy_bn(), 500, 9);
    for (std::size_t r = 0; r < data.rows(); ++r) EXPECT_EQ(data.at(r, 0), data.at(r, 1));
}

TEST(ForwardSample, FrequencyConcentrates) {
    auto vars = letters(1);
    DiscreteBn bn(Dag(vars), {2}, {{{0.7, 0.3}}});
    auto data = forward_sample(bn, 100000, 1);
    double ones = 0;
    for (auto s : data.column(0)) ones += s;
    EXPECT_NEAR(ones / 100000.0, 0.3, 0.01);
}

TEST(ForwardSample, SameSeedSameData) {
    auto f = fixtures::asia8();
    EXPECT_TRUE(forward_sample(f.bn, 300, 77) == forward_sample(f.bn, 300, 77));
    EXPECT_FALSE(forward_sample(f.bn, 300, 77) == forward_sample(f.bn, 300, 78));
}

// Fitting to a large sample recovers every table entry.
TEST(ForwardSample, RefitRecoversTables) {
    for (const auto& f : {fixtures::chain3(), fixtures::collider3()}) {
        auto data = forward_sample(f.bn, 100000, 5);
        auto fit = mle_fit(f.bn.dag(), data);
        for (VarIndex v = 0; v < f.bn.dag().size(); ++v)
            for (std::size_t j = 0; j < f.bn.cpt(v).size(); ++j)
                for (std::size_t k = 0; k < f.bn.arity(v); ++k)
                    EXPECT_NEAR(fit.cpt(v)[j][k], f.bn.cpt(v)[j][k], 0.01) << f.name;
    }
}

// A different topological order changes the draws but not the distribution.
TEST(ForwardSample, OrderIndependentDistribution) {
    auto f = fixtures::mixed5();
    const auto& g = f.bn.dag();
    std::vector<VarIndex> alt{1, 0, 2, 3, 4};
    auto a = forward_sample(f.bn, 100000, 3);
    auto b = forward_sample(f.bn, 100000, 3, alt);
    for (VarIndex v = 0; v < g.size(); ++v) {
        std::vector<double> fa(f.bn.arity(v)), fb(f.bn.arity(v));
        for (auto s : a.column(v)) fa[s] += 1e-5;
        for (auto s : b.column(v)) fb[s] += 1e-5;
        for (std::size_t k = 0; k < fa.size(); ++k) EXPECT_NEAR(fa[k], fb[k], 0.01);
    }
    EXPECT_KBN_ERROR(forward_sample(f.bn, 10, 3, {4, 3, 2, 1, 0}), ErrorKind::InvalidArgument);
}

TEST(NetworkJson, RoundTrip) {
    for (const auto& f : fixtures::all()) {
        std::stringstream buffer;
        io::write_network_json(buffer, f.bn);
        auto doc = io::read_network_json(buffer);
        auto bn = io::network_bn(doc);
        EXPECT_TRUE(bn.dag() == f.bn.dag()) << f.name;
        EXPECT_EQ(bn.arities(), f.bn.arities());
        for (VarIndex v = 0; v < bn.dag().size(); ++v) EXPECT_EQ(bn.cpt(v), f.bn.cpt(v));
        EXPECT_EQ(bn.state_labels(), f.bn.state_labels());
    }
}

// The checked-in network files are the builders' output.
TEST(NetworkJson, DataFilesMatchBuilders) {
    for (const auto& f : fixtures::all()) {
        auto doc = io::read_network_json_file(std::string(KBN_TEST_DATA) + "/" + f.name + ".json");
        auto bn = io::network_bn(doc);
        EXPECT_TRUE(bn.dag() == f.bn.dag()) << f.name;
        for (VarIndex v = 0; v < bn.dag().size(); ++v) EXPECT_EQ(bn.cpt(v), f.bn.cpt(v)) << f.name;
    }
}

TEST(DatasetCsv, LabelsFirstAppearanceOrder) {
    std::stringstream in("A,B\nyes,lo\nno,hi\nyes,hi\n");
    auto data = io::read_dataset_csv(in);
    EXPECT_EQ(data.rows(), 3u);
    EXPECT_EQ(data.state_labels(0), (std::vector<std::string>{"yes", "no"}));
    EXPECT_EQ(data.at(1, 0), 1);
    EXPECT_EQ(data.at(2, 1), 1);
}

TEST(DatasetCsv, NetworkFixesStateOrder) {
    io::NetworkDocument doc;
    doc.variables = {"A"};
    doc.states = {{"no", "yes"}};
    std::stringstream in("A\nyes\nno\n");
    auto data = io::read_dataset_csv(in, &doc);
    EXPECT_EQ(data.at(0, 0), 1);
    std::stringstream bad("A\nmaybe\n");
    EXPECT_KBN_ERROR(io::read_dataset_csv(bad, &doc), ErrorKind::MalformedRow);
    std::stringstream ragged("A,B\nx\n");
    EXPECT_KBN_ERROR(io::read_dataset_csv(ragged), ErrorKind::MalformedRow);
}

TEST(DatasetCsv, RoundTrip) {
    auto data = forward_sample(fixtures::mixed5().bn, 50, 2);
    std::stringstream buffer;
    io::write_dataset_csv(buffer, data);
    auto back = io::read_dataset_csv(buffer);
    for (VarIndex v = 0; v < data.variable_count(); ++v)
        for (std::size_t r = 0; r < data.rows(); ++r)
            EXPECT_EQ(data.state_labels(v)[data.at(r, v)], back.state_labels(v)[back.at(r, v)]);
}

}  // namespace
}  // namespace kbn
