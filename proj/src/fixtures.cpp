#include <kbn/fixtures.hpp>
#include <kbn/error.hpp>
#include <kbn/random.hpp>
#include <kbn/scoring.hpp>

#include <algorithm>
#include <cmath>

namespace kbn::fixtures {

namespace {

struct Node {
    std::string name;
    std::vector<std::string> states;
    Cpt cpt;
};

// Nodes are declared in variable order; arcs by name.
DiscreteBn build(const std::vector<Node>& nodes, const std::vector<NamedEdge>& arcs) {
    std::vector<std::string> names;
    for (const auto& n : nodes) names.push_back(n.name);
    auto dag = validate_dag(make_variables(names), arcs);
    std::vector<std::size_t> arities;
    std::vector<Cpt> cpts;
    std::vector<std::vector<std::string>> labels;
    for (const auto& n : nodes) {
        arities.push_back(n.states.size());
        cpts.push_back(n.cpt);
        labels.push_back(n.states);
    }
    return DiscreteBn(std::move(dag), std::move(arities), std::move(cpts), std::move(labels));
}

const std::vector<std::string> kBinary{"no", "yes"};

// Rows that drift with the configuration index, for tables whose exact
// values do not matter.
Cpt graded(std::size_t configs, std::size_t arity, std::uint64_t seed) {
    Rng rng(seed);
    Cpt cpt;
    for (std::size_t j = 0; j < configs; ++j) {
        std::vector<double> row(arity);
        double sum = 0.0;
        for (std::size_t k = 0; k < arity; ++k) {
            const double favoured = (j + k) % arity == 0 ? 4.0 : 1.0;
            row[k] = std::round((favoured + rng.uniform()) * 100.0) / 100.0;
            sum += row[k];
        }
        double rest = 1.0;
        for (std::size_t k = 0; k + 1 < arity; ++k) {
            row[k] = std::round(row[k] / sum * 1000.0) / 1000.0;
            rest -= row[k];
        }
        row[arity - 1] = rest;
        cpt.push_back(row);
    }
    return cpt;
}

}  // namespace

Fixture chain3() {
    return {"chain3",
            build({{"A", kBinary, {{0.3, 0.7}}},
                   {"B", kBinary, {{0.9, 0.1}, {0.2, 0.8}}},
                   {"C", kBinary, {{0.85, 0.15}, {0.1, 0.9}}}},
                  {{"A", "B"}, {"B", "C"}}),
            "hand-built"};
}

Fixture collider3() {
    return {"collider3",
            build({{"A", kBinary, {{0.5, 0.5}}},
                   {"B", kBinary, {{0.6, 0.4}}},
                   {"C", kBinary, {{0.9, 0.1}, {0.3, 0.7}, {0.25, 0.75}, {0.05, 0.95}}}},
                  {{"A", "C"}, {"B", "C"}}),
            "hand-built"};
}

Fixture mixed5() {
    return {"mixed5",
            build({{"A", kBinary, {{0.4, 0.6}}},
                   {"B", kBinary, {{0.5, 0.5}}},
                   {"C",
                    {"low", "mid", "high"},
                    {{0.8, 0.15, 0.05}, {0.1, 0.8, 0.1}, {0.15, 0.1, 0.75}, {0.1, 0.45, 0.45}}},
                   {"D", kBinary, {{0.9, 0.1}, {0.5, 0.5}, {0.15, 0.85}}},
                   {"E", kBinary, {{0.85, 0.15}, {0.2, 0.8}}}},
                  {{"A", "C"}, {"B", "C"}, {"C", "D"}, {"D", "E"}}),
            "hand-built"};
}

Fixture asia8() {
    const std::vector<std::string> yn{"yes", "no"};
    return {"asia8",
            build({{"asia", yn, {{0.01, 0.99}}},
                   {"tub", yn, {{0.05, 0.95}, {0.01, 0.99}}},
                   {"smoke", yn, {{0.5, 0.5}}},
                   {"lung", yn, {{0.1, 0.9}, {0.01, 0.99}}},
                   {"bronc", yn, {{0.6, 0.4}, {0.3, 0.7}}},
                   {"either", yn, {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}},
                   {"xray", yn, {{0.98, 0.02}, {0.05, 0.95}}},
                   {"dysp", yn, {{0.9, 0.1}, {0.8, 0.2}, {0.7, 0.3}, {0.1, 0.9}}}},
                  {{"asia", "tub"},
                   {"smoke", "lung"},
                   {"smoke", "bronc"},
                   {"tub", "either"},
                   {"lung", "either"},
                   {"either", "xray"},
                   {"either", "dysp"},
                   {"bronc", "dysp"}}),
            "structure from the Asia network; tables hand-assigned"};
}

Fixture sports9() {
    const std::vector<std::string> hda{"H", "D", "A"};
    return {"sports9",
            build({{"RDlevel", kBinary, graded(1, 2, 1)},
                   {"possession", kBinary, graded(2, 2, 2)},
                   {"HTshots", kBinary, graded(4, 2, 3)},
                   {"ATshots", kBinary, graded(4, 2, 4)},
                   {"HTshotOnTarget", kBinary, graded(4, 2, 5)},
                   {"ATshotOnTarget", kBinary, graded(4, 2, 6)},
                   {"HTgoals", kBinary, graded(4, 2, 7)},
                   {"ATgoals", kBinary, graded(4, 2, 8)},
                   {"HDA", hda, graded(4, 3, 9)}},
                  {{"RDlevel", "possession"},
                   {"RDlevel", "HTshots"},
                   {"possession", "HTshots"},
                   {"RDlevel", "ATshots"},
                   {"possession", "ATshots"},
                   {"HTshots", "HTshotOnTarget"},
                   {"RDlevel", "HTshotOnTarget"},
                   {"ATshots", "ATshotOnTarget"},
                   {"RDlevel", "ATshotOnTarget"},
                   {"HTshotOnTarget", "HTgoals"},
                   {"possession", "HTgoals"},
                   {"ATshotOnTarget", "ATgoals"},
                   {"possession", "ATgoals"},
                   {"HTgoals", "HDA"},
                   {"ATgoals", "HDA"}}),
            "structure from the Sports network; tables generated"};
}

std::vector<Fixture> all() { return {chain3(), collider3(), mixed5(), asia8(), sports9()}; }

Fixture by_name(std::string_view name) {
    for (auto& f : all())
        if (f.name == name) return f;
    throw Error(ErrorKind::InvalidArgument, "unknown fixture '" + std::string(name) + "'");
}

DiscreteBn random_bn(std::size_t n, double density, std::uint64_t seed, std::size_t max_arity) {
    Rng rng(seed);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("X" + std::to_string(i + 1));
    auto vars = make_variables(names);
    std::vector<VarIndex> order(n);
    for (VarIndex v = 0; v < n; ++v) order[v] = v;
    rng.shuffle(order);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform() < density) edges.push_back({order[i], order[j]});
    Dag dag(vars, edges);

    std::vector<std::size_t> arities(n);
    for (auto& a : arities) a = 2 + rng.below(std::max<std::size_t>(max_arity, 2) - 1);
    std::vector<Cpt> cpts(n);
    for (VarIndex v = 0; v < n; ++v) {
        std::size_t configs = 1;
        for (auto p : dag.parents(v)) configs *= arities[p];
        for (std::size_t j = 0; j < configs; ++j) {
            std::vector<double> row(arities[v]);
            double sum = 0.0;
            // One favoured state per configuration, chosen at random.
            const auto peak = rng.below(arities[v]);
            for (std::size_t k = 0; k < row.size(); ++k) {
                row[k] = 0.05 + rng.uniform() + (k == peak ? 2.0 : 0.0);
                sum += row[k];
            }
            for (auto& x : row) x /= sum;
            double head = 0.0;
            for (std::size_t k = 0; k + 1 < row.size(); ++k) head += row[k];
            row.back() = 1.0 - head;
            cpts[v].push_back(row);
        }
    }
    return DiscreteBn(std::move(dag), std::move(arities), std::move(cpts));
}

std::vector<Dag> enumerate_dags(const VariablesPtr& variables) {
    const auto n = variables->size();
    if (n > 5) throw Error(ErrorKind::TooManyVariables, "enumeration is limited to five variables");
    std::vector<VarPair> pairs;
    for (VarIndex a = 0; a < n; ++a)
        for (VarIndex b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    std::size_t total = 1;
    for (std::size_t i = 0; i < pairs.size(); ++i) total *= 3;

    std::vector<Dag> out;
    std::vector<unsigned> parents(n);  // bitmask per node
    for (std::size_t code = 0; code < total; ++code) {
        std::fill(parents.begin(), parents.end(), 0u);
        std::vector<Edge> edges;
        auto rest = code;
        for (const auto& pr : pairs) {
            const auto state = rest % 3;
            rest /= 3;
            if (state == 1) {
                parents[pr.second] |= 1u << pr.first;
                edges.push_back({pr.first, pr.second});
            } else if (state == 2) {
                parents[pr.first] |= 1u << pr.second;
                edges.push_back({pr.second, pr.first});
            }
        }
        // Peel off parentless nodes; anything left sits on a cycle.
        unsigned placed = 0;
        bool progress = true;
        while (progress) {
            progress = false;
            for (VarIndex v = 0; v < n; ++v)
                if (!(placed >> v & 1) && (parents[v] & ~placed) == 0) {
                    placed |= 1u << v;
                    progress = true;
                }
        }
        if (placed == (1u << n) - 1) out.emplace_back(variables, edges);
    }
    return out;
}

ExhaustiveResult exhaustive_best_dag(const Dataset& data, const KnowledgeSpec& spec) {
    if (data.variables().size() > 5) {
        throw Error(ErrorKind::TooManyVariables, "exhaustive search is limited to five variables");
    }
    ScoreCache cache(data);
    std::optional<ExhaustiveResult> best;
    std::size_t candidates = 0;
    for (auto& g : enumerate_dags(spec.variables_ptr())) {
        if (!graph_satisfies(g, spec).ok()) continue;
        ++candidates;
        const double s = cache.graph_bic(g, spec.target_weights());
        if (!best || s > best->score) best = ExhaustiveResult{std::move(g), s, 0};
    }
    if (!best) throw Error(ErrorKind::ConstraintConflict, "no DAG satisfies the knowledge");
    best->candidates = candidates;
    return *best;
}

}  // namespace kbn::fixtures
