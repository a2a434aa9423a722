#include <kbn/sampler.hpp>
#include <kbn/error.hpp>
#include <kbn/random.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace kbn {

namespace {

constexpr Approach kAll[] = {Approach::DirEdg, Approach::UndEdg, Approach::ForEdg, Approach::RelTem,
                             Approach::StrTem, Approach::IniGra, Approach::VarRel, Approach::TarVar,
                             Approach::RelBdn, Approach::StrBdn};

void require_legal(Approach a, double rate) {
    const auto rates = legal_rates(a);
    for (double r : rates)
        if (std::fabs(r - rate) < 1e-12) return;
    throw Error(ErrorKind::IllegalRate,
                "rate " + std::to_string(rate) + " is not defined for " + std::string(approach_name(a)));
}

std::vector<Edge> permuted_edges(const Dag& truth, std::uint64_t seed) {
    auto edges = truth.edges();
    Rng rng(seed);
    rng.shuffle(edges);
    return edges;
}

std::vector<NamedEdge> named(const Dag& dag, const std::vector<Edge>& edges) {
    std::vector<NamedEdge> out;
    for (const auto& e : edges) out.emplace_back(dag.name(e.parent), dag.name(e.child));
    return out;
}

}  // namespace

std::string_view approach_name(Approach a) {
    switch (a) {
        case Approach::DirEdg: return "DIR-EDG";
        case Approach::UndEdg: return "UND-EDG";
        case Approach::ForEdg: return "FOR-EDG";
        case Approach::RelTem: return "REL-TEM";
        case Approach::StrTem: return "STR-TEM";
        case Approach::IniGra: return "INI-GRA";
        case Approach::VarRel: return "VAR-REL";
        case Approach::TarVar: return "TAR-VAR";
        case Approach::RelBdn: return "REL-BDN";
        case Approach::StrBdn: return "STR-BDN";
    }
    return "";
}

Approach parse_approach(std::string_view name) {
    std::string upper(name);
    for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    for (auto a : kAll)
        if (approach_name(a) == upper) return a;
    throw Error(ErrorKind::InvalidArgument, "unknown approach '" + std::string(name) + "'");
}

std::vector<double> legal_rates(Approach a) {
    switch (a) {
        case Approach::DirEdg:
        case Approach::UndEdg:
        case Approach::ForEdg:
        case Approach::RelTem:
        case Approach::StrTem: return {0.05, 0.10, 0.20, 0.50};
        case Approach::IniGra: return {0.50, 1.00};
        default: return {};
    }
}

bool takes_rate(Approach a) { return !legal_rates(a).empty(); }

std::size_t sample_count(double rate, std::size_t population) {
    // The small epsilon keeps products such as 0.5 * 37 = 18.5 on the upper side.
    return static_cast<std::size_t>(std::floor(rate * static_cast<double>(population) + 0.5 + 1e-9));
}

std::vector<Edge> sample_edge_constraints(const Dag& truth, double rate, std::uint64_t seed) {
    if (!(rate >= 0.0) || rate > 0.5 + 1e-12) {
        throw Error(ErrorKind::IllegalRate, "edge constraints are sampled at rates up to 50%");
    }
    auto edges = permuted_edges(truth, seed);
    edges.resize(std::min(edges.size(), sample_count(rate, edges.size())));
    return edges;
}

TemporalTiers sample_tiers(const Dag& truth, double rate, std::uint64_t seed) {
    if (!(rate > 0.0) || rate > 1.0 + 1e-12) throw Error(ErrorKind::IllegalRate, "tier rate must be in (0, 1]");
    const auto n = truth.size();
    const auto k = std::min(n, sample_count(rate, n));
    if (k < 2) {
        throw Error(ErrorKind::TooFewVariables,
                    "temporal constraints need at least two variables; rate " + std::to_string(rate) + " selects " +
                        std::to_string(k) + " of " + std::to_string(n));
    }
    std::vector<VarIndex> order(n);
    for (VarIndex v = 0; v < n; ++v) order[v] = v;
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<char> chosen(n, 0);
    for (std::size_t i = 0; i < k; ++i) chosen[order[i]] = 1;

    const auto layers = layer_by_longest_path(truth);
    TemporalTiers out;
    for (const auto& layer : layers.tiers) {
        std::vector<std::string> kept;
        for (const auto& name : layer)
            if (chosen[truth.variables().index_of(name)]) kept.push_back(name);
        if (!kept.empty()) out.tiers.push_back(std::move(kept));
    }
    return out;
}

Dag sample_initial_graph(const Dag& truth, double rate, std::uint64_t seed) {
    if (std::fabs(rate - 1.0) < 1e-12) return truth;
    if (std::fabs(rate - 0.5) < 1e-12) return Dag(truth.variables_ptr(), sample_edge_constraints(truth, 0.5, seed));
    throw Error(ErrorKind::IllegalRate, "initial graphs are sampled at 50% or 100%");
}

KnowledgeInput sample_knowledge(const Dag& truth, Approach approach, double rate, std::uint64_t seed) {
    if (takes_rate(approach)) require_legal(approach, rate);
    KnowledgeInput in;
    switch (approach) {
        case Approach::DirEdg: in.directed = named(truth, sample_edge_constraints(truth, rate, seed)); break;
        case Approach::UndEdg: in.undirected = named(truth, sample_edge_constraints(truth, rate, seed)); break;
        case Approach::ForEdg: {
            // Pairs absent from the truth, as many as the edge sample holds.
            std::vector<VarPair> absent;
            for (VarIndex a = 0; a < truth.size(); ++a)
                for (VarIndex b = a + 1; b < truth.size(); ++b)
                    if (!truth.adjacent(a, b)) absent.push_back(VarPair(a, b));
            Rng rng(seed);
            rng.shuffle(absent);
            absent.resize(std::min(absent.size(), sample_count(rate, truth.edge_count())));
            for (const auto& pr : absent) in.forbidden.emplace_back(truth.name(pr.first), truth.name(pr.second));
            break;
        }
        case Approach::RelTem:
        case Approach::StrTem:
            in.tiers = sample_tiers(truth, rate, seed);
            in.tiers_strict = approach == Approach::StrTem;
            break;
        case Approach::IniGra: {
            const auto g = sample_initial_graph(truth, rate, seed);
            in.initial_graph = named(g, g.edges());
            break;
        }
        case Approach::VarRel: in.variables_relevant = true; break;
        case Approach::TarVar: break;
        case Approach::RelBdn:
        case Approach::StrBdn:
            in.bdn = BdnAnnotation{};
            in.bdn_strict = approach == Approach::StrBdn;
            break;
    }
    return in;
}

}  // namespace kbn
