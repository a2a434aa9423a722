// kbnlearn: command-line front end for structure learning with knowledge.

#include <kbn/bn_io.hpp>
#include <kbn/csv.hpp>
#include <kbn/error.hpp>
#include <kbn/evaluation.hpp>
#include <kbn/experiment.hpp>
#include <kbn/graph_io.hpp>
#include <kbn/knowledge_io.hpp>
#include <kbn/sampler.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct LearnArgs {
    std::string algo = "hc";
    std::string data;
    std::string net;
    std::string directed, undirected, forbidden, tiers, initial, bdn_roles;
    bool tiers_strict = false;
    bool var_rel = false;
    bool bdn_strict = false;
    std::string targets, decisions, utilities;
    std::optional<std::size_t> max_indegree;
    std::size_t prune_indegree = 3;
    std::optional<std::size_t> tabu_cap;
    std::uint64_t seed = 0;
    std::optional<double> timeout;
    bool parallel = false;
    std::string out = ".";
};

struct SampleDataArgs {
    std::string net;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::string out;
};

struct SampleConstraintArgs {
    std::string net;
    std::string approach;
    double rate = 0.5;
    std::uint64_t seed = 0;
    std::string out = ".";
};

struct EvaluateArgs {
    std::string learned, truth, vars;
    std::string mode = "dag";
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto t = kbn::csv::trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

std::vector<std::pair<std::string, double>> parse_targets(const std::string& s) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& item : split_list(s)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw kbn::Error(kbn::ErrorKind::InvalidArgument, "target '" + item + "' must look like name=r");
        }
        double r = 0.0;
        try {
            r = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw kbn::Error(kbn::ErrorKind::InvalidArgument, "target '" + item + "' has no numeric weight");
        }
        out.emplace_back(kbn::csv::trim(item.substr(0, eq)), r);
    }
    return out;
}

kbn::Dag read_truth(const std::string& path, const std::string& vars_path) {
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        return kbn::io::network_dag(kbn::io::read_network_json_file(path));
    }
    if (vars_path.empty()) {
        throw kbn::Error(kbn::ErrorKind::InvalidArgument, "an edge-list graph needs --vars");
    }
    return kbn::validate_dag(kbn::io::read_variable_manifest(vars_path), kbn::io::read_edge_list_file(path));
}

void write_json_file(const fs::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw kbn::Error(kbn::ErrorKind::Io, "cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

int cmd_learn(const LearnArgs& a) {
    std::optional<kbn::io::NetworkDocument> net;
    if (!a.net.empty()) net = kbn::io::read_network_json_file(a.net);
    const auto data = kbn::io::read_dataset_csv_file(a.data, net ? &*net : nullptr);

    kbn::KnowledgeInput in;
    using kbn::io::PairHeader;
    if (!a.directed.empty()) in.directed = kbn::io::parse_edge_constraints_file(a.directed, PairHeader::Directed);
    if (!a.undirected.empty()) {
        in.undirected = kbn::io::parse_edge_constraints_file(a.undirected, PairHeader::Undirected);
    }
    if (!a.forbidden.empty()) {
        in.forbidden = kbn::io::parse_edge_constraints_file(a.forbidden, PairHeader::Undirected);
    }
    if (!a.tiers.empty()) {
        in.tiers = kbn::io::parse_tiers_file(a.tiers);
        in.tiers_strict = a.tiers_strict;
    } else if (a.tiers_strict) {
        throw kbn::Error(kbn::ErrorKind::InvalidArgument, "--tiers-strict needs --tiers");
    }
    if (!a.initial.empty()) in.initial_graph = kbn::io::read_edge_list_file(a.initial);
    in.variables_relevant = a.var_rel;
    in.targets = parse_targets(a.targets);
    if (!a.bdn_roles.empty() || !a.decisions.empty() || !a.utilities.empty() || a.bdn_strict) {
        kbn::BdnAnnotation roles;
        if (!a.bdn_roles.empty()) roles = kbn::io::parse_bdn_roles_file(a.bdn_roles);
        for (auto& d : split_list(a.decisions)) roles.decisions.push_back(d);
        for (auto& u : split_list(a.utilities)) roles.utilities.push_back(u);
        in.bdn = std::move(roles);
        in.bdn_strict = a.bdn_strict;
    }
    const auto spec = kbn::KnowledgeSpec::bind(data.variables_ptr(), in);

    kbn::SearchConfig config;
    config.max_indegree = a.max_indegree;
    config.mahc_prune_indegree = a.prune_indegree;
    config.tabu_iteration_cap = a.tabu_cap;
    config.seed = a.seed;
    config.timeout_seconds = a.timeout;
    config.parallel_neighbors = a.parallel;
    const auto result = kbn::learn(a.algo, data, spec, config);

    fs::create_directories(a.out);
    kbn::io::write_edge_list_file((fs::path(a.out) / "graph.csv").string(), result.dag);
    json report{{"algorithm", result.algorithm},
                {"score", result.score},
                {"bic", result.bic},
                {"free_parameters", result.free_parameters},
                {"arcs", result.arcs},
                {"iterations", result.iterations},
                {"runtime_seconds", result.runtime_seconds},
                {"constraints_applied", result.constraints_applied},
                {"warnings", result.warnings}};
    json phases = json::object();
    for (const auto& [name, secs] : result.phase_durations) phases[name] = secs;
    report["phase_durations"] = phases;
    if (result.bdn) {
        json nodes = json::object();
        for (kbn::VarIndex v = 0; v < result.dag.size(); ++v) {
            nodes[result.dag.name(v)] = std::string(kbn::node_kind_name(result.bdn->kinds[v]));
        }
        json arcs = json::array();
        for (const auto& arc : result.bdn->arcs) {
            arcs.push_back({result.dag.name(arc.edge.parent), result.dag.name(arc.edge.child),
                            std::string(kbn::arc_kind_name(arc.kind))});
        }
        report["bdn"] = {{"nodes", nodes}, {"arcs", arcs}};
    }
    write_json_file(fs::path(a.out) / "report.json", report);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_sample_data(const SampleDataArgs& a) {
    const auto bn = kbn::io::network_bn(kbn::io::read_network_json_file(a.net));
    const auto data = kbn::forward_sample(bn, a.n, a.seed);
    if (a.out.empty() || a.out == "-") {
        kbn::io::write_dataset_csv(std::cout, data);
    } else {
        kbn::io::write_dataset_csv_file(a.out, data);
    }
    return 0;
}

int cmd_sample_constraints(const SampleConstraintArgs& a) {
    const auto truth = kbn::io::network_dag(kbn::io::read_network_json_file(a.net));
    const auto approach = kbn::parse_approach(a.approach);
    const auto in = kbn::sample_knowledge(truth, approach, a.rate, a.seed);
    fs::create_directories(a.out);
    const fs::path dir(a.out);
    using kbn::io::PairHeader;
    json written = json::array();
    auto note = [&](const fs::path& p) { written.push_back(p.string()); };
    switch (approach) {
        case kbn::Approach::DirEdg:
            kbn::io::write_edge_constraints_file((dir / "directed.csv").string(), in.directed, PairHeader::Directed);
            note(dir / "directed.csv");
            break;
        case kbn::Approach::UndEdg:
            kbn::io::write_edge_constraints_file((dir / "undirected.csv").string(), in.undirected,
                                                 PairHeader::Undirected);
            note(dir / "undirected.csv");
            break;
        case kbn::Approach::ForEdg:
            kbn::io::write_edge_constraints_file((dir / "forbidden.csv").string(), in.forbidden,
                                                 PairHeader::Undirected);
            note(dir / "forbidden.csv");
            break;
        case kbn::Approach::RelTem:
        case kbn::Approach::StrTem:
            kbn::io::write_tiers_file((dir / "tiers.csv").string(), *in.tiers);
            note(dir / "tiers.csv");
            break;
        case kbn::Approach::IniGra: {
            kbn::io::write_edge_constraints_file((dir / "initial.csv").string(), *in.initial_graph,
                                                 PairHeader::Directed);
            note(dir / "initial.csv");
            break;
        }
        default: break;
    }
    std::cout << json{{"approach", std::string(kbn::approach_name(approach))}, {"files", written}}.dump(2) << "\n";
    return 0;
}

int cmd_evaluate(const EvaluateArgs& a) {
    const auto truth = read_truth(a.truth, a.vars);
    const auto learned = kbn::validate_dag(truth.variables_ptr(), kbn::io::read_edge_list_file(a.learned));
    const auto report = kbn::evaluate(learned, truth, kbn::parse_eval_mode(a.mode));
    const auto& c = report.counts;
    json out{{"mode", std::string(kbn::eval_mode_name(report.mode))},
             {"tp", c.tp},
             {"fp", c.fp},
             {"fn", c.fn},
             {"tn", c.tn},
             {"reversals", c.reversals},
             {"f1", report.f1},
             {"shd", report.shd},
             {"bsf", report.bsf}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_experiment(const std::string& manifest_path, bool quiet) {
    const auto manifest = kbn::ExperimentManifest::from_json_file(manifest_path);
    const auto summary = kbn::run_experiment(manifest, quiet ? nullptr : &std::cerr);
    std::cout << json{{"executed", summary.executed},
                      {"resumed", summary.resumed},
                      {"skipped", summary.skipped},
                      {"results", summary.results_path},
                      {"aggregates", summary.aggregates_path}}
                     .dump(2)
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian network structure learning with knowledge constraints"};
    app.require_subcommand(1);

    LearnArgs learn;
    auto* lc = app.add_subcommand("learn", "Learn a graph from a dataset");
    lc->add_option("--algo", learn.algo, "hc, tabu, saiyanh or mahc")
        ->check(CLI::IsMember({"hc", "tabu", "saiyanh", "mahc"}));
    lc->add_option("--data", learn.data, "Dataset CSV")->required();
    lc->add_option("--net", learn.net, "Network JSON fixing variable states");
    lc->add_option("--directed", learn.directed, "DIR-EDG CSV (ID,Parent,Child)");
    lc->add_option("--undirected", learn.undirected, "UND-EDG CSV (ID,Var1,Var2)");
    lc->add_option("--forbidden", learn.forbidden, "FOR-EDG CSV (ID,Var1,Var2)");
    lc->add_option("--tiers", learn.tiers, "Temporal tiers CSV (ID,Tier 1,...)");
    lc->add_flag("--tiers-strict", learn.tiers_strict, "Also forbid edges within a tier");
    lc->add_option("--initial", learn.initial, "Initial graph edge list");
    lc->add_flag("--var-rel", learn.var_rel, "Require a connected graph");
    lc->add_option("--targets", learn.targets, "Penalty divisors, name=r,...");
    lc->add_option("--decisions", learn.decisions, "Decision nodes, comma separated");
    lc->add_option("--utilities", learn.utilities, "Utility nodes, comma separated");
    lc->add_option("--bdn", learn.bdn_roles, "Decision/utility CSV (ID,Decision,Utility)");
    lc->add_flag("--bdn-strict", learn.bdn_strict, "Decisions need a child, utilities a parent");
    lc->add_option("--max-indegree", learn.max_indegree, "Maximum in-degree");
    lc->add_option("--prune-indegree", learn.prune_indegree, "MAHC pruning in-degree")->capture_default_str();
    lc->add_option("--tabu-cap", learn.tabu_cap, "TABU escape iterations (default V(V-1))");
    lc->add_option("--seed", learn.seed, "Random seed")->capture_default_str();
    lc->add_option("--timeout-secs", learn.timeout, "Runtime limit in seconds");
    lc->add_flag("--parallel", learn.parallel, "Score neighbours on several threads");
    lc->add_option("--out", learn.out, "Output directory")->capture_default_str();

    auto* sc = app.add_subcommand("sample", "Sample data or constraints from a network");
    sc->require_subcommand(1);
    SampleDataArgs sdata;
    auto* sd = sc->add_subcommand("data", "Forward-sample a dataset");
    sd->add_option("--net", sdata.net, "Network JSON with CPTs")->required();
    sd->add_option("--n", sdata.n, "Rows")->capture_default_str();
    sd->add_option("--seed", sdata.seed, "Random seed")->capture_default_str();
    sd->add_option("--out", sdata.out, "Output CSV (stdout when omitted)");
    SampleConstraintArgs scons;
    auto* scn = sc->add_subcommand("constraints", "Sample knowledge from the true graph");
    scn->add_option("--net", scons.net, "Network JSON")->required();
    scn->add_option("--approach", scons.approach, "Approach, e.g. dir-edg")->required();
    scn->add_option("--rate", scons.rate, "Constraint rate")->capture_default_str();
    scn->add_option("--seed", scons.seed, "Random seed")->capture_default_str();
    scn->add_option("--out", scons.out, "Output directory")->capture_default_str();

    EvaluateArgs eval;
    auto* ec = app.add_subcommand("evaluate", "Compare a learned graph with the truth");
    ec->add_option("--learned", eval.learned, "Learned edge list")->required();
    ec->add_option("--truth", eval.truth, "True graph: edge list or network JSON")->required();
    ec->add_option("--vars", eval.vars, "Variable manifest for edge-list truths");
    ec->add_option("--mode", eval.mode, "dag or cpdag")->capture_default_str();

    std::string manifest;
    bool quiet = false;
    auto* xc = app.add_subcommand("experiment", "Run an experiment grid");
    xc->add_option("--manifest", manifest, "Manifest JSON")->required();
    xc->add_flag("--quiet", quiet, "No per-run log");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*lc) return cmd_learn(learn);
        if (*sd) return cmd_sample_data(sdata);
        if (*scn) return cmd_sample_constraints(scons);
        if (*ec) return cmd_evaluate(eval);
        if (*xc) return cmd_experiment(manifest, quiet);
    } catch (const kbn::Error& e) {
        std::cerr << json{{"error", std::string(kbn::error_kind_name(e.kind()))}, {"message", e.what()}}.dump()
                  << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "Io"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }
    return 1;
}
