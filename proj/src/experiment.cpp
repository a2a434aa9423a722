#include <kbn/experiment.hpp>
#include <kbn/bn_io.hpp>
#include <kbn/csv.hpp>
#include <kbn/error.hpp>
#include <kbn/graph_io.hpp>
#include <kbn/saiyanh.hpp>

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

namespace kbn {

namespace fs = std::filesystem;
using nlohmann::json;

LearnResult learn(std::string_view algorithm, const Dataset& data, const KnowledgeSpec& spec,
                  const SearchConfig& config) {
    if (algorithm == "hc") return hill_climb(data, spec, config);
    if (algorithm == "tabu") return tabu(data, spec, config);
    if (algorithm == "mahc") return mahc(data, spec, config);
    if (algorithm == "saiyanh") return saiyanh(data, spec, config);
    throw Error(ErrorKind::InvalidArgument, "unknown algorithm '" + std::string(algorithm) + "'");
}

namespace {

std::string number(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

double parse_double(const std::string& s) {
    double x = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || end != s.data() + s.size()) {
        throw Error(ErrorKind::MalformedRow, "not a number: '" + s + "'");
    }
    return x;
}

std::uint64_t parse_unsigned(const std::string& s) {
    std::uint64_t x = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || end != s.data() + s.size()) {
        throw Error(ErrorKind::MalformedRow, "not a count: '" + s + "'");
    }
    return x;
}

const std::vector<std::string> kColumns{
    "case",     "n",         "algorithm",  "approach",   "rate",          "seed",       "status",
    "message",  "score",     "bic",        "free_parameters", "arcs",     "iterations", "runtime_seconds",
    "dag_tp",   "dag_fp",    "dag_fn",     "dag_tn",     "dag_reversals", "dag_f1",     "dag_shd",
    "dag_bsf",  "cpdag_tp",  "cpdag_fp",   "cpdag_fn",   "cpdag_tn",      "cpdag_reversals",
    "cpdag_f1", "cpdag_shd", "cpdag_bsf",  "graph_file"};

void append_report(csv::Row& row, const std::optional<EvalReport>& r) {
    if (!r) {
        row.insert(row.end(), 8, "");
        return;
    }
    const auto& c = r->counts;
    for (double x : {c.tp, c.fp, c.fn, c.tn}) row.push_back(number(x));
    row.push_back(std::to_string(c.reversals));
    for (double x : {r->f1, r->shd, r->bsf}) row.push_back(number(x));
}

std::optional<EvalReport> parse_report(const csv::Row& row, std::size_t at, EvalMode mode) {
    if (row[at].empty()) return std::nullopt;
    EvalReport r;
    r.mode = mode;
    r.counts.tp = parse_double(row[at]);
    r.counts.fp = parse_double(row[at + 1]);
    r.counts.fn = parse_double(row[at + 2]);
    r.counts.tn = parse_double(row[at + 3]);
    r.counts.reversals = parse_unsigned(row[at + 4]);
    r.f1 = parse_double(row[at + 5]);
    r.shd = parse_double(row[at + 6]);
    r.bsf = parse_double(row[at + 7]);
    return r;
}

std::string resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path.string() : (base / path).lexically_normal().string();
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentManifest ExperimentManifest::from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    ExperimentManifest m;
    const auto base = fs::path(path).parent_path();
    try {
        json doc;
        in >> doc;
        m.case_name = doc.at("case").get<std::string>();
        m.network = resolve(base, doc.at("network").get<std::string>());
        const auto cls = doc.value("class", std::string("small"));
        if (cls != "small" && cls != "large") {
            throw Error(ErrorKind::InvalidArgument, "class must be 'small' or 'large'");
        }
        m.large = cls == "large";
        if (doc.contains("sample_sizes")) m.sample_sizes = doc.at("sample_sizes").get<std::vector<std::size_t>>();
        if (doc.contains("algorithms")) m.algorithms = doc.at("algorithms").get<std::vector<std::string>>();
        for (const auto& a : doc.value("approaches", json::array())) {
            ApproachRates ar{parse_approach(a.at("approach").get<std::string>()),
                             a.value("rates", std::vector<double>{})};
            m.approaches.push_back(std::move(ar));
        }
        if (doc.contains("seeds")) m.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
        m.timeout_secs = doc.value("timeout_secs", m.timeout_secs);
        m.output_dir = resolve(base, doc.value("output_dir", m.case_name));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("invalid manifest: ") + e.what());
    }
    m.validate();
    return m;
}

void ExperimentManifest::validate() const {
    if (case_name.empty()) throw Error(ErrorKind::InvalidArgument, "manifest needs a case name");
    if (!(timeout_secs > 0)) throw Error(ErrorKind::InvalidArgument, "timeout must be positive");
    if (sample_sizes.empty() || seeds.empty() || algorithms.empty()) {
        throw Error(ErrorKind::InvalidArgument, "manifest needs sample sizes, seeds and algorithms");
    }
    for (const auto& a : algorithms) {
        if (a != "hc" && a != "tabu" && a != "saiyanh" && a != "mahc") {
            throw Error(ErrorKind::InvalidArgument, "unknown algorithm '" + a + "'");
        }
    }
    for (const auto& ar : approaches) {
        const auto legal = legal_rates(ar.approach);
        if (legal.empty() && !ar.rates.empty()) {
            throw Error(ErrorKind::IllegalRate, std::string(approach_name(ar.approach)) + " takes no rate");
        }
        if (!legal.empty() && ar.rates.empty()) {
            throw Error(ErrorKind::IllegalRate, std::string(approach_name(ar.approach)) + " needs rates");
        }
        for (double r : ar.rates) {
            bool ok = false;
            for (double l : legal) ok = ok || std::fabs(l - r) < 1e-12;
            if (!ok) {
                throw Error(ErrorKind::IllegalRate,
                            "rate " + number(r) + " is not defined for " + std::string(approach_name(ar.approach)));
            }
        }
    }
}

std::string RunRecord::key() const {
    return case_name + "|" + std::to_string(n) + "|" + algorithm + "|" + approach + "|" + number(rate) + "|" +
           std::to_string(seed);
}

void write_run_header(std::ostream& out) { csv::write_row(out, kColumns); }

void write_run_record(std::ostream& out, const RunRecord& r) {
    csv::Row row{r.case_name, std::to_string(r.n), r.algorithm, r.approach, number(r.rate),
                 std::to_string(r.seed), r.status, r.message};
    if (r.status == "ok") {
        row.insert(row.end(), {number(r.score), number(r.bic), number(r.free_parameters), std::to_string(r.arcs),
                               std::to_string(r.iterations), number(r.runtime_seconds)});
    } else {
        row.insert(row.end(), 6, "");
    }
    append_report(row, r.dag);
    append_report(row, r.cpdag);
    row.push_back(r.graph_file);
    csv::write_row(out, row);
}

std::vector<RunRecord> read_run_records(const std::string& path) {
    auto rows = csv::read_file(path);
    std::vector<RunRecord> out;
    if (rows.empty()) return out;
    if (rows.front() != kColumns) throw Error(ErrorKind::MalformedRow, path + ": unexpected results header");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        auto& row = rows[i];
        if (row.size() != kColumns.size()) {
            throw Error(ErrorKind::MalformedRow, path + ": row " + std::to_string(i + 1) + " has the wrong width");
        }
        RunRecord r;
        r.case_name = row[0];
        r.n = parse_unsigned(row[1]);
        r.algorithm = row[2];
        r.approach = row[3];
        r.rate = parse_double(row[4]);
        r.seed = parse_unsigned(row[5]);
        r.status = row[6];
        r.message = row[7];
        if (r.status == "ok") {
            r.score = parse_double(row[8]);
            r.bic = parse_double(row[9]);
            r.free_parameters = parse_double(row[10]);
            r.arcs = parse_unsigned(row[11]);
            r.iterations = parse_unsigned(row[12]);
            r.runtime_seconds = parse_double(row[13]);
        }
        r.dag = parse_report(row, 14, EvalMode::Dag);
        r.cpdag = parse_report(row, 22, EvalMode::Cpdag);
        r.graph_file = row[30];
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------

bool limited_data(std::size_t n, bool large) { return n <= (large ? 10000u : 1000u); }

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records, bool large) {
    std::map<std::string, const RunRecord*> baselines;
    auto pair_key = [](const RunRecord& r) {
        return r.case_name + "|" + std::to_string(r.n) + "|" + r.algorithm + "|" + std::to_string(r.seed);
    };
    for (const auto& r : records)
        if (r.approach == kBaseline && r.status == "ok") baselines[pair_key(r)] = &r;

    using Group = std::tuple<std::string, std::string, double, std::string, std::string>;
    std::map<Group, std::vector<double>> groups;
    auto metrics = [](const RunRecord& r) {
        std::vector<std::pair<std::string, double>> m{{"bic", r.bic},
                                                      {"free_parameters", r.free_parameters},
                                                      {"arcs", static_cast<double>(r.arcs)},
                                                      {"runtime_seconds", r.runtime_seconds}};
        if (r.dag) {
            m.emplace_back("f1", r.dag->f1);
            m.emplace_back("bsf", r.dag->bsf);
            m.emplace_back("shd", r.dag->shd);
        }
        return m;
    };
    for (const auto& r : records) {
        if (r.approach == kBaseline || r.status != "ok") continue;
        auto it = baselines.find(pair_key(r));
        if (it == baselines.end()) continue;
        const auto base = metrics(*it->second);
        const auto mine = metrics(r);
        const std::string regime = limited_data(r.n, large) ? "limited" : "big";
        for (const auto& [name, value] : mine) {
            auto b = std::find_if(base.begin(), base.end(), [&](const auto& kv) { return kv.first == name; });
            if (b == base.end() || b->second == 0.0) continue;
            const double change = (value - b->second) / std::fabs(b->second);
            for (const auto& algo : {r.algorithm, std::string("all")})
                for (const auto& reg : {std::string("all"), regime})
                    groups[{algo, r.approach, r.rate, reg, name}].push_back(change);
        }
    }

    std::vector<AggregateRow> out;
    for (const auto& [g, values] : groups) {
        AggregateRow row{std::get<0>(g), std::get<1>(g), std::get<2>(g), std::get<3>(g), std::get<4>(g), 0, 0,
                         values.size()};
        double sum = 0.0;
        for (double v : values) sum += v;
        row.mean = sum / static_cast<double>(values.size());
        if (values.size() > 1) {
            double ss = 0.0;
            for (double v : values) ss += (v - row.mean) * (v - row.mean);
            row.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
        out.push_back(row);
    }
    return out;
}

void write_aggregates(std::ostream& out, const std::vector<AggregateRow>& rows) {
    csv::write_row(out, {"algorithm", "approach", "rate", "regime", "metric", "mean", "sd", "count"});
    for (const auto& r : rows) {
        csv::write_row(out, {r.algorithm, r.approach, number(r.rate), r.regime, r.metric, number(r.mean),
                             number(r.sd), std::to_string(r.count)});
    }
}

// ---------------------------------------------------------------------------

ExperimentSummary run_experiment(const ExperimentManifest& manifest, std::ostream* log) {
    manifest.validate();
    const auto doc = io::read_network_json_file(manifest.network);
    const auto bn = io::network_bn(doc);
    const auto& truth = bn.dag();

    const fs::path dir(manifest.output_dir);
    fs::create_directories(dir / "graphs");
    ExperimentSummary summary;
    summary.results_path = (dir / "results.csv").string();
    summary.aggregates_path = (dir / "aggregates.csv").string();

    std::set<std::string> done;
    const bool fresh = !fs::exists(summary.results_path) || fs::file_size(summary.results_path) == 0;
    if (!fresh)
        for (const auto& r : read_run_records(summary.results_path)) done.insert(r.key());

    std::ofstream results(summary.results_path, std::ios::binary | std::ios::app);
    if (!results) throw Error(ErrorKind::Io, "cannot write " + summary.results_path);
    if (fresh) write_run_header(results);

    struct Cell {
        std::string approach;
        std::optional<Approach> kind;
        double rate;
    };
    std::vector<Cell> cells{{std::string(kBaseline), std::nullopt, 0.0}};
    for (const auto& ar : manifest.approaches) {
        const std::string name(approach_name(ar.approach));
        if (ar.rates.empty()) cells.push_back({name, ar.approach, 0.0});
        for (double r : ar.rates) cells.push_back({name, ar.approach, r});
    }

    for (auto n : manifest.sample_sizes) {
        for (auto seed : manifest.seeds) {
            std::optional<Dataset> data;
            for (const auto& algo : manifest.algorithms) {
                for (const auto& cell : cells) {
                    RunRecord rec;
                    rec.case_name = manifest.case_name;
                    rec.n = n;
                    rec.algorithm = algo;
                    rec.approach = cell.approach;
                    rec.rate = cell.rate;
                    rec.seed = seed;
                    if (done.count(rec.key())) {
                        ++summary.resumed;
                        continue;
                    }
                    KnowledgeInput input;
                    if (cell.kind) {
                        try {
                            input = sample_knowledge(truth, *cell.kind, cell.rate, seed);
                        } catch (const Error& e) {
                            if (e.kind() != ErrorKind::TooFewVariables) throw;
                            ++summary.skipped;
                            if (log) *log << "skip " << rec.key() << ": " << e.what() << "\n";
                            continue;
                        }
                    }
                    if (!data) data = forward_sample(bn, n, seed);
                    const auto spec = KnowledgeSpec::bind(data->variables_ptr(), input);
                    SearchConfig config;
                    config.seed = seed;
                    config.timeout_seconds = manifest.timeout_secs;
                    try {
                        auto result = learn(algo, *data, spec, config);
                        rec.status = "ok";
                        rec.score = result.score;
                        rec.bic = result.bic;
                        rec.free_parameters = result.free_parameters;
                        rec.arcs = result.arcs;
                        rec.iterations = result.iterations;
                        rec.runtime_seconds = result.runtime_seconds;
                        rec.dag = evaluate(result.dag, truth, EvalMode::Dag);
                        rec.cpdag = evaluate(result.dag, truth, EvalMode::Cpdag);
                        rec.graph_file = "graphs/" + std::to_string(n) + "_" + algo + "_" + cell.approach + "_" +
                                         number(cell.rate) + "_" + std::to_string(seed) + ".csv";
                        io::write_edge_list_file((dir / rec.graph_file).string(), result.dag);
                    } catch (const Error& e) {
                        rec.status = e.kind() == ErrorKind::Timeout ? "timeout" : "error";
                        rec.message = std::string(error_kind_name(e.kind()));
                    }
                    write_run_record(results, rec);
                    results.flush();
                    done.insert(rec.key());
                    ++summary.executed;
                    if (log) *log << rec.key() << " " << rec.status << "\n";
                }
            }
        }
    }
    results.close();

    std::ofstream agg(summary.aggregates_path, std::ios::binary | std::ios::trunc);
    if (!agg) throw Error(ErrorKind::Io, "cannot write " + summary.aggregates_path);
    write_aggregates(agg, aggregate(read_run_records(summary.results_path), manifest.large));
    return summary;
}

}  // namespace kbn
