#ifndef KBN_EXPERIMENT_HPP
#define KBN_EXPERIMENT_HPP

#include <kbn/evaluation.hpp>
#include <kbn/sampler.hpp>
#include <kbn/search.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kbn {

/// Runs "hc", "tabu", "saiyanh" or "mahc". Throws InvalidArgument otherwise.
LearnResult learn(std::string_view algorithm, const Dataset& data, const KnowledgeSpec& spec,
                  const SearchConfig& config = {});

struct ApproachRates {
    Approach approach;
    std::vector<double> rates;  // empty for approaches that take no rate
};

/// {"case", "network", "class": "small"|"large", "sample_sizes", "algorithms",
///  "approaches": [{"approach", "rates"}], "seeds", "timeout_secs",
///  "output_dir"}. Relative paths resolve against the manifest's directory.
struct ExperimentManifest {
    std::string case_name;
    std::string network;
    bool large = false;
    std::vector<std::size_t> sample_sizes{100, 1000, 10000, 100000, 1000000};
    std::vector<std::string> algorithms{"hc", "tabu", "saiyanh", "mahc"};
    std::vector<ApproachRates> approaches;
    std::vector<std::uint64_t> seeds{1};
    double timeout_secs = 18000.0;
    std::string output_dir;

    /// Throws InvalidArgument / IllegalRate for an unusable manifest.
    static ExperimentManifest from_json_file(const std::string& path);
    void validate() const;
};

/// Approach name of the unconstrained runs.
inline constexpr std::string_view kBaseline = "NONE";

struct RunRecord {
    std::string case_name;
    std::size_t n = 0;
    std::string algorithm;
    std::string approach;  // kBaseline or an approach identifier
    double rate = 0.0;
    std::uint64_t seed = 0;
    std::string status;  // ok | timeout | error
    std::string message;
    double score = 0.0;
    double bic = 0.0;
    double free_parameters = 0.0;
    std::size_t arcs = 0;
    std::size_t iterations = 0;
    double runtime_seconds = 0.0;
    std::optional<EvalReport> dag;
    std::optional<EvalReport> cpdag;
    std::string graph_file;  // relative to the output directory

    /// case|n|algorithm|approach|rate|seed
    std::string key() const;
};

std::vector<RunRecord> read_run_records(const std::string& path);
void write_run_header(std::ostream& out);
void write_run_record(std::ostream& out, const RunRecord& record);

struct AggregateRow {
    std::string algorithm;  // or "all"
    std::string approach;
    double rate = 0.0;
    std::string regime;  // all | limited | big
    std::string metric;
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation, 0 for a single value
    std::size_t count = 0;
};

/// Relative change (constrained - baseline) / |baseline| against the
/// unconstrained run with the same case, n, algorithm and seed. Pairs with a
/// zero baseline, or without two ok runs, are left out.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records, bool large);
void write_aggregates(std::ostream& out, const std::vector<AggregateRow>& rows);

/// Limited data: n <= 10^3 for small networks, n <= 10^4 for large ones.
bool limited_data(std::size_t n, bool large);

struct ExperimentSummary {
    std::size_t executed = 0;
    std::size_t resumed = 0;  // already present in the results file
    std::size_t skipped = 0;  // cells the network cannot support
    std::string results_path;
    std::string aggregates_path;
};

/// Executes every missing cell of the grid, appending to results.csv in the
/// output directory, then rewrites aggregates.csv from the whole file.
ExperimentSummary run_experiment(const ExperimentManifest& manifest, std::ostream* log = nullptr);

}  // namespace kbn

#endif  // KBN_EXPERIMENT_HPP
