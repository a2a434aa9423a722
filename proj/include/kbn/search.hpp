#ifndef KBN_SEARCH_HPP
#define KBN_SEARCH_HPP

#include <kbn/dataset.hpp>
#include <kbn/knowledge.hpp>
#include <kbn/scoring.hpp>

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kbn {

/// Improvements at or below this margin do not count as improvements.
inline constexpr double kImprovementTolerance = 1e-9;

struct SearchConfig {
    std::optional<std::size_t> max_indegree;  // unlimited when empty
    std::size_t mahc_prune_indegree = 3;
    std::optional<std::size_t> tabu_iteration_cap;  // V(V-1) when empty
    std::uint64_t seed = 0;
    bool parallel_neighbors = false;
    std::size_t threads = 0;  // 0: hardware concurrency
    /// Wall-clock budget for one learning call; Timeout is thrown when spent.
    std::optional<double> timeout_seconds;
    /// Derived from timeout_seconds when a learner starts; may also be set
    /// directly to share one budget across calls.
    std::optional<std::chrono::steady_clock::time_point> deadline;

    /// Throws InvalidArgument for M = 0 or M_p = 0.
    void validate() const;
};

struct LearnResult {
    std::string algorithm;
    Dag dag;
    std::optional<BdnGraph> bdn;
    double score = 0.0;            // BIC with target weights
    double bic = 0.0;              // BIC with r = 1 everywhere
    double free_parameters = 0.0;  // weighted
    std::size_t arcs = 0;
    std::size_t iterations = 0;
    double runtime_seconds = 0.0;
    std::vector<double> trace;  // incumbent score after each accepted step
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, double>> phase_durations;
    std::vector<std::string> constraints_applied;
};

LearnResult hill_climb(const Dataset& data, const KnowledgeSpec& spec, const SearchConfig& config = {});
LearnResult tabu(const Dataset& data, const KnowledgeSpec& spec, const SearchConfig& config = {});
LearnResult mahc(const Dataset& data, const KnowledgeSpec& spec, const SearchConfig& config = {});

/// Adds, one at a time, the admissible arc between two weakly connected
/// components with the smallest loss in weighted BIC, until one component
/// remains. Throws NoAdmissibleConnector.
Dag enforce_var_rel(const Dag& dag, const Dataset& data, const KnowledgeSpec& spec,
                    const SearchConfig& config = {});

/// Adds arcs until every decision has a child and every utility a parent,
/// each time choosing the smallest-loss admissible arc out of a childless
/// decision or into a parentless utility. Throws NoAdmissibleConnector.
Dag enforce_str_bdn(const Dag& dag, const Dataset& data, const KnowledgeSpec& spec,
                    const SearchConfig& config = {});

// ---------------------------------------------------------------------------
// Lower-level pieces, shared with SaiyanH and exposed for testing.

/// Throws Timeout once config.deadline has passed.
void check_deadline(const SearchConfig& config);

/// Cache-sharing forms of the post-phases. `limits` carries the in-degree cap.
Dag enforce_var_rel(const Dag& dag, ScoreCache& cache, const KnowledgeSpec& spec, const MoveLimits& limits,
                    const SearchConfig& config);
Dag enforce_str_bdn(const Dag& dag, ScoreCache& cache, const KnowledgeSpec& spec, const MoveLimits& limits,
                    const SearchConfig& config);

/// VAR-REL then STR-BDN, each only when the spec asks for it.
Dag apply_post_phases(const Dag& dag, ScoreCache& cache, const KnowledgeSpec& spec, const SearchConfig& config);

/// Fills dag, scores, parameter and arc counts, the BDN view and the applied
/// approaches.
void finalize_result(LearnResult& result, const Dag& dag, ScoreCache& cache, const KnowledgeSpec& spec);

/// Score of a move: the weighted BIC of apply(dag, move) minus that of dag.
double move_delta(ScoreCache& cache, const Dag& dag, const Move& move, const TargetWeights& weights);

struct ClimbResult {
    Dag dag;
    double score = 0.0;
    std::size_t iterations = 0;
    std::vector<double> trace;
};

/// Greedy ascent from `start` under the given limits.
ClimbResult climb(const Dag& start, ScoreCache& cache, const KnowledgeSpec& spec, const MoveLimits& limits,
                  const SearchConfig& config);

/// Tabu escape loop around an existing local maximum.
ClimbResult tabu_from(const ClimbResult& local, ScoreCache& cache, const KnowledgeSpec& spec,
                      const MoveLimits& limits, const SearchConfig& config);

/// Candidate parent sets kept for `child`, drawn from its admissible parents
/// up to max_size. A set is dominant when its family BIC beats every proper
/// subset and all those subsets are dominant themselves. A dominant set is
/// kept unless adding one parent (within max_size) or swapping one parent for
/// another gives a higher family BIC.
/// The empty set is always kept. Sorted.
std::vector<std::vector<VarIndex>> retained_parent_sets(ScoreCache& cache, const KnowledgeSpec& spec,
                                                        VarIndex child, std::size_t max_size);

/// n x n row-major mask of arcs u -> v where u is in no retained candidate
/// parent set of v. Pairs named by DIR-EDG or UND-EDG are never pruned.
std::vector<std::uint8_t> mahc_pruned_arcs(ScoreCache& cache, const KnowledgeSpec& spec, std::size_t max_size);

/// Mean weighted BIC over g and each of its admissible neighbors.
double mahc_average(const Dag& g, ScoreCache& cache, const KnowledgeSpec& spec, const MoveLimits& limits);

}  // namespace kbn

#endif  // KBN_SEARCH_HPP
