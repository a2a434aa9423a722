#ifndef KBN_SCORING_HPP
#define KBN_SCORING_HPP

#include <kbn/dataset.hpp>
#include <kbn/graph.hpp>

#include <atomic>
#include <cstddef>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace kbn {

/// Per-variable divisor r >= 1 of the free-parameter penalty. Variables that
/// were never set weigh 1.
class TargetWeights {
public:
    TargetWeights() = default;

    /// Throws InvalidArgument when r < 1 or is not finite.
    void set(VarIndex v, double r);
    double operator[](VarIndex v) const { return v < m_r.size() ? m_r[v] : 1.0; }
    bool all_unit() const;
    /// (variable, r) for every variable with r != 1, ascending by variable.
    std::vector<std::pair<VarIndex, double>> targets() const;

private:
    std::vector<double> m_r;
};

/// Decomposed score of one family. All logarithms are base 2.
struct FamilyScore {
    VarIndex child = 0;
    std::vector<VarIndex> parents;  // sorted
    double ll = 0.0;                // bits
    double params = 0.0;            // weighted free parameters
    double weight = 1.0;

    double bic(std::size_t rows) const;
};

/// log2(N) / 2, the per-parameter penalty.
double penalty_per_parameter(std::size_t rows);

/// Sum over configurations j and states k of N_jk log2(N_jk / N_j), 0 log 0 = 0.
double family_log_likelihood(const ContingencyTable& table);

/// (s - 1) * prod(q_j) / r.
double family_free_parameters(std::size_t child_arity, std::span<const std::size_t> parent_arities, double r);

FamilyScore family_score(const Dataset& data, VarIndex child, std::span<const VarIndex> parents, double r);

double log_likelihood(const Dataset& data, const Dag& dag);
double free_parameters(const Dag& dag, std::span<const std::size_t> arities, const TargetWeights& weights = {});
/// LL - (log2 N / 2) p. Higher is better.
double bic(const Dataset& data, const Dag& dag, const TargetWeights& weights = {});

/// Thread-safe memo of family scores for one dataset, keyed on
/// (child, sorted parents, r). Concurrent misses on the same key may both
/// compute; the first insert wins and the values are identical.
class ScoreCache {
public:
    explicit ScoreCache(const Dataset& data) : m_data(&data) {}
    ScoreCache(const ScoreCache&) = delete;
    ScoreCache& operator=(const ScoreCache&) = delete;

    const Dataset& data() const { return *m_data; }

    FamilyScore family(VarIndex child, std::span<const VarIndex> parents, double r);
    double family_bic(VarIndex child, std::span<const VarIndex> parents, double r) {
        return family(child, parents, r).bic(m_data->rows());
    }
    double graph_bic(const Dag& dag, const TargetWeights& weights);

    std::size_t size() const;
    /// Number of times sufficient statistics were computed from the data.
    std::size_t count_passes() const { return m_passes.load(); }

private:
    struct Key {
        VarIndex child;
        std::vector<VarIndex> parents;
        double r;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept;
    };

    const Dataset* m_data;
    mutable std::shared_mutex m_mutex;
    std::unordered_map<Key, FamilyScore, KeyHash> m_entries;
    std::atomic<std::size_t> m_passes{0};
};

FamilyScore family_score_cached(ScoreCache& cache, const Dataset& data, VarIndex child,
                                std::span<const VarIndex> parents, const TargetWeights& weights);

}  // namespace kbn

#endif  // KBN_SCORING_HPP
