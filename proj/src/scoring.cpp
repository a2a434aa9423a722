#include <kbn/scoring.hpp>
#include <kbn/error.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

namespace kbn {

void TargetWeights::set(VarIndex v, double r) {
    if (!std::isfinite(r) || r < 1.0) {
        throw Error(ErrorKind::InvalidArgument, "target weight must be a finite value >= 1");
    }
    if (m_r.size() <= v) m_r.resize(v + 1, 1.0);
    m_r[v] = r;
}

bool TargetWeights::all_unit() const {
    return std::all_of(m_r.begin(), m_r.end(), [](double r) { return r == 1.0; });
}

std::vector<std::pair<VarIndex, double>> TargetWeights::targets() const {
    std::vector<std::pair<VarIndex, double>> out;
    for (VarIndex v = 0; v < m_r.size(); ++v)
        if (m_r[v] != 1.0) out.emplace_back(v, m_r[v]);
    return out;
}

double penalty_per_parameter(std::size_t rows) {
    return std::log2(static_cast<double>(rows)) / 2.0;
}

double FamilyScore::bic(std::size_t rows) const {
    return ll - penalty_per_parameter(rows) * params;
}

double family_log_likelihood(const ContingencyTable& table) {
    double ll = 0.0;
    for (std::size_t j = 0; j < table.configurations(); ++j) {
        const auto total = table.config_total(j);
        if (total == 0) continue;
        const double log_total = std::log2(static_cast<double>(total));
        for (std::size_t k = 0; k < table.child_arity; ++k) {
            const auto c = table.count(j, k);
            if (c) ll += static_cast<double>(c) * (std::log2(static_cast<double>(c)) - log_total);
        }
    }
    return ll;
}

double family_free_parameters(std::size_t child_arity, std::span<const std::size_t> parent_arities, double r) {
    double configs = 1.0;
    for (auto q : parent_arities) configs *= static_cast<double>(q);
    return (static_cast<double>(child_arity) - 1.0) * configs / r;
}

FamilyScore family_score(const Dataset& data, VarIndex child, std::span<const VarIndex> parents, double r) {
    std::vector<VarIndex> sorted(parents.begin(), parents.end());
    std::sort(sorted.begin(), sorted.end());
    auto table = family_counts(data, child, sorted);
    FamilyScore out;
    out.child = child;
    out.parents = std::move(sorted);
    out.ll = family_log_likelihood(table);
    out.params = family_free_parameters(table.child_arity, table.parent_arities, r);
    out.weight = r;
    return out;
}

double log_likelihood(const Dataset& data, const Dag& dag) {
    double ll = 0.0;
    for (VarIndex v = 0; v < dag.size(); ++v) {
        ll += family_log_likelihood(family_counts(data, v, dag.parents(v)));
    }
    return ll;
}

double free_parameters(const Dag& dag, std::span<const std::size_t> arities, const TargetWeights& weights) {
    double p = 0.0;
    std::vector<std::size_t> qs;
    for (VarIndex v = 0; v < dag.size(); ++v) {
        qs.clear();
        for (auto u : dag.parents(v)) qs.push_back(arities[u]);
        p += family_free_parameters(arities[v], qs, weights[v]);
    }
    return p;
}

double bic(const Dataset& data, const Dag& dag, const TargetWeights& weights) {
    return log_likelihood(data, dag) -
           penalty_per_parameter(data.rows()) * free_parameters(dag, data.arities(), weights);
}

// ---------------------------------------------------------------------------

std::size_t ScoreCache::KeyHash::operator()(const Key& k) const noexcept {
    std::size_t h = std::hash<VarIndex>{}(k.child);
    for (auto p : k.parents) h = h * 1000003u ^ std::hash<VarIndex>{}(p + 1);
    return h ^ (std::hash<double>{}(k.r) << 1);
}

FamilyScore ScoreCache::family(VarIndex child, std::span<const VarIndex> parents, double r) {
    Key key{child, std::vector<VarIndex>(parents.begin(), parents.end()), r};
    std::sort(key.parents.begin(), key.parents.end());
    {
        std::shared_lock lock(m_mutex);
        auto it = m_entries.find(key);
        if (it != m_entries.end()) return it->second;
    }
    auto score = family_score(*m_data, child, key.parents, r);
    ++m_passes;
    std::unique_lock lock(m_mutex);
    return m_entries.emplace(std::move(key), std::move(score)).first->second;
}

double ScoreCache::graph_bic(const Dag& dag, const TargetWeights& weights) {
    double total = 0.0;
    for (VarIndex v = 0; v < dag.size(); ++v) total += family_bic(v, dag.parents(v), weights[v]);
    return total;
}

std::size_t ScoreCache::size() const {
    std::shared_lock lock(m_mutex);
    return m_entries.size();
}

FamilyScore family_score_cached(ScoreCache& cache, const Dataset& data, VarIndex child,
                                std::span<const VarIndex> parents, const TargetWeights& weights) {
    if (&cache.data() != &data) {
        throw Error(ErrorKind::InvalidArgument, "score cache is bound to a different dataset");
    }
    return cache.family(child, parents, weights[child]);
}

}  // namespace kbn
