#include <kbn/bn.hpp>
#include <kbn/error.hpp>
#include <kbn/random.hpp>

#include <cmath>
#include <numeric>

namespace kbn {

DiscreteBn::DiscreteBn(Dag dag, std::vector<std::size_t> arities, std::vector<Cpt> cpts,
                       std::vector<std::vector<std::string>> state_labels)
    : m_dag(std::move(dag)),
      m_arities(std::move(arities)),
      m_cpts(std::move(cpts)),
      m_labels(std::move(state_labels)) {
    const auto n = m_dag.size();
    if (m_arities.size() != n || m_cpts.size() != n) {
        throw Error(ErrorKind::ArityMismatch, "network tables do not match its graph");
    }
    for (VarIndex v = 0; v < n; ++v) {
        if (m_arities[v] < 2) {
            throw Error(ErrorKind::ArityMismatch, "variable '" + m_dag.name(v) + "' needs at least two states");
        }
        std::size_t rows = 1;
        for (auto p : m_dag.parents(v)) rows *= m_arities[p];
        if (m_cpts[v].size() != rows) {
            throw Error(ErrorKind::ArityMismatch, "CPT of '" + m_dag.name(v) + "' has " +
                                                      std::to_string(m_cpts[v].size()) + " rows, expected " +
                                                      std::to_string(rows));
        }
        for (const auto& row : m_cpts[v]) {
            if (row.size() != m_arities[v]) {
                throw Error(ErrorKind::ArityMismatch, "CPT row width mismatch for '" + m_dag.name(v) + "'");
            }
            double sum = 0.0;
            for (double p : row) {
                if (!(p >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative probability");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                throw Error(ErrorKind::InvalidArgument, "CPT row of '" + m_dag.name(v) + "' does not sum to 1");
            }
        }
    }
    if (m_labels.empty()) {
        m_labels.resize(n);
        for (VarIndex v = 0; v < n; ++v)
            for (std::size_t s = 0; s < m_arities[v]; ++s) m_labels[v].push_back(std::to_string(s));
    }
}

std::size_t DiscreteBn::config_index(VarIndex v, std::span<const State> states) const {
    std::size_t j = 0;
    for (auto p : m_dag.parents(v)) j = j * m_arities[p] + states[p];
    return j;
}

DiscreteBn mle_fit(const Dag& dag, const Dataset& data, const MleOptions& options) {
    if (!(dag.variables() == data.variables())) {
        throw Error(ErrorKind::ArityMismatch, "dataset columns do not match graph variables");
    }
    std::vector<Cpt> cpts(dag.size());
    for (VarIndex v = 0; v < dag.size(); ++v) {
        const auto& ps = dag.parents(v);
        auto table = family_counts(data, v, ps);
        const auto k = table.child_arity;
        auto& cpt = cpts[v];
        cpt.resize(table.configurations());
        for (std::size_t j = 0; j < cpt.size(); ++j) {
            const double total = static_cast<double>(table.config_total(j)) + options.laplace * static_cast<double>(k);
            cpt[j].resize(k);
            for (std::size_t s = 0; s < k; ++s) {
                cpt[j][s] = total > 0.0
                                ? (static_cast<double>(table.count(j, s)) + options.laplace) / total
                                : 1.0 / static_cast<double>(k);
            }
        }
    }
    std::vector<std::vector<std::string>> labels;
    for (VarIndex v = 0; v < dag.size(); ++v) labels.push_back(data.state_labels(v));

    // A column observed in a single state still yields a valid model: pad
    // to two states so the network invariant holds.
    std::vector<std::size_t> arities = data.arities();
    for (VarIndex v = 0; v < dag.size(); ++v) {
        if (arities[v] >= 2) continue;
        arities[v] = 2;
        labels[v].push_back("<unobserved>");
        for (auto& row : cpts[v]) row.push_back(0.0);
    }
    for (VarIndex v = 0; v < dag.size(); ++v) {
        // Rows must be re-expanded for children whose parents were padded.
        std::size_t rows = 1;
        for (auto p : dag.parents(v)) rows *= arities[p];
        if (cpts[v].size() == rows) continue;
        Cpt expanded(rows, std::vector<double>(arities[v], 1.0 / static_cast<double>(arities[v])));
        for (std::size_t j = 0; j < rows; ++j) {
            // Decode j in the padded radix and re-encode in the data radix.
            std::size_t rem = j, old = 0, mult = 1;
            bool observed = true;
            const auto& ps = dag.parents(v);
            std::vector<std::size_t> digits(ps.size());
            for (std::size_t i = ps.size(); i-- > 0;) {
                digits[i] = rem % arities[ps[i]];
                rem /= arities[ps[i]];
            }
            for (std::size_t i = ps.size(); i-- > 0;) {
                if (digits[i] >= data.arity(ps[i])) observed = false;
                old += digits[i] * mult;
                mult *= data.arity(ps[i]);
            }
            if (observed) expanded[j] = cpts[v][old];
        }
        cpts[v] = std::move(expanded);
    }
    return DiscreteBn(dag, std::move(arities), std::move(cpts), std::move(labels));
}

Dataset forward_sample(const DiscreteBn& bn, std::size_t n, std::uint64_t seed) {
    return forward_sample(bn, n, seed, bn.dag().topological_order());
}

Dataset forward_sample(const DiscreteBn& bn, std::size_t n, std::uint64_t seed,
                       const std::vector<VarIndex>& order) {
    const auto& dag = bn.dag();
    const auto vars = dag.size();
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "sample size must be positive");
    if (order.size() != vars) throw Error(ErrorKind::InvalidArgument, "order must list every variable");
    std::vector<std::size_t> position(vars, vars);
    for (std::size_t i = 0; i < order.size(); ++i) position.at(order[i]) = i;
    for (const auto& e : dag.edges()) {
        if (position[e.parent] >= position[e.child]) {
            throw Error(ErrorKind::InvalidArgument, "order is not topological");
        }
    }

    Rng rng(seed);
    std::vector<std::vector<State>> columns(vars, std::vector<State>(n));
    std::vector<State> row(vars);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto v : order) {
            const auto& probs = bn.cpt(v)[bn.config_index(v, row)];
            const double u = rng.uniform();
            double acc = 0.0;
            std::size_t s = 0;
            for (; s + 1 < probs.size(); ++s) {
                acc += probs[s];
                if (u < acc) break;
            }
            row[v] = static_cast<State>(s);
            columns[v][i] = row[v];
        }
    }
    return Dataset(dag.variables_ptr(), bn.arities(), std::move(columns), bn.state_labels());
}

}  // namespace kbn
