#include <kbn/dataset.hpp>
#include <kbn/error.hpp>

#include <algorithm>
#include <numeric>

namespace kbn {

Dataset::Dataset(VariablesPtr variables, std::vector<std::size_t> arities,
                 std::vector<std::vector<State>> columns,
                 std::vector<std::vector<std::string>> state_labels)
    : m_variables(std::move(variables)),
      m_arities(std::move(arities)),
      m_columns(std::move(columns)),
      m_labels(std::move(state_labels)) {
    const auto n = m_variables->size();
    if (m_arities.size() != n || m_columns.size() != n) {
        throw Error(ErrorKind::ArityMismatch, "dataset shape does not match its variables");
    }
    m_rows = n ? m_columns[0].size() : 0;
    for (VarIndex v = 0; v < n; ++v) {
        if (m_columns[v].size() != m_rows) {
            throw Error(ErrorKind::ArityMismatch, "dataset columns have different lengths");
        }
        if (m_arities[v] == 0) throw Error(ErrorKind::ArityMismatch, "arity must be positive");
        for (auto s : m_columns[v]) {
            if (s >= m_arities[v]) {
                throw Error(ErrorKind::ArityMismatch,
                            "state index out of range in column '" + m_variables->name(v) + "'");
            }
        }
    }
    if (m_labels.empty()) {
        m_labels.resize(n);
        for (VarIndex v = 0; v < n; ++v)
            for (std::size_t s = 0; s < m_arities[v]; ++s) m_labels[v].push_back(std::to_string(s));
    } else if (m_labels.size() != n) {
        throw Error(ErrorKind::ArityMismatch, "state label table does not match variables");
    }
}

std::uint64_t ContingencyTable::config_total(std::size_t config) const {
    auto first = counts.begin() + static_cast<std::ptrdiff_t>(config * child_arity);
    return std::accumulate(first, first + static_cast<std::ptrdiff_t>(child_arity), std::uint64_t{0});
}

std::uint64_t ContingencyTable::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

ContingencyTable family_counts(const Dataset& data, VarIndex child, std::span<const VarIndex> parents) {
    const auto n = data.variable_count();
    if (child >= n) throw Error(ErrorKind::ArityMismatch, "child index out of range");
    ContingencyTable table;
    table.child_arity = data.arity(child);
    std::size_t configs = 1;
    for (auto p : parents) {
        if (p >= n) throw Error(ErrorKind::ArityMismatch, "parent index out of range");
        if (p == child) throw Error(ErrorKind::ArityMismatch, "child listed among its parents");
        table.parent_arities.push_back(data.arity(p));
        configs *= data.arity(p);
    }
    table.counts.assign(configs * table.child_arity, 0);

    const auto rows = data.rows();
    std::vector<std::size_t> index(rows, 0);
    for (auto p : parents) {
        const auto col = data.column(p);
        const auto r = data.arity(p);
        for (std::size_t i = 0; i < rows; ++i) index[i] = index[i] * r + col[i];
    }
    const auto ccol = data.column(child);
    for (std::size_t i = 0; i < rows; ++i) ++table.counts[index[i] * table.child_arity + ccol[i]];
    return table;
}

}  // namespace kbn
