#ifndef KBN_DATASET_HPP
#define KBN_DATASET_HPP

#include <kbn/graph.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kbn {

using State = std::uint16_t;

/// Complete discrete data, stored column-major.
class Dataset {
public:
    Dataset() = default;
    /// columns[v][row]. Throws ArityMismatch when a cell is out of range or
    /// the columns have different lengths.
    Dataset(VariablesPtr variables, std::vector<std::size_t> arities,
            std::vector<std::vector<State>> columns,
            std::vector<std::vector<std::string>> state_labels = {});

    const VariableSet& variables() const { return *m_variables; }
    const VariablesPtr& variables_ptr() const { return m_variables; }
    std::size_t variable_count() const { return m_columns.size(); }
    std::size_t rows() const { return m_rows; }

    std::size_t arity(VarIndex v) const { return m_arities.at(v); }
    const std::vector<std::size_t>& arities() const { return m_arities; }
    std::span<const State> column(VarIndex v) const { return m_columns.at(v); }
    State at(std::size_t row, VarIndex v) const { return m_columns[v][row]; }

    /// Labels of each state; "0", "1", ... when constructed without labels.
    const std::vector<std::string>& state_labels(VarIndex v) const { return m_labels.at(v); }

    bool operator==(const Dataset& other) const {
        return *m_variables == *other.m_variables && m_arities == other.m_arities &&
               m_columns == other.m_columns;
    }

private:
    VariablesPtr m_variables;
    std::vector<std::size_t> m_arities;
    std::vector<std::vector<State>> m_columns;
    std::vector<std::vector<std::string>> m_labels;
    std::size_t m_rows = 0;
};

/// Counts N_jk of child state k under parent configuration j. Parent
/// configurations are indexed in mixed radix over `parents` as given, the
/// first parent most significant.
struct ContingencyTable {
    std::size_t child_arity = 0;
    std::vector<std::size_t> parent_arities;
    std::vector<std::uint64_t> counts;  // row-major: config * child_arity + state

    std::size_t configurations() const { return child_arity ? counts.size() / child_arity : 0; }
    std::uint64_t count(std::size_t config, std::size_t state) const {
        return counts[config * child_arity + state];
    }
    std::uint64_t config_total(std::size_t config) const;
    std::uint64_t total() const;
};

/// Throws ArityMismatch when child is among parents or an index is out of range.
ContingencyTable family_counts(const Dataset& data, VarIndex child, std::span<const VarIndex> parents);

}  // namespace kbn

#endif  // KBN_DATASET_HPP
