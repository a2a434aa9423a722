#ifndef KBN_BN_HPP
#define KBN_BN_HPP

#include <kbn/dataset.hpp>
#include <kbn/graph.hpp>

#include <cstdint>
#include <vector>

namespace kbn {

/// Conditional probability table of one variable: one row per configuration
/// of its parents (ascending variable index, first parent most significant),
/// one column per state.
using Cpt = std::vector<std::vector<double>>;

class DiscreteBn {
public:
    DiscreteBn() = default;
    /// Validates shapes, arities >= 2 and row sums within 1e-9.
    DiscreteBn(Dag dag, std::vector<std::size_t> arities, std::vector<Cpt> cpts,
               std::vector<std::vector<std::string>> state_labels = {});

    const Dag& dag() const { return m_dag; }
    const std::vector<std::size_t>& arities() const { return m_arities; }
    std::size_t arity(VarIndex v) const { return m_arities.at(v); }
    const Cpt& cpt(VarIndex v) const { return m_cpts.at(v); }
    const std::vector<std::vector<std::string>>& state_labels() const { return m_labels; }

    /// Row index of the configuration of v's parents in `states` (indexed by
    /// variable).
    std::size_t config_index(VarIndex v, std::span<const State> states) const;

private:
    Dag m_dag;
    std::vector<std::size_t> m_arities;
    std::vector<Cpt> m_cpts;
    std::vector<std::vector<std::string>> m_labels;
};

struct MleOptions {
    /// Pseudo-count added to every cell; 0 gives the pure maximum-likelihood fit.
    double laplace = 0.0;
};

/// Empirical conditional frequencies. Parent configurations never observed
/// get a uniform row. Throws ArityMismatch when the variables disagree.
DiscreteBn mle_fit(const Dag& dag, const Dataset& data, const MleOptions& options = {});

/// Ancestral sampling in topological order. Same (bn, n, seed) gives the same
/// dataset.
Dataset forward_sample(const DiscreteBn& bn, std::size_t n, std::uint64_t seed);
/// As above with an explicit topological order; throws InvalidArgument when
/// `order` is not one.
Dataset forward_sample(const DiscreteBn& bn, std::size_t n, std::uint64_t seed,
                       const std::vector<VarIndex>& order);

}  // namespace kbn

#endif  // KBN_BN_HPP
