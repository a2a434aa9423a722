#ifndef KBN_SAIYANH_HPP
#define KBN_SAIYANH_HPP

#include <kbn/dataset.hpp>
#include <kbn/knowledge.hpp>
#include <kbn/search.hpp>

#include <set>
#include <vector>

namespace kbn {

/// Symmetric pairwise association scores in [0, 1].
class MmdTable {
public:
    explicit MmdTable(std::size_t n) : m_n(n), m_values(n * n, 0.0) {}

    std::size_t size() const { return m_n; }
    double operator()(VarIndex a, VarIndex b) const { return m_values[a * m_n + b]; }
    void set(VarIndex a, VarIndex b, double value) { m_values[a * m_n + b] = m_values[b * m_n + a] = value; }

private:
    std::size_t m_n;
    std::vector<double> m_values;
};

/// Mean/max marginal discrepancy between a and b: the average of the mean
/// and max discrepancy between P(B) and P(B | A = a_j) and the same two with
/// the roles swapped. Conditioning states that never occur are left out of
/// the averages.
double mmd(const Dataset& data, VarIndex a, VarIndex b);

/// mmd(a, b) within each observed state of c, weighted by P(c).
double conditional_mmd(const Dataset& data, VarIndex a, VarIndex b, VarIndex c);

MmdTable mmd_table(const Dataset& data, const SearchConfig& config = {});

/// Undirected skeleton. Edge pairs are stored with first < second.
struct Emsg {
    std::size_t n = 0;
    std::set<VarPair> edges;

    bool adjacent(VarIndex a, VarIndex b) const { return a != b && edges.count(VarPair(a, b)) > 0; }
    std::vector<VarIndex> neighbours(VarIndex v) const;
};

/// Starts from the complete graph and visits pairs by ascending score (ties in
/// pair order), dropping A - B when a current common neighbour C has
/// MMD(A,C) > MMD(A,B) < MMD(B,C).
Emsg build_emsg(const MmdTable& scores);
Emsg build_emsg(const Dataset& data);

enum class Dependence { Dependent, Independent, Insignificant };

struct SaiyanhOptions {
    /// A - C - B with A, B non-adjacent is read as a collider when the
    /// association of A and B given C is at least `dependence_ratio` times
    /// their marginal association and exceeds it by `dependence_gap`.
    double dependence_ratio = 2.0;
    double dependence_gap = 0.01;
};

Dependence classify(double marginal, double conditional, const SaiyanhOptions& options = {});

/// Score table after knowledge overrides: pairs required by DIR-EDG, UND-EDG
/// or INI-GRA get 1; FOR-EDG pairs and pairs the tiers rule out in both
/// directions get 0.
MmdTable pin_scores(MmdTable scores, const KnowledgeSpec& spec);

LearnResult saiyanh(const Dataset& data, const KnowledgeSpec& spec, const SearchConfig& config = {},
                    const SaiyanhOptions& options = {});

}  // namespace kbn

#endif  // KBN_SAIYANH_HPP
