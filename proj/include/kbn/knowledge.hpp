#ifndef KBN_KNOWLEDGE_HPP
#define KBN_KNOWLEDGE_HPP

#include <kbn/graph.hpp>
#include <kbn/scoring.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kbn {

/// Decision and utility roles, by variable name.
struct BdnAnnotation {
    std::vector<std::string> decisions;
    std::vector<std::string> utilities;
};

/// Knowledge as read from files and flags, before it is checked against a
/// variable set.
struct KnowledgeInput {
    std::vector<NamedEdge> directed;    // DIR-EDG
    std::vector<NamedEdge> undirected;  // UND-EDG
    std::vector<NamedEdge> forbidden;   // FOR-EDG, both directions
    std::optional<TemporalTiers> tiers; // REL-TEM, or STR-TEM when tiers_strict
    bool tiers_strict = false;
    std::optional<std::vector<NamedEdge>> initial_graph;  // INI-GRA
    bool variables_relevant = false;                      // VAR-REL
    std::vector<std::pair<std::string, double>> targets;  // TAR-VAR
    std::optional<BdnAnnotation> bdn;                     // REL-BDN, or STR-BDN when bdn_strict
    bool bdn_strict = false;
};

/// All ten knowledge approaches bound to a variable set. Immutable.
///
/// bind() rejects contradictory input: a pair both required and forbidden,
/// required arcs that form a cycle or break the temporal tiers, a variable in
/// two tiers, a variable in both BDN roles, or a repeated constraint.
class KnowledgeSpec {
public:
    explicit KnowledgeSpec(VariablesPtr variables);
    static KnowledgeSpec bind(VariablesPtr variables, const KnowledgeInput& input);

    const VariableSet& variables() const { return *m_variables; }
    const VariablesPtr& variables_ptr() const { return m_variables; }

    const std::vector<Edge>& directed_edges() const { return m_directed; }
    const std::vector<VarPair>& undirected_edges() const { return m_undirected; }
    const std::vector<VarPair>& forbidden_edges() const { return m_forbidden; }

    bool requires_arc(VarIndex parent, VarIndex child) const { return flag(parent, child) & kRequired; }
    bool requires_adjacency(VarIndex a, VarIndex b) const { return flag(a, b) & kAdjacent; }
    bool forbids(VarIndex a, VarIndex b) const { return flag(a, b) & kForbidden; }

    bool has_tiers() const { return m_tiers.has_value(); }
    bool strict_tiers() const { return m_tiers_strict; }
    const std::optional<TemporalTiers>& tiers() const { return m_tiers; }
    std::optional<std::size_t> tier(VarIndex v) const;
    const std::vector<VarIndex>& tiered_variables() const { return m_tiered; }

    /// True iff tiers alone rule out parent -> child (a later tier into an
    /// earlier one, or a same-tier edge under strict ordering).
    bool tiers_forbid_arc(VarIndex parent, VarIndex child) const;

    const std::optional<Dag>& initial_graph() const { return m_initial; }
    bool variables_relevant() const { return m_variables_relevant; }
    const TargetWeights& target_weights() const { return m_weights; }

    struct BdnRoles {
        std::vector<VarIndex> decisions;
        std::vector<VarIndex> utilities;
    };
    const std::optional<BdnRoles>& bdn() const { return m_bdn; }
    bool bdn_strict() const { return m_bdn_strict; }

    /// Approach identifiers in effect, e.g. {"DIR-EDG", "REL-TEM"}.
    std::vector<std::string> applied_approaches() const;

private:
    static constexpr std::uint8_t kRequired = 1;
    static constexpr std::uint8_t kAdjacent = 2;
    static constexpr std::uint8_t kForbidden = 4;

    std::uint8_t flag(VarIndex a, VarIndex b) const { return m_flags[a * m_variables->size() + b]; }

    VariablesPtr m_variables;
    std::vector<std::uint8_t> m_flags;  // n x n
    std::vector<Edge> m_directed;
    std::vector<VarPair> m_undirected;
    std::vector<VarPair> m_forbidden;
    std::optional<TemporalTiers> m_tiers;
    bool m_tiers_strict = false;
    std::vector<std::optional<std::size_t>> m_tier_of;
    std::vector<VarIndex> m_tiered;
    std::optional<Dag> m_initial;
    bool m_variables_relevant = false;
    TargetWeights m_weights;
    std::optional<BdnRoles> m_bdn;
    bool m_bdn_strict = false;
};

// ---------------------------------------------------------------------------
// Verdicts

struct Violation {
    std::string approach;  // e.g. "FOR-EDG"
    std::string detail;
};

struct Verdict {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks, in order: DIR-EDG arcs present; UND-EDG pairs adjacent; no FOR-EDG
/// pair adjacent; no later-tier variable is a parent or ancestor of an
/// earlier-tier one; under STR-TEM no same-tier edge; under VAR-REL a single
/// weakly connected component; under STR-BDN every decision has a child and
/// every utility a parent.
Verdict graph_satisfies(const Dag& dag, const KnowledgeSpec& spec);

/// Tier ordering only (parental, ancestral and strict same-tier checks).
bool satisfies_tiers(const Dag& dag, const KnowledgeSpec& spec);

// ---------------------------------------------------------------------------
// Moves

/// Declaration order is the tie-break order among equal-scoring moves.
enum class MoveKind { Add = 0, Remove = 1, Reverse = 2 };

/// Add parent -> child; remove the existing arc parent -> child; or reverse
/// the existing arc parent -> child into child -> parent.
struct Move {
    MoveKind kind = MoveKind::Add;
    VarIndex parent = 0;
    VarIndex child = 0;

    auto operator<=>(const Move&) const = default;
};

Dag apply(const Dag& dag, const Move& move);

struct MoveLimits {
    std::optional<std::size_t> max_indegree;
    /// n x n row-major; nonzero bans parent -> child. Used for pruned arcs.
    const std::vector<std::uint8_t>* banned_arcs = nullptr;
    /// Reject removals that split the graph into more weakly connected
    /// components.
    bool keep_connected = false;
};

/// True iff the graph after `move` is acyclic, respects the in-degree limit,
/// keeps every DIR-EDG arc and UND-EDG adjacency, adds no FOR-EDG adjacency,
/// and passes the temporal check.
bool move_is_admissible(const Dag& dag, const Move& move, const KnowledgeSpec& spec,
                        const MoveLimits& limits = {});

/// Every admissible single-arc move, in tie-break order.
std::vector<Move> admissible_moves(const Dag& dag, const KnowledgeSpec& spec, const MoveLimits& limits = {});

/// Starting graph: the INI-GRA graph verbatim when present; otherwise all
/// DIR-EDG arcs plus each UND-EDG pair oriented by a seeded coin flip.
/// Throws UnsatisfiableSeed when the required arcs cannot be placed.
Dag seed_graph(const KnowledgeSpec& spec, std::uint64_t seed, std::optional<std::size_t> max_indegree = {});

// ---------------------------------------------------------------------------
// Decision networks

enum class NodeKind { Chance, Decision, Utility };
enum class ArcKind { Conditional, Informational };

struct BdnArc {
    Edge edge;
    ArcKind kind;
};

struct BdnGraph {
    Dag dag;
    std::vector<NodeKind> kinds;
    std::vector<BdnArc> arcs;  // same order as dag.edges()
};

/// Labels nodes and marks every arc into a decision as informational; the
/// edge set is untouched. Throws OverlappingRoles / UnknownVariable.
BdnGraph to_bdn(const Dag& dag, const BdnAnnotation& annotation);

std::string_view node_kind_name(NodeKind kind);
std::string_view arc_kind_name(ArcKind kind);

}  // namespace kbn

#endif  // KBN_KNOWLEDGE_HPP
