#ifndef KBN_FIXTURES_HPP
#define KBN_FIXTURES_HPP

#include <kbn/bn.hpp>
#include <kbn/dataset.hpp>
#include <kbn/knowledge.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kbn::fixtures {

struct Fixture {
    std::string name;
    DiscreteBn bn;
    std::string provenance;
};

/// A -> B -> C, binary.
Fixture chain3();
/// A -> C <- B, binary.
Fixture collider3();
/// A -> C <- B, C -> D -> E; C has three states, the rest two.
Fixture mixed5();
/// The Asia structure, all binary, hand-assigned tables.
Fixture asia8();
/// The Sports structure (15 arcs); HDA has three states.
Fixture sports9();

std::vector<Fixture> all();
/// Throws InvalidArgument for an unknown name.
Fixture by_name(std::string_view name);

/// Random DAG on n variables named X1..Xn: each forward pair of a random
/// ordering becomes an arc with probability `density`. Tables are drawn so
/// every parent visibly shifts its child's distribution.
DiscreteBn random_bn(std::size_t n, double density, std::uint64_t seed, std::size_t max_arity = 3);

/// Every DAG over the variables, in a fixed order starting with the empty
/// graph. Throws TooManyVariables above five variables.
std::vector<Dag> enumerate_dags(const VariablesPtr& variables);

struct ExhaustiveResult {
    Dag dag;
    double score = 0.0;
    std::size_t candidates = 0;  // DAGs that satisfied the spec
};

/// Highest weighted-BIC DAG among those passing graph_satisfies; the first in
/// enumeration order wins ties. Throws TooManyVariables above five variables.
ExhaustiveResult exhaustive_best_dag(const Dataset& data, const KnowledgeSpec& spec);

}  // namespace kbn::fixtures

#endif  // KBN_FIXTURES_HPP
