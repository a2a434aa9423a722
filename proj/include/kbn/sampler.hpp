#ifndef KBN_SAMPLER_HPP
#define KBN_SAMPLER_HPP

#include <kbn/graph.hpp>
#include <kbn/knowledge.hpp>

#include <cstdint>
#include <string_view>
#include <vector>

namespace kbn {

enum class Approach { DirEdg, UndEdg, ForEdg, RelTem, StrTem, IniGra, VarRel, TarVar, RelBdn, StrBdn };

/// Upper-case identifier, e.g. "DIR-EDG".
std::string_view approach_name(Approach a);
/// Case-insensitive; throws InvalidArgument.
Approach parse_approach(std::string_view name);

/// Rates the protocol defines for an approach. Empty for approaches whose
/// knowledge is not sampled (VAR-REL, TAR-VAR and the BDN pair).
std::vector<double> legal_rates(Approach a);
bool takes_rate(Approach a);

/// round(rate * population), halves rounded up.
std::size_t sample_count(double rate, std::size_t population);

/// Seeded permutation of the true edges, cut to the rate. Smaller rates give
/// prefixes of larger ones. Throws IllegalRate above 0.5.
std::vector<Edge> sample_edge_constraints(const Dag& truth, double rate, std::uint64_t seed);

/// Seeded selection of variables, each placed in its longest-path tier;
/// empty tiers are dropped. Throws TooFewVariables when fewer than two
/// variables would be selected.
TemporalTiers sample_tiers(const Dag& truth, double rate, std::uint64_t seed);

/// The truth at rate 1, the 50% edge sample at rate 0.5. Throws IllegalRate
/// otherwise.
Dag sample_initial_graph(const Dag& truth, double rate, std::uint64_t seed);

/// Knowledge for one (approach, rate) cell. The rate is ignored for
/// approaches that take none. Throws IllegalRate for rates the approach does
/// not define.
KnowledgeInput sample_knowledge(const Dag& truth, Approach approach, double rate, std::uint64_t seed);

}  // namespace kbn

#endif  // KBN_SAMPLER_HPP
