#ifndef KBN_EVALUATION_HPP
#define KBN_EVALUATION_HPP

#include <kbn/graph.hpp>

#include <cstddef>
#include <string_view>

namespace kbn {

/// v(v-1)/2 - a: pairs left unconnected by a graph with `a` edges.
std::size_t missing_edges(std::size_t v_count, std::size_t a);

enum class EvalMode { Dag, Cpdag };

std::string_view eval_mode_name(EvalMode mode);
/// "dag" or "cpdag"; throws InvalidArgument otherwise.
EvalMode parse_eval_mode(std::string_view name);

/// Per unordered variable pair. A pair that is adjacent in both graphs with
/// different orientation counts half towards tp, fp and fn.
struct ConfusionCounts {
    double tp = 0.0;
    double fp = 0.0;
    double fn = 0.0;
    double tn = 0.0;
    std::size_t reversals = 0;
    std::size_t a = 0;  // pairs adjacent in the truth
    std::size_t i = 0;  // pairs not adjacent in the truth
};

/// Throws VariableSetMismatch when the graphs use different variables.
ConfusionCounts confusion(const Dag& learned, const Dag& truth, EvalMode mode = EvalMode::Dag);
ConfusionCounts confusion(const Cpdag& learned, const Cpdag& truth);

/// 2tp / (2tp + fp + fn), and 0 when nothing was predicted or true.
double f1_score(const ConfusionCounts& c);
/// Adjacency errors plus 0.5 per reversal.
double shd_score(const ConfusionCounts& c);
/// 0.5 (tp/a + tn/i - fp/i - fn/a). Throws DegenerateTruth when a or i is 0.
double bsf_score(const ConfusionCounts& c);

struct EvalReport {
    EvalMode mode = EvalMode::Dag;
    ConfusionCounts counts;
    double f1 = 0.0;
    double shd = 0.0;
    double bsf = 0.0;
};

EvalReport evaluate(const Dag& learned, const Dag& truth, EvalMode mode = EvalMode::Dag);

}  // namespace kbn

#endif  // KBN_EVALUATION_HPP
