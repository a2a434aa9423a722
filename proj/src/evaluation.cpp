#include <kbn/evaluation.hpp>
#include <kbn/error.hpp>

#include <vector>

namespace kbn {

std::size_t missing_edges(std::size_t v_count, std::size_t a) {
    const auto pairs = v_count * (v_count > 0 ? v_count - 1 : 0) / 2;
    if (a > pairs) throw Error(ErrorKind::InvalidArgument, "more edges than variable pairs");
    return pairs - a;
}

std::string_view eval_mode_name(EvalMode mode) { return mode == EvalMode::Dag ? "dag" : "cpdag"; }

EvalMode parse_eval_mode(std::string_view name) {
    if (name == "dag" || name == "DAG") return EvalMode::Dag;
    if (name == "cpdag" || name == "CPDAG") return EvalMode::Cpdag;
    throw Error(ErrorKind::InvalidArgument, "unknown evaluation mode '" + std::string(name) + "'");
}

namespace {

enum Mark : unsigned char { None, Forward, Backward, Undirected };

// Mark for each pair (a, b), a < b, stored at a * n + b.
std::vector<unsigned char> marks(const Cpdag& g) {
    const auto n = g.variables->size();
    std::vector<unsigned char> out(n * n, None);
    for (const auto& e : g.directed) {
        if (e.parent < e.child) out[e.parent * n + e.child] = Forward;
        else out[e.child * n + e.parent] = Backward;
    }
    for (const auto& pr : g.undirected) out[pr.first * n + pr.second] = Undirected;
    return out;
}

Cpdag as_pattern(const Dag& dag) {
    Cpdag out{dag.variables_ptr(), {}, {}};
    for (const auto& e : dag.edges()) out.directed.insert(e);
    return out;
}

}  // namespace

ConfusionCounts confusion(const Cpdag& learned, const Cpdag& truth) {
    if (!(*learned.variables == *truth.variables)) {
        throw Error(ErrorKind::VariableSetMismatch, "learned and true graphs use different variables");
    }
    const auto n = truth.variables->size();
    const auto lm = marks(learned), tm = marks(truth);
    ConfusionCounts c;
    for (VarIndex a = 0; a < n; ++a)
        for (VarIndex b = a + 1; b < n; ++b) {
            const auto l = lm[a * n + b], t = tm[a * n + b];
            if (t == None) {
                ++c.i;
                if (l == None) c.tn += 1;
                else c.fp += 1;
            } else {
                ++c.a;
                if (l == None) {
                    c.fn += 1;
                } else if (l == t) {
                    c.tp += 1;
                } else {
                    c.tp += 0.5;
                    c.fp += 0.5;
                    c.fn += 0.5;
                    ++c.reversals;
                }
            }
        }
    return c;
}

ConfusionCounts confusion(const Dag& learned, const Dag& truth, EvalMode mode) {
    if (!(learned.variables() == truth.variables())) {
        throw Error(ErrorKind::VariableSetMismatch, "learned and true graphs use different variables");
    }
    if (mode == EvalMode::Cpdag) return confusion(to_cpdag(learned), to_cpdag(truth));
    return confusion(as_pattern(learned), as_pattern(truth));
}

double f1_score(const ConfusionCounts& c) {
    const double denom = 2 * c.tp + c.fp + c.fn;
    return denom > 0 ? 2 * c.tp / denom : 0.0;
}

double shd_score(const ConfusionCounts& c) {
    const double half = 0.5 * static_cast<double>(c.reversals);
    return (c.fp - half) + (c.fn - half) + half;
}

double bsf_score(const ConfusionCounts& c) {
    if (c.a == 0 || c.i == 0) {
        throw Error(ErrorKind::DegenerateTruth, c.a == 0 ? "true graph has no edges" : "true graph is complete");
    }
    const double a = static_cast<double>(c.a), i = static_cast<double>(c.i);
    return 0.5 * (c.tp / a + c.tn / i - c.fp / i - c.fn / a);
}

EvalReport evaluate(const Dag& learned, const Dag& truth, EvalMode mode) {
    EvalReport r;
    r.mode = mode;
    r.counts = confusion(learned, truth, mode);
    r.f1 = f1_score(r.counts);
    r.shd = shd_score(r.counts);
    r.bsf = bsf_score(r.counts);
    return r;
}

}  // namespace kbn
