#include <kbn/saiyanh.hpp>
#include <kbn/error.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

namespace kbn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

// counts[j * sb + i] = rows with A = j and B = i.
struct Joint {
    std::size_t sa = 0;
    std::size_t sb = 0;
    std::vector<double> counts;

    double at(std::size_t j, std::size_t i) const { return counts[j * sb + i]; }
};

// Mean and max discrepancy between P(B) and P(B | A = j), summed.
double one_direction(const Joint& t, bool transpose) {
    const auto rows = transpose ? t.sb : t.sa;
    const auto cols = transpose ? t.sa : t.sb;
    auto n = [&](std::size_t j, std::size_t i) { return transpose ? t.at(i, j) : t.at(j, i); };

    std::vector<double> col_total(cols, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < rows; ++j)
        for (std::size_t i = 0; i < cols; ++i) {
            col_total[i] += n(j, i);
            total += n(j, i);
        }
    if (total == 0.0) return 0.0;

    double mean_sum = 0.0, max_sum = 0.0;
    std::size_t observed = 0;
    for (std::size_t j = 0; j < rows; ++j) {
        double row_total = 0.0;
        for (std::size_t i = 0; i < cols; ++i) row_total += n(j, i);
        if (row_total == 0.0) continue;
        ++observed;
        double sum = 0.0, worst = 0.0;
        for (std::size_t i = 0; i < cols; ++i) {
            const double gap = std::fabs(col_total[i] / total - n(j, i) / row_total);
            sum += gap;
            worst = std::max(worst, gap);
        }
        mean_sum += sum / static_cast<double>(cols);
        max_sum += worst;
    }
    return (mean_sum + max_sum) / static_cast<double>(observed);
}

double joint_mmd(const Joint& t) { return 0.25 * (one_direction(t, false) + one_direction(t, true)); }

}  // namespace

double mmd(const Dataset& data, VarIndex a, VarIndex b) {
    if (a == b) throw Error(ErrorKind::InvalidArgument, "mmd needs two distinct variables");
    if (b < a) std::swap(a, b);
    const VarIndex parents[] = {a};
    const auto table = family_counts(data, b, parents);
    Joint t{data.arity(a), data.arity(b), {}};
    t.counts.assign(table.counts.begin(), table.counts.end());
    return joint_mmd(t);
}

double conditional_mmd(const Dataset& data, VarIndex a, VarIndex b, VarIndex c) {
    if (a == b || a == c || b == c) throw Error(ErrorKind::InvalidArgument, "conditional mmd needs three variables");
    if (b < a) std::swap(a, b);
    const VarIndex parents[] = {a, c};
    const auto table = family_counts(data, b, parents);
    const auto sa = data.arity(a), sb = data.arity(b), sc = data.arity(c);
    const double total = static_cast<double>(table.total());
    if (total == 0.0) return 0.0;
    double out = 0.0;
    for (std::size_t k = 0; k < sc; ++k) {
        Joint t{sa, sb, std::vector<double>(sa * sb, 0.0)};
        double weight = 0.0;
        for (std::size_t j = 0; j < sa; ++j)
            for (std::size_t i = 0; i < sb; ++i) {
                const double n = static_cast<double>(table.count(j * sc + k, i));
                t.counts[j * sb + i] = n;
                weight += n;
            }
        if (weight > 0.0) out += weight / total * joint_mmd(t);
    }
    return out;
}

MmdTable mmd_table(const Dataset& data, const SearchConfig& config) {
    const auto n = data.variables().size();
    std::vector<VarPair> pairs;
    for (VarIndex a = 0; a < n; ++a)
        for (VarIndex b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
    std::vector<double> values(pairs.size());
    std::size_t workers = 1;
    if (config.parallel_neighbors) {
        workers = config.threads ? config.threads : std::max<std::size_t>(2, std::thread::hardware_concurrency());
        workers = std::min(workers, std::max<std::size_t>(pairs.size(), 1));
    }
    if (workers <= 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i) values[i] = mmd(data, pairs[i].first, pairs[i].second);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (auto i = w; i < pairs.size(); i += workers) values[i] = mmd(data, pairs[i].first, pairs[i].second);
            });
        for (auto& t : pool) t.join();
    }
    MmdTable table(n);
    for (std::size_t i = 0; i < pairs.size(); ++i) table.set(pairs[i].first, pairs[i].second, values[i]);
    return table;
}

// ---------------------------------------------------------------------------

std::vector<VarIndex> Emsg::neighbours(VarIndex v) const {
    std::vector<VarIndex> out;
    for (VarIndex u = 0; u < n; ++u)
        if (adjacent(u, v)) out.push_back(u);
    return out;
}

Emsg build_emsg(const MmdTable& scores) {
    Emsg g;
    g.n = scores.size();
    std::vector<VarPair> order;
    for (VarIndex a = 0; a < g.n; ++a)
        for (VarIndex b = a + 1; b < g.n; ++b) {
            order.emplace_back(a, b);
            g.edges.insert(order.back());
        }
    std::stable_sort(order.begin(), order.end(), [&](const VarPair& x, const VarPair& y) {
        return scores(x.first, x.second) < scores(y.first, y.second);
    });
    for (const auto& pr : order) {
        const auto a = pr.first, b = pr.second;
        const double ab = scores(a, b);
        for (VarIndex c = 0; c < g.n; ++c) {
            if (c == a || c == b || !g.adjacent(a, c) || !g.adjacent(b, c)) continue;
            if (scores(a, c) > ab && scores(b, c) > ab) {
                g.edges.erase(pr);
                break;
            }
        }
    }
    return g;
}

Emsg build_emsg(const Dataset& data) { return build_emsg(mmd_table(data)); }

Dependence classify(double marginal, double conditional, const SaiyanhOptions& options) {
    if (conditional >= options.dependence_ratio * marginal && conditional - marginal >= options.dependence_gap) {
        return Dependence::Dependent;
    }
    if (conditional * options.dependence_ratio <= marginal) return Dependence::Independent;
    return Dependence::Insignificant;
}

MmdTable pin_scores(MmdTable scores, const KnowledgeSpec& spec) {
    const auto n = scores.size();
    for (VarIndex a = 0; a < n; ++a)
        for (VarIndex b = a + 1; b < n; ++b)
            if (spec.tiers_forbid_arc(a, b) && spec.tiers_forbid_arc(b, a)) scores.set(a, b, 0.0);
    for (const auto& pr : spec.forbidden_edges()) scores.set(pr.first, pr.second, 0.0);
    for (const auto& e : spec.directed_edges()) scores.set(e.parent, e.child, 1.0);
    for (const auto& pr : spec.undirected_edges()) scores.set(pr.first, pr.second, 1.0);
    if (spec.initial_graph())
        for (const auto& e : spec.initial_graph()->edges()) scores.set(e.parent, e.child, 1.0);
    return scores;
}

// ---------------------------------------------------------------------------

namespace {

class Orienter {
public:
    Orienter(Dag start, ScoreCache& cache, const KnowledgeSpec& spec, const MoveLimits& limits)
        : m_dag(std::move(start)), m_cache(cache), m_spec(spec), m_limits(limits) {}

    const Dag& dag() const { return m_dag; }

    bool can_add(VarIndex p, VarIndex c) const {
        return move_is_admissible(m_dag, {MoveKind::Add, p, c}, m_spec, m_limits);
    }

    bool add(VarIndex p, VarIndex c) {
        if (!can_add(p, c)) return false;
        m_dag = m_dag.with_edge({p, c});
        return true;
    }

    // Gain in weighted BIC from adding p -> c to the current graph.
    double gain(VarIndex p, VarIndex c) const {
        return move_delta(m_cache, m_dag, {MoveKind::Add, p, c}, m_spec.target_weights());
    }

private:
    Dag m_dag;
    ScoreCache& m_cache;
    const KnowledgeSpec& m_spec;
    const MoveLimits& m_limits;
};

}  // namespace

LearnResult saiyanh(const Dataset& data, const KnowledgeSpec& spec, const SearchConfig& config,
                    const SaiyanhOptions& options) {
    const auto t0 = Clock::now();
    if (!(data.variables() == spec.variables())) {
        throw Error(ErrorKind::VariableSetMismatch, "dataset and knowledge use different variables");
    }
    config.validate();
    SearchConfig cfg = config;
    if (cfg.timeout_seconds && !cfg.deadline) {
        cfg.deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(*cfg.timeout_seconds));
    }
    ScoreCache cache(data);
    LearnResult result;
    result.algorithm = "saiyanh";
    const auto n = data.variables().size();

    // Phase 1: associational skeleton.
    auto t = Clock::now();
    const auto raw = mmd_table(data, cfg);
    const auto scores = pin_scores(raw, spec);
    auto emsg = build_emsg(scores);
    for (auto it = emsg.edges.begin(); it != emsg.edges.end();) {
        const bool banned = spec.forbids(it->first, it->second) ||
                            (spec.tiers_forbid_arc(it->first, it->second) &&
                             spec.tiers_forbid_arc(it->second, it->first));
        it = banned ? emsg.edges.erase(it) : std::next(it);
    }
    result.phase_durations.emplace_back("phase1", seconds_since(t));
    check_deadline(cfg);

    // Phase 2: orientation.
    t = Clock::now();
    const MoveLimits limits{cfg.max_indegree};
    Orienter orient(seed_graph(spec, cfg.seed, cfg.max_indegree), cache, spec, limits);
    auto settled = [&](VarIndex a, VarIndex b) { return orient.dag().adjacent(a, b); };
    auto fixed_by_knowledge = [&](VarIndex a, VarIndex b) {
        return spec.requires_arc(a, b) || spec.requires_arc(b, a) ||
               (spec.initial_graph() && spec.initial_graph()->adjacent(a, b));
    };

    for (VarIndex c = 0; c < n; ++c) {
        const auto nb = emsg.neighbours(c);
        for (std::size_t x = 0; x < nb.size(); ++x)
            for (std::size_t y = x + 1; y < nb.size(); ++y) {
                const auto a = nb[x], b = nb[y];
                if (emsg.adjacent(a, b)) continue;
                if (fixed_by_knowledge(a, c) || fixed_by_knowledge(b, c)) continue;
                if (classify(raw(a, b), conditional_mmd(data, a, b, c), options) != Dependence::Dependent) continue;
                if (!settled(a, c)) orient.add(a, c);
                if (!settled(b, c)) orient.add(b, c);
            }
        check_deadline(cfg);
    }

    auto open_edges = [&] {
        std::vector<VarPair> out;
        for (const auto& pr : emsg.edges)
            if (!settled(pr.first, pr.second)) out.push_back(pr);
        return out;
    };
    for (int round = 0; round < 2; ++round) {
        const auto before = orient.dag().edge_count();
        // Score-decisive orientations.
        for (const auto& pr : open_edges()) {
            const double forward = orient.gain(pr.first, pr.second);
            const double backward = orient.gain(pr.second, pr.first);
            if (std::fabs(forward - backward) <= kImprovementTolerance) continue;
            const bool prefer_forward = forward > backward;
            if (!orient.add(prefer_forward ? pr.first : pr.second, prefer_forward ? pr.second : pr.first)) {
                orient.add(prefer_forward ? pr.second : pr.first, prefer_forward ? pr.first : pr.second);
            }
        }
        // Whatever remains: higher gain first, then lower index as parent.
        for (const auto& pr : open_edges()) {
            const bool prefer_forward = orient.gain(pr.first, pr.second) >= orient.gain(pr.second, pr.first);
            if (!orient.add(prefer_forward ? pr.first : pr.second, prefer_forward ? pr.second : pr.first)) {
                orient.add(prefer_forward ? pr.second : pr.first, prefer_forward ? pr.first : pr.second);
            }
        }
        check_deadline(cfg);
        if (orient.dag().edge_count() == before) break;
    }
    for (const auto& pr : open_edges()) {
        result.warnings.push_back("Phase2Unorientable: " + data.variables().name(pr.first) + " - " +
                                  data.variables().name(pr.second) + " dropped");
    }
    result.phase_durations.emplace_back("phase2", seconds_since(t));

    // Phase 3: connected tabu search.
    t = Clock::now();
    Dag start = enforce_var_rel(orient.dag(), cache, spec, limits, cfg);
    MoveLimits connected = limits;
    connected.keep_connected = true;
    auto local = climb(start, cache, spec, connected, cfg);
    auto best = tabu_from(local, cache, spec, connected, cfg);
    result.iterations = best.iterations;
    result.trace = std::move(best.trace);
    result.phase_durations.emplace_back("phase3", seconds_since(t));

    Dag dag = best.dag;
    if (spec.bdn() && spec.bdn_strict()) {
        t = Clock::now();
        dag = enforce_str_bdn(dag, cache, spec, limits, cfg);
        result.phase_durations.emplace_back("post", seconds_since(t));
    }
    finalize_result(result, dag, cache, spec);
    result.runtime_seconds = seconds_since(t0);
    return result;
}

}  // namespace kbn
