#include <kbn/search.hpp>
#include <kbn/error.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <thread>

namespace kbn {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<VarIndex> with_parent(std::vector<VarIndex> parents, VarIndex p) {
    parents.insert(std::lower_bound(parents.begin(), parents.end(), p), p);
    return parents;
}

std::vector<VarIndex> without_parent(std::vector<VarIndex> parents, VarIndex p) {
    parents.erase(std::lower_bound(parents.begin(), parents.end(), p));
    return parents;
}

std::size_t worker_count(const SearchConfig& config) {
    if (!config.parallel_neighbors) return 1;
    if (config.threads) return config.threads;
    return std::max<std::size_t>(2, std::thread::hardware_concurrency());
}

// Evaluates fn(i) for i in [0, count). Results land in their own slots, so
// the outcome does not depend on the number of workers.
std::vector<double> evaluate_all(std::size_t count, const SearchConfig& config,
                                 const std::function<double(std::size_t)>& fn) {
    std::vector<double> out(count);
    const auto workers = std::min(worker_count(config), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const auto chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (auto i = w * chunk; i < std::min(count, (w + 1) * chunk); ++i) out[i] = fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// Index of the first maximum, or nullopt for an empty range. Values within
// the improvement tolerance of the incumbent count as ties, so moves that are
// equal up to rounding (score-equivalent reversals) fall back to move order.
std::optional<std::size_t> first_best(const std::vector<double>& values) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!best || values[i] > values[*best] + kImprovementTolerance) best = i;
    return best;
}

SearchConfig started(const SearchConfig& config) {
    config.validate();
    SearchConfig out = config;
    if (out.timeout_seconds && !out.deadline) {
        out.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                          std::chrono::duration<double>(*out.timeout_seconds));
    }
    return out;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

template <typename Body>
LearnResult run_learner(const char* name, const Dataset& data, const KnowledgeSpec& spec,
                        const SearchConfig& config, Body body) {
    const auto t0 = Clock::now();
    if (!(data.variables() == spec.variables())) {
        throw Error(ErrorKind::VariableSetMismatch, "dataset and knowledge use different variables");
    }
    auto cfg = started(config);
    ScoreCache cache(data);
    LearnResult result;
    result.algorithm = name;
    Dag dag = body(cache, cfg, result);
    const auto t1 = Clock::now();
    dag = apply_post_phases(dag, cache, spec, cfg);
    if (spec.variables_relevant() || (spec.bdn() && spec.bdn_strict())) {
        result.phase_durations.emplace_back("post", seconds_since(t1));
    }
    finalize_result(result, dag, cache, spec);
    result.runtime_seconds = seconds_since(t0);
    return result;
}

Dag add_cheapest(const Dag& dag, ScoreCache& cache, const KnowledgeSpec& spec, const MoveLimits& limits,
                 const std::vector<Move>& candidates, const char* what) {
    std::optional<Move> best;
    double best_delta = 0.0;
    for (const auto& m : candidates) {
        if (!move_is_admissible(dag, m, spec, limits)) continue;
        const double d = move_delta(cache, dag, m, spec.target_weights());
        if (!best || d > best_delta + kImprovementTolerance) {
            best = m;
            best_delta = d;
        }
    }
    if (!best) throw Error(ErrorKind::NoAdmissibleConnector, std::string("no admissible arc ") + what);
    return apply(dag, *best);
}

}  // namespace

void SearchConfig::validate() const {
    if (max_indegree && *max_indegree == 0) throw Error(ErrorKind::InvalidArgument, "max in-degree must be >= 1");
    if (mahc_prune_indegree == 0) throw Error(ErrorKind::InvalidArgument, "pruning in-degree must be >= 1");
    if (timeout_seconds && !(*timeout_seconds > 0)) {
        throw Error(ErrorKind::InvalidArgument, "timeout must be positive");
    }
}

void check_deadline(const SearchConfig& config) {
    if (config.deadline && Clock::now() >= *config.deadline) {
        throw Error(ErrorKind::Timeout, "runtime limit reached");
    }
}

double move_delta(ScoreCache& cache, const Dag& dag, const Move& move, const TargetWeights& weights) {
    const auto p = move.parent, c = move.child;
    const auto& pc = dag.parents(c);
    switch (move.kind) {
        case MoveKind::Add:
            return cache.family_bic(c, with_parent(pc, p), weights[c]) - cache.family_bic(c, pc, weights[c]);
        case MoveKind::Remove:
            return cache.family_bic(c, without_parent(pc, p), weights[c]) - cache.family_bic(c, pc, weights[c]);
        case MoveKind::Reverse: {
            const auto& pp = dag.parents(p);
            return cache.family_bic(c, without_parent(pc, p), weights[c]) - cache.family_bic(c, pc, weights[c]) +
                   cache.family_bic(p, with_parent(pp, c), weights[p]) - cache.family_bic(p, pp, weights[p]);
        }
    }
    return 0.0;
}

ClimbResult climb(const Dag& start, ScoreCache& cache, const KnowledgeSpec& spec, const MoveLimits& limits,
                  const SearchConfig& config) {
    const auto& weights = spec.target_weights();
    ClimbResult r{start, cache.graph_bic(start, weights), 0, {}};
    for (;;) {
        check_deadline(config);
        const auto moves = admissible_moves(r.dag, spec, limits);
        const auto deltas = evaluate_all(moves.size(), config,
                                         [&](std::size_t i) { return move_delta(cache, r.dag, moves[i], weights); });
        const auto best = first_best(deltas);
        if (!best || deltas[*best] <= kImprovementTolerance) break;
        r.dag = apply(r.dag, moves[*best]);
        r.score = cache.graph_bic(r.dag, weights);
        ++r.iterations;
        r.trace.push_back(r.score);
    }
    return r;
}

ClimbResult tabu_from(const ClimbResult& local, ScoreCache& cache, const KnowledgeSpec& spec,
                      const MoveLimits& limits, const SearchConfig& config) {
    const auto& weights = spec.target_weights();
    const auto v = local.dag.size();
    const auto cap = config.tabu_iteration_cap.value_or(v * (v > 0 ? v - 1 : 0));
    ClimbResult best = local;
    std::set<std::vector<Edge>> blacklist;
    for (std::size_t it = 0; it < cap; ++it) {
        check_deadline(config);
        const auto moves = admissible_moves(best.dag, spec, limits);
        const auto deltas = evaluate_all(
            moves.size(), config, [&](std::size_t i) { return move_delta(cache, best.dag, moves[i], weights); });
        std::vector<std::size_t> order(moves.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return deltas[a] > deltas[b]; });
        std::optional<Dag> escape;
        for (auto i : order) {
            auto candidate = apply(best.dag, moves[i]);
            if (!blacklist.count(candidate.edges())) {
                escape = std::move(candidate);
                break;
            }
        }
        if (!escape) break;
        ++best.iterations;
        auto next = climb(*escape, cache, spec, limits, config);
        if (next.score > best.score + kImprovementTolerance) {
            const auto steps = best.iterations + next.iterations;
            auto trace = std::move(best.trace);
            trace.push_back(next.score);
            best = std::move(next);
            best.iterations = steps;
            best.trace = std::move(trace);
            blacklist.clear();
        } else {
            best.iterations += next.iterations;
            blacklist.insert(escape->edges());
        }
    }
    return best;
}

// ---------------------------------------------------------------------------

Dag enforce_var_rel(const Dag& dag, ScoreCache& cache, const KnowledgeSpec& spec, const MoveLimits& limits,
                    const SearchConfig& config) {
    Dag g = dag;
    for (;;) {
        check_deadline(config);
        const auto blocks = weakly_connected_components(g);
        if (blocks.size() <= 1) return g;
        std::vector<std::size_t> block_of(g.size());
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (auto v : blocks[b]) block_of[v] = b;
        std::vector<Move> candidates;
        for (VarIndex p = 0; p < g.size(); ++p)
            for (VarIndex c = 0; c < g.size(); ++c)
                if (block_of[p] != block_of[c]) candidates.push_back({MoveKind::Add, p, c});
        g = add_cheapest(g, cache, spec, limits, candidates, "joins two components");
    }
}

Dag enforce_str_bdn(const Dag& dag, ScoreCache& cache, const KnowledgeSpec& spec, const MoveLimits& limits,
                    const SearchConfig& config) {
    if (!spec.bdn()) return dag;
    const auto& roles = *spec.bdn();
    Dag g = dag;
    for (;;) {
        check_deadline(config);
        std::set<Move> candidates;
        for (auto d : roles.decisions)
            if (g.children(d).empty())
                for (VarIndex x = 0; x < g.size(); ++x)
                    if (x != d) candidates.insert({MoveKind::Add, d, x});
        for (auto u : roles.utilities)
            if (g.parents(u).empty())
                for (VarIndex x = 0; x < g.size(); ++x)
                    if (x != u) candidates.insert({MoveKind::Add, x, u});
        if (candidates.empty()) return g;
        g = add_cheapest(g, cache, spec, limits, {candidates.begin(), candidates.end()},
                         "gives every decision a child and every utility a parent");
    }
}

Dag enforce_var_rel(const Dag& dag, const Dataset& data, const KnowledgeSpec& spec, const SearchConfig& config) {
    auto cfg = started(config);
    ScoreCache cache(data);
    return enforce_var_rel(dag, cache, spec, MoveLimits{cfg.max_indegree}, cfg);
}

Dag enforce_str_bdn(const Dag& dag, const Dataset& data, const KnowledgeSpec& spec, const SearchConfig& config) {
    auto cfg = started(config);
    ScoreCache cache(data);
    return enforce_str_bdn(dag, cache, spec, MoveLimits{cfg.max_indegree}, cfg);
}

Dag apply_post_phases(const Dag& dag, ScoreCache& cache, const KnowledgeSpec& spec, const SearchConfig& config) {
    const MoveLimits limits{config.max_indegree};
    Dag g = dag;
    if (spec.variables_relevant()) g = enforce_var_rel(g, cache, spec, limits, config);
    if (spec.bdn() && spec.bdn_strict()) g = enforce_str_bdn(g, cache, spec, limits, config);
    return g;
}

void finalize_result(LearnResult& result, const Dag& dag, ScoreCache& cache, const KnowledgeSpec& spec) {
    const auto& data = cache.data();
    result.dag = dag;
    result.score = cache.graph_bic(dag, spec.target_weights());
    result.bic = cache.graph_bic(dag, TargetWeights{});
    std::vector<std::size_t> arities(data.variables().size());
    for (VarIndex v = 0; v < arities.size(); ++v) arities[v] = data.arity(v);
    result.free_parameters = free_parameters(dag, arities, spec.target_weights());
    result.arcs = dag.edge_count();
    if (spec.bdn()) {
        BdnAnnotation names;
        for (auto d : spec.bdn()->decisions) names.decisions.push_back(dag.name(d));
        for (auto u : spec.bdn()->utilities) names.utilities.push_back(dag.name(u));
        result.bdn = to_bdn(dag, names);
    }
    result.constraints_applied = spec.applied_approaches();
}

// ---------------------------------------------------------------------------

LearnResult hill_climb(const Dataset& data, const KnowledgeSpec& spec, const SearchConfig& config) {
    return run_learner("hc", data, spec, config, [&](ScoreCache& cache, const SearchConfig& cfg, LearnResult& out) {
        const auto t = Clock::now();
        auto r = climb(seed_graph(spec, cfg.seed, cfg.max_indegree), cache, spec, MoveLimits{cfg.max_indegree}, cfg);
        out.iterations = r.iterations;
        out.trace = std::move(r.trace);
        out.phase_durations.emplace_back("search", seconds_since(t));
        return r.dag;
    });
}

LearnResult tabu(const Dataset& data, const KnowledgeSpec& spec, const SearchConfig& config) {
    return run_learner("tabu", data, spec, config, [&](ScoreCache& cache, const SearchConfig& cfg, LearnResult& out) {
        const auto t = Clock::now();
        const MoveLimits limits{cfg.max_indegree};
        auto local = climb(seed_graph(spec, cfg.seed, cfg.max_indegree), cache, spec, limits, cfg);
        auto r = tabu_from(local, cache, spec, limits, cfg);
        out.iterations = r.iterations;
        out.trace = std::move(r.trace);
        out.phase_durations.emplace_back("search", seconds_since(t));
        return r.dag;
    });
}

std::vector<std::vector<VarIndex>> retained_parent_sets(ScoreCache& cache, const KnowledgeSpec& spec,
                                                        VarIndex child, std::size_t max_size) {
    const auto n = spec.variables().size();
    const double r = spec.target_weights()[child];
    std::vector<VarIndex> pool;
    for (VarIndex u = 0; u < n; ++u)
        if (u != child && !spec.forbids(u, child) && !spec.tiers_forbid_arc(u, child)) pool.push_back(u);

    // Sets are grown level by level from dominant sets only, so every subset
    // of a dominant set is dominant too and already scored.
    std::map<std::vector<VarIndex>, double> dominant;
    dominant[{}] = cache.family_bic(child, std::vector<VarIndex>{}, r);
    std::vector<std::vector<VarIndex>> level{{}};
    const auto largest = std::min(max_size, pool.size());
    for (std::size_t size = 1; size <= largest && !level.empty(); ++size) {
        std::set<std::vector<VarIndex>> next;
        for (const auto& base : level)
            for (auto u : pool) {
                if (!base.empty() && u <= base.back()) continue;
                auto set = base;
                set.push_back(u);
                bool subsets_dominant = true;
                for (std::size_t i = 0; subsets_dominant && i < set.size(); ++i) {
                    auto sub = set;
                    sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
                    subsets_dominant = dominant.count(sub) > 0;
                }
                if (subsets_dominant) next.insert(set);
            }
        level.clear();
        for (const auto& set : next) {
            const double s = cache.family_bic(child, set, r);
            bool beats_all = true;
            const std::size_t k = set.size();
            for (std::size_t mask = 0; beats_all && mask + 1 < (std::size_t{1} << k); ++mask) {
                std::vector<VarIndex> sub;
                for (std::size_t b = 0; b < k; ++b)
                    if (mask >> b & 1) sub.push_back(set[b]);
                beats_all = s > dominant.at(sub);
            }
            if (beats_all) {
                dominant[set] = s;
                level.push_back(set);
            }
        }
    }

    // A dominant set that one more parent, or one swapped parent, would
    // improve is a stepping stone rather than a candidate: keep the local
    // optima.
    auto beats = [&](std::vector<VarIndex> other, double s) {
        std::sort(other.begin(), other.end());
        return cache.family_bic(child, other, r) > s;
    };
    std::vector<std::vector<VarIndex>> out{{}};
    for (const auto& [set, s] : dominant) {
        if (set.empty()) continue;
        bool local_best = true;
        for (auto u : pool) {
            if (!local_best) break;
            if (std::find(set.begin(), set.end(), u) != set.end()) continue;
            if (set.size() < largest) {
                auto bigger = set;
                bigger.push_back(u);
                local_best = !beats(bigger, s);
            }
            for (std::size_t i = 0; local_best && i < set.size(); ++i) {
                auto swapped = set;
                swapped[i] = u;
                local_best = !beats(swapped, s);
            }
        }
        if (local_best) out.push_back(set);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint8_t> mahc_pruned_arcs(ScoreCache& cache, const KnowledgeSpec& spec, std::size_t max_size) {
    const auto n = spec.variables().size();
    std::vector<std::uint8_t> banned(n * n, 1);
    for (VarIndex v = 0; v < n; ++v) {
        banned[v * n + v] = 0;
        for (const auto& set : retained_parent_sets(cache, spec, v, max_size))
            for (auto u : set) banned[u * n + v] = 0;
    }
    auto exempt = [&](VarIndex a, VarIndex b) { banned[a * n + b] = banned[b * n + a] = 0; };
    for (const auto& e : spec.directed_edges()) exempt(e.parent, e.child);
    for (const auto& pr : spec.undirected_edges()) exempt(pr.first, pr.second);
    return banned;
}

double mahc_average(const Dag& g, ScoreCache& cache, const KnowledgeSpec& spec, const MoveLimits& limits) {
    const auto& weights = spec.target_weights();
    const double base = cache.graph_bic(g, weights);
    const auto moves = admissible_moves(g, spec, limits);
    double sum = 0.0;
    for (const auto& m : moves) sum += move_delta(cache, g, m, weights);
    return base + sum / static_cast<double>(moves.size() + 1);
}

LearnResult mahc(const Dataset& data, const KnowledgeSpec& spec, const SearchConfig& config) {
    return run_learner("mahc", data, spec, config, [&](ScoreCache& cache, const SearchConfig& cfg, LearnResult& out) {
        auto t = Clock::now();
        const auto prune_size = std::min(cfg.mahc_prune_indegree, cfg.max_indegree.value_or(cfg.mahc_prune_indegree));
        const auto banned = mahc_pruned_arcs(cache, spec, prune_size);
        out.phase_durations.emplace_back("pruning", seconds_since(t));

        t = Clock::now();
        const MoveLimits limits{cfg.max_indegree, &banned};
        Dag g = seed_graph(spec, cfg.seed, cfg.max_indegree);
        double objective = mahc_average(g, cache, spec, limits);
        for (;;) {
            check_deadline(cfg);
            const auto moves = admissible_moves(g, spec, limits);
            const auto averages = evaluate_all(moves.size(), cfg, [&](std::size_t i) {
                return mahc_average(apply(g, moves[i]), cache, spec, limits);
            });
            const auto best = first_best(averages);
            if (!best || averages[*best] <= objective + kImprovementTolerance) break;
            g = apply(g, moves[*best]);
            objective = averages[*best];
            ++out.iterations;
            out.trace.push_back(objective);
        }
        out.phase_durations.emplace_back("search", seconds_since(t));
        return g;
    });
}

}  // namespace kbn
