#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "dataset.hpp"
#include "graph.hpp"
#include "localfit.hpp"
#include "scoring.hpp"

namespace bnsl {

struct SearchParams {
    int t0 = 10;  // max tabu iterations
    int t1 = 10;  // tabu list length
    int r0 = 0;   // random restarts
    int r1 = 5;   // perturbation size in moves
    std::uint64_t seed = 0;
    int max_parents = -1;
};

struct TraceEntry {
    char phase = 'h';  // h = hill climbing, t = tabu, r = restart perturbation
    Move move;
    double score_before = 0.0;
    double score_after = 0.0;
    long evals_cum = 0;
};

struct SearchTrace {
    std::vector<TraceEntry> entries;
    long total_evals = 0;
    double seconds = 0.0;
};

inline Dag empty_dag_over(const Dataset& ds) {
    std::vector<std::string> names;
    for (const auto& c : ds.schema().columns) names.push_back(c.name);
    return Dag(std::move(names));
}

// Driver for one hill-climbing/tabu trajectory over a shared score cache.
// Node indices coincide with dataset column indices.
class GreedySearcher {
public:
    GreedySearcher(const Dataset& ds, const ScoreSpec& spec, const SearchParams& params)
        : ds_(ds), params_(params), engine_(ds, spec), tabu_(static_cast<std::size_t>(std::max(params.t1, 0))) {}

    void start(const Dag& init) {
        g_ = init;
        cache_ = cache_init(engine_, g_);
        score_ = cache_.total();
        best_dag_ = g_;
        best_score_ = score_;
        tabu_ = TabuList(static_cast<std::size_t>(std::max(params_.t1, 0)));
        tabu_.push(g_);
    }

    // One hill-climbing acceptance; false at a local maximum.
    bool hill_climb_step() {
        auto best = enumerate_moves(engine_, g_, cache_);
        if (!best.found || !(best.delta > 0.0)) return false;
        accept(best.move, 'h');
        // >= so an accepted move whose delta vanishes in the score summation
        // still advances the incumbent (keeps parity with the naive oracle)
        if (score_ >= best_score_) {
            best_score_ = score_;
            best_dag_ = g_;
        }
        tabu_.push(g_);
        return true;
    }

    void run_hill_climb() {
        while (hill_climb_step()) {
        }
    }

    // Up to t0 score-decreasing escape moves; true iff a DAG scoring above
    // the best-so-far was reached (the caller then reverts to hill climbing).
    bool run_tabu_phase() {
        for (int step = 0; step < params_.t0; ++step) {
            auto best = enumerate_moves(engine_, g_, cache_, &tabu_);
            if (!best.found) return false;  // move exhaustion
            accept(best.move, 't');
            tabu_.push(g_);
            if (score_ > best_score_) {
                best_score_ = score_;
                best_dag_ = g_;
                return true;
            }
        }
        return false;
    }

    // Full hill-climbing + tabu loop from the current state.
    void run() {
        while (true) {
            run_hill_climb();
            if (params_.t0 <= 0) break;
            if (!run_tabu_phase()) break;
        }
    }

    const Dag& current() const { return g_; }
    double current_score() const { return score_; }
    const Dag& best_dag() const { return best_dag_; }
    double best_score() const { return best_score_; }
    const ScoreEngine& engine() const { return engine_; }
    SearchTrace& trace() { return trace_; }

    void record_perturbation(const Move& m) {
        trace_.entries.push_back({'r', m, std::nan(""), std::nan(""), engine_.evaluations()});
    }

private:
    void accept(const Move& m, char phase) {
        double before = score_;
        g_ = apply_move(g_, m);
        std::vector<int> changed{m.to};
        if (m.kind == Move::Kind::Reverse) changed.push_back(m.from);
        cache_refresh(engine_, g_, cache_, changed);
        score_ = cache_.total();
        trace_.entries.push_back({phase, m, before, score_, engine_.evaluations()});
    }

    const Dataset& ds_;
    SearchParams params_;
    ScoreEngine engine_;
    TabuList tabu_;
    Dag g_;
    ScoreCache cache_;
    double score_ = 0.0;
    Dag best_dag_;
    double best_score_ = 0.0;
    SearchTrace trace_;
};

namespace detail {

// Structurally admissible moves for restart perturbations: acyclic,
// family-legal, and within the parent cap.
inline std::vector<Move> admissible_moves(const Dataset& ds, const Dag& dag, int max_parents) {
    std::vector<Move> moves;
    const int n = static_cast<int>(dag.num_nodes());
    auto cap_ok = [&](int child, int extra) {
        return max_parents < 0 || dag.in_degree(child) + extra <= max_parents;
    };
    for (int from = 0; from < n; ++from)
        for (int to = 0; to < n; ++to) {
            if (from == to) continue;
            if (dag.has_arc(from, to)) {
                moves.push_back({Move::Kind::Delete, from, to});
                Move rev{Move::Kind::Reverse, from, to};
                if (family_allowed(ds, to, from) && cap_ok(from, 1) && !would_create_cycle(dag, rev))
                    moves.push_back(rev);
            } else {
                Move add{Move::Kind::Add, from, to};
                if (family_allowed(ds, from, to) && cap_ok(to, 1) && !would_create_cycle(dag, add))
                    moves.push_back(add);
            }
        }
    return moves;
}

}  // namespace detail

inline Dag perturb(const Dataset& ds, const Dag& dag, int moves, int max_parents,
                   std::mt19937_64& rng, GreedySearcher* tracer = nullptr) {
    Dag g = dag;
    for (int k = 0; k < moves; ++k) {
        auto candidates = detail::admissible_moves(ds, g, max_parents);
        if (candidates.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        const Move& m = candidates[pick(rng)];
        g = apply_move(g, m);
        if (tracer) tracer->record_perturbation(m);
    }
    return g;
}

struct SearchResult {
    Dag dag;
    double score = 0.0;
    SearchTrace trace;
};

inline SearchResult hill_climb(const Dataset& ds, ScoreSpec spec, const SearchParams& params,
                               const Dag* init = nullptr) {
    if (params.max_parents >= 0) spec.max_parents = params.max_parents;
    auto t0 = std::chrono::steady_clock::now();
    GreedySearcher s(ds, spec, params);
    s.start(init ? *init : empty_dag_over(ds));
    s.run_hill_climb();
    SearchResult res{s.best_dag(), s.best_score(), std::move(s.trace())};
    res.trace.total_evals = s.engine().evaluations();
    res.trace.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

struct GreedyResult {
    BnModel model;
    Dag dag;
    double score = 0.0;
    SearchTrace trace;
};

// Algorithm: hill climbing to a local maximum, tabu escape, then r0 random
// restarts of r1 perturbing moves each; stops a restart round early when it
// reproduces the previous best DAG. The final model is refit on all rows.
inline GreedyResult greedy_search(const Dataset& ds, ScoreSpec spec, const SearchParams& params,
                                  const Dag* init = nullptr) {
    if (params.max_parents >= 0) spec.max_parents = params.max_parents;
    auto t_start = std::chrono::steady_clock::now();
    GreedySearcher s(ds, spec, params);
    s.start(init ? *init : empty_dag_over(ds));
    s.run();
    Dag g_max = s.best_dag();
    double s_max = s.best_score();

    if (params.r0 > 0) {
        std::mt19937_64 rng(params.seed);
        for (int r = 0; r < params.r0; ++r) {
            auto prev_arcs = g_max.arcs();
            Dag start = perturb(ds, g_max, params.r1, spec.max_parents, rng, &s);
            s.start(start);
            s.run();
            if (s.best_score() > s_max) {
                s_max = s.best_score();
                g_max = s.best_dag();
            }
            if (s.best_dag().arcs() == prev_arcs) break;
        }
    }

    GreedyResult res;
    res.dag = g_max;
    res.score = s_max;
    res.model = fit_model(ds, g_max, spec.method);
    res.trace = std::move(s.trace());
    res.trace.total_evals = s.engine().evaluations();
    res.trace.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

// Uncached reference: every candidate's affected node scores are recomputed
// from scratch each pass. Same move selection and tie-breaking as the cached
// path; exists as a correctness oracle and cache-speedup baseline.
inline SearchResult naive_hill_climb(const Dataset& ds, ScoreSpec spec, const SearchParams& params,
                                     const Dag* init = nullptr) {
    if (params.max_parents >= 0) spec.max_parents = params.max_parents;
    auto t_begin = std::chrono::steady_clock::now();
    ScoreEngine engine(ds, spec);
    Dag g = init ? *init : empty_dag_over(ds);
    const int n = static_cast<int>(g.num_nodes());
    SearchResult res;

    auto node_score = [&](int i, const std::vector<int>& parents) {
        return engine.score_node(i, parents);
    };
    auto toggled = [&](const std::vector<int>& parents, int j) {
        std::vector<int> out(parents);
        auto it = std::find(out.begin(), out.end(), j);
        if (it != out.end())
            out.erase(it);
        else
            out.insert(std::lower_bound(out.begin(), out.end(), j), j);
        return out;
    };

    while (true) {
        std::vector<double> base(n);
        for (int i = 0; i < n; ++i) base[i] = node_score(i, g.parents(i));

        BestMove best;
        auto consider = [&](Move::Kind kind, int from, int to, double delta) {
            if (!std::isfinite(delta)) return;
            Move m{kind, from, to};
            if (kind != Move::Kind::Delete && would_create_cycle(g, m)) return;
            bool better = false;
            if (!best.found || delta > best.delta) {
                better = true;
            } else if (delta == best.delta) {
                auto key = [&](const Move& mv) {
                    return std::make_tuple(static_cast<int>(mv.kind), g.name(mv.from), g.name(mv.to));
                };
                better = key(m) < key(best.move);
            }
            if (better) {
                best.found = true;
                best.move = m;
                best.delta = delta;
            }
        };

        for (int from = 0; from < n; ++from)
            for (int to = 0; to < n; ++to) {
                if (from == to) continue;
                if (g.has_arc(from, to)) {
                    double d_del = node_score(to, toggled(g.parents(to), from)) - base[to];
                    consider(Move::Kind::Delete, from, to, d_del);
                    double d_add = node_score(from, toggled(g.parents(from), to)) - base[from];
                    consider(Move::Kind::Reverse, from, to, d_del + d_add);
                } else {
                    consider(Move::Kind::Add, from, to,
                             node_score(to, toggled(g.parents(to), from)) - base[to]);
                }
            }

        if (!best.found || !(best.delta > 0.0)) {
            double total = 0.0;
            for (int i = 0; i < n; ++i) total += base[i];
            res.score = total;
            break;
        }
        g = apply_move(g, best.move);
    }

    res.dag = g;
    res.trace.total_evals = engine.evaluations();
    res.trace.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return res;
}

}  // namespace bnsl
