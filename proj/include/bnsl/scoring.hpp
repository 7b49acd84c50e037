#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "dataset.hpp"
#include "graph.hpp"
#include "localfit.hpp"

namespace bnsl {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ScoreSpec {
    enum class Kind { BIC, PRED };
    Kind kind = Kind::BIC;
    FitMethod method = FitMethod::QR;
    SplitSpec split;      // PRED only
    int max_parents = -1; // negative = unlimited
};

// A discrete child can only take discrete parents.
inline bool family_allowed(const Dataset& ds, int parent, int child) {
    return !(ds.is_discrete(child) && !ds.is_discrete(parent));
}

// Per-node score evaluation over the dataset columns. Node index == column
// index throughout the search machinery. The PRED split is drawn once at
// construction so scores stay comparable across a whole search trajectory.
class ScoreEngine {
public:
    ScoreEngine(const Dataset& ds, const ScoreSpec& spec) : ds_(ds), spec_(spec) {
        if (spec_.kind == ScoreSpec::Kind::PRED) {
            // Materialized once: every fit then scans contiguous columns.
            auto [train, test] = split_rows(ds.n(), spec_.split);
            train_ = ds.take_rows(train);
            test_ = ds.take_rows(test);
        }
    }

    const Dataset& data() const { return ds_; }
    const ScoreSpec& spec() const { return spec_; }
    long evaluations() const { return evals_; }

    // Maximized-likelihood BIC, or held-out log-likelihood for PRED.
    // Returns -inf for inadmissible candidates: family violations,
    // over-cap parent sets, and degenerate fits.
    double score_node(int child, const std::vector<int>& parents) const {
        ++evals_;
        if (spec_.max_parents >= 0 && static_cast<int>(parents.size()) > spec_.max_parents)
            return kNegInf;

        std::vector<int> dpar, gpar;
        for (int p : parents) (ds_.is_discrete(p) ? dpar : gpar).push_back(p);

        if (ds_.is_discrete(child)) {
            if (!gpar.empty()) return kNegInf;
            return score_discrete(child, dpar);
        }
        return score_continuous(child, dpar, gpar);
    }

private:
    bool pred() const { return spec_.kind == ScoreSpec::Kind::PRED; }
    const Dataset& fit_data() const { return pred() ? train_ : ds_; }

    double penalty(long params) const {
        if (pred()) return 0.0;
        return 0.5 * std::log(static_cast<double>(ds_.n())) * static_cast<double>(params);
    }

    double score_discrete(int child, const std::vector<int>& dpar) const {
        Cpt cpt = fit_cpt(fit_data(), child, dpar);
        if (pred()) return loglik(cpt, test_);
        // counting identity: sum over cells of n_ijk * log pi_ik|j
        double ll = 0.0;
        for (std::size_t c = 0; c < cpt.counts.size(); ++c)
            if (cpt.counts[c] > 0.0) ll += cpt.counts[c] * std::log(cpt.probs[c]);
        return ll - penalty(cpt.param_count());
    }

    static double gauss_fit_loglik(double sse, double sigma2, double m) {
        return -0.5 * m * std::log(2.0 * std::numbers::pi * sigma2) - sse / (2.0 * sigma2);
    }

    double score_continuous(int child, const std::vector<int>& dpar,
                            const std::vector<int>& gpar) const {
        const Dataset& fd = fit_data();
        if (dpar.empty()) {
            if (fd.n() < gpar.size() + 2) return kNegInf;
            GaussRegression fit =
                detail::fit_gauss_dispatch(fd, child, gpar, spec_.method, detail::all_rows(fd));
            if (pred()) return loglik(fit, test_);
            return gauss_fit_loglik(fit.sse, fit.sigma2, static_cast<double>(fit.nfit)) -
                   penalty(fit.param_count());
        }
        ClgMixture mix = fit_clg(fd, child, dpar, gpar, spec_.method);
        if (!mix.valid) return kNegInf;
        if (pred()) return loglik(mix, test_);
        double ll = 0.0;
        for (const auto& c : mix.components)
            if (c.count > 0)
                ll += gauss_fit_loglik(c.sse, c.sigma2, static_cast<double>(c.count));
        return ll - penalty(mix.param_count());
    }

    const Dataset& ds_;
    ScoreSpec spec_;
    Dataset train_, test_;  // PRED only
    mutable long evals_ = 0;
};

inline std::vector<int> node_parent_columns(const Dataset& ds, const Dag& dag, int node) {
    std::vector<int> cols;
    for (int p : dag.parents(node)) cols.push_back(ds.column(dag.name(p)));
    return cols;
}

inline double score_graph(const Dataset& ds, const ScoreSpec& spec, const Dag& dag) {
    ScoreEngine engine(ds, spec);
    double total = 0.0;
    for (std::size_t i = 0; i < dag.num_nodes(); ++i) {
        int child = ds.column(dag.name(static_cast<int>(i)));
        total += engine.score_node(child, node_parent_columns(ds, dag, static_cast<int>(i)));
    }
    return total;
}

// Per-node scores B_i for the current DAG plus the toggle delta matrix:
// delta(i, j) = score(X_i, Pi_i toggled by X_j) - B_i.
struct ScoreCache {
    int n = 0;
    std::vector<double> B;
    std::vector<double> deltas;  // n*n, diagonal unused

    double delta(int i, int j) const { return deltas[static_cast<std::size_t>(i) * n + j]; }
    double& delta(int i, int j) { return deltas[static_cast<std::size_t>(i) * n + j]; }

    double total() const {
        double s = 0.0;
        for (double b : B) s += b;
        return s;
    }
};

namespace detail {

inline void refresh_node(const ScoreEngine& engine, const Dag& dag, ScoreCache& cache, int i) {
    const int n = cache.n;
    std::vector<int> parents(dag.parents(i));
    cache.B[i] = engine.score_node(i, parents);
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        auto it = std::find(parents.begin(), parents.end(), j);
        std::vector<int> toggled(parents);
        if (it != parents.end())
            toggled.erase(toggled.begin() + (it - parents.begin()));
        else
            toggled.insert(std::lower_bound(toggled.begin(), toggled.end(), j), j);
        cache.delta(i, j) = engine.score_node(i, toggled) - cache.B[i];
    }
}

}  // namespace detail

inline ScoreCache cache_init(const ScoreEngine& engine, const Dag& dag) {
    ScoreCache cache;
    cache.n = static_cast<int>(dag.num_nodes());
    cache.B.assign(cache.n, 0.0);
    cache.deltas.assign(static_cast<std::size_t>(cache.n) * cache.n, 0.0);
    for (int i = 0; i < cache.n; ++i) detail::refresh_node(engine, dag, cache, i);
    return cache;
}

inline void cache_refresh(const ScoreEngine& engine, const Dag& dag, ScoreCache& cache,
                          const std::vector<int>& changed_nodes) {
    for (int i : changed_nodes) detail::refresh_node(engine, dag, cache, i);
}

// Fingerprints of recently visited DAGs: arc-set hash plus the sorted arc
// list for exact comparison on collision.
class TabuList {
public:
    explicit TabuList(std::size_t cap) : cap_(cap) {}

    static std::uint64_t hash_arcs(const std::vector<std::pair<int, int>>& arcs) {
        std::uint64_t h = 1469598103934665603ull;
        for (auto [a, b] : arcs) {
            h = (h ^ static_cast<std::uint64_t>(a)) * 1099511628211ull;
            h = (h ^ static_cast<std::uint64_t>(b)) * 1099511628211ull;
        }
        return h;
    }

    void push(const Dag& dag) {
        if (cap_ == 0) return;
        auto arcs = dag.arcs();
        entries_.emplace_back(hash_arcs(arcs), std::move(arcs));
        while (entries_.size() > cap_) entries_.pop_front();
    }

    bool contains(const std::vector<std::pair<int, int>>& arcs) const {
        std::uint64_t h = hash_arcs(arcs);
        for (const auto& [eh, earcs] : entries_)
            if (eh == h && earcs == arcs) return true;
        return false;
    }

    bool empty() const { return entries_.empty(); }

private:
    std::size_t cap_;
    std::deque<std::pair<std::uint64_t, std::vector<std::pair<int, int>>>> entries_;
};

struct BestMove {
    bool found = false;
    Move move;
    double delta = kNegInf;
};

namespace detail {

inline std::vector<std::pair<int, int>> arcs_after(const Dag& dag, const Move& m) {
    auto arcs = dag.arcs();
    auto insert_sorted = [&](std::pair<int, int> a) {
        arcs.insert(std::lower_bound(arcs.begin(), arcs.end(), a), a);
    };
    auto erase_arc = [&](std::pair<int, int> a) {
        arcs.erase(std::find(arcs.begin(), arcs.end(), a));
    };
    switch (m.kind) {
        case Move::Kind::Add: insert_sorted({m.from, m.to}); break;
        case Move::Kind::Delete: erase_arc({m.from, m.to}); break;
        case Move::Kind::Reverse:
            erase_arc({m.from, m.to});
            insert_sorted({m.to, m.from});
            break;
    }
    return arcs;
}

}  // namespace detail

// Best admissible move by cached deltas. Reversals compose the cached
// delete and add halves; the two halves toggle disjoint parent sets, so both
// cached entries are exact for the current DAG. Ties break lexicographically
// by (add < delete < reverse, from-name, to-name).
inline BestMove enumerate_moves(const ScoreEngine& engine, const Dag& dag, const ScoreCache& cache,
                                const TabuList* tabu = nullptr) {
    const int n = cache.n;
    BestMove best;
    auto consider = [&](Move::Kind kind, int from, int to, double delta) {
        if (!std::isfinite(delta)) return;
        Move m{kind, from, to};
        if (kind != Move::Kind::Delete && would_create_cycle(dag, m)) return;
        if (tabu && !tabu->empty() && tabu->contains(detail::arcs_after(dag, m))) return;
        bool better = false;
        if (!best.found || delta > best.delta) {
            better = true;
        } else if (delta == best.delta) {
            auto key = [&](const Move& mv) {
                return std::make_tuple(static_cast<int>(mv.kind), dag.name(mv.from), dag.name(mv.to));
            };
            better = key(m) < key(best.move);
        }
        if (better) {
            best.found = true;
            best.move = m;
            best.delta = delta;
        }
    };
    (void)engine;
    for (int from = 0; from < n; ++from)
        for (int to = 0; to < n; ++to) {
            if (from == to) continue;
            if (dag.has_arc(from, to)) {
                double d = cache.delta(to, from);
                consider(Move::Kind::Delete, from, to, d);
                consider(Move::Kind::Reverse, from, to, d + cache.delta(from, to));
            } else {
                consider(Move::Kind::Add, from, to, cache.delta(to, from));
            }
        }
    return best;
}

}  // namespace bnsl
