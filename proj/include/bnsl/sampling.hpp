#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "graph.hpp"
#include "localfit.hpp"

namespace bnsl {

struct SampleSpec {
    std::size_t n = 1;
    std::uint64_t seed = 0;
};

// Forward (ancestral) sampling. One RNG stream; draws advance in
// topological node order within each row.
inline Dataset sample(const BnModel& model, const SampleSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("sample: n must be >= 1");
    const auto order = topological_order(model.dag);
    const int ncol = static_cast<int>(model.schema.columns.size());
    if (static_cast<int>(model.dag.num_nodes()) != ncol)
        throw std::invalid_argument("sample: model nodes do not cover the schema");

    // node index -> schema column index
    std::vector<int> col_of(ncol);
    for (int i = 0; i < ncol; ++i) col_of[i] = model.schema.index_of(model.dag.name(i));

    std::vector<std::vector<std::int32_t>> codes(ncol);
    std::vector<std::vector<double>> reals(ncol);
    for (int c = 0; c < ncol; ++c) {
        if (model.schema.columns[c].kind == ColumnKind::Discrete)
            codes[c].resize(spec.n);
        else
            reals[c].resize(spec.n);
    }

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (std::size_t r = 0; r < spec.n; ++r) {
        for (int node : order) {
            const auto& local = model.locals[node];
            int col = col_of[node];
            if (const auto* cpt = std::get_if<Cpt>(&local)) {
                long cfg = 0;
                for (int p : cpt->parents)
                    cfg = cfg * static_cast<long>(model.schema.columns[p].levels.size()) + codes[p][r];
                double u = unif(rng);
                double acc = 0.0;
                std::int32_t k = 0;
                for (; k < cpt->levels - 1; ++k) {
                    acc += cpt->probs[static_cast<std::size_t>(k) * cpt->q + cfg];
                    if (u < acc) break;
                }
                codes[col][r] = k;
            } else if (const auto* reg = std::get_if<GaussRegression>(&local)) {
                double v = reg->intercept;
                for (std::size_t a = 0; a < reg->parents.size(); ++a)
                    v += reg->coef[a] * reals[reg->parents[a]][r];
                reals[col][r] = v + gauss(rng) * std::sqrt(reg->sigma2);
            } else {
                const auto& mix = std::get<ClgMixture>(local);
                if (!mix.valid) throw std::invalid_argument("sample: model has an invalid CLG fit");
                long cfg = 0;
                for (int p : mix.dparents)
                    cfg = cfg * static_cast<long>(model.schema.columns[p].levels.size()) + codes[p][r];
                const auto& comp = mix.components[cfg];
                double v = comp.intercept;
                for (std::size_t a = 0; a < mix.gparents.size(); ++a)
                    v += comp.coef[a] * reals[mix.gparents[a]][r];
                reals[col][r] = v + gauss(rng) * std::sqrt(comp.sigma2);
            }
        }
    }
    return Dataset(model.schema, spec.n, std::move(codes), std::move(reals));
}

enum class NetworkKind { Discrete, Gbn, Clgbn };

struct ReferenceParams {
    double coef_min = 0.5;   // |coefficient| lower bound, sign random
    double coef_max = 2.0;
    double sigma2_min = 0.5;
    double sigma2_max = 2.0;
    double intercept_max = 2.0;  // intercepts uniform in +-intercept_max
    int min_levels = 2;
    int max_levels = 3;
    double discrete_fraction = 0.3;  // clgbn only
};

// Synthetic benchmark network: a random DAG with floor(c*N) arcs over a
// random node ordering; discrete nodes (if any) come first in the ordering
// so the family constraints hold by construction.
inline BnModel random_reference_model(NetworkKind kind, int num_nodes, double arc_density,
                                      std::uint64_t seed, const ReferenceParams& pr = {}) {
    if (num_nodes < 2) throw std::invalid_argument("random_reference_model: need >= 2 nodes");
    const long max_arcs = static_cast<long>(num_nodes) * (num_nodes - 1) / 2;
    const long num_arcs = static_cast<long>(std::floor(arc_density * num_nodes));
    if (num_arcs > max_arcs) throw std::invalid_argument("random_reference_model: infeasible arc count");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    int num_discrete = 0;
    if (kind == NetworkKind::Discrete) num_discrete = num_nodes;
    else if (kind == NetworkKind::Clgbn) {
        num_discrete = static_cast<int>(std::lround(pr.discrete_fraction * num_nodes));
        num_discrete = std::max(1, std::min(num_discrete, num_nodes - 1));
    }

    // X01, X02, ... with zero-padded width for lexicographic stability
    int width = static_cast<int>(std::to_string(num_nodes).size());
    std::vector<std::string> names(num_nodes);
    for (int i = 0; i < num_nodes; ++i) {
        std::string d = std::to_string(i + 1);
        names[i] = "X" + std::string(width - d.size(), '0') + d;
    }

    Schema schema;
    schema.columns.resize(num_nodes);
    std::uniform_int_distribution<int> level_count(pr.min_levels, pr.max_levels);
    for (int i = 0; i < num_nodes; ++i) {
        schema.columns[i].name = names[i];
        if (i < num_discrete) {
            schema.columns[i].kind = ColumnKind::Discrete;
            int l = level_count(rng);
            for (int k = 0; k < l; ++k)
                schema.columns[i].levels.push_back(std::string(1, static_cast<char>('a' + k)));
        } else {
            schema.columns[i].kind = ColumnKind::Continuous;
        }
    }

    // order[pos] = node at topological position pos; discrete block first
    std::vector<int> order(num_nodes);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.begin() + num_discrete, rng);
    std::shuffle(order.begin() + num_discrete, order.end(), rng);

    std::vector<std::pair<int, int>> pairs;  // (earlier pos, later pos)
    for (int a = 0; a < num_nodes; ++a)
        for (int b = a + 1; b < num_nodes; ++b) pairs.emplace_back(a, b);
    std::shuffle(pairs.begin(), pairs.end(), rng);

    Dag dag(names);
    long added = 0;
    for (const auto& [a, b] : pairs) {
        if (added >= num_arcs) break;
        int parent = order[a], child = order[b];
        if (schema.columns[child].kind == ColumnKind::Discrete &&
            schema.columns[parent].kind == ColumnKind::Continuous)
            continue;
        dag.add_arc_unchecked(parent, child);
        ++added;
    }
    if (added < num_arcs)
        throw std::invalid_argument("random_reference_model: infeasible arc count for node mix");

    auto draw_coef = [&]() {
        double mag = pr.coef_min + (pr.coef_max - pr.coef_min) * unif(rng);
        return unif(rng) < 0.5 ? -mag : mag;
    };
    auto draw_sigma2 = [&]() { return pr.sigma2_min + (pr.sigma2_max - pr.sigma2_min) * unif(rng); };
    auto draw_intercept = [&]() { return pr.intercept_max * (2.0 * unif(rng) - 1.0); };
    std::exponential_distribution<double> expo(1.0);

    BnModel model;
    model.dag = dag;
    model.schema = schema;
    model.locals.resize(num_nodes);
    for (int i = 0; i < num_nodes; ++i) {
        std::vector<int> dpar, gpar;
        for (int p : dag.parents(i))
            (schema.columns[p].kind == ColumnKind::Discrete ? dpar : gpar).push_back(p);
        if (schema.columns[i].kind == ColumnKind::Discrete) {
            Cpt cpt;
            cpt.child = i;
            cpt.parents = dpar;
            cpt.levels = static_cast<int>(schema.columns[i].levels.size());
            cpt.q = 1;
            for (int p : dpar) cpt.q *= static_cast<long>(schema.columns[p].levels.size());
            cpt.probs.assign(static_cast<std::size_t>(cpt.levels) * cpt.q, 0.0);
            cpt.counts.assign(cpt.probs.size(), 0.0);
            // symmetric Dirichlet-like columns, concentration 1
            for (long cfg = 0; cfg < cpt.q; ++cfg) {
                double total = 0.0;
                std::vector<double> draw(cpt.levels);
                for (int k = 0; k < cpt.levels; ++k) {
                    draw[k] = expo(rng);
                    total += draw[k];
                }
                for (int k = 0; k < cpt.levels; ++k)
                    cpt.probs[static_cast<std::size_t>(k) * cpt.q + cfg] = draw[k] / total;
            }
            model.locals[i] = std::move(cpt);
        } else if (dpar.empty()) {
            GaussRegression reg;
            reg.child = i;
            reg.parents = gpar;
            reg.intercept = draw_intercept();
            for (std::size_t a = 0; a < gpar.size(); ++a) reg.coef.push_back(draw_coef());
            reg.sigma2 = reg.sigma2_unbiased = draw_sigma2();
            model.locals[i] = std::move(reg);
        } else {
            ClgMixture mix;
            mix.child = i;
            mix.dparents = dpar;
            mix.gparents = gpar;
            mix.q = 1;
            for (int p : dpar) mix.q *= static_cast<long>(schema.columns[p].levels.size());
            mix.components.resize(mix.q);
            for (auto& comp : mix.components) {
                comp.intercept = draw_intercept() * 1.5;  // separated component means
                for (std::size_t a = 0; a < gpar.size(); ++a) comp.coef.push_back(draw_coef());
                comp.sigma2 = comp.sigma2_unbiased = draw_sigma2();
                comp.observed = true;
            }
            model.locals[i] = std::move(mix);
        }
    }
    return model;
}

}  // namespace bnsl
