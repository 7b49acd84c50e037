#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "bnsl/bnsl.hpp"

namespace bnsl::testing {

// Mixed discrete/continuous dataset drawn from a random CLGBN.
inline Dataset make_mixed_dataset(int num_nodes, std::size_t n, std::uint64_t seed,
                                  double density = 1.2) {
    auto ref = random_reference_model(NetworkKind::Clgbn, num_nodes, density, seed);
    return sample(ref, {n, seed ^ 0x9e3779b97f4a7c15ull});
}

// Continuous-only dataset from a random GBN.
inline Dataset make_gbn_dataset(int num_nodes, std::size_t n, std::uint64_t seed,
                                double density = 1.2) {
    auto ref = random_reference_model(NetworkKind::Gbn, num_nodes, density, seed);
    return sample(ref, {n, seed ^ 0x9e3779b97f4a7c15ull});
}

// All 25 DAGs over 3 named nodes (27 arc-pattern combinations minus the two
// 3-cycles).
inline std::vector<Dag> all_three_node_dags(const std::vector<std::string>& names = {"A", "B",
                                                                                     "C"}) {
    std::vector<Dag> dags;
    // per pair (0,1), (0,2), (1,2): 0 = none, 1 = forward, 2 = backward
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (int s0 = 0; s0 < 3; ++s0)
        for (int s1 = 0; s1 < 3; ++s1)
            for (int s2 = 0; s2 < 3; ++s2) {
                Dag dag(names);
                int states[3] = {s0, s1, s2};
                bool ok = true;
                for (int e = 0; e < 3 && ok; ++e) {
                    if (states[e] == 0) continue;
                    int from = states[e] == 1 ? pairs[e][0] : pairs[e][1];
                    int to = states[e] == 1 ? pairs[e][1] : pairs[e][0];
                    Move m{Move::Kind::Add, from, to};
                    if (would_create_cycle(dag, m)) ok = false;
                    else dag.add_arc_unchecked(from, to);
                }
                if (ok) dags.push_back(std::move(dag));
            }
    return dags;
}

// 3-node parity instance: X3 = X1 xor X2 with a small flip rate. No single
// arc improves the BIC from the empty graph, but the two-parent collider is a
// much higher peak.
inline Dataset make_parity_dataset(std::size_t n, std::uint64_t seed, double flip = 0.05) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5), noise(flip);
    Schema sch;
    for (const char* name : {"X1", "X2", "X3"})
        sch.columns.push_back({name, ColumnKind::Discrete, {"a", "b"}});
    std::vector<std::vector<std::int32_t>> codes(3, std::vector<std::int32_t>(n));
    for (std::size_t r = 0; r < n; ++r) {
        codes[0][r] = coin(rng);
        codes[1][r] = coin(rng);
        codes[2][r] = (codes[0][r] ^ codes[1][r]) ^ (noise(rng) ? 1 : 0);
    }
    return Dataset(sch, n, std::move(codes), std::vector<std::vector<double>>(3));
}

inline bool close_rel(double a, double b, double tol) {
    double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) <= tol * scale;
}

}  // namespace bnsl::testing
