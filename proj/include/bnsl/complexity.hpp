#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bnsl {

enum class NodeClass { Discrete, GbnQr, GbnClosed, ClgQr, ClgClosed };

struct CostParams {
    double n = 0;   // sample size
    int j = 0;      // continuous-parent count (total parents for discrete nodes)
    int D = 0;      // discrete-parent count (CLG nodes)
    int l = 2;      // max levels per discrete variable
    int N = 0;      // node count
    int M = 0;      // Gaussian-node count (CLGBN whole-network formula)
    std::vector<int> degrees;  // in-degree sequence (discrete/GBN whole-network)
    // per-Gaussian-node parent mix for the CLGBN whole-network formula
    std::vector<int> gauss_ddeg;  // D_i
    std::vector<int> gauss_gdeg;  // G_i
    double c = 1.0;  // sparsity constant
    int t0 = 0, r0 = 0, r1 = 0;  // search constants
};

inline double int_pow(double base, int exp) {
    double r = 1.0;
    for (int k = 0; k < exp; ++k) r *= base;
    return r;
}

// Exact per-fit operation counts (all terms kept, nothing dropped):
//   discrete:    n(1+j) + l^(1+j)
//   gbn_qr:      n(1+j)^2 + 2n(1+j) + (1+j)^2 + 3n
//   gbn_closed:  n(1+j)^2 / 2 + n(1+j) + 3n
//   clg_qr:      (n + l^D)(1+j)^2 + 2n(1+j) + 3n
//   clg_closed:  n(1+j)^2 / 2 + n(1+j) + 3n      (independent of D)
inline double node_cost(NodeClass cls, const CostParams& p) {
    const double n = p.n;
    const double pj = 1.0 + p.j;
    switch (cls) {
        case NodeClass::Discrete:
            return n * pj + int_pow(p.l, 1 + p.j);
        case NodeClass::GbnQr:
            return n * pj * pj + 2.0 * n * pj + pj * pj + 3.0 * n;
        case NodeClass::GbnClosed:
        case NodeClass::ClgClosed:
            return 0.5 * n * pj * pj + n * pj + 3.0 * n;
        case NodeClass::ClgQr:
            return (n + int_pow(p.l, p.D)) * pj * pj + 2.0 * n * pj + 3.0 * n;
    }
    throw std::invalid_argument("node_cost: unknown class");
}

enum class NetworkClass { Discrete, Gbn, Clgbn };

// Whole-network cost: parents are added sequentially, a node with d parents
// takes d+1 passes, and each pass re-evaluates one candidate fit per other
// node. Exact summation of node_cost; the closed forms are asymptotic limits.
inline double total_cost(NetworkClass cls, const CostParams& p) {
    const int N = p.N;
    if (cls == NetworkClass::Discrete || cls == NetworkClass::Gbn) {
        if (static_cast<int>(p.degrees.size()) != N)
            throw std::invalid_argument("total_cost: degree sequence must have N entries");
        double total = 0.0;
        for (int deg : p.degrees) {
            for (int pass = 1; pass <= deg + 1; ++pass) {
                CostParams q = p;
                q.j = pass;  // pass - 1 current parents plus one candidate
                double per_candidate = node_cost(
                    cls == NetworkClass::Discrete ? NodeClass::Discrete : NodeClass::GbnQr, q);
                total += static_cast<double>(N - 1) * per_candidate;
            }
        }
        return total;
    }

    // CLGBN: discrete nodes cluster in a subgraph of N-M nodes with only
    // discrete candidates; Gaussian nodes see discrete candidates first
    // (growing D), then continuous candidates (growing G).
    const int M = p.M;
    const int nd = N - M;
    if (static_cast<int>(p.degrees.size()) != nd)
        throw std::invalid_argument("total_cost: need N-M discrete-node degrees");
    if (static_cast<int>(p.gauss_ddeg.size()) != M || static_cast<int>(p.gauss_gdeg.size()) != M)
        throw std::invalid_argument("total_cost: need per-Gaussian-node D_i and G_i");
    double total = 0.0;
    for (int deg : p.degrees) {
        for (int pass = 1; pass <= deg + 1; ++pass) {
            CostParams q = p;
            q.j = pass;
            total += static_cast<double>(nd - 1) * node_cost(NodeClass::Discrete, q);
        }
    }
    for (int i = 0; i < M; ++i) {
        const int Di = p.gauss_ddeg[i];
        const int Gi = p.gauss_gdeg[i];
        for (int pass = 1; pass <= Di + Gi + 1; ++pass) {
            int curD = std::min(pass - 1, Di);
            int curG = pass - 1 - curD;
            // discrete candidate
            {
                CostParams q = p;
                q.D = curD + 1;
                q.j = curG;
                total += static_cast<double>(nd) * node_cost(NodeClass::ClgQr, q);
            }
            // continuous candidate
            {
                CostParams q = p;
                q.D = curD;
                q.j = curG + 1;
                total += static_cast<double>(M - 1) * node_cost(NodeClass::ClgQr, q);
            }
        }
    }
    return total;
}

// Leading-order move count of uncached greedy search:
// c N^3 + (t0 + r0 (r1 + t0)) N^2.
inline double naive_move_count(const CostParams& p) {
    const double N = p.N;
    return p.c * N * N * N +
           (static_cast<double>(p.t0) + static_cast<double>(p.r0) * (p.r1 + p.t0)) * N * N;
}

inline NodeClass node_class_from_string(const std::string& s) {
    if (s == "discrete") return NodeClass::Discrete;
    if (s == "gbn_qr") return NodeClass::GbnQr;
    if (s == "gbn_closed") return NodeClass::GbnClosed;
    if (s == "clg_qr") return NodeClass::ClgQr;
    if (s == "clg_closed") return NodeClass::ClgClosed;
    throw std::invalid_argument("unknown node class: " + s);
}

}  // namespace bnsl
