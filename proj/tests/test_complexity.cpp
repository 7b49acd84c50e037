#include <catch2/catch_amalgamated.hpp>

#include "bnsl/complexity.hpp"

using namespace bnsl;

namespace {

CostParams base(double n, int j, int D = 0, int l = 2) {
    CostParams p;
    p.n = n;
    p.j = j;
    p.D = D;
    p.l = l;
    return p;
}

}  // namespace

TEST_CASE("per-fit cost tables") {
    const double n = 1000.0;
    // closed-form regressions: 4.5n, 7n, 10.5n
    REQUIRE(node_cost(NodeClass::GbnClosed, base(n, 0)) == 4500.0);
    REQUIRE(node_cost(NodeClass::GbnClosed, base(n, 1)) == 7000.0);
    REQUIRE(node_cost(NodeClass::GbnClosed, base(n, 2)) == 10500.0);
    // QR regressions, direct summation: 6n+1, 11n+4, 18n+9
    REQUIRE(node_cost(NodeClass::GbnQr, base(n, 0)) == 6001.0);
    REQUIRE(node_cost(NodeClass::GbnQr, base(n, 1)) == 11004.0);
    REQUIRE(node_cost(NodeClass::GbnQr, base(n, 2)) == 18009.0);
    // CLG with QR: 6n + l^D, 11n + 4 l^D, 18n + 9 l^D
    REQUIRE(node_cost(NodeClass::ClgQr, base(n, 0, 2, 3)) == 6.0 * n + 9.0);
    REQUIRE(node_cost(NodeClass::ClgQr, base(n, 1, 2, 3)) == 11.0 * n + 4.0 * 9.0);
    REQUIRE(node_cost(NodeClass::ClgQr, base(n, 2, 2, 3)) == 18.0 * n + 9.0 * 9.0);
    // discrete: n(1+j) + l^(1+j)
    REQUIRE(node_cost(NodeClass::Discrete, base(n, 2, 0, 3)) == 3.0 * n + 27.0);
}

TEST_CASE("closed form beats qr everywhere") {
    for (double n : {1.0, 10.0, 1000.0, 1e6})
        for (int j = 0; j <= 2; ++j)
            REQUIRE(node_cost(NodeClass::GbnClosed, base(n, j)) <
                    node_cost(NodeClass::GbnQr, base(n, j)));
}

TEST_CASE("clg closed form is independent of D") {
    for (int D = 0; D <= 4; ++D)
        REQUIRE(node_cost(NodeClass::ClgClosed, base(500, 1, D)) ==
                node_cost(NodeClass::ClgClosed, base(500, 1, 0)));
    REQUIRE(node_cost(NodeClass::ClgClosed, base(500, 1)) ==
            node_cost(NodeClass::GbnClosed, base(500, 1)));
}

TEST_CASE("discrete whole-network hand expansion") {
    // N = 2, degrees (0, 1), l = 2, n = 100:
    //   deg 0: one pass at j=1: (N-1) * (2n + l^2)           = 204
    //   deg 1: passes j=1, j=2: (N-1) * (204 + 3n + l^3)     = 512
    CostParams p = base(100, 0);
    p.N = 2;
    p.degrees = {0, 1};
    REQUIRE(total_cost(NetworkClass::Discrete, p) == 716.0);
    p.degrees = {0};
    REQUIRE_THROWS(total_cost(NetworkClass::Discrete, p));  // wrong length
}

TEST_CASE("clgbn whole-network hand expansion") {
    // one discrete node (no candidates besides itself), one Gaussian node
    // with D_i = 1, G_i = 0: two passes of a single discrete candidate,
    // clg_qr at (D=1, j=0) then (D=2, j=0) => 12n + l + l^2
    CostParams p = base(100, 0, 0, 2);
    p.N = 2;
    p.M = 1;
    p.degrees = {0};
    p.gauss_ddeg = {1};
    p.gauss_gdeg = {0};
    REQUIRE(total_cost(NetworkClass::Clgbn, p) == 12.0 * 100.0 + 2.0 + 4.0);
    p.gauss_ddeg = {};
    REQUIRE_THROWS(total_cost(NetworkClass::Clgbn, p));
}

TEST_CASE("total cost is linear in n") {
    CostParams p = base(100, 0);
    p.N = 6;
    p.degrees = {0, 1, 1, 2, 2, 3};
    auto at = [&](double n, NetworkClass cls) {
        CostParams q = p;
        q.n = n;
        return total_cost(cls, q);
    };
    for (auto cls : {NetworkClass::Discrete, NetworkClass::Gbn}) {
        // equal increments: cost(2n) - cost(n) == cost(3n) - cost(2n)
        REQUIRE(at(200, cls) - at(100, cls) == at(300, cls) - at(200, cls));
    }
}

TEST_CASE("bounded-degree gbn cost is quadratic in N") {
    auto ratio = [](int N) {
        CostParams p = base(1000, 0);
        p.N = N;
        p.degrees.assign(N, 3);
        return total_cost(NetworkClass::Gbn, p) / (p.n * N * N);
    };
    REQUIRE(std::abs(ratio(60) - ratio(120)) / ratio(120) < 0.03);
}

TEST_CASE("naive move count") {
    CostParams p;
    p.N = 10;
    p.c = 1.0;
    p.t0 = 10;
    p.r0 = 0;
    REQUIRE(naive_move_count(p) == 2000.0);
    p.t0 = 0;
    REQUIRE(naive_move_count(p) == 1000.0);  // bare cN^3
    p.t0 = 10;
    p.r0 = 2;
    p.r1 = 5;
    REQUIRE(naive_move_count(p) == 1000.0 + (10.0 + 2.0 * 15.0) * 100.0);
}

TEST_CASE("node class names") {
    REQUIRE(node_class_from_string("discrete") == NodeClass::Discrete);
    REQUIRE(node_class_from_string("gbn_qr") == NodeClass::GbnQr);
    REQUIRE(node_class_from_string("gbn_closed") == NodeClass::GbnClosed);
    REQUIRE(node_class_from_string("clg_qr") == NodeClass::ClgQr);
    REQUIRE(node_class_from_string("clg_closed") == NodeClass::ClgClosed);
    REQUIRE_THROWS(node_class_from_string("nope"));
}
