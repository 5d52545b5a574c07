#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "turbogen/circuit.hpp"
#include <cmath>
#include <sstream>

using namespace turbogen;

namespace {
constexpr double PI = 3.141592653589793238462643;

double mat_diff(const Mat2& a, const Mat2& b) {
    double m = 0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[std::size_t(i)] - b[std::size_t(i)]));
    return m;
}

CircuitSpec small_spec(std::uint64_t seed) {
    CircuitSpec s;
    s.grid = GridSpec({2, 2, 2});
    s.R = 2;
    s.r = 3;
    s.pair_sets = {{{1, 2}, {3, 4}}, {{5, 6}}};
    s.seed = seed;
    return s;
}
} // namespace

TEST_CASE("u3 matrix closed forms") {
    const double c = std::sqrt(2.0) / 2.0;
    CHECK(mat_diff(u3_matrix(0, 0, 0), Mat2{1.0, 0.0, 0.0, 1.0}) < 1e-15);
    CHECK(mat_diff(u3_matrix(PI, 0, PI), Mat2{0.0, 1.0, 1.0, 0.0}) < 1e-15);
    CHECK(mat_diff(u3_matrix(PI / 2, PI / 2, 0),
                   Mat2{c, -c, std::complex<double>(0, c), std::complex<double>(0, c)}) < 1e-15);
}

TEST_CASE("u3 unitarity for random angles") {
    NormalStream ns(99);
    for (int t = 0; t < 200; ++t) {
        const Mat2 u = u3_matrix(ns.next() * 3, ns.next() * 3, ns.next() * 3);
        // U^dag U
        const auto c00 = std::conj(u[0]) * u[0] + std::conj(u[2]) * u[2];
        const auto c01 = std::conj(u[0]) * u[1] + std::conj(u[2]) * u[3];
        const auto c11 = std::conj(u[1]) * u[1] + std::conj(u[3]) * u[3];
        CHECK(std::abs(c00 - 1.0) < 1e-12);
        CHECK(std::abs(c01) < 1e-12);
        CHECK(std::abs(c11 - 1.0) < 1e-12);
    }
}

TEST_CASE("qubit wavenumber ladder") {
    GridSpec g({9, 9, 9});
    CHECK(qubit_wavenumber(1, g) == 1.0);
    CHECK(qubit_wavenumber(9, g) == 256.0);
    CHECK(qubit_wavenumber(10, g) == 1.0);
    CHECK(qubit_wavenumber(27, g) == 256.0);
    CHECK_THROWS_AS(qubit_wavenumber(0, g), std::domain_error);
    CHECK_THROWS_AS(qubit_wavenumber(28, g), std::domain_error);
}

TEST_CASE("shaping factor closed form") {
    ShapingParams p; // defaults carry the 27-qubit reference values
    CHECK(p.lambda == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(p.beta == 15.0);
    // independent high-precision evaluation of the closed form at kappa=1
    CHECK(shaping_factor(1.0, p) ==
          doctest::Approx(0.92844741420314156).epsilon(1e-13));

    ShapingParams flat;
    flat.c_L = 0;
    flat.lambda = 0;
    flat.beta = 0;
    for (double kappa : {1.0, 2.0, 16.0, 256.0})
        CHECK(shaping_factor(kappa, flat) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(shaping_factor(1 << 20, p) < 1e-300); // exponential cutoff dominates

    double prev = shaping_factor(1.0, p);
    for (int kappa = 2; kappa <= 256; ++kappa) {
        const double cur = shaping_factor(double(kappa), p);
        CHECK(cur > 0.0);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("angle sampling determinism and scaling") {
    const CircuitSpec s = small_spec(1234);
    const AngleTable a = sample_angles(s);
    const AngleTable b = sample_angles(s);
    REQUIRE(a.a.size() == b.a.size());
    for (std::size_t i = 0; i < a.a.size(); ++i)
        for (int c = 0; c < 3; ++c) CHECK(a.a[i][std::size_t(c)] == b.a[i][std::size_t(c)]);

    CircuitSpec s2 = small_spec(1235);
    const AngleTable d = sample_angles(s2);
    int differs = 0;
    for (std::size_t i = 0; i < a.a.size(); ++i)
        if (a.a[i][0] != d.a[i][0]) ++differs;
    CHECK(differs > int(a.a.size()) / 2);
}

TEST_CASE("angle standard deviation matches the shaping factor") {
    CircuitSpec s;
    s.grid = GridSpec({6});
    s.R = 1000;
    s.r = 10;
    s.pair_sets.assign(1000, {});
    s.seed = 555;
    const AngleTable t = sample_angles(s);
    const int draws = s.r * s.R; // theta draws per qubit
    for (int m = 1; m <= 6; ++m) {
        double ss = 0;
        for (int ell = 1; ell <= s.R; ++ell)
            for (int l = 1; l <= s.r; ++l) {
                const double th = t.at(m, l, ell)[0];
                ss += th * th;
            }
        const double sd = std::sqrt(ss / draws);
        const double sf = shaping_factor(qubit_wavenumber(m, s.grid), s.shaping);
        const double se = sf / std::sqrt(2.0 * draws);
        CHECK(std::abs(sd - sf) < 3 * se);
    }
}

TEST_CASE("circuit structure") {
    CircuitSpec empty;
    empty.grid = GridSpec({1, 1});
    empty.R = 0;
    empty.r = 5;
    empty.seed = 1;
    CHECK(build_circuit(empty).empty());

    CircuitSpec tiny;
    tiny.grid = GridSpec({1, 1});
    tiny.R = 1;
    tiny.r = 1;
    tiny.pair_sets = {{{1, 2}}};
    tiny.seed = 2;
    const GateList g = build_circuit(tiny);
    REQUIRE(g.size() == 3);
    CHECK(g[0].kind == Gate::U3);
    CHECK(g[0].q0 == 1);
    CHECK(g[1].kind == Gate::U3);
    CHECK(g[1].q0 == 2);
    CHECK(g[2].kind == Gate::CX);
    CHECK(g[2].q0 == 1);
    CHECK(g[2].q1 == 2);
}

TEST_CASE("reference 27-qubit gate count is 1122") {
    CircuitSpec s;
    s.grid = GridSpec({9, 9, 9});
    s.R = 4;
    s.r = 10;
    s.pair_sets = reference_pairs();
    s.seed = 1;
    REQUIRE(s.pair_sets.size() == 4);
    CHECK(s.pair_sets[0].size() == 15);
    CHECK(s.pair_sets[1].size() == 9);
    CHECK(s.pair_sets[2].size() == 9);
    CHECK(s.pair_sets[3].size() == 9);
    CHECK(build_circuit(s).size() == 27 * 10 * 4 + 42);
}

TEST_CASE("gate count formula for random specs") {
    std::mt19937_64 eng(7);
    for (int t = 0; t < 20; ++t) {
        CircuitSpec s;
        s.grid = GridSpec({2, 2});
        s.R = int(eng() % 4);
        s.r = 1 + int(eng() % 5);
        std::size_t pairs = 0;
        for (int ell = 0; ell < s.R; ++ell) {
            PairSet D;
            const int cnt = int(eng() % 4);
            for (int i = 0; i < cnt; ++i) {
                const int a = 1 + int(eng() % 4);
                int b = 1 + int(eng() % 4);
                if (b == a) b = (a % 4) + 1;
                D.emplace_back(a, b);
            }
            pairs += D.size();
            s.pair_sets.push_back(D);
        }
        s.seed = eng();
        CHECK(build_circuit(s).size() == std::size_t(s.grid.n_q() * s.r * s.R) + pairs);
    }
}

TEST_CASE("pair validation") {
    CircuitSpec s = small_spec(3);
    s.pair_sets[0][0] = {0, 5};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_spec(3);
    s.pair_sets[0][0] = {3, 3};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_spec(3);
    s.pair_sets[0][0] = {1, 7};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_spec(3);
    s.pair_sets.pop_back();
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("gate list export round trip") {
    const GateList g = build_circuit(small_spec(42));
    std::stringstream ss;
    export_gates(g, ss);
    const GateList h = parse_gates(ss);
    REQUIRE(h.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(h[i].kind == g[i].kind);
        CHECK(h[i].q0 == g[i].q0);
        CHECK(h[i].q1 == g[i].q1);
        CHECK(h[i].theta == g[i].theta); // 17 significant digits round-trip exactly
        CHECK(h[i].phi == g[i].phi);
        CHECK(h[i].gamma == g[i].gamma);
    }
}

TEST_CASE("normal stream basic statistics") {
    NormalStream ns(2024);
    const int n = 200000;
    double s1 = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = ns.next();
        s1 += x;
        s2 += x * x;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);

    NormalStream again(2024);
    CHECK(again.next() == NormalStream(2024).next());
}
