#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "turbogen/diagnostics.hpp"
#include "turbogen/fft.hpp"
#include "turbogen/madelung.hpp"
#include <cmath>
#include <random>

using namespace turbogen;
using cplx = std::complex<double>;

namespace {
constexpr double PI = 3.141592653589793238462643;

struct Coords {
    double x, y, z;
};

Coords coords(std::int64_t flat, const GridSpec& g) {
    Coords c{};
    const double dx = g.domain_length[0] / double(g.extent(0));
    const double dy = g.domain_length[1] / double(g.extent(1));
    const double dz = g.domain_length[2] / double(g.extent(2));
    c.x = double(flat & (g.extent(0) - 1)) * dx;
    c.y = double((flat >> g.bit_offset(1)) & (g.extent(1) - 1)) * dy;
    c.z = double((flat >> g.bit_offset(2)) & (g.extent(2) - 1)) * dz;
    return c;
}

std::array<RealField, 3> fill3(const GridSpec& g, double (*fx)(Coords), double (*fy)(Coords),
                               double (*fz)(Coords)) {
    std::array<RealField, 3> u;
    for (auto& c : u) c.resize(std::size_t(g.amplitude_count()));
    for (std::int64_t i = 0; i < g.amplitude_count(); ++i) {
        const Coords c = coords(i, g);
        u[0][std::size_t(i)] = fx(c);
        u[1][std::size_t(i)] = fy(c);
        u[2][std::size_t(i)] = fz(c);
    }
    return u;
}

double rel_l2(const std::array<RealField, 3>& a, const std::array<RealField, 3>& b) {
    double num = 0, den = 0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < a[std::size_t(c)].size(); ++i) {
            const double d = a[std::size_t(c)][i] - b[std::size_t(c)][i];
            num += d * d;
            den += b[std::size_t(c)][i] * b[std::size_t(c)][i];
        }
    return std::sqrt(num / den);
}
} // namespace

TEST_CASE("spectral gradient of a real field") {
    GridSpec g({5, 5, 5});
    RealField f(std::size_t(g.amplitude_count()));
    for (std::int64_t i = 0; i < g.amplitude_count(); ++i) f[std::size_t(i)] = std::sin(coords(i, g).x);
    const RealField dfx = real_gradient(f, g, 0);
    const RealField dfy = real_gradient(f, g, 1);
    for (std::int64_t i = 0; i < g.amplitude_count(); ++i) {
        CHECK(dfx[std::size_t(i)] == doctest::Approx(std::cos(coords(i, g).x)).epsilon(1e-12));
        CHECK(std::abs(dfy[std::size_t(i)]) < 1e-12);
    }
}

TEST_CASE("curl on closed forms") {
    GridSpec g({5, 5, 5});
    const auto zero = fill3(
        g, [](Coords) { return 1.5; }, [](Coords) { return -0.2; }, [](Coords) { return 0.0; });
    auto w = vorticity_from_velocity(zero, g);
    for (int c = 0; c < 3; ++c)
        for (double v : w[std::size_t(c)]) CHECK(std::abs(v) < 1e-13);

    const auto shear = fill3(
        g, [](Coords c) { return std::sin(c.y); }, [](Coords) { return 0.0; },
        [](Coords) { return 0.0; });
    w = vorticity_from_velocity(shear, g);
    for (std::int64_t i = 0; i < g.amplitude_count(); ++i) {
        CHECK(std::abs(w[0][std::size_t(i)]) < 1e-12);
        CHECK(std::abs(w[1][std::size_t(i)]) < 1e-12);
        CHECK(w[2][std::size_t(i)] == doctest::Approx(-std::cos(coords(i, g).y)).epsilon(1e-12));
    }

    const auto rot = fill3(
        g, [](Coords c) { return -std::sin(c.y); }, [](Coords c) { return std::sin(c.x); },
        [](Coords) { return 0.0; });
    w = vorticity_from_velocity(rot, g);
    for (std::int64_t i = 0; i < g.amplitude_count(); ++i) {
        const Coords c = coords(i, g);
        CHECK(w[2][std::size_t(i)] == doctest::Approx(std::cos(c.x) + std::cos(c.y)).epsilon(1e-12));
    }

    GridSpec flat({3, 3});
    std::array<RealField, 3> small;
    for (auto& c : small) c.assign(64, 0.0);
    CHECK_THROWS_AS(vorticity_from_velocity(small, flat), std::invalid_argument);
}

TEST_CASE("curl is divergence free") {
    GridSpec g({4, 4, 4});
    std::array<RealField, 3> u;
    std::mt19937_64 eng(17);
    std::normal_distribution<double> nd;
    for (auto& c : u) {
        c.resize(std::size_t(g.amplitude_count()));
        for (auto& v : c) v = nd(eng);
    }
    const auto w = vorticity_from_velocity(u, g);
    RealField div = real_gradient(w[0], g, 0);
    const RealField d1 = real_gradient(w[1], g, 1), d2 = real_gradient(w[2], g, 2);
    double wmax = 0;
    for (double v : w[0]) wmax = std::max(wmax, std::fabs(v));
    for (std::size_t i = 0; i < div.size(); ++i)
        CHECK(std::abs(div[i] + d1[i] + d2[i]) < 1e-10 * std::max(wmax, 1.0));
}

TEST_CASE("spin vorticity vanishes for degenerate textures") {
    GridSpec g({5, 5, 5});
    std::array<RealField, 3> s;
    const std::size_t n = std::size_t(g.amplitude_count());
    s[0].assign(n, 0.6);
    s[1].assign(n, 0.0);
    s[2].assign(n, 0.8); // constant unit vector
    auto w = vorticity_from_spin(s, g);
    for (int c = 0; c < 3; ++c)
        for (double v : w[std::size_t(c)]) CHECK(std::abs(v) < 1e-13);

    // texture varying along a single coordinate: all gradients parallel
    for (std::int64_t i = 0; i < g.amplitude_count(); ++i) {
        const double t = coords(i, g).x;
        s[0][std::size_t(i)] = std::sin(t);
        s[1][std::size_t(i)] = 0.0;
        s[2][std::size_t(i)] = std::cos(t);
    }
    w = vorticity_from_spin(s, g);
    for (int c = 0; c < 3; ++c)
        for (double v : w[std::size_t(c)]) CHECK(std::abs(v) < 1e-11);
}

TEST_CASE("spin texture reproduces the velocity curl") {
    GridSpec g({6, 6, 6});
    SpinorField f;
    f.grid = g;
    const std::size_t n = std::size_t(g.amplitude_count());
    f.psi_plus.resize(n);
    f.psi_minus.resize(n);
    for (std::int64_t i = 0; i < g.amplitude_count(); ++i) {
        const Coords c = coords(i, g);
        const double th = 1.1 + 0.4 * std::sin(c.x) + 0.3 * std::cos(2 * c.y);
        const double ph = 0.3 * std::sin(c.y) + 0.2 * std::cos(c.z);
        const double ch = 0.25 * std::cos(c.x) + 0.35 * std::sin(2 * c.z);
        f.psi_plus[std::size_t(i)] = std::cos(th / 2) * std::exp(cplx(0, ph));
        f.psi_minus[std::size_t(i)] = std::sin(th / 2) * std::exp(cplx(0, ch));
    }
    to_spectral(f.psi_plus, g);
    to_spectral(f.psi_minus, g);

    const FieldSet fs = make_fields(f);
    CHECK(fs.regularized == 0);
    for (double v : fs.rho) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));

    const auto w_u = vorticity_from_velocity(fs.u, g);
    const auto w_s = vorticity_from_spin(fs.s, g);
    CHECK(rel_l2(w_s, w_u) < 1e-6);

    // without the sign flip the texture formula lands far away
    const auto w_bad = vorticity_from_spin(fs.s, g, false);
    CHECK(rel_l2(w_bad, w_u) > 0.1);
}

TEST_CASE("shell spectrum") {
    GridSpec g({4, 4, 4});
    SpecField fhat(std::size_t(g.amplitude_count()), 0.0);
    const std::size_t m3 = std::size_t(wavenumber_to_index(3, 4)); // k=(3,0,0)
    fhat[m3] = cplx(0.6, -0.8);
    ShellSpectrum sp = shell_spectrum(fhat, g, "single");
    CHECK(sp.field_label == "single");
    CHECK(sp.E[3] == doctest::Approx(1.0).epsilon(1e-14));
    double total = 0;
    for (double e : sp.E) total += e;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

    // |k| = 5 from two different lattice sites lands in one shell
    SpecField two(std::size_t(g.amplitude_count()), 0.0);
    two[std::size_t(wavenumber_to_index(5, 4))] = 2.0;
    two[std::size_t(wavenumber_to_index(3, 4) + (wavenumber_to_index(4, 4) << 4))] = 1.0;
    sp = shell_spectrum(two, g);
    CHECK(sp.E[5] == doctest::Approx(5.0).epsilon(1e-14));

    // unit-modulus noise counts lattice sites per shell, and closes under Parseval
    std::mt19937_64 eng(23);
    std::uniform_real_distribution<double> ph(0, 2 * PI);
    SpecField white(std::size_t(g.amplitude_count()));
    for (auto& a : white) a = std::exp(cplx(0, ph(eng)));
    sp = shell_spectrum(white, g);
    double count = 0;
    for (double e : sp.E) {
        CHECK(e == doctest::Approx(std::round(e)).epsilon(1e-12));
        count += e;
    }
    CHECK(count == doctest::Approx(double(g.amplitude_count())).epsilon(1e-12));
    CHECK(sp.E[0] == doctest::Approx(1.0).epsilon(1e-12));

    SpecField wrong(8, 0.0);
    CHECK_THROWS_AS(shell_spectrum(wrong, g), std::invalid_argument);
}

TEST_CASE("power law fit") {
    ShellSpectrum sp;
    sp.E.assign(32, 0.0);
    for (std::size_t k = 1; k < 32; ++k) sp.E[k] = std::pow(double(k), -5.0 / 3.0);
    ScalingFit f = fit_power_law(sp, 2, 16);
    CHECK(f.exponent == doctest::Approx(-5.0 / 3.0).epsilon(1e-12));
    CHECK(f.stderr_ < 1e-12);
    CHECK(f.lo == 2);
    CHECK(f.hi == 16);

    for (std::size_t k = 1; k < 32; ++k) sp.E[k] = 3.7 * std::pow(double(k), -10.0 / 3.0);
    f = fit_power_law(sp, 1, 31);
    CHECK(f.exponent == doctest::Approx(-10.0 / 3.0).epsilon(1e-12));

    std::mt19937_64 eng(5);
    std::normal_distribution<double> nd(0.0, 0.1);
    for (std::size_t k = 1; k < 32; ++k)
        sp.E[k] = std::pow(double(k), -5.0 / 3.0) * std::exp(nd(eng));
    f = fit_power_law(sp, 2, 30);
    CHECK(std::abs(f.exponent + 5.0 / 3.0) < 0.05);
    CHECK(f.stderr_ > 0);

    CHECK_THROWS_AS(fit_power_law(sp, 2, 4), std::invalid_argument); // 3 shells only
}

TEST_CASE("stretched exponential recovery on an exact synthetic law") {
    // V = (X/14)^5 with X ~ Gamma(5,1) has density proportional to exp(-14 v^0.2)
    std::mt19937_64 eng(20260815);
    std::uniform_real_distribution<double> uu(std::nextafter(0.0, 1.0), 1.0);
    const std::size_t n = 10'000'000;
    std::vector<double> v(n);
    for (auto& s : v) {
        double prod = 1;
        for (int i = 0; i < 5; ++i) prod *= uu(eng);
        const double x = -std::log(prod);
        const double t = x / 14.0;
        s = t * t * t * t * t;
    }
    const StretchedExpFit fit = fit_stretched_exp(v);
    CHECK(std::abs(fit.beta - 0.2) <= 0.02);
    CHECK(std::abs(fit.c - 14.0) <= 1.4);
    CHECK(fit.hist.total == std::int64_t(n));

    double mass = 0;
    for (std::size_t b = 0; b < fit.hist.density.size(); ++b)
        mass += fit.hist.density[b] * (fit.hist.edges[b + 1] - fit.hist.edges[b]);
    double in_window = 0;
    const double lo = fit.hist.edges.front();
    for (double s : v)
        if (s >= lo) ++in_window;
    CHECK(mass == doctest::Approx(in_window / double(n)).epsilon(1e-6));
}

TEST_CASE("stretched exponential rejects degenerate input") {
    CHECK_THROWS_AS(fit_stretched_exp({0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_stretched_exp(std::vector<double>(100, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(fit_stretched_exp({1.0, 2.0, 3.0}, 3), std::invalid_argument);
}

TEST_CASE("gaussian components fit beta near 2") {
    std::array<RealField, 3> w;
    std::mt19937_64 eng(31337);
    std::normal_distribution<double> nd;
    for (auto& c : w) {
        c.resize(200000);
        for (auto& v : c) v = nd(eng);
    }
    const StretchedExpFit fit = vorticity_pdf(w);
    CHECK(std::abs(fit.beta - 2.0) <= 0.15);
    CHECK(std::abs(fit.c - 0.5) <= 0.1); // half-normal: exp(-v^2/2)
    CHECK(fit.tail_count > 1000);        // P(|N|>2) ~ 4.6% of 6e5
    CHECK(fit.reliable);

    std::array<RealField, 3> zero;
    for (auto& c : zero) c.assign(100, 0.0);
    CHECK_THROWS_AS(vorticity_pdf(zero), std::invalid_argument);
    std::array<RealField, 3> flat;
    for (auto& c : flat) c.assign(100, 2.5);
    CHECK_THROWS_AS(vorticity_pdf(flat), std::invalid_argument);
}

TEST_CASE("velocity gradient invariants") {
    GridSpec g({5, 5, 5});
    // pure rotation in the xy plane: Q = 1, R = 0 at the origin
    const auto rot = fill3(
        g, [](Coords c) { return -std::sin(c.y); }, [](Coords c) { return std::sin(c.x); },
        [](Coords) { return 0.0; });
    QRResult qr = qr_invariants(rot, g);
    CHECK(std::abs(qr.Q[0] - 1.0) < 1e-6);
    CHECK(std::abs(qr.R[0]) < 1e-6);

    // pure plane strain: Q = -1, R = 0 at the origin
    const auto strain = fill3(
        g, [](Coords c) { return std::sin(c.x); }, [](Coords c) { return -std::sin(c.y); },
        [](Coords) { return 0.0; });
    qr = qr_invariants(strain, g);
    CHECK(std::abs(qr.Q[0] + 1.0) < 1e-6);
    CHECK(std::abs(qr.R[0]) < 1e-6);

    // random field: joint histogram integrates to one over its range
    std::array<RealField, 3> u;
    std::mt19937_64 eng(99);
    std::normal_distribution<double> nd;
    for (auto& c : u) {
        c.resize(std::size_t(g.amplitude_count()));
        for (auto& v : c) v = nd(eng);
    }
    qr = qr_invariants(u, g, 64);
    CHECK(qr.bins == 64);
    CHECK(qr.r_lim > 0);
    CHECK(qr.q_lim > 0);
    CHECK(qr.in_range_fraction > 0.5);
    CHECK(qr.in_range_fraction <= 1.0);
    double integral = 0;
    const double cell = (2 * qr.r_lim / qr.bins) * (2 * qr.q_lim / qr.bins);
    for (double d : qr.joint) integral += d * cell;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isfinite(qr.skewness_R));
    CHECK(std::isfinite(qr.skewness_R_raw));
}

TEST_CASE("vieillefosse curve satisfies its own equation") {
    const auto c = vieillefosse_curve(3.0, 101);
    REQUIRE(c.size() == 101);
    CHECK(c.front().first == doctest::Approx(-3.0));
    CHECK(c.back().first == doctest::Approx(3.0));
    for (const auto& [r, q] : c)
        CHECK(std::abs(27 * r * r + 4 * q * q * q) < 1e-9 * std::max(1.0, 27 * r * r));
}

TEST_CASE("structure functions on a sinusoidal field") {
    GridSpec g({5, 5, 5});
    const auto u = fill3(
        g, [](Coords c) { return std::sin(c.x); }, [](Coords c) { return std::sin(c.y); },
        [](Coords c) { return std::sin(c.z); });
    const double dx = g.domain_length[0] / 32.0;
    const auto sf = structure_functions(u, g, 2 * dx, 8 * dx, 200000, 7);
    REQUIRE(sf.r.size() >= 2);
    for (std::size_t i = 0; i < sf.r.size(); ++i) {
        const double want = 1.0 - std::cos(sf.r[i]); // exact S_2 for this field
        CHECK(std::abs(sf.S[i][0] - want) < 3 * sf.stderr_[i][0]);
        CHECK(sf.stderr_[i][0] > 0);
    }
}

TEST_CASE("structure function error bars scale with sample count") {
    GridSpec g({5, 5, 5});
    const auto u = fill3(
        g, [](Coords c) { return std::sin(c.x + 0.3 * c.y); },
        [](Coords c) { return std::cos(c.z); }, [](Coords c) { return std::sin(2 * c.y); });
    const double dx = g.domain_length[0] / 32.0;
    const auto a = structure_functions(u, g, 2 * dx, 8 * dx, 100000, 11);
    const auto b = structure_functions(u, g, 2 * dx, 8 * dx, 400000, 11);
    for (std::size_t i = 0; i < a.r.size(); ++i) {
        const double ratio = b.stderr_[i][0] / a.stderr_[i][0];
        CHECK(std::abs(ratio - 0.5) < 0.15); // 4x samples halves the error
    }

    const auto c = structure_functions(u, g, 2 * dx, 8 * dx, 100000, 11);
    for (std::size_t i = 0; i < a.r.size(); ++i)
        for (int p = 0; p < 4; ++p) CHECK(a.S[i][std::size_t(p)] == c.S[i][std::size_t(p)]);
}

TEST_CASE("structure function edge cases") {
    GridSpec g({4, 4, 4});
    std::array<RealField, 3> flat;
    for (auto& c : flat) c.assign(std::size_t(g.amplitude_count()), 2.0);
    const double L = g.domain_length[0];
    const auto sf = structure_functions(flat, g, L / 16, 2 * L, 1000, 3); // hi past the box
    for (double r : sf.r) CHECK(r <= L / 2 + 1e-12);
    for (const auto& S : sf.S)
        for (double v : S) CHECK(v == 0.0);
    for (const auto& z : sf.zeta) CHECK(std::isnan(z.exponent));

    GridSpec rect({4, 4, 3});
    std::array<RealField, 3> u;
    for (auto& c : u) c.assign(std::size_t(rect.amplitude_count()), 0.0);
    CHECK_THROWS_AS(structure_functions(u, rect, 0.1, 1.0, 100, 5), std::invalid_argument);
    CHECK_THROWS_AS(structure_functions(flat, g, 0.0, 1.0, 100, 5), std::invalid_argument);
    CHECK_THROWS_AS(structure_functions(flat, g, 2.0, 1.0, 100, 5), std::invalid_argument);
}

TEST_CASE("reference scaling exponents") {
    CHECK(zeta_K41(3) == 1.0);
    CHECK(zeta_SL94(3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(zeta_K41(2) == doctest::Approx(2.0 / 3).epsilon(1e-15));
    CHECK(zeta_SL94(2) == doctest::Approx(2.0 / 9 + 2 * (1 - std::pow(2.0 / 3, 2.0 / 3))).epsilon(1e-15));
    // She-Leveque is concave where K41 is linear
    CHECK(zeta_SL94(4) - zeta_SL94(3) < zeta_SL94(3) - zeta_SL94(2));
}

TEST_CASE("helicity density") {
    GridSpec g({5, 5, 5});
    const auto shear = fill3(
        g, [](Coords c) { return std::sin(c.y); }, [](Coords) { return 0.0; },
        [](Coords) { return 0.0; });
    auto h = helicity_density(shear, vorticity_from_velocity(shear, g));
    for (double v : h) CHECK(std::abs(v) < 1e-12);

    // ABC flow is a curl eigenfield: h = |u|^2 pointwise
    const auto abc = fill3(
        g, [](Coords c) { return std::sin(c.z) + std::cos(c.y); },
        [](Coords c) { return std::sin(c.x) + std::cos(c.z); },
        [](Coords c) { return std::sin(c.y) + std::cos(c.x); });
    h = helicity_density(abc, vorticity_from_velocity(abc, g));
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double u2 = abc[0][i] * abc[0][i] + abc[1][i] * abc[1][i] + abc[2][i] * abc[2][i];
        CHECK(h[i] == doctest::Approx(u2).epsilon(1e-10));
    }

    std::array<RealField, 3> bad;
    for (auto& c : bad) c.assign(7, 0.0);
    CHECK_THROWS_AS(helicity_density(abc, bad), std::invalid_argument);
}

TEST_CASE("reynolds estimate") {
    CHECK(reynolds_estimate(1, 1) == 1.0);
    CHECK(reynolds_estimate(2, 16) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(std::abs(reynolds_estimate(1, 1280) - 13900.0) < 0.01 * 13900.0);
    CHECK_THROWS_AS(reynolds_estimate(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(reynolds_estimate(0, 5), std::invalid_argument);
}

TEST_CASE("spectrum peak and kurtosis") {
    ShellSpectrum sp;
    sp.E = {10.0, 4.0, 9.0, 1.0}; // k^2 E = {–, 4, 36, 9}
    CHECK(k_peak(sp) == 2);

    RealField two(1000);
    for (std::size_t i = 0; i < two.size(); ++i) two[i] = (i % 2) ? 1.0 : -1.0;
    CHECK(kurtosis_excess(two) == doctest::Approx(-2.0).epsilon(1e-12));

    std::mt19937_64 eng(3);
    std::normal_distribution<double> nd;
    RealField gauss(400000);
    for (auto& v : gauss) v = nd(eng);
    CHECK(std::abs(kurtosis_excess(gauss)) < 0.1);

    CHECK_THROWS_AS(kurtosis_excess(RealField(5, 3.0)), std::invalid_argument);
    CHECK_THROWS_AS(kurtosis_excess(RealField{}), std::invalid_argument);
}
