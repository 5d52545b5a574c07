#include "turbogen/madelung.hpp"
#include <cmath>
#include <stdexcept>

namespace turbogen {

std::complex<double> kernel_value(const KernelKind& kind, int s, int sp,
                                  const std::vector<std::int64_t>& k,
                                  const std::vector<std::int64_t>& kp) {
    switch (kind.tag) {
        case KernelKind::density:
            return (s == sp) ? 1.0 : 0.0;
        case KernelKind::momentum:
            if (s != sp) return 0.0;
            return double(k[std::size_t(kind.axis)]) / 2.0 + double(kp[std::size_t(kind.axis)]);
        case KernelKind::spin1:
            return (s != sp) ? 1.0 : 0.0;
        case KernelKind::spin2:
            if (s == 0 && sp == 1) return {0.0, -1.0};
            if (s == 1 && sp == 0) return {0.0, 1.0};
            return 0.0;
        case KernelKind::spin3:
            if (s != sp) return 0.0;
            return s == 0 ? 1.0 : -1.0;
    }
    return 0.0;
}

std::complex<double> convolve_observable_direct(const SpinorField& spinor, const KernelKind& kind,
                                                const std::vector<std::int64_t>& k) {
    const GridSpec& g = spinor.grid;
    if (int(k.size()) != g.d) throw std::invalid_argument("convolve_observable_direct: bad k rank");
    std::vector<std::vector<std::int64_t>> Ks(std::size_t(g.d));
    for (int a = 0; a < g.d; ++a) Ks[std::size_t(a)] = summation_set_K(k[std::size_t(a)], g.n_alpha[a]);
    const SpecField* psi[2] = {&spinor.psi_plus, &spinor.psi_minus};
    std::vector<std::size_t> idx(std::size_t(g.d), 0);
    std::vector<std::int64_t> kp(std::size_t(g.d)), ks(std::size_t(g.d));
    std::complex<double> total = 0;
    for (;;) {
        std::int64_t fp = 0, fs = 0;
        for (int a = 0; a < g.d; ++a) {
            kp[std::size_t(a)] = Ks[std::size_t(a)][idx[std::size_t(a)]];
            ks[std::size_t(a)] = k[std::size_t(a)] + kp[std::size_t(a)];
            fp += wavenumber_to_index(kp[std::size_t(a)], g.n_alpha[a]) << g.bit_offset(a);
            fs += wavenumber_to_index(ks[std::size_t(a)], g.n_alpha[a]) << g.bit_offset(a);
        }
        for (int s = 0; s < 2; ++s)
            for (int sp = 0; sp < 2; ++sp) {
                const std::complex<double> c = kernel_value(kind, s, sp, k, kp);
                if (c != 0.0)
                    total += c * (*psi[s])[std::size_t(fs)] * std::conj((*psi[sp])[std::size_t(fp)]);
            }
        int a = 0;
        while (a < g.d && ++idx[std::size_t(a)] == Ks[std::size_t(a)].size()) idx[std::size_t(a++)] = 0;
        if (a == g.d) break;
    }
    return total;
}

MeasurementOperator build_measurement_operator(const KernelKind& kind,
                                               const std::vector<std::int64_t>& j,
                                               const GridSpec& grid) {
    if (kind.tag != KernelKind::density && kind.tag != KernelKind::momentum)
        throw std::invalid_argument(
            "build_measurement_operator: only spin-diagonal kernels (density, momentum) have "
            "operator form");
    if (int(j.size()) != grid.d) throw std::invalid_argument("build_measurement_operator: bad j rank");
    std::vector<std::vector<std::int64_t>> Js(std::size_t(grid.d));
    for (int a = 0; a < grid.d; ++a)
        Js[std::size_t(a)] = summation_set_J(j[std::size_t(a)], grid.n_alpha[a]);
    MeasurementOperator op{kind, j, {}};
    std::vector<std::size_t> idx(std::size_t(grid.d), 0);
    std::vector<std::int64_t> jp(std::size_t(grid.d));
    for (;;) {
        for (int a = 0; a < grid.d; ++a) jp[std::size_t(a)] = Js[std::size_t(a)][idx[std::size_t(a)]];
        double c = 1.0;
        if (kind.tag == KernelKind::momentum) {
            const int a = kind.axis;
            const std::int64_t N = grid.extent(a), h = N / 2;
            c = double((j[std::size_t(a)] + h) % N) / 2.0 + double((jp[std::size_t(a)] + h) % N) -
                3.0 * double(N) / 4.0;
        }
        op.triples.push_back({flat_index_m(j, jp, grid), flat_index_n(jp, grid), c});
        int a = 0;
        while (a < grid.d && ++idx[std::size_t(a)] == Js[std::size_t(a)].size()) idx[std::size_t(a++)] = 0;
        if (a == grid.d) break;
    }
    return op;
}

std::complex<double> expectation(const MeasurementOperator& op, const SpecField& psi) {
    std::complex<double> acc = 0;
    for (const auto& t : op.triples)
        acc += t.c * psi[std::size_t(t.m)] * std::conj(psi[std::size_t(t.n)]);
    return acc;
}

std::pair<MeasurementOperator, MeasurementOperator> hermitian_split(const MeasurementOperator& op) {
    MeasurementOperator h1{op.kind, op.j, {}}, h2{op.kind, op.j, {}};
    h1.triples.reserve(op.triples.size() * 2);
    h2.triples.reserve(op.triples.size() * 2);
    const std::complex<double> mi(0, -0.5); // 1/(2i)
    for (const auto& t : op.triples) {
        h1.triples.push_back({t.m, t.n, t.c * 0.5});
        h1.triples.push_back({t.n, t.m, std::conj(t.c) * 0.5});
        h2.triples.push_back({t.m, t.n, t.c * mi});
        h2.triples.push_back({t.n, t.m, -std::conj(t.c) * mi});
    }
    return {h1, h2};
}

std::pair<SpecField, SpecField> physical_components(const SpinorField& spinor) {
    SpecField pp = spinor.psi_plus, pm = spinor.psi_minus;
    to_physical(pp, spinor.grid);
    to_physical(pm, spinor.grid);
    return {std::move(pp), std::move(pm)};
}

RealField density_field(const SpinorField& spinor) {
    auto [pp, pm] = physical_components(spinor);
    RealField rho(pp.size());
    for (std::size_t i = 0; i < pp.size(); ++i) rho[i] = std::norm(pp[i]) + std::norm(pm[i]);
    return rho;
}

std::vector<RealField> momentum_field(const SpinorField& spinor) {
    const GridSpec& g = spinor.grid;
    auto [pp, pm] = physical_components(spinor);
    std::vector<RealField> J(std::size_t(g.d));
    for (int a = 0; a < g.d; ++a) {
        SpecField gp = spinor.psi_plus, gm = spinor.psi_minus;
        spectral_gradient(gp, g, a);
        spectral_gradient(gm, g, a);
        to_physical(gp, g);
        to_physical(gm, g);
        RealField& Ja = J[std::size_t(a)];
        Ja.resize(pp.size());
        for (std::size_t i = 0; i < pp.size(); ++i)
            Ja[i] = (std::conj(pp[i]) * gp[i] + std::conj(pm[i]) * gm[i]).imag();
    }
    return J;
}

std::vector<RealField> velocity_field(const RealField& rho, const std::vector<RealField>& J,
                                      std::int64_t* regularized_out) {
    double rmax = 0;
    for (double v : rho) rmax = std::max(rmax, v);
    const double eps = 1e-12 * rmax;
    std::int64_t reg = 0;
    std::vector<RealField> u(J.size());
    for (auto& c : u) c.assign(rho.size(), 0.0);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (rho[i] < eps) {
            ++reg; // u stays 0 at vacuum points
            continue;
        }
        for (std::size_t a = 0; a < J.size(); ++a) u[a][i] = J[a][i] / rho[i];
    }
    if (regularized_out) *regularized_out = reg;
    if (double(reg) > 0.01 * double(rho.size()))
        throw std::runtime_error("velocity_field: more than 1% of points regularized; field unphysical");
    return u;
}

std::array<RealField, 3> spin_field(const SpinorField& spinor) {
    auto [pp, pm] = physical_components(spinor);
    double rmax = 0;
    for (std::size_t i = 0; i < pp.size(); ++i) rmax = std::max(rmax, std::norm(pp[i]) + std::norm(pm[i]));
    const double eps = 1e-12 * rmax;
    std::array<RealField, 3> s;
    for (auto& c : s) c.resize(pp.size());
    for (std::size_t i = 0; i < pp.size(); ++i) {
        const double rho = std::norm(pp[i]) + std::norm(pm[i]);
        if (rho < eps) {
            s[0][i] = 0;
            s[1][i] = 0;
            s[2][i] = 1;
            continue;
        }
        const std::complex<double> w = pp[i] * std::conj(pm[i]);
        s[0][i] = 2 * w.real() / rho;
        s[1][i] = 2 * w.imag() / rho; // Table I sign convention
        s[2][i] = (std::norm(pp[i]) - std::norm(pm[i])) / rho;
    }
    return s;
}

FieldSet make_fields(const SpinorField& spinor) {
    FieldSet f;
    f.grid = spinor.grid;
    f.rho = density_field(spinor);
    auto J = momentum_field(spinor);
    auto u = velocity_field(f.rho, J, &f.regularized);
    auto s = spin_field(spinor);
    double rmax = 0;
    for (double v : f.rho) rmax = std::max(rmax, v);
    f.eps_rho = 1e-12 * rmax;
    for (int a = 0; a < 3; ++a) {
        f.J[std::size_t(a)] = std::move(J[std::size_t(a)]);
        f.u[std::size_t(a)] = std::move(u[std::size_t(a)]);
        f.s[std::size_t(a)] = std::move(s[std::size_t(a)]);
    }
    return f;
}

// --- 3/2-rule dealiased paths ---

namespace {

std::vector<std::int64_t> padded_dims(const GridSpec& g) {
    std::vector<std::int64_t> d(std::size_t(g.d));
    for (int a = 0; a < g.d; ++a) d[std::size_t(a)] = 3 * (g.extent(a) / 2);
    return d;
}

// scatter an N-band spectral array into the M=3N/2 grid (wavenumbers preserved)
SpecField pad_spectral(const SpecField& a, const GridSpec& g, const std::vector<std::int64_t>& M) {
    std::int64_t total = 1;
    for (auto m : M) total *= m;
    SpecField out(std::size_t(total), 0.0);
    for (std::size_t f = 0; f < a.size(); ++f) {
        std::int64_t pf = 0, stride = 1;
        for (int ax = 0; ax < g.d; ++ax) {
            const std::int64_t j = (std::int64_t(f) >> g.bit_offset(ax)) & (g.extent(ax) - 1);
            const std::int64_t k = index_to_wavenumber(j, g.n_alpha[ax]);
            pf += (k < 0 ? k + M[std::size_t(ax)] : k) * stride;
            stride *= M[std::size_t(ax)];
        }
        out[std::size_t(pf)] = a[f];
    }
    return out;
}

// gather the central N band back out of the padded spectral grid
SpecField unpad_spectral(const SpecField& a, const GridSpec& g, const std::vector<std::int64_t>& M) {
    SpecField out(std::size_t(g.amplitude_count()));
    for (std::size_t f = 0; f < out.size(); ++f) {
        std::int64_t pf = 0, stride = 1;
        for (int ax = 0; ax < g.d; ++ax) {
            const std::int64_t j = (std::int64_t(f) >> g.bit_offset(ax)) & (g.extent(ax) - 1);
            const std::int64_t k = index_to_wavenumber(j, g.n_alpha[ax]);
            pf += (k < 0 ? k + M[std::size_t(ax)] : k) * stride;
            stride *= M[std::size_t(ax)];
        }
        out[f] = a[std::size_t(pf)];
    }
    return out;
}

} // namespace

SpecField density_hat_dealiased(const SpinorField& spinor) {
    const GridSpec& g = spinor.grid;
    const auto M = padded_dims(g);
    SpecField pp = pad_spectral(spinor.psi_plus, g, M);
    SpecField pm = pad_spectral(spinor.psi_minus, g, M);
    fft_nd(pp, M, +1, false);
    fft_nd(pm, M, +1, false);
    SpecField rho(pp.size());
    for (std::size_t i = 0; i < pp.size(); ++i) rho[i] = std::norm(pp[i]) + std::norm(pm[i]);
    fft_nd(rho, M, -1, true);
    return unpad_spectral(rho, g, M);
}

SpecField momentum_hat_dealiased(const SpinorField& spinor, int axis) {
    const GridSpec& g = spinor.grid;
    const auto M = padded_dims(g);
    SpecField gp = spinor.psi_plus, gm = spinor.psi_minus;
    spectral_gradient(gp, g, axis);
    spectral_gradient(gm, g, axis);
    SpecField pp = pad_spectral(spinor.psi_plus, g, M);
    SpecField pm = pad_spectral(spinor.psi_minus, g, M);
    SpecField gpp = pad_spectral(gp, g, M);
    SpecField gpm = pad_spectral(gm, g, M);
    fft_nd(pp, M, +1, false);
    fft_nd(pm, M, +1, false);
    fft_nd(gpp, M, +1, false);
    fft_nd(gpm, M, +1, false);
    SpecField J(pp.size());
    for (std::size_t i = 0; i < pp.size(); ++i)
        J[i] = (std::conj(pp[i]) * gpp[i] + std::conj(pm[i]) * gpm[i]).imag();
    fft_nd(J, M, -1, true);
    return unpad_spectral(J, g, M);
}

} // namespace turbogen
