#include "turbogen/pipeline.hpp"
#include "turbogen/circuit.hpp"
#include "turbogen/diagnostics.hpp"
#include "turbogen/io.hpp"
#include "turbogen/madelung.hpp"
#include "turbogen/simulator.hpp"
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

namespace turbogen {
namespace {

std::string join(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

double now_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// mass fraction inside the low-index cube [0, extent/4 - 1]^d
double cube_fraction(const SpecField& f, const GridSpec& grid) {
    double inside = 0, total = 0;
    const std::int64_t npts = grid.amplitude_count();
    for (std::int64_t g = 0; g < npts; ++g) {
        const double m = std::norm(f[std::size_t(g)]);
        total += m;
        bool in = true;
        std::int64_t rem = g;
        for (int a = 0; a < grid.d && in; ++a) {
            const std::int64_t j = rem & (grid.extent(a) - 1);
            rem >>= grid.n_alpha[std::size_t(a)];
            if (j >= std::max<std::int64_t>(1, grid.extent(a) / 4)) in = false;
        }
        if (in) inside += m;
    }
    return total > 0 ? inside / total : 0.0;
}

// per-axis minimal contiguous window (in wavenumber ordering) holding >= 99%
// of the summed mass of the given spectral fields
std::vector<std::int64_t> axis_support_width(const std::vector<const SpecField*>& fs,
                                             const GridSpec& grid) {
    std::vector<std::int64_t> widths;
    for (int a = 0; a < grid.d; ++a) {
        const std::int64_t N = grid.extent(a);
        std::vector<double> marg(std::size_t(N), 0.0);
        for (const auto* f : fs) {
            const std::int64_t npts = grid.amplitude_count();
            for (std::int64_t g = 0; g < npts; ++g) {
                const std::int64_t j = (g >> grid.bit_offset(a)) & (N - 1);
                const std::int64_t k = index_to_wavenumber(j, grid.n_alpha[std::size_t(a)]);
                marg[std::size_t(k + N / 2)] += std::norm((*f)[std::size_t(g)]);
            }
        }
        double total = 0;
        for (double v : marg) total += v;
        const double target = 0.99 * total;
        std::int64_t best = N;
        double acc = 0;
        std::size_t lo = 0;
        for (std::size_t hi = 0; hi < marg.size(); ++hi) {
            acc += marg[hi];
            while (acc - marg[lo] >= target) acc -= marg[lo++];
            if (acc >= target) best = std::min(best, std::int64_t(hi - lo + 1));
        }
        widths.push_back(best);
    }
    return widths;
}

SpecField spectral_of_real(const RealField& f, const GridSpec& grid) {
    SpecField a(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) a[i] = f[i];
    to_spectral(a, grid);
    return a;
}

struct CheckList {
    int failures = 0;
    void report(const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "PASS " : "FAIL ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    }
};

SpinorField random_band_limited_spinor(const GridSpec& grid, std::uint64_t seed) {
    NormalStream ns(seed);
    SpinorField sp;
    sp.grid = grid;
    const std::size_t n = std::size_t(grid.amplitude_count());
    sp.psi_plus.assign(n, {0, 0});
    sp.psi_minus.assign(n, {0, 0});
    for (std::size_t g = 0; g < n; ++g) {
        bool in = true;
        std::int64_t rem = std::int64_t(g);
        for (int a = 0; a < grid.d && in; ++a) {
            const std::int64_t N = grid.extent(a);
            const std::int64_t j = rem & (N - 1);
            rem >>= grid.n_alpha[std::size_t(a)];
            const std::int64_t k = index_to_wavenumber(j, grid.n_alpha[std::size_t(a)]);
            // central half-band (k=0 alone when N=2) so circular == truncated
            if (k < -N / 4 || k > std::max<std::int64_t>(N / 4 - 1, 0)) in = false;
        }
        if (!in) continue;
        sp.psi_plus[g] = {ns.next(), ns.next()};
        sp.psi_minus[g] = {ns.next(), ns.next()};
    }
    double nrm = 0;
    for (std::size_t g = 0; g < n; ++g)
        nrm += std::norm(sp.psi_plus[g]) + std::norm(sp.psi_minus[g]);
    nrm = std::sqrt(nrm);
    for (std::size_t g = 0; g < n; ++g) {
        sp.psi_plus[g] /= nrm;
        sp.psi_minus[g] /= nrm;
    }
    sp.norm_up = sp.norm_down = 0;
    for (std::size_t g = 0; g < n; ++g) {
        sp.norm_up += std::norm(sp.psi_plus[g]);
        sp.norm_down += std::norm(sp.psi_minus[g]);
    }
    return sp;
}

bool verify_lattice_ladder(CheckList& checks) {
    bool all = true;
    for (int n = 1; n <= 6; ++n) {
        const std::int64_t N = std::int64_t(1) << n;
        bool ok = true;
        for (std::int64_t j = 0; j < N && ok; ++j) {
            const std::int64_t k = index_to_wavenumber(j, n);
            ok = k >= -N / 2 && k < N / 2 && wavenumber_to_index(k, n) == j;
        }
        for (std::int64_t j = 0; j < N && ok; ++j) {
            const auto J = summation_set_J(j, n);
            const auto K = summation_set_K(index_to_wavenumber(j, n), n);
            ok = J.size() == K.size();
            std::vector<std::int64_t> kj;
            for (const auto jj : J) kj.push_back(index_to_wavenumber(jj, n));
            std::sort(kj.begin(), kj.end());
            for (std::size_t i = 0; i < K.size() && ok; ++i) ok = kj[i] == K[i];
        }
        checks.report("lattice round-trip and summation sets, n=" + std::to_string(n), ok);
        all = all && ok;
    }
    GridSpec g3({2, 2, 2});
    bool ok = true;
    std::string detail;
    const std::int64_t npts = g3.amplitude_count();
    for (std::int64_t f1 = 0; f1 < npts && ok; ++f1)
        for (std::int64_t f2 = 0; f2 < npts && ok; ++f2) {
            const auto j = unflatten(f1, g3), jp = unflatten(f2, g3);
            bool in_band = true;
            std::vector<std::int64_t> ks(3);
            for (int a = 0; a < 3; ++a) {
                ks[std::size_t(a)] = index_to_wavenumber(j[std::size_t(a)], 2) +
                                     index_to_wavenumber(jp[std::size_t(a)], 2);
                if (ks[std::size_t(a)] < -2 || ks[std::size_t(a)] > 1) in_band = false;
            }
            try {
                const std::int64_t m = flat_index_m(j, jp, g3);
                const auto mj = unflatten(m, g3);
                for (int a = 0; a < 3 && ok; ++a)
                    ok = index_to_wavenumber(mj[std::size_t(a)], 2) == ks[std::size_t(a)];
                ok = ok && in_band && flat_index_n(jp, g3) == f2;
                if (!ok) detail = "coupled index mismatch";
            } catch (const std::domain_error&) {
                ok = !in_band;
                if (!ok) detail = "in-band pair rejected";
            }
        }
    checks.report("flat coupled-index exhaustive on (2,2,2)", ok, detail);
    return all && ok;
}

bool verify_simulator(CheckList& checks) {
    CircuitSpec cs;
    cs.grid = GridSpec({2, 2, 2});
    cs.R = 2;
    cs.r = 2;
    cs.pair_sets = {{{1, 2}, {3, 4}}, {{2, 5}, {1, 6}}};
    cs.seed = 7;
    const GateList gates = build_circuit(cs);
    const auto sv = run(gates, cs.grid.n_q());
    const auto U = dense_circuit_matrix(gates, cs.grid.n_q());
    const std::size_t dim = sv.amp.size();
    double maxdiff = 0;
    for (std::size_t i = 0; i < dim; ++i)
        maxdiff = std::max(maxdiff, std::abs(sv.amp[i] - U[i * dim])); // column 0 = U|0>
    const bool ok = maxdiff <= 1e-12;
    checks.report("simulator vs dense unitary oracle (6 qubits)", ok,
                  "max diff " + format_g17(maxdiff));
    return ok;
}

bool verify_oracle_triangle(CheckList& checks, const GridSpec& grid, std::uint64_t seed) {
    const SpinorField sp = random_band_limited_spinor(grid, seed);
    std::vector<KernelKind> kinds = {KernelKind::Density()};
    for (int a = 0; a < grid.d; ++a) kinds.push_back(KernelKind::Momentum(a));

    std::vector<SpecField> fft_hat; // one per kind, via the physical-space path
    {
        const RealField rho = density_field(sp);
        fft_hat.push_back(spectral_of_real(rho, grid));
        const auto J = momentum_field(sp);
        for (int a = 0; a < grid.d; ++a) fft_hat.push_back(spectral_of_real(J[std::size_t(a)], grid));
    }

    double worst = 0;
    std::string worst_kind;
    for (std::size_t kk = 0; kk < kinds.size(); ++kk) {
        for (std::int64_t f = 0; f < grid.amplitude_count(); ++f) {
            const auto j = unflatten(f, grid);
            std::vector<std::int64_t> k(std::size_t(grid.d));
            for (int a = 0; a < grid.d; ++a)
                k[std::size_t(a)] = index_to_wavenumber(j[std::size_t(a)],
                                                        grid.n_alpha[std::size_t(a)]);
            const auto direct = convolve_observable_direct(sp, kinds[kk], k);
            const auto op = build_measurement_operator(kinds[kk], j, grid);
            const auto viaop = expectation(op, sp.psi_plus) + expectation(op, sp.psi_minus);
            const auto viafft = fft_hat[kk][std::size_t(f)];
            const double d1 = std::abs(direct - viaop);
            const double d2 = std::abs(direct - viafft);
            const double d3 = std::abs(viaop - viafft);
            const double d = std::max({d1, d2, d3});
            if (d > worst) {
                worst = d;
                worst_kind = kinds[kk].tag == KernelKind::density
                                 ? "density"
                                 : "momentum_" + std::to_string(kinds[kk].axis);
            }
        }
    }
    const bool ok = worst <= 1e-10;
    std::string gname;
    for (int a = 0; a < grid.d; ++a) gname += (a ? "," : "(") + std::to_string(grid.n_alpha[std::size_t(a)]);
    gname += ")";
    checks.report("oracle triangle direct/operator/FFT on " + gname, ok,
                  "worst " + worst_kind + " diff " + format_g17(worst));
    return ok;
}

} // namespace

double required_mb(int n_q, const std::string& precision) {
    const double bytes = precision == "single" ? 8.0 : 16.0;
    return 2.0 * std::ldexp(1.0, n_q) * bytes / (1024.0 * 1024.0);
}

double memory_cap_mb() {
    if (const char* v = std::getenv("TURBOGEN_MEM_MB")) {
        const double cap = std::atof(v);
        if (cap > 0) return cap;
    }
    return 4096.0;
}

int cmd_generate(const RunConfig& cfg) {
    const double need = required_mb(cfg.grid.n_q(), cfg.precision);
    const double cap = memory_cap_mb();
    if (need > cap) {
        std::cerr << "generate: refusing n_q=" << cfg.grid.n_q() << " (" << cfg.precision
                  << "): statevector memory " << format_g17(need) << " MiB exceeds cap "
                  << format_g17(cap)
                  << " MiB; raise TURBOGEN_MEM_MB or switch to --precision single\n";
        return 1;
    }
    const struct {
        const char* name;
        const char* gates;
        std::uint64_t seed;
    } parts[2] = {{"psi_plus", "gates_plus.txt", cfg.seed_up},
                  {"psi_minus", "gates_minus.txt", cfg.seed_down}};
    std::filesystem::create_directories(cfg.out_dir);
    for (const auto& part : parts) {
        const CircuitSpec cs = cfg.circuit(part.seed);
        cs.validate();
        const GateList gates = build_circuit(cs);
        const std::string gpath = join(cfg.out_dir, part.gates);
        {
            std::ofstream gf(gpath, std::ios::binary | std::ios::trunc);
            export_gates(gates, gf);
            if (!gf) throw std::runtime_error("cannot write gate list: " + gpath);
        }
        const auto t0 = std::chrono::steady_clock::now();
        Metadata meta;
        meta["seed"] = std::to_string(part.seed);
        meta["gate_count"] = std::to_string(gates.size());
        meta["precision"] = cfg.precision;
        double norm = 0;
        const std::string dump = join(cfg.out_dir, std::string(part.name) + ".bin");
        if (cfg.precision == "single") {
            const auto sv = run<float>(gates, cfg.grid.n_q());
            norm = sv.norm2();
            meta["norm"] = format_g17(norm);
            meta["wall_ms"] = format_g17(now_ms(t0));
            write_spec_field_single(dump, part.name, cfg.grid, sv.amp, meta);
        } else {
            const auto sv = run<double>(gates, cfg.grid.n_q());
            norm = sv.norm2();
            meta["norm"] = format_g17(norm);
            meta["wall_ms"] = format_g17(now_ms(t0));
            write_spec_field(dump, part.name, cfg.grid, sv.amp, meta);
        }
        std::cout << "generate: " << part.name << " n_q=" << cfg.grid.n_q()
                  << " gates=" << gates.size() << " norm=" << format_g17(norm) << "\n";
    }
    return 0;
}

int cmd_measure(const RunConfig& cfg) {
    SpinorField sp;
    sp.grid = cfg.grid;
    sp.psi_plus = read_spec_field(join(cfg.out_dir, "psi_plus.bin"), "psi_plus", cfg.grid);
    sp.psi_minus = read_spec_field(join(cfg.out_dir, "psi_minus.bin"), "psi_minus", cfg.grid);
    for (const auto& a : sp.psi_plus) sp.norm_up += std::norm(a);
    for (const auto& a : sp.psi_minus) sp.norm_down += std::norm(a);

    const FieldSet fs = make_fields(sp);
    Metadata meta;
    meta["regularized"] = std::to_string(fs.regularized);
    meta["eps_rho"] = format_g17(fs.eps_rho);
    const char* jn[3] = {"J_x", "J_y", "J_z"};
    const char* un[3] = {"u_x", "u_y", "u_z"};
    const char* sn[3] = {"s_1", "s_2", "s_3"};
    if (cfg.emit_physical()) {
        write_real_field(join(cfg.out_dir, "rho.bin"), "rho", cfg.grid, fs.rho, meta);
        for (int a = 0; a < 3; ++a) {
            write_real_field(join(cfg.out_dir, std::string(jn[a]) + ".bin"), jn[a], cfg.grid,
                             fs.J[std::size_t(a)], meta);
            write_real_field(join(cfg.out_dir, std::string(un[a]) + ".bin"), un[a], cfg.grid,
                             fs.u[std::size_t(a)], meta);
            write_real_field(join(cfg.out_dir, std::string(sn[a]) + ".bin"), sn[a], cfg.grid,
                             fs.s[std::size_t(a)], meta);
        }
    }
    const SpecField rho_hat = spectral_of_real(fs.rho, cfg.grid);
    const SpecField ux_hat = spectral_of_real(fs.u[0], cfg.grid);
    if (cfg.emit_spectral()) {
        write_spec_field(join(cfg.out_dir, "rho_hat.bin"), "rho_hat", cfg.grid, rho_hat, meta);
        for (int a = 0; a < 3; ++a)
            write_spec_field(join(cfg.out_dir, std::string(jn[a]) + "_hat.bin"),
                             std::string(jn[a]) + "_hat", cfg.grid,
                             spectral_of_real(fs.J[std::size_t(a)], cfg.grid), meta);
        for (int a = 0; a < 3; ++a)
            write_spec_field(join(cfg.out_dir, std::string(sn[a]) + "_hat.bin"),
                             std::string(sn[a]) + "_hat", cfg.grid,
                             spectral_of_real(fs.s[std::size_t(a)], cfg.grid), meta);
    }

    write_spectrum_csv(join(cfg.out_dir, "spectrum_stage1.csv"),
                       shell_spectrum(sp.psi_plus, cfg.grid, "psi_plus_hat"));
    write_spectrum_csv(join(cfg.out_dir, "spectrum_stage2.csv"),
                       shell_spectrum(rho_hat, cfg.grid, "rho_hat"));
    write_spectrum_csv(join(cfg.out_dir, "spectrum_stage3.csv"),
                       shell_spectrum(ux_hat, cfg.grid, "u_x_hat"));

    const double cube_up = cube_fraction(sp.psi_plus, cfg.grid);
    const double cube_dn = cube_fraction(sp.psi_minus, cfg.grid);
    const auto w1 = axis_support_width({&sp.psi_plus, &sp.psi_minus}, cfg.grid);
    const auto w2 = axis_support_width({&rho_hat}, cfg.grid);
    double ratio_min = std::numeric_limits<double>::infinity();
    for (int a = 0; a < cfg.grid.d; ++a)
        ratio_min = std::min(ratio_min, double(w2[std::size_t(a)]) / double(w1[std::size_t(a)]));
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("stage1_cube_fraction_plus", format_g17(cube_up));
    rows.emplace_back("stage1_cube_fraction_minus", format_g17(cube_dn));
    for (int a = 0; a < cfg.grid.d; ++a)
        rows.emplace_back("stage1_width_" + std::to_string(a),
                          std::to_string(w1[std::size_t(a)]));
    for (int a = 0; a < cfg.grid.d; ++a)
        rows.emplace_back("stage2_width_" + std::to_string(a),
                          std::to_string(w2[std::size_t(a)]));
    rows.emplace_back("support_ratio_min", format_g17(ratio_min));
    rows.emplace_back("regularized", std::to_string(fs.regularized));
    rows.emplace_back("norm_up", format_g17(sp.norm_up));
    rows.emplace_back("norm_down", format_g17(sp.norm_down));
    write_kv_csv(join(cfg.out_dir, "support.csv"), rows);
    std::cout << "measure: cube fraction (plus) " << format_g17(cube_up)
              << ", support ratio min " << format_g17(ratio_min) << ", regularized "
              << fs.regularized << "\n";
    return 0;
}

int cmd_diagnose(const RunConfig& cfg) {
    const GridSpec& grid = cfg.grid;
    std::array<RealField, 3> u, s;
    const char* un[3] = {"u_x", "u_y", "u_z"};
    const char* sn[3] = {"s_1", "s_2", "s_3"};
    for (int a = 0; a < 3; ++a) {
        u[std::size_t(a)] = read_real_field(join(cfg.out_dir, std::string(un[a]) + ".bin"),
                                            un[a], grid);
        s[std::size_t(a)] = read_real_field(join(cfg.out_dir, std::string(sn[a]) + ".bin"),
                                            sn[a], grid);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::pair<std::string, std::string>> sum;

    // spectra and slopes
    const ShellSpectrum Eu = shell_spectrum_real({&u[0], &u[1], &u[2]}, grid, "u_hat");
    const ShellSpectrum Es = shell_spectrum_real({&s[0], &s[1], &s[2]}, grid, "s_hat");
    const int kp = k_peak(Eu);
    double fit_lo = cfg.diag.spectrum_fit_lo, fit_hi = cfg.diag.spectrum_fit_hi;
    if (fit_lo <= 0) { // heuristic decade when the config does not pin one
        fit_lo = std::max(2.0, std::floor(kp / 8.0));
        fit_hi = std::min(10.0 * fit_lo, double(Eu.E.size() - 1));
    }
    double vsf_lo = cfg.diag.vsf_fit_lo, vsf_hi = cfg.diag.vsf_fit_hi;
    if (vsf_lo <= 0) {
        vsf_lo = fit_lo;
        vsf_hi = fit_hi;
    }
    ScalingFit su{fit_lo, fit_hi, nan, nan}, ss{vsf_lo, vsf_hi, nan, nan};
    try {
        su = fit_power_law(Eu, fit_lo, fit_hi);
    } catch (const std::exception& e) {
        std::cout << "diagnose: velocity slope fit skipped: " << e.what() << "\n";
    }
    try {
        ss = fit_power_law(Es, vsf_lo, vsf_hi);
    } catch (const std::exception& e) {
        std::cout << "diagnose: VSF slope fit skipped: " << e.what() << "\n";
    }
    if (cfg.diag_enabled("spectra")) {
        write_spectrum_csv(join(cfg.out_dir, "spectrum_velocity.csv"), Eu, {{"slope", su}});
        write_spectrum_csv(join(cfg.out_dir, "spectrum_vsf.csv"), Es, {{"slope", ss}});
    }
    sum.emplace_back("velocity_slope", format_g17(su.exponent));
    sum.emplace_back("velocity_slope_stderr", format_g17(su.stderr_));
    sum.emplace_back("velocity_fit_lo", format_g17(su.lo));
    sum.emplace_back("velocity_fit_hi", format_g17(su.hi));
    sum.emplace_back("vsf_slope", format_g17(ss.exponent));
    sum.emplace_back("vsf_fit_lo", format_g17(ss.lo));
    sum.emplace_back("vsf_fit_hi", format_g17(ss.hi));
    sum.emplace_back("vsf_slope_diff", format_g17(ss.exponent - su.exponent));

    // vorticity statistics
    const auto w = vorticity_from_velocity(u, grid);
    double beta_fit = nan, c_fit = nan, kurt = nan;
    bool reliable = false;
    std::int64_t tail = 0;
    try {
        const StretchedExpFit f = vorticity_pdf(w, cfg.diag.pdf_bins);
        beta_fit = f.beta;
        c_fit = f.c;
        reliable = f.reliable;
        tail = f.tail_count;
        if (cfg.diag_enabled("pdf")) {
            write_pdf_csv(join(cfg.out_dir, "vorticity_pdf.csv"), f.hist,
                          {"stretched-exponential fit c=" + format_g17(f.c) +
                               " beta=" + format_g17(f.beta) +
                               " tail_count=" + std::to_string(f.tail_count) +
                               (f.reliable ? "" : " UNRELIABLE")});
        }
    } catch (const std::exception& e) {
        std::cout << "diagnose: vorticity PDF skipped: " << e.what() << "\n";
    }
    try {
        RealField pooled;
        pooled.reserve(3 * w[0].size());
        for (int a = 0; a < 3; ++a)
            pooled.insert(pooled.end(), w[std::size_t(a)].begin(), w[std::size_t(a)].end());
        kurt = kurtosis_excess(pooled);
    } catch (const std::exception& e) {
        std::cout << "diagnose: vorticity kurtosis skipped: " << e.what() << "\n";
    }
    sum.emplace_back("beta_fit", format_g17(beta_fit));
    sum.emplace_back("c_fit", format_g17(c_fit));
    sum.emplace_back("pdf_reliable", reliable ? "1" : "0");
    sum.emplace_back("pdf_tail_count", std::to_string(tail));
    sum.emplace_back("kurtosis_vorticity", format_g17(kurt));

    // Q-R topology
    if (cfg.diag_enabled("qr")) {
        const QRResult qr = qr_invariants(u, grid, cfg.diag.qr_bins);
        write_qr_csv(join(cfg.out_dir, "qr.csv"), qr);
        write_curve_csv(join(cfg.out_dir, "qr_vieillefosse.csv"), "R,Q",
                        vieillefosse_curve(qr.r_lim));
        write_curve_csv(join(cfg.out_dir, "qr_zero_line.csv"), "R,Q",
                        {{0.0, -qr.q_lim}, {0.0, qr.q_lim}});
        sum.emplace_back("skewness_R", format_g17(qr.skewness_R));
        sum.emplace_back("skewness_R_raw", format_g17(qr.skewness_R_raw));
        sum.emplace_back("qr_in_range_fraction", format_g17(qr.in_range_fraction));
    }

    // structure functions
    if (cfg.diag_enabled("sf")) {
        const double dx = grid.domain_length[0] / double(grid.extent(0));
        double r_lo = cfg.diag.sf_r_lo, r_hi = cfg.diag.sf_r_hi;
        if (r_lo <= 0) { // default self-similar range: [8 eta_grid, L/8]
            r_lo = 8.0 * dx;
            r_hi = grid.domain_length[0] / 8.0;
        }
        try {
            const StructureFunctions sf =
                structure_functions(u, grid, r_lo, r_hi, cfg.diag.sf_samples, cfg.diag.sf_seed,
                                    cfg.diag.sf_separations);
            write_sf_csv(join(cfg.out_dir, "sf.csv"), sf);
            for (int p = 0; p < 4; ++p)
                sum.emplace_back("zeta_" + std::to_string(p + 2),
                                 format_g17(sf.zeta[std::size_t(p)].exponent));
            const double z2 = sf.zeta[0].exponent, z3 = sf.zeta[1].exponent,
                         z4 = sf.zeta[2].exponent;
            sum.emplace_back("zeta_concave", (z4 - z3 < z3 - z2) ? "1" : "0");
        } catch (const std::exception& e) {
            std::cout << "diagnose: structure functions skipped: " << e.what() << "\n";
        }
    }

    // helicity
    if (cfg.diag_enabled("helicity")) {
        const RealField h = helicity_density(u, w);
        write_real_field(join(cfg.out_dir, "helicity.bin"), "helicity", grid, h);
        double hm = 0, h2 = 0;
        for (double v : h) {
            hm += v;
            h2 += v * v;
        }
        hm /= double(h.size());
        h2 = std::sqrt(h2 / double(h.size()));
        sum.emplace_back("helicity_mean", format_g17(hm));
        sum.emplace_back("helicity_rms", format_g17(h2));
    }

    // spin-formula vorticity: reported, not asserted (exactness holds only at
    // uniform density)
    try {
        const auto ws = vorticity_from_spin(s, grid, true);
        double num = 0, den = 0;
        for (int a = 0; a < 3; ++a)
            for (std::size_t i = 0; i < w[0].size(); ++i) {
                const double d = ws[std::size_t(a)][i] - w[std::size_t(a)][i];
                num += d * d;
                den += w[std::size_t(a)][i] * w[std::size_t(a)][i];
            }
        sum.emplace_back("spin_curl_rel_l2", format_g17(den > 0 ? std::sqrt(num / den) : nan));
    } catch (const std::exception& e) {
        std::cout << "diagnose: spin-formula vorticity skipped: " << e.what() << "\n";
    }

    const double k_eta = cfg.diag.k_eta_factor * kp;
    sum.emplace_back("k_peak", std::to_string(kp));
    sum.emplace_back("k_eta", format_g17(k_eta));
    double re = nan;
    try {
        re = reynolds_estimate(cfg.diag.k_L, k_eta);
    } catch (const std::exception& e) {
        std::cout << "diagnose: Reynolds estimate skipped: " << e.what() << "\n";
    }
    sum.emplace_back("reynolds", format_g17(re));

    write_kv_csv(join(cfg.out_dir, "summary.csv"), sum);
    std::cout << "diagnose: velocity slope " << format_g17(su.exponent) << ", beta_fit "
              << format_g17(beta_fit) << ", Re " << format_g17(re) << ", skewness_R ";
    for (const auto& [k, v] : sum)
        if (k == "skewness_R") std::cout << v;
    std::cout << "\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg, int n_q_override) {
    (void)cfg;
    if (n_q_override > 12) {
        std::cerr << "verify: n_q=" << n_q_override
                  << " exceeds the desk-scale limit of 12 qubits; verification uses exhaustive "
                     "oracles whose cost grows exponentially\n";
        return 1;
    }
    CheckList checks;
    verify_lattice_ladder(checks);
    verify_simulator(checks);
    if (n_q_override > 0) {
        std::vector<int> nb;
        if (n_q_override < 3) {
            nb = {n_q_override};
        } else {
            nb = {n_q_override / 3, n_q_override / 3, n_q_override / 3};
            for (int i = 0; i < n_q_override % 3; ++i) ++nb[std::size_t(i)];
        }
        verify_oracle_triangle(checks, GridSpec(nb), 20260815);
    } else {
        verify_oracle_triangle(checks, GridSpec({2, 2, 2}), 20260815);
        verify_oracle_triangle(checks, GridSpec({3, 2, 1}), 414213);
    }
    std::cout << (checks.failures == 0 ? "verify: all checks passed"
                                       : "verify: FAILURES: " + std::to_string(checks.failures))
              << "\n";
    return checks.failures == 0 ? 0 : 1;
}

int cmd_export_circuit(const RunConfig& cfg) {
    const struct {
        const char* file;
        std::uint64_t seed;
    } parts[2] = {{"gates_plus.txt", cfg.seed_up}, {"gates_minus.txt", cfg.seed_down}};
    std::filesystem::create_directories(cfg.out_dir);
    for (const auto& part : parts) {
        const GateList gates = build_circuit(cfg.circuit(part.seed));
        const std::string path = join(cfg.out_dir, part.file);
        std::ofstream gf(path, std::ios::binary | std::ios::trunc);
        if (!gf) throw std::runtime_error("cannot write gate list: " + path);
        export_gates(gates, gf);
        std::cout << "export-circuit: " << path << " gates=" << gates.size() << "\n";
    }
    return 0;
}

} // namespace turbogen
