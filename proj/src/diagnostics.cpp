#include "turbogen/diagnostics.hpp"
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace turbogen {
namespace {

SpecField forward(const RealField& f, const GridSpec& grid) {
    SpecField a(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) a[i] = f[i];
    to_spectral(a, grid);
    return a;
}

RealField gradient_physical(const SpecField& fhat, const GridSpec& grid, int axis) {
    SpecField g = fhat;
    spectral_gradient(g, grid, axis);
    to_physical(g, grid);
    RealField out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].real();
    return out;
}

struct LineFit {
    double slope = 0, intercept = 0, stderr_ = 0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y,
                      const std::vector<double>* w = nullptr) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("least_squares: need at least 2 points");
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = w ? (*w)[i] : 1.0;
        sw += wi;
        sx += wi * x[i];
        sy += wi * y[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = w ? (*w)[i] : 1.0;
        sxx += wi * (x[i] - mx) * (x[i] - mx);
        sxy += wi * (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) throw std::invalid_argument("least_squares: degenerate abscissa");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double ssr = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double wi = w ? (*w)[i] : 1.0;
            const double r = y[i] - f.intercept - f.slope * x[i];
            ssr += wi * r * r;
        }
        f.stderr_ = std::sqrt(ssr / (sw * (double(n) - 2) / double(n)) / sxx);
    }
    return f;
}

double median_abs(const RealField& f) {
    RealField a(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::fabs(f[i]);
    auto mid = a.begin() + a.size() / 2;
    std::nth_element(a.begin(), mid, a.end());
    return *mid;
}

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

RealField real_gradient(const RealField& f, const GridSpec& grid, int axis) {
    return gradient_physical(forward(f, grid), grid, axis);
}

std::array<RealField, 3> vorticity_from_velocity(const std::array<RealField, 3>& u,
                                                 const GridSpec& grid) {
    if (grid.d != 3) throw std::invalid_argument("vorticity_from_velocity: d=3 only");
    std::array<SpecField, 3> uhat;
    for (int c = 0; c < 3; ++c) uhat[c] = forward(u[c], grid);
    std::array<std::array<RealField, 3>, 3> g; // g[axis][component]
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) g[a][c] = gradient_physical(uhat[c], grid, a);
    const std::size_t n = u[0].size();
    std::array<RealField, 3> w;
    for (int c = 0; c < 3; ++c) w[c].assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        w[0][i] = g[1][2][i] - g[2][1][i];
        w[1][i] = g[2][0][i] - g[0][2][i];
        w[2][i] = g[0][1][i] - g[1][0][i];
    }
    return w;
}

std::array<RealField, 3> vorticity_from_spin(const std::array<RealField, 3>& s,
                                             const GridSpec& grid, bool table_convention) {
    if (grid.d != 3) throw std::invalid_argument("vorticity_from_spin: d=3 only");
    const std::size_t n = s[0].size();
    std::array<RealField, 3> sp = s;
    if (table_convention)
        for (std::size_t i = 0; i < n; ++i) sp[1][i] = -sp[1][i];
    std::array<std::array<RealField, 3>, 3> g; // g[component][axis]
    for (int c = 0; c < 3; ++c) {
        SpecField sh = forward(sp[c], grid);
        for (int a = 0; a < 3; ++a) g[c][a] = gradient_physical(sh, grid, a);
    }
    std::array<RealField, 3> w;
    for (int c = 0; c < 3; ++c) w[c].assign(n, 0.0);
    // w = (1/2) [ s1 grad s2 x grad s3 + s2 grad s3 x grad s1 + s3 grad s1 x grad s2 ]
    for (std::size_t i = 0; i < n; ++i) {
        for (int t = 0; t < 3; ++t) {
            const int a = t, b = (t + 1) % 3, c = (t + 2) % 3;
            const double cx = g[b][1][i] * g[c][2][i] - g[b][2][i] * g[c][1][i];
            const double cy = g[b][2][i] * g[c][0][i] - g[b][0][i] * g[c][2][i];
            const double cz = g[b][0][i] * g[c][1][i] - g[b][1][i] * g[c][0][i];
            w[0][i] += 0.5 * sp[a][i] * cx;
            w[1][i] += 0.5 * sp[a][i] * cy;
            w[2][i] += 0.5 * sp[a][i] * cz;
        }
    }
    return w;
}

ShellSpectrum shell_spectrum(const std::vector<SpecField>& fhats, const GridSpec& grid,
                             const std::string& label) {
    const auto ktab = wavenumber_tables(grid);
    const double kf = 6.283185307179586476925287 / grid.domain_length[0];
    double corner = 0;
    for (int a = 0; a < grid.d; ++a) {
        const double km = double(grid.extent(a) / 2) * (6.283185307179586476925287 / grid.domain_length[a]);
        corner += km * km;
    }
    const int smax = int(std::floor(std::sqrt(corner) / kf + 0.5));
    ShellSpectrum out;
    out.field_label = label;
    out.E.assign(std::size_t(smax) + 1, 0.0);
    const std::int64_t npts = grid.amplitude_count();
    for (const auto& fhat : fhats) {
        if (std::int64_t(fhat.size()) != npts)
            throw std::invalid_argument("shell_spectrum: field size does not match grid");
        for (std::int64_t gidx = 0; gidx < npts; ++gidx) {
            double k2 = 0;
            std::int64_t rem = gidx;
            for (int a = 0; a < grid.d; ++a) {
                const std::int64_t j = rem & (grid.extent(a) - 1);
                rem >>= grid.n_alpha[a];
                k2 += ktab[a][std::size_t(j)] * ktab[a][std::size_t(j)];
            }
            const int s = int(std::floor(std::sqrt(k2) / kf + 0.5));
            out.E[std::size_t(s)] += std::norm(fhat[std::size_t(gidx)]);
        }
    }
    return out;
}

ShellSpectrum shell_spectrum(const SpecField& fhat, const GridSpec& grid, const std::string& label) {
    return shell_spectrum(std::vector<SpecField>{fhat}, grid, label);
}

ShellSpectrum shell_spectrum_real(const std::vector<const RealField*>& fields,
                                  const GridSpec& grid, const std::string& label) {
    std::vector<SpecField> hats;
    hats.reserve(fields.size());
    for (const auto* f : fields) hats.push_back(forward(*f, grid));
    return shell_spectrum(hats, grid, label);
}

ScalingFit fit_power_law(const ShellSpectrum& spec, double k_lo, double k_hi) {
    std::vector<double> x, y;
    for (std::size_t s = 1; s < spec.E.size(); ++s) {
        if (double(s) < k_lo || double(s) > k_hi || spec.E[s] <= 0) continue;
        x.push_back(std::log(double(s)));
        y.push_back(std::log(spec.E[s]));
    }
    if (x.size() < 4) throw std::invalid_argument("fit_power_law: fewer than 4 usable shells");
    const LineFit f = least_squares(x, y);
    return {k_lo, k_hi, f.slope, f.stderr_};
}

StretchedExpFit fit_stretched_exp(const std::vector<double>& samples, int bins) {
    double vmax = 0;
    for (double v : samples) vmax = std::max(vmax, v);
    if (vmax <= 0 || bins < 4)
        throw std::invalid_argument("fit_stretched_exp: need positive samples and >= 4 bins");
    const double lo = vmax / 100.0; // top two decades of the range
    StretchedExpFit out;
    Histogram& h = out.hist;
    h.edges.resize(std::size_t(bins) + 1);
    const double llo = std::log(lo), lhi = std::log(vmax);
    for (int b = 0; b <= bins; ++b) h.edges[std::size_t(b)] = std::exp(llo + (lhi - llo) * b / bins);
    h.edges.back() = std::nextafter(vmax, 2 * vmax); // keep the max sample inside
    h.center.resize(std::size_t(bins));
    for (int b = 0; b < bins; ++b)
        h.center[std::size_t(b)] = std::sqrt(h.edges[std::size_t(b)] * h.edges[std::size_t(b) + 1]);
    h.count.assign(std::size_t(bins), 0);
    h.total = std::int64_t(samples.size());
    const double lw = (lhi - llo) / bins;
    for (double v : samples) {
        if (v < lo || v > vmax) continue;
        int b = int((std::log(v) - llo) / lw);
        b = std::min(std::max(b, 0), bins - 1);
        ++h.count[std::size_t(b)];
    }
    h.density.assign(std::size_t(bins), 0.0);
    for (int b = 0; b < bins; ++b) {
        const double width = h.edges[std::size_t(b) + 1] - h.edges[std::size_t(b)];
        h.density[std::size_t(b)] = double(h.count[std::size_t(b)]) / (double(h.total) * width);
    }

    std::vector<double> xc, ly, wt;
    for (int b = 0; b < bins; ++b) {
        if (h.count[std::size_t(b)] < 8) continue; // sparse bins destabilize the tail
        xc.push_back(h.center[std::size_t(b)]);
        ly.push_back(std::log(h.density[std::size_t(b)]));
        wt.push_back(double(h.count[std::size_t(b)]));
    }
    if (xc.size() < 3)
        throw std::invalid_argument("fit_stretched_exp: fewer than 3 populated bins");

    double best_ssr = 0;
    bool found = false;
    std::vector<double> t(xc.size());
    for (int ib = 5; ib <= 300; ++ib) {
        const double beta = ib * 0.01;
        for (std::size_t i = 0; i < xc.size(); ++i) t[i] = std::pow(xc[i], beta);
        LineFit f;
        try {
            f = least_squares(t, ly, &wt);
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (f.slope >= 0) continue;
        double ssr = 0;
        for (std::size_t i = 0; i < xc.size(); ++i) {
            const double r = ly[i] - f.intercept - f.slope * t[i];
            ssr += wt[i] * r * r;
        }
        if (!found || ssr < best_ssr) {
            found = true;
            best_ssr = ssr;
            out.beta = beta;
            out.c = -f.slope;
        }
    }
    if (!found) throw std::runtime_error("fit_stretched_exp: no decaying fit on the beta grid");
    for (double v : samples)
        if (v > 2.0) ++out.tail_count;
    out.reliable = out.tail_count >= 1000;
    return out;
}

StretchedExpFit vorticity_pdf(const std::array<RealField, 3>& omega, int bins) {
    const std::size_t n = omega[0].size();
    double acc = 0;
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < n; ++i) acc += omega[std::size_t(c)][i] * omega[std::size_t(c)][i];
    const double wprime = std::sqrt(acc / (3.0 * double(n)));
    if (!(wprime > 0)) throw std::invalid_argument("vorticity_pdf: zero field");
    std::vector<double> samples;
    samples.reserve(3 * n);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < n; ++i)
            samples.push_back(std::fabs(omega[std::size_t(c)][i]) / wprime);
    return fit_stretched_exp(samples, bins);
}

QRResult qr_invariants(const std::array<RealField, 3>& u, const GridSpec& grid, int bins) {
    if (grid.d != 3) throw std::invalid_argument("qr_invariants: d=3 only");
    RealField S[3][3]; // S[i][j] = du_j / dx_i
    {
        std::array<SpecField, 3> uhat; // scoped: large transients freed before Q/R
        for (int c = 0; c < 3; ++c) uhat[std::size_t(c)] = forward(u[std::size_t(c)], grid);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) S[i][j] = gradient_physical(uhat[std::size_t(j)], grid, i);
    }
    const std::size_t n = u[0].size();
    QRResult out;
    out.Q.assign(n, 0.0);
    out.R.assign(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        double a[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a[i][j] = S[i][j][p];
        double tr2 = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) tr2 += a[i][j] * a[j][i];
        out.Q[p] = -0.5 * tr2;
        const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        out.R[p] = -det;
    }

    const double sig_r = median_abs(out.R) / 0.6745;
    const double sig_q = median_abs(out.Q) / 0.6745;
    out.bins = bins;
    out.r_lim = sig_r > 0 ? 20.0 * sig_r : 1.0;
    out.q_lim = sig_q > 0 ? 20.0 * sig_q : 1.0;

    // bulk skewness: moment skewness of the samples inside the clip range
    // (raw moments are dominated by a handful of near-vacuum spikes)
    double m1 = 0;
    std::int64_t kept = 0;
    for (std::size_t p = 0; p < n; ++p)
        if (std::fabs(out.R[p]) <= out.r_lim) {
            m1 += out.R[p];
            ++kept;
        }
    if (kept > 0) m1 /= double(kept);
    double m2 = 0, m3 = 0;
    for (std::size_t p = 0; p < n; ++p)
        if (std::fabs(out.R[p]) <= out.r_lim) {
            const double d = out.R[p] - m1;
            m2 += d * d;
            m3 += d * d * d;
        }
    if (kept > 0) {
        m2 /= double(kept);
        m3 /= double(kept);
    }
    out.skewness_R = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
    {
        double a1 = 0;
        for (std::size_t p = 0; p < n; ++p) a1 += out.R[p];
        a1 /= double(n);
        double a2 = 0, a3 = 0;
        for (std::size_t p = 0; p < n; ++p) {
            const double d = out.R[p] - a1;
            a2 += d * d;
            a3 += d * d * d;
        }
        a2 /= double(n);
        a3 /= double(n);
        out.skewness_R_raw = a2 > 0 ? a3 / std::pow(a2, 1.5) : 0.0;
    }

    out.joint.assign(std::size_t(bins) * bins, 0.0);
    std::int64_t inr = 0;
    for (std::size_t p = 0; p < n; ++p) {
        const double rr = out.R[p], qq = out.Q[p];
        if (std::fabs(rr) > out.r_lim || std::fabs(qq) > out.q_lim) continue;
        int ir = int((rr + out.r_lim) / (2 * out.r_lim) * bins);
        int iq = int((qq + out.q_lim) / (2 * out.q_lim) * bins);
        ir = std::min(std::max(ir, 0), bins - 1);
        iq = std::min(std::max(iq, 0), bins - 1);
        out.joint[std::size_t(iq) * bins + ir] += 1.0;
        ++inr;
    }
    out.in_range_fraction = double(inr) / double(n);
    if (inr > 0) {
        const double cell = (2 * out.r_lim / bins) * (2 * out.q_lim / bins);
        for (auto& v : out.joint) v /= double(inr) * cell;
    }
    return out;
}

std::vector<std::pair<double, double>> vieillefosse_curve(double r_lim, int points) {
    std::vector<std::pair<double, double>> c;
    c.reserve(std::size_t(points));
    for (int i = 0; i < points; ++i) {
        const double r = -r_lim + 2.0 * r_lim * i / (points - 1);
        c.emplace_back(r, -std::cbrt(27.0 * r * r / 4.0));
    }
    return c;
}

StructureFunctions structure_functions(const std::array<RealField, 3>& u, const GridSpec& grid,
                                       double r_lo, double r_hi, std::int64_t samples,
                                       std::uint64_t seed, int n_sep) {
    if (grid.d != 3) throw std::invalid_argument("structure_functions: d=3 only");
    for (int a = 1; a < 3; ++a)
        if (grid.extent(a) != grid.extent(0) ||
            grid.domain_length[std::size_t(a)] != grid.domain_length[0])
            throw std::invalid_argument("structure_functions: cubic grid required");
    const std::int64_t N = grid.extent(0);
    const double dx = grid.domain_length[0] / double(N);
    if (!(r_lo > 0) || !(r_hi > r_lo) || n_sep < 2 || samples < 1)
        throw std::invalid_argument("structure_functions: bad parameters");

    std::vector<std::int64_t> cells;
    for (int i = 0; i < n_sep; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, double(i) / (n_sep - 1));
        std::int64_t c = std::llround(r / dx);
        c = std::max<std::int64_t>(c, 1);
        if (c > N / 2) continue; // periodic wrap would alias the separation
        if (cells.empty() || cells.back() != c) cells.push_back(c);
    }
    if (cells.size() < 2)
        throw std::invalid_argument("structure_functions: fewer than 2 usable separations");

    const int off1 = grid.bit_offset(1), off2 = grid.bit_offset(2);
    const std::int64_t mask = N - 1;
    StructureFunctions out;
    for (std::size_t si = 0; si < cells.size(); ++si) {
        const std::int64_t c = cells[si];
        std::mt19937_64 eng(splitmix64_at(seed, si));
        std::uniform_int_distribution<std::int64_t> coord(0, N - 1);
        std::uniform_int_distribution<int> axis_pick(0, 2);
        double sum[4] = {0, 0, 0, 0}, sum2[4] = {0, 0, 0, 0};
        for (std::int64_t t = 0; t < samples; ++t) {
            std::int64_t x = coord(eng), y = coord(eng), z = coord(eng);
            const int ax = axis_pick(eng);
            const std::int64_t i1 = x | (y << off1) | (z << off2);
            std::int64_t xs = x, ys = y, zs = z;
            if (ax == 0)
                xs = (x + c) & mask;
            else if (ax == 1)
                ys = (y + c) & mask;
            else
                zs = (z + c) & mask;
            const std::int64_t i2 = xs | (ys << off1) | (zs << off2);
            double m2 = 0;
            for (int comp = 0; comp < 3; ++comp) {
                const double d = u[std::size_t(comp)][std::size_t(i2)] -
                                 u[std::size_t(comp)][std::size_t(i1)];
                m2 += d * d;
            }
            const double m = std::sqrt(m2);
            double mp = m2;
            for (int p = 0; p < 4; ++p) { // p indexes S_2..S_5
                sum[p] += mp;
                sum2[p] += mp * mp;
                mp *= m;
            }
        }
        out.r.push_back(double(c) * dx);
        std::array<double, 4> S{}, se{};
        for (int p = 0; p < 4; ++p) {
            S[std::size_t(p)] = sum[p] / double(samples);
            const double var = sum2[p] / double(samples) - S[std::size_t(p)] * S[std::size_t(p)];
            se[std::size_t(p)] = std::sqrt(std::max(var, 0.0) / double(samples));
        }
        out.S.push_back(S);
        out.stderr_.push_back(se);
    }

    for (int p = 0; p < 4; ++p) {
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < out.r.size(); ++i)
            if (out.S[i][std::size_t(p)] > 0) {
                lx.push_back(std::log(out.r[i]));
                ly.push_back(std::log(out.S[i][std::size_t(p)]));
            }
        ScalingFit& z = out.zeta[std::size_t(p)];
        z.lo = out.r.front();
        z.hi = out.r.back();
        if (lx.size() < 2) { // e.g. constant field: S_p = 0 everywhere
            z.exponent = std::numeric_limits<double>::quiet_NaN();
            z.stderr_ = std::numeric_limits<double>::quiet_NaN();
        } else {
            const LineFit f = least_squares(lx, ly);
            z.exponent = f.slope;
            z.stderr_ = f.stderr_;
        }
    }
    return out;
}

double zeta_K41(double p) { return p / 3.0; }

double zeta_SL94(double p) { return p / 9.0 + 2.0 * (1.0 - std::pow(2.0 / 3.0, p / 3.0)); }

RealField helicity_density(const std::array<RealField, 3>& u,
                           const std::array<RealField, 3>& omega) {
    const std::size_t n = u[0].size();
    if (omega[0].size() != n)
        throw std::invalid_argument("helicity_density: field sizes differ");
    RealField h(n, 0.0);
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < n; ++i)
            h[i] += u[std::size_t(c)][i] * omega[std::size_t(c)][i];
    return h;
}

double reynolds_estimate(double k_L, double k_eta) {
    if (!(k_L > 0) || !(k_eta >= k_L))
        throw std::invalid_argument("reynolds_estimate: need k_eta >= k_L > 0");
    return std::pow(k_eta / k_L, 4.0 / 3.0);
}

int k_peak(const ShellSpectrum& velocity_spectrum) {
    int best = 1;
    double bv = -1;
    for (std::size_t s = 1; s < velocity_spectrum.E.size(); ++s) {
        const double v = double(s) * double(s) * velocity_spectrum.E[s];
        if (v > bv) {
            bv = v;
            best = int(s);
        }
    }
    return best;
}

double kurtosis_excess(const RealField& f) {
    const std::size_t n = f.size();
    if (n == 0) throw std::invalid_argument("kurtosis_excess: empty field");
    double m1 = 0;
    for (double v : f) m1 += v;
    m1 /= double(n);
    double m2 = 0, m4 = 0;
    for (double v : f) {
        const double d = v - m1;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= double(n);
    m4 /= double(n);
    if (!(m2 > 0)) throw std::invalid_argument("kurtosis_excess: zero variance");
    return m4 / (m2 * m2) - 3.0;
}

} // namespace turbogen
