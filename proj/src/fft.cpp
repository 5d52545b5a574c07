#include "turbogen/fft.hpp"
#include <fftw3.h>
#include <stdexcept>

namespace turbogen {

void fft_nd(std::vector<std::complex<double>>& a, const std::vector<std::int64_t>& dims,
            int sign, bool scale) {
    std::int64_t total = 1;
    for (auto d : dims) total *= d;
    if (std::int64_t(a.size()) != total) throw std::invalid_argument("fft_nd: size mismatch");
    std::vector<int> rdims(dims.rbegin(), dims.rend()); // FFTW wants slowest-first
    auto* buf = reinterpret_cast<fftw_complex*>(a.data());
    fftw_plan plan = fftw_plan_dft(int(rdims.size()), rdims.data(), buf, buf,
                                   sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fft_nd: planning failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    if (scale) {
        const double inv = 1.0 / double(total);
        for (auto& z : a) z *= inv;
    }
}

static std::vector<std::int64_t> grid_dims(const GridSpec& g) {
    std::vector<std::int64_t> d(g.d);
    for (int a = 0; a < g.d; ++a) d[a] = g.extent(a);
    return d;
}

void to_physical(std::vector<std::complex<double>>& a, const GridSpec& grid) {
    fft_nd(a, grid_dims(grid), +1, false);
}

void to_spectral(std::vector<std::complex<double>>& a, const GridSpec& grid) {
    fft_nd(a, grid_dims(grid), -1, true);
}

std::vector<std::vector<double>> wavenumber_tables(const GridSpec& grid) {
    std::vector<std::vector<double>> k(grid.d);
    for (int a = 0; a < grid.d; ++a) {
        k[a].resize(std::size_t(grid.extent(a)));
        for (std::int64_t j = 0; j < grid.extent(a); ++j)
            k[a][std::size_t(j)] = double(index_to_wavenumber(j, grid.n_alpha[a]));
    }
    return k;
}

void spectral_gradient(std::vector<std::complex<double>>& a, const GridSpec& grid, int axis) {
    const auto kt = wavenumber_tables(grid);
    const int off = grid.bit_offset(axis);
    const std::int64_t m = grid.extent(axis) - 1;
    for (std::size_t f = 0; f < a.size(); ++f) {
        const double k = kt[axis][std::size_t((std::int64_t(f) >> off) & m)];
        a[f] *= std::complex<double>(0, k);
    }
}

} // namespace turbogen
