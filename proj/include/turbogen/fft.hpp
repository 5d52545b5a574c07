#pragma once
#include "turbogen/lattice.hpp"
#include <complex>
#include <cstdint>
#include <vector>

namespace turbogen {

// DFT convention: psi(x) = sum_k psihat(k) e^{ikx}  (spectral -> physical is the
// unnormalized e^{+ikx} transform; physical -> spectral carries 1/N).

// general rank-d c2c transform; dims listed fastest-varying first (dimension 0
// of the lattice ordering); sign +1 for e^{+ikx}, -1 for e^{-ikx};
// scale divides by the total point count
void fft_nd(std::vector<std::complex<double>>& a, const std::vector<std::int64_t>& dims,
            int sign, bool scale);

// in-place spectral -> physical
void to_physical(std::vector<std::complex<double>>& a, const GridSpec& grid);
// in-place physical -> spectral
void to_spectral(std::vector<std::complex<double>>& a, const GridSpec& grid);

// signed wavenumber lookup per axis: k[axis][j]
std::vector<std::vector<double>> wavenumber_tables(const GridSpec& grid);

// multiply spectral field by (i k_axis)
void spectral_gradient(std::vector<std::complex<double>>& a, const GridSpec& grid, int axis);

} // namespace turbogen
