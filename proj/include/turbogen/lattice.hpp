#pragma once
#include <cstdint>
#include <vector>

namespace turbogen {

// Grid geometry: d dimensions, 2^{n_alpha} points each, dimension 0 least
// significant in the flat amplitude index.
struct GridSpec {
    int d = 0;
    std::vector<int> n_alpha;        // qubits per dimension
    std::vector<double> domain_length; // box size per dimension, default 2*pi

    GridSpec() = default;
    explicit GridSpec(std::vector<int> n, double length = 6.283185307179586476925287);

    int n_q() const;                  // total qubit count
    std::int64_t extent(int axis) const { return std::int64_t(1) << n_alpha[axis]; }
    std::int64_t amplitude_count() const { return std::int64_t(1) << n_q(); }
    int bit_offset(int axis) const;   // sum of n_i for i < axis
};

// k = mod(j + 2^{n-1}, 2^n) - 2^{n-1}
std::int64_t index_to_wavenumber(std::int64_t j, int n);

// j = k + 2^n * [1 - H(k)], H(0) = 1
std::int64_t wavenumber_to_index(std::int64_t k, int n);

// Z cap [-2^{n-1}, 2^{n-1}-1] cap [-2^{n-1}-k, 2^{n-1}-1-k], ascending
std::vector<std::int64_t> summation_set_K(std::int64_t k, int n);

// index-space counterpart, ascending
std::vector<std::int64_t> summation_set_J(std::int64_t j, int n);

// flat index of the multi-index whose per-dimension wavenumber is k(j)+k(j');
// throws if any component leaves the band
std::int64_t flat_index_m(const std::vector<std::int64_t>& j,
                          const std::vector<std::int64_t>& j_prime,
                          const GridSpec& grid);

// flat index of j' itself
std::int64_t flat_index_n(const std::vector<std::int64_t>& j_prime,
                          const GridSpec& grid);

// split a flat amplitude index into per-dimension sub-indices
std::vector<std::int64_t> unflatten(std::int64_t flat, const GridSpec& grid);

} // namespace turbogen
