#include "turbogen/lattice.hpp"
#include <stdexcept>
#include <string>

namespace turbogen {

GridSpec::GridSpec(std::vector<int> n, double length) : d(int(n.size())), n_alpha(std::move(n)) {
    if (d == 0) throw std::invalid_argument("GridSpec: empty dimension list");
    for (int na : n_alpha)
        if (na < 1 || na > 62) throw std::invalid_argument("GridSpec: qubit count out of range");
    domain_length.assign(d, length);
}

int GridSpec::n_q() const {
    int s = 0;
    for (int na : n_alpha) s += na;
    return s;
}

int GridSpec::bit_offset(int axis) const {
    int s = 0;
    for (int i = 0; i < axis; ++i) s += n_alpha[i];
    return s;
}

std::int64_t index_to_wavenumber(std::int64_t j, int n) {
    const std::int64_t N = std::int64_t(1) << n, h = N / 2;
    if (j < 0 || j >= N) throw std::domain_error("index_to_wavenumber: j out of range");
    return (j + h) % N - h;
}

std::int64_t wavenumber_to_index(std::int64_t k, int n) {
    const std::int64_t N = std::int64_t(1) << n, h = N / 2;
    if (k < -h || k > h - 1) throw std::domain_error("wavenumber_to_index: k out of range");
    return k + (k < 0 ? N : 0);
}

std::vector<std::int64_t> summation_set_K(std::int64_t k, int n) {
    const std::int64_t h = std::int64_t(1) << (n - 1);
    if (k < -h || k > h - 1) throw std::domain_error("summation_set_K: k out of range");
    const std::int64_t lo = std::max(-h, -h - k), hi = std::min(h - 1, h - 1 - k);
    std::vector<std::int64_t> out;
    out.reserve(std::size_t(hi - lo + 1));
    for (std::int64_t kp = lo; kp <= hi; ++kp) out.push_back(kp);
    return out;
}

std::vector<std::int64_t> summation_set_J(std::int64_t j, int n) {
    const std::int64_t N = std::int64_t(1) << n, h = N / 2;
    if (j < 0 || j >= N) throw std::domain_error("summation_set_J: j out of range");
    std::vector<std::int64_t> out;
    if (j < h) {
        for (std::int64_t jp = 0; jp <= h - 1 - j; ++jp) out.push_back(jp);
        for (std::int64_t jp = h; jp < N; ++jp) out.push_back(jp);
    } else {
        for (std::int64_t jp = 0; jp < h; ++jp) out.push_back(jp);
        for (std::int64_t jp = 3 * h - j; jp < N; ++jp) out.push_back(jp);
    }
    return out;
}

std::int64_t flat_index_m(const std::vector<std::int64_t>& j,
                          const std::vector<std::int64_t>& j_prime,
                          const GridSpec& grid) {
    if (int(j.size()) != grid.d || int(j_prime.size()) != grid.d)
        throw std::invalid_argument("flat_index_m: dimension mismatch");
    std::int64_t flat = 0;
    for (int a = 0; a < grid.d; ++a) {
        const int n = grid.n_alpha[a];
        const std::int64_t h = std::int64_t(1) << (n - 1);
        const std::int64_t ksum = index_to_wavenumber(j[a], n) + index_to_wavenumber(j_prime[a], n);
        if (ksum < -h || ksum > h - 1)
            throw std::domain_error("flat_index_m: coupled pair falls off the band (dimension " +
                                    std::to_string(a) + ")");
        flat += wavenumber_to_index(ksum, n) << grid.bit_offset(a);
    }
    return flat;
}

std::int64_t flat_index_n(const std::vector<std::int64_t>& j_prime, const GridSpec& grid) {
    if (int(j_prime.size()) != grid.d)
        throw std::invalid_argument("flat_index_n: dimension mismatch");
    std::int64_t flat = 0;
    for (int a = 0; a < grid.d; ++a) {
        if (j_prime[a] < 0 || j_prime[a] >= grid.extent(a))
            throw std::domain_error("flat_index_n: component out of range");
        flat += j_prime[a] << grid.bit_offset(a);
    }
    return flat;
}

std::vector<std::int64_t> unflatten(std::int64_t flat, const GridSpec& grid) {
    std::vector<std::int64_t> j(grid.d);
    for (int a = 0; a < grid.d; ++a) {
        j[a] = (flat >> grid.bit_offset(a)) & (grid.extent(a) - 1);
    }
    return j;
}

} // namespace turbogen
