#pragma once
#include "turbogen/circuit.hpp"
#include "turbogen/lattice.hpp"
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace turbogen {

// 2^{n_q} complex amplitudes; qubit m toggles bit (m-1) of the flat index.
template <typename T>
struct StateVectorT {
    int n_q = 0;
    std::vector<std::complex<T>> amp;

    static StateVectorT ground(int n_q) {
        StateVectorT s;
        s.n_q = n_q;
        s.amp.assign(std::size_t(1) << n_q, std::complex<T>(0));
        s.amp[0] = std::complex<T>(1);
        return s;
    }
    double norm2() const {
        double acc = 0;
        for (const auto& a : amp) acc += double(a.real()) * a.real() + double(a.imag()) * a.imag();
        return acc;
    }
};

using StateVector = StateVectorT<double>;

template <typename T>
void apply_u3(StateVectorT<T>& s, int qubit, const Mat2& u) {
    if (qubit < 1 || qubit > s.n_q) throw std::domain_error("apply_u3: qubit out of range");
    const std::size_t mask = std::size_t(1) << (qubit - 1);
    const std::size_t lo = mask - 1, half = s.amp.size() >> 1;
    const std::complex<T> u00(T(u[0].real()), T(u[0].imag())), u01(T(u[1].real()), T(u[1].imag())),
        u10(T(u[2].real()), T(u[2].imag())), u11(T(u[3].real()), T(u[3].imag()));
    auto* p = s.amp.data();
    for (std::size_t g = 0; g < half; ++g) {
        const std::size_t i0 = ((g & ~lo) << 1) | (g & lo);
        const std::size_t i1 = i0 | mask;
        const std::complex<T> a = p[i0], b = p[i1];
        p[i0] = u00 * a + u01 * b;
        p[i1] = u10 * a + u11 * b;
    }
}

template <typename T>
void apply_cx(StateVectorT<T>& s, int control, int target) {
    if (control == target) throw std::domain_error("apply_cx: control equals target");
    if (control < 1 || control > s.n_q || target < 1 || target > s.n_q)
        throw std::domain_error("apply_cx: qubit out of range");
    const std::size_t cmask = std::size_t(1) << (control - 1);
    const std::size_t tmask = std::size_t(1) << (target - 1);
    const std::size_t lo = tmask - 1, half = s.amp.size() >> 1;
    auto* p = s.amp.data();
    for (std::size_t g = 0; g < half; ++g) {
        const std::size_t i0 = ((g & ~lo) << 1) | (g & lo);
        if (i0 & cmask) std::swap(p[i0], p[i0 | tmask]);
    }
}

template <typename T>
StateVectorT<T> run(const GateList& gates, int n_q) {
    auto s = StateVectorT<T>::ground(n_q);
    for (const auto& g : gates) {
        if (g.kind == Gate::U3)
            apply_u3(s, g.q0, u3_matrix(g.theta, g.phi, g.gamma));
        else
            apply_cx(s, g.q0, g.q1);
    }
    return s;
}

inline StateVector run(const GateList& gates, int n_q) { return run<double>(gates, n_q); }

// spectral coefficients of both spin components on the shared grid
struct SpinorField {
    GridSpec grid;
    std::vector<std::complex<double>> psi_plus;  // flat-index order
    std::vector<std::complex<double>> psi_minus;
    double normalization = 1.0;
    double norm_up = 0.0, norm_down = 0.0; // state norms after the circuits
};

// runs both circuits (precision "double" or "single") and packs the spinor
SpinorField prepare_spinor(const CircuitSpec& up, const CircuitSpec& down,
                           const std::string& precision = "double");

// dense 2^n x 2^n unitary product oracle for small n (<= 12)
std::vector<std::complex<double>> dense_circuit_matrix(const GateList& gates, int n_q);

} // namespace turbogen
