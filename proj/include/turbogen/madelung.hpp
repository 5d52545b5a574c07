#pragma once
#include "turbogen/fft.hpp"
#include "turbogen/lattice.hpp"
#include "turbogen/simulator.hpp"
#include <array>
#include <complex>
#include <vector>

namespace turbogen {

using RealField = std::vector<double>;
using SpecField = std::vector<std::complex<double>>;

// Table I kernels: density c++ = c-- = 1; momentum c++ = c-- = k_a/2 + k'_a;
// spin1 c+- = c-+ = 1; spin2 c+- = -i, c-+ = +i; spin3 c++ = 1, c-- = -1.
struct KernelKind {
    enum Tag { density, momentum, spin1, spin2, spin3 } tag = density;
    int axis = -1; // momentum only

    static KernelKind Density() { return {density, -1}; }
    static KernelKind Momentum(int axis) { return {momentum, axis}; }
    static KernelKind Spin(int i) { return {i == 1 ? spin1 : i == 2 ? spin2 : spin3, -1}; }
};

// c_{s,s'}(k,k'); s, s' are 0 for spin-up, 1 for spin-down
std::complex<double> kernel_value(const KernelKind& kind, int s, int sp,
                                  const std::vector<std::int64_t>& k,
                                  const std::vector<std::int64_t>& kp);

// brute-force truncated convolution over the product of per-dimension K sets
std::complex<double> convolve_observable_direct(const SpinorField& spinor, const KernelKind& kind,
                                                const std::vector<std::int64_t>& k);

struct Triple {
    std::int64_t m, n;
    std::complex<double> c;
};

struct MeasurementOperator {
    KernelKind kind;
    std::vector<std::int64_t> j; // target multi-index
    std::vector<Triple> triples;
};

// density/momentum only (spin kernels have no spin-diagonal operator form)
MeasurementOperator build_measurement_operator(const KernelKind& kind,
                                               const std::vector<std::int64_t>& j,
                                               const GridSpec& grid);

// sum over triples of c * psi[m] * conj(psi[n])
std::complex<double> expectation(const MeasurementOperator& op, const SpecField& psi);

// ((Q+Q^dag)/2, (Q-Q^dag)/(2i)); E(H1) + i E(H2) = E(Q) exactly
std::pair<MeasurementOperator, MeasurementOperator> hermitian_split(const MeasurementOperator& op);

struct FieldSet {
    GridSpec grid;
    RealField rho;
    std::array<RealField, 3> J;
    std::array<RealField, 3> u;
    std::array<RealField, 3> s;
    double eps_rho = 0;
    std::int64_t regularized = 0; // grid points with rho < eps_rho
};

// physical-space spin components (unnormalized backward transforms)
std::pair<SpecField, SpecField> physical_components(const SpinorField& spinor);

RealField density_field(const SpinorField& spinor);
std::vector<RealField> momentum_field(const SpinorField& spinor);

// u = J / max(rho, eps_rho), eps_rho = 1e-12 max(rho); throws if > 1% of the
// points needed regularization
std::vector<RealField> velocity_field(const RealField& rho, const std::vector<RealField>& J,
                                      std::int64_t* regularized_out = nullptr);

// Table I sign convention for s2; at regularized points s = (0,0,1)
std::array<RealField, 3> spin_field(const SpinorField& spinor);

// full pipeline for d=3 grids
FieldSet make_fields(const SpinorField& spinor);

// opt-in 3/2-rule dealiased spectral observables (exact truncated convolution
// even when the spinor support exceeds the central half-band)
SpecField density_hat_dealiased(const SpinorField& spinor);
SpecField momentum_hat_dealiased(const SpinorField& spinor, int axis);

} // namespace turbogen
