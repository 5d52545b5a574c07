#pragma once
#include "turbogen/fft.hpp"
#include "turbogen/lattice.hpp"
#include "turbogen/madelung.hpp"
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace turbogen {

struct ShellSpectrum {
    std::vector<double> E;   // indexed by integer shell, bin 0 kept for Parseval closure
    std::string field_label;
};

struct ScalingFit {
    double lo = 0, hi = 0; // fit range (k or r)
    double exponent = 0;
    double stderr_ = 0;
};

// omega = i k x u_hat, inverse-transformed; d=3 only
std::array<RealField, 3> vorticity_from_velocity(const std::array<RealField, 3>& u,
                                                 const GridSpec& grid);

// Eq-(5)-style spin vorticity: (1/4) eps_{ijk} s_i grad s_j x grad s_k.
// table_convention=true flips the second component internally (the Table I
// s2 sign is opposite to the Pauli expansion the formula assumes).
std::array<RealField, 3> vorticity_from_spin(const std::array<RealField, 3>& s,
                                             const GridSpec& grid, bool table_convention = true);

// gradient of a real field along one axis (spectral)
RealField real_gradient(const RealField& f, const GridSpec& grid, int axis);

// bins sum |fhat|^2 over shells |k| in [s-1/2, s+1/2)
ShellSpectrum shell_spectrum(const SpecField& fhat, const GridSpec& grid,
                             const std::string& label = "");
ShellSpectrum shell_spectrum(const std::vector<SpecField>& fhats, const GridSpec& grid,
                             const std::string& label = "");
// convenience: spectra of real fields (forward transform applied internally)
ShellSpectrum shell_spectrum_real(const std::vector<const RealField*>& fields,
                                  const GridSpec& grid, const std::string& label = "");

// least-squares slope of log E vs log k over shells [k_lo, k_hi]
ScalingFit fit_power_law(const ShellSpectrum& spec, double k_lo, double k_hi);

struct Histogram {
    std::vector<double> edges;   // size bins+1
    std::vector<double> center;  // size bins
    std::vector<double> density; // normalized so sum(density*width) = 1
    std::vector<std::int64_t> count;
    std::int64_t total = 0;
};

struct StretchedExpFit {
    double c = 0, beta = 0;
    std::int64_t tail_count = 0; // samples beyond 2 (in omega' units)
    bool reliable = false;       // tail_count >= 1e3
    Histogram hist;
};

// P = A exp(-c v^beta) fitted on log-spaced bins over the top two decades of
// the sample range by count-weighted linearized least squares (beta scanned
// on [0.05, 3] step 0.01); samples are used as-is (no normalization)
StretchedExpFit fit_stretched_exp(const std::vector<double>& samples, int bins = 80);

// normalizes components by omega' = sqrt(<|omega|^2>/3), histograms component
// magnitudes |omega_i|, and tail-fits the stretched exponential
StretchedExpFit vorticity_pdf(const std::array<RealField, 3>& omega, int bins = 80);

struct QRResult {
    RealField Q, R;
    double skewness_R = 0;     // bulk skewness: |R| clipped at 20 robust sigma
    double skewness_R_raw = 0; // unclipped moment skewness (reported, not asserted)
    // joint histogram over [-20 sigma_R, 20 sigma_R] x [-20 sigma_Q, 20 sigma_Q]
    int bins = 0;
    double r_lim = 0, q_lim = 0;
    std::vector<double> joint; // bins x bins, density (integrates to 1 over range)
    double in_range_fraction = 0;
};

// S_ij = du_j/dx_i (spectral); Q = -S_ij S_ji / 2; R = -det(S)
QRResult qr_invariants(const std::array<RealField, 3>& u, const GridSpec& grid, int bins = 128);

// overlay data for the R-Q plane: the Vieillefosse curve 27 R^2 + 4 Q^3 = 0
std::vector<std::pair<double, double>> vieillefosse_curve(double r_lim, int points = 257);

struct StructureFunctions {
    std::vector<double> r;                      // physical separations
    std::vector<std::array<double, 4>> S;       // S_2, S_3, S_4, S_5 per separation
    std::vector<std::array<double, 4>> stderr_; // Monte Carlo standard errors
    std::array<ScalingFit, 4> zeta;             // fitted scaling exponents
};

// Monte Carlo |u(x+r e_axis) - u(x)| over random points and axis-aligned
// separations log-spaced in [r_lo, r_hi] (grid-cell rounded, deduplicated);
// per-separation counter-based substreams from one root seed
StructureFunctions structure_functions(const std::array<RealField, 3>& u, const GridSpec& grid,
                                       double r_lo, double r_hi, std::int64_t samples,
                                       std::uint64_t seed, int n_sep = 5);

double zeta_K41(double p);  // p/3
double zeta_SL94(double p); // p/9 + 2(1 - (2/3)^{p/3})

RealField helicity_density(const std::array<RealField, 3>& u, const std::array<RealField, 3>& omega);

// Re = (k_eta / k_L)^{4/3}
double reynolds_estimate(double k_L, double k_eta);

// argmax over k >= 1 of k^2 E(k) (enstrophy-spectrum peak)
int k_peak(const ShellSpectrum& velocity_spectrum);

double kurtosis_excess(const RealField& f);

} // namespace turbogen
