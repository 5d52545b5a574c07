#pragma once
#include "turbogen/circuit.hpp"
#include "turbogen/lattice.hpp"
#include <cstdint>
#include <string>
#include <vector>

namespace turbogen {

struct DiagnosticsConfig {
    double spectrum_fit_lo = 0, spectrum_fit_hi = 0; // velocity-spectrum fit decade; 0 = auto
    double vsf_fit_lo = 0, vsf_fit_hi = 0;           // spin-spectrum fit decade; 0 = reuse above
    double sf_r_lo = 0, sf_r_hi = 0;                 // separation range; 0 = [8 eta_grid, L/8]
    std::int64_t sf_samples = 200000;
    std::uint64_t sf_seed = 424242;
    int sf_separations = 5;
    int pdf_bins = 80;
    int qr_bins = 128;
    double k_L = 1.0;
    double k_eta_factor = 5.0; // k_eta = factor * k_peak
};

struct RunConfig {
    GridSpec grid;
    ShapingParams shaping;
    int R = 4;
    int r = 10;
    std::vector<PairSet> pair_sets;
    std::uint64_t seed_up = 0, seed_down = 0;
    bool allow_equal_seeds = false;
    DiagnosticsConfig diag;
    std::string out_dir = "out";
    std::string precision = "double";    // or "single"
    std::string observables = "both";    // physical | spectral | both
    std::string diagnostics = "all";     // or comma list of spectra,pdf,qr,sf,helicity

    CircuitSpec circuit(std::uint64_t seed) const;
    void validate() const;
    bool emit_physical() const { return observables != "spectral"; }
    bool emit_spectral() const { return observables != "physical"; }
    bool diag_enabled(const std::string& name) const;
};

// plain-text sections [grid] [shaping] [circuit] [pairs.N] [diagnostics] [output];
// unknown keys and missing required keys are errors reported with key paths
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");

// scalar grammar: decimal literals, integer fractions "5/3", and pi multiples
// "pi" / "2pi" / "0.5pi"
double parse_real(const std::string& text);

// "(a,b) (c,d) ..." with 1-based indices
PairSet parse_pairs(const std::string& text);

} // namespace turbogen
