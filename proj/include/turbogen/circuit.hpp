#pragma once
#include "turbogen/lattice.hpp"
#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <utility>
#include <vector>

namespace turbogen {

struct ShapingParams {
    double lambda = 5.0 / 3.0;
    double L = 6.283185307179586476925287;
    double c_L = 1.0;
    double p0 = 2.0;
    double eta = 0.01;
    double c_eta = 0.01;
    double beta = 15.0;

    void validate() const; // L>0, eta>0, beta>=0, c_L>=0, c_eta>=0
};

using PairSet = std::vector<std::pair<int, int>>; // (control, target), 1-based

struct CircuitSpec {
    GridSpec grid;
    int R = 4;                    // module repetitions
    int r = 10;                   // rotations per qubit per module
    std::vector<PairSet> pair_sets; // one set per module, |pair_sets| = R
    ShapingParams shaping;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Gate {
    enum Kind { U3, CX } kind;
    int q0 = 0;                   // U3 qubit or CX control (1-based)
    int q1 = 0;                   // CX target
    double theta = 0, phi = 0, gamma = 0;
};

using GateList = std::vector<Gate>;

using Mat2 = std::array<std::complex<double>, 4>; // row-major [u00,u01,u10,u11]

// [[cos(t/2), -e^{ig} sin(t/2)], [e^{ip} sin(t/2), e^{i(p+g)} cos(t/2)]]
Mat2 u3_matrix(double theta, double phi, double gamma);

// kappa = 2^{m-1-sum_{i<dir} n_i} for the direction containing qubit m
double qubit_wavenumber(int m, const GridSpec& grid);

// kappa^{-lambda} * f_L(kappa L) * f_eta(kappa eta)
double shaping_factor(double kappa, const ShapingParams& p);

// Deterministic standard normals: mt19937_64 raw outputs, one normal per two
// draws via the Box-Muller cosine branch; u1 in (0,1], u2 in [0,1).
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : eng_(seed) {}
    double next();
private:
    std::mt19937_64 eng_;
};

// flat angle table: index [(ell-1)*n_q + (m-1)]*r + (l-1), each entry (theta,phi,gamma)
struct AngleTable {
    int n_q = 0, r = 0, R = 0;
    std::vector<std::array<double, 3>> a;
    const std::array<double, 3>& at(int m, int l, int ell) const {
        return a[std::size_t(((ell - 1) * n_q + (m - 1)) * r + (l - 1))];
    }
};

// draws in fixed order: ell outer, m middle, l inner; theta, phi, gamma
AngleTable sample_angles(const CircuitSpec& spec);

// per module ell: all rotation gates (qubit-major, l inner), then D_ell pairs in order
GateList build_circuit(const CircuitSpec& spec);

// reference entangler pair sets D1..D4 for the full 27-qubit grid (9,9,9)
std::vector<PairSet> reference_pairs();

// plain text, one gate per line: "u3 q<m> <theta> <phi> <gamma>" / "cx q<i> q<j>",
// angles with 17 significant digits
void export_gates(const GateList& gates, std::ostream& os);
GateList parse_gates(std::istream& is);

} // namespace turbogen
