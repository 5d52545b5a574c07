#include "turbogen/circuit.hpp"
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace turbogen {

void ShapingParams::validate() const {
    if (!(L > 0)) throw std::invalid_argument("shaping: L must be > 0");
    if (!(eta > 0)) throw std::invalid_argument("shaping: eta must be > 0");
    if (beta < 0) throw std::invalid_argument("shaping: beta must be >= 0");
    if (c_L < 0) throw std::invalid_argument("shaping: c_L must be >= 0");
    if (c_eta < 0) throw std::invalid_argument("shaping: c_eta must be >= 0");
}

void CircuitSpec::validate() const {
    shaping.validate();
    if (r < 0 || R < 0) throw std::invalid_argument("circuit: r and R must be >= 0");
    if (int(pair_sets.size()) != R)
        throw std::invalid_argument("circuit: pair set count must equal R");
    const int nq = grid.n_q();
    for (const auto& D : pair_sets)
        for (auto [i, j] : D) {
            if (i < 1 || i > nq || j < 1 || j > nq)
                throw std::invalid_argument("circuit: pair qubit index out of range (1-based)");
            if (i == j) throw std::invalid_argument("circuit: pair with equal control and target");
        }
}

Mat2 u3_matrix(double theta, double phi, double gamma) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const std::complex<double> eg(std::cos(gamma), std::sin(gamma));
    const std::complex<double> ep(std::cos(phi), std::sin(phi));
    return {std::complex<double>(c, 0), -eg * s, ep * s, ep * eg * c};
}

double qubit_wavenumber(int m, const GridSpec& grid) {
    if (m < 1 || m > grid.n_q()) throw std::domain_error("qubit_wavenumber: m out of range");
    int off = 0;
    for (int a = 0; a < grid.d; ++a) {
        if (m <= off + grid.n_alpha[a]) return std::ldexp(1.0, m - 1 - off);
        off += grid.n_alpha[a];
    }
    throw std::domain_error("qubit_wavenumber: unreachable");
}

double shaping_factor(double kappa, const ShapingParams& p) {
    if (!(kappa > 0)) throw std::domain_error("shaping_factor: kappa must be > 0");
    const double kL = kappa * p.L;
    const double fL = std::pow(kL / std::sqrt(kL * kL + p.c_L), p.p0 + p.lambda);
    const double ke = kappa * p.eta;
    const double feta =
        std::exp(-p.beta * (std::pow(ke * ke * ke * ke + std::pow(p.c_eta, 4), 0.25) - p.c_eta));
    return std::pow(kappa, -p.lambda) * fL * feta;
}

double NormalStream::next() {
    const double two_pi = 6.283185307179586476925287;
    const std::uint64_t x = eng_(), y = eng_();
    const double u1 = double((x >> 11) + 1) * 0x1.0p-53; // (0,1]
    const double u2 = double(y >> 11) * 0x1.0p-53;       // [0,1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

AngleTable sample_angles(const CircuitSpec& spec) {
    spec.validate();
    const int nq = spec.grid.n_q();
    AngleTable t;
    t.n_q = nq;
    t.r = spec.r;
    t.R = spec.R;
    t.a.resize(std::size_t(nq) * spec.r * spec.R);
    std::vector<double> sf(nq);
    for (int m = 1; m <= nq; ++m) sf[m - 1] = shaping_factor(qubit_wavenumber(m, spec.grid), spec.shaping);
    NormalStream ns(spec.seed);
    for (int ell = 1; ell <= spec.R; ++ell)
        for (int m = 1; m <= nq; ++m)
            for (int l = 1; l <= spec.r; ++l) {
                auto& e = t.a[std::size_t(((ell - 1) * nq + (m - 1)) * spec.r + (l - 1))];
                e[0] = ns.next() * sf[m - 1];
                e[1] = ns.next() * sf[m - 1];
                e[2] = ns.next() * sf[m - 1];
            }
    return t;
}

GateList build_circuit(const CircuitSpec& spec) {
    const AngleTable t = sample_angles(spec);
    const int nq = spec.grid.n_q();
    GateList g;
    g.reserve(std::size_t(nq) * spec.r * spec.R + 64);
    for (int ell = 1; ell <= spec.R; ++ell) {
        for (int m = 1; m <= nq; ++m)
            for (int l = 1; l <= spec.r; ++l) {
                const auto& a = t.at(m, l, ell);
                g.push_back({Gate::U3, m, 0, a[0], a[1], a[2]});
            }
        for (auto [i, j] : spec.pair_sets[std::size_t(ell - 1)])
            g.push_back({Gate::CX, i, j, 0, 0, 0});
    }
    return g;
}

std::vector<PairSet> reference_pairs() {
    return {
        {{1, 3},  {2, 4},   {5, 6},   {8, 9},   {9, 7},   {10, 12}, {11, 13}, {14, 15},
         {17, 18}, {18, 16}, {19, 21}, {20, 22}, {23, 24}, {26, 27}, {27, 25}},
        {{1, 11}, {10, 20}, {19, 2}, {3, 13}, {12, 22}, {21, 4}, {3, 12}, {12, 21}, {21, 3}},
        {{2, 12}, {11, 21}, {20, 3}, {1, 13}, {10, 22}, {19, 4}, {4, 13}, {13, 22}, {22, 4}},
        {{1, 12}, {10, 21}, {19, 3}, {2, 13}, {11, 22}, {20, 4}, {5, 14}, {14, 23}, {23, 5}},
    };
}

void export_gates(const GateList& gates, std::ostream& os) {
    char buf[128];
    for (const auto& g : gates) {
        if (g.kind == Gate::U3) {
            std::snprintf(buf, sizeof buf, "u3 q%d %.17g %.17g %.17g\n", g.q0, g.theta, g.phi,
                          g.gamma);
        } else {
            std::snprintf(buf, sizeof buf, "cx q%d q%d\n", g.q0, g.q1);
        }
        os << buf;
    }
}

GateList parse_gates(std::istream& is) {
    GateList g;
    std::string line;
    auto qubit = [](const std::string& tok) {
        if (tok.size() < 2 || tok[0] != 'q') throw std::runtime_error("gate list: bad qubit token '" + tok + "'");
        return std::stoi(tok.substr(1));
    };
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string op;
        ss >> op;
        if (op == "u3") {
            std::string q;
            double t, p, ga;
            ss >> q >> t >> p >> ga;
            if (!ss) throw std::runtime_error("gate list: malformed u3 line: " + line);
            g.push_back({Gate::U3, qubit(q), 0, t, p, ga});
        } else if (op == "cx") {
            std::string qa, qb;
            ss >> qa >> qb;
            if (!ss) throw std::runtime_error("gate list: malformed cx line: " + line);
            g.push_back({Gate::CX, qubit(qa), qubit(qb), 0, 0, 0});
        } else {
            throw std::runtime_error("gate list: unknown gate '" + op + "'");
        }
    }
    return g;
}

} // namespace turbogen
