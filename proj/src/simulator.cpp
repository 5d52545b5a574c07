#include "turbogen/simulator.hpp"
#include <string>

namespace turbogen {

SpinorField prepare_spinor(const CircuitSpec& up, const CircuitSpec& down,
                           const std::string& precision) {
    if (up.grid.n_alpha != down.grid.n_alpha)
        throw std::invalid_argument("prepare_spinor: grid mismatch between spin components");
    if (precision != "double" && precision != "single")
        throw std::invalid_argument("prepare_spinor: precision must be 'single' or 'double'");
    SpinorField f;
    f.grid = up.grid;
    const int nq = up.grid.n_q();
    auto run_one = [&](const CircuitSpec& spec, std::vector<std::complex<double>>& out, double& nrm) {
        const GateList gates = build_circuit(spec);
        if (precision == "double") {
            auto s = run<double>(gates, nq);
            nrm = std::sqrt(s.norm2());
            out = std::move(s.amp);
        } else {
            auto s = run<float>(gates, nq);
            nrm = std::sqrt(s.norm2());
            out.assign(s.amp.begin(), s.amp.end());
        }
    };
    run_one(up, f.psi_plus, f.norm_up);
    run_one(down, f.psi_minus, f.norm_down);
    return f;
}

std::vector<std::complex<double>> dense_circuit_matrix(const GateList& gates, int n_q) {
    if (n_q > 12) throw std::invalid_argument("dense_circuit_matrix: n_q too large for dense oracle");
    const std::size_t dim = std::size_t(1) << n_q;
    std::vector<std::complex<double>> U(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) U[i * dim + i] = 1.0;
    std::vector<std::complex<double>> G(dim * dim), P(dim * dim);
    for (const auto& g : gates) {
        std::fill(G.begin(), G.end(), std::complex<double>(0));
        if (g.kind == Gate::U3) {
            const Mat2 u = u3_matrix(g.theta, g.phi, g.gamma);
            const std::size_t mask = std::size_t(1) << (g.q0 - 1);
            for (std::size_t c = 0; c < dim; ++c) {
                if (c & mask) {
                    G[(c ^ mask) * dim + c] = u[1]; // row without bit, col with bit
                    G[c * dim + c] = u[3];
                } else {
                    G[c * dim + c] = u[0];
                    G[(c | mask) * dim + c] = u[2];
                }
            }
        } else {
            const std::size_t cm = std::size_t(1) << (g.q0 - 1);
            const std::size_t tm = std::size_t(1) << (g.q1 - 1);
            for (std::size_t c = 0; c < dim; ++c) G[((c & cm) ? (c ^ tm) : c) * dim + c] = 1.0;
        }
        // P = G * U
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t k = 0; k < dim; ++k) {
                std::complex<double> acc = 0;
                for (std::size_t j = 0; j < dim; ++j) acc += G[i * dim + j] * U[j * dim + k];
                P[i * dim + k] = acc;
            }
        std::swap(U, P);
    }
    return U;
}

} // namespace turbogen
