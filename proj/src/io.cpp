#include "turbogen/io.hpp"
#include "json.hpp"
#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace turbogen {
namespace {

using nlohmann::json;

void byteswap_words(void* data, std::size_t nbytes, std::size_t word) {
    auto* p = static_cast<unsigned char*>(data);
    for (std::size_t i = 0; i + word <= nbytes; i += word)
        for (std::size_t a = 0, b = word - 1; a < b; ++a, --b) std::swap(p[i + a], p[i + b]);
}

void to_little_endian(void* data, std::size_t nbytes, std::size_t word) {
    if constexpr (std::endian::native != std::endian::little)
        byteswap_words(data, nbytes, word);
    else {
        (void)data;
        (void)nbytes;
        (void)word;
    }
}

std::string shape_string(const GridSpec& grid) {
    std::string s;
    for (int a = 0; a < grid.d; ++a) {
        if (a) s += 'x';
        s += std::to_string(grid.extent(a));
    }
    return s;
}

void ensure_parent(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::string checksum_hex(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_dump(const std::string& path, const std::string& kind, const GridSpec& grid,
                const std::string& dtype, std::vector<unsigned char> payload, std::size_t word,
                const Metadata& extra) {
    ensure_parent(path);
    to_little_endian(payload.data(), payload.size(), word);
    const std::uint64_t h = fnv1a64(payload.data(), payload.size());
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open dump for writing: " + path);
        out << "turbogen-dump v1 kind=" << kind << " shape=" << shape_string(grid)
            << " dtype=" << dtype << "\n";
        out.write(reinterpret_cast<const char*>(payload.data()),
                  std::streamsize(payload.size()));
        if (!out) throw std::runtime_error("short write: " + path);
    }
    json j;
    j["kind"] = kind;
    j["dtype"] = dtype;
    j["shape"] = json::array();
    for (int a = 0; a < grid.d; ++a) j["shape"].push_back(grid.extent(a));
    j["qubits"] = json::array();
    for (int a = 0; a < grid.d; ++a) j["qubits"].push_back(grid.n_alpha[std::size_t(a)]);
    j["length"] = grid.domain_length[0];
    j["checksum"] = checksum_hex(h);
    for (const auto& [k, v] : extra) j["meta"][k] = v;
    std::ofstream sc(path + ".json", std::ios::binary | std::ios::trunc);
    if (!sc) throw std::runtime_error("cannot open sidecar for writing: " + path + ".json");
    sc << j.dump(2) << "\n";
}

struct DumpHeader {
    std::string kind, dtype;
    std::string shape;
};

DumpHeader parse_header(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty dump: " + path);
    std::istringstream ls(line);
    std::string magic, ver, f1, f2, f3;
    ls >> magic >> ver >> f1 >> f2 >> f3;
    if (magic != "turbogen-dump" || ver != "v1" || f1.rfind("kind=", 0) != 0 ||
        f2.rfind("shape=", 0) != 0 || f3.rfind("dtype=", 0) != 0)
        throw std::runtime_error("not a turbogen dump: " + path);
    return {f1.substr(5), f3.substr(6), f2.substr(6)};
}

std::vector<unsigned char> read_payload(const std::string& path, const std::string& kind_expect,
                                        const GridSpec& grid, std::string& dtype_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing field file: " + path);
    const DumpHeader h = parse_header(in, path);
    if (!kind_expect.empty() && h.kind != kind_expect)
        throw std::runtime_error("dump kind mismatch in " + path + ": expected " + kind_expect +
                                 ", found " + h.kind);
    if (h.shape != shape_string(grid))
        throw std::runtime_error("dump shape mismatch in " + path + ": expected " +
                                 shape_string(grid) + ", found " + h.shape);
    dtype_out = h.dtype;
    std::vector<unsigned char> payload((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());

    const std::string sc_path = path + ".json";
    std::ifstream sc(sc_path, std::ios::binary);
    if (!sc) throw std::runtime_error("missing metadata sidecar: " + sc_path);
    json j = json::parse(sc, nullptr, true);
    if (j.value("checksum", "") != checksum_hex(fnv1a64(payload.data(), payload.size())))
        throw std::runtime_error("corrupt dump (checksum mismatch): " + path);
    if (j.contains("qubits")) {
        std::vector<int> q = j["qubits"].get<std::vector<int>>();
        bool ok = int(q.size()) == grid.d;
        for (int a = 0; ok && a < grid.d; ++a) ok = q[std::size_t(a)] == grid.n_alpha[std::size_t(a)];
        if (!ok) throw std::runtime_error("sidecar grid disagrees with config: " + sc_path);
    }
    return payload;
}

} // namespace

std::uint64_t fnv1a64(const void* data, std::size_t nbytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < nbytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

void write_spec_field(const std::string& path, const std::string& kind, const GridSpec& grid,
                      const SpecField& f, const Metadata& extra) {
    if (std::int64_t(f.size()) != grid.amplitude_count())
        throw std::invalid_argument("write_spec_field: size does not match grid");
    std::vector<unsigned char> payload(f.size() * 16);
    std::memcpy(payload.data(), f.data(), payload.size());
    write_dump(path, kind, grid, "complex128", std::move(payload), 8, extra);
}

void write_spec_field_single(const std::string& path, const std::string& kind,
                             const GridSpec& grid, const std::vector<std::complex<float>>& f,
                             const Metadata& extra) {
    if (std::int64_t(f.size()) != grid.amplitude_count())
        throw std::invalid_argument("write_spec_field_single: size does not match grid");
    std::vector<unsigned char> payload(f.size() * 8);
    std::memcpy(payload.data(), f.data(), payload.size());
    write_dump(path, kind, grid, "complex64", std::move(payload), 4, extra);
}

void write_real_field(const std::string& path, const std::string& kind, const GridSpec& grid,
                      const RealField& f, const Metadata& extra) {
    if (std::int64_t(f.size()) != grid.amplitude_count())
        throw std::invalid_argument("write_real_field: size does not match grid");
    std::vector<unsigned char> payload(f.size() * 8);
    std::memcpy(payload.data(), f.data(), payload.size());
    write_dump(path, kind, grid, "float64", std::move(payload), 8, extra);
}

SpecField read_spec_field(const std::string& path, const std::string& kind_expect,
                          const GridSpec& grid) {
    std::string dtype;
    auto payload = read_payload(path, kind_expect, grid, dtype);
    const std::size_t n = std::size_t(grid.amplitude_count());
    SpecField f(n);
    if (dtype == "complex128") {
        if (payload.size() != n * 16) throw std::runtime_error("truncated dump: " + path);
        to_little_endian(payload.data(), payload.size(), 8); // little -> host, same swap
        std::memcpy(f.data(), payload.data(), payload.size());
    } else if (dtype == "complex64") {
        if (payload.size() != n * 8) throw std::runtime_error("truncated dump: " + path);
        to_little_endian(payload.data(), payload.size(), 4);
        std::vector<std::complex<float>> g(n);
        std::memcpy(g.data(), payload.data(), payload.size());
        for (std::size_t i = 0; i < n; ++i) f[i] = std::complex<double>(g[i].real(), g[i].imag());
    } else {
        throw std::runtime_error("unexpected dtype " + dtype + " in " + path);
    }
    return f;
}

RealField read_real_field(const std::string& path, const std::string& kind_expect,
                          const GridSpec& grid) {
    std::string dtype;
    auto payload = read_payload(path, kind_expect, grid, dtype);
    const std::size_t n = std::size_t(grid.amplitude_count());
    if (dtype != "float64") throw std::runtime_error("unexpected dtype " + dtype + " in " + path);
    if (payload.size() != n * 8) throw std::runtime_error("truncated dump: " + path);
    to_little_endian(payload.data(), payload.size(), 8);
    RealField f(n);
    std::memcpy(f.data(), payload.data(), payload.size());
    return f;
}

Metadata read_sidecar(const std::string& dump_path) {
    std::ifstream sc(dump_path + ".json", std::ios::binary);
    if (!sc) throw std::runtime_error("missing metadata sidecar: " + dump_path + ".json");
    json j = json::parse(sc, nullptr, true);
    Metadata m;
    for (const auto& [k, v] : j.items()) {
        if (k == "meta") {
            for (const auto& [mk, mv] : v.items())
                m[mk] = mv.is_string() ? mv.get<std::string>() : mv.dump();
        } else {
            m[k] = v.is_string() ? v.get<std::string>() : v.dump();
        }
    }
    return m;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {
std::ofstream open_csv(const std::string& path) {
    ensure_parent(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open CSV for writing: " + path);
    return out;
}

void fit_comment(std::ostream& out, const std::string& name, const ScalingFit& f) {
    out << "# fit " << name << " exponent=" << format_g17(f.exponent)
        << " stderr=" << format_g17(f.stderr_) << " range=[" << format_g17(f.lo) << ","
        << format_g17(f.hi) << "]\n";
}
} // namespace

void write_spectrum_csv(const std::string& path, const ShellSpectrum& spec,
                        const std::vector<std::pair<std::string, ScalingFit>>& fits) {
    auto out = open_csv(path);
    if (!spec.field_label.empty()) out << "# field " << spec.field_label << "\n";
    for (const auto& [name, fit] : fits) fit_comment(out, name, fit);
    out << "k,E\n";
    for (std::size_t s = 0; s < spec.E.size(); ++s)
        out << s << "," << format_g17(spec.E[s]) << "\n";
}

void write_pdf_csv(const std::string& path, const Histogram& hist,
                   const std::vector<std::string>& comments) {
    auto out = open_csv(path);
    for (const auto& c : comments) out << "# " << c << "\n";
    out << "bin_center,density\n";
    for (std::size_t b = 0; b < hist.center.size(); ++b)
        out << format_g17(hist.center[b]) << "," << format_g17(hist.density[b]) << "\n";
}

void write_qr_csv(const std::string& path, const QRResult& qr) {
    auto out = open_csv(path);
    out << "# r_lim=" << format_g17(qr.r_lim) << " q_lim=" << format_g17(qr.q_lim)
        << " bins=" << qr.bins << "\n";
    out << "# skewness_R=" << format_g17(qr.skewness_R)
        << " skewness_R_raw=" << format_g17(qr.skewness_R_raw)
        << " in_range_fraction=" << format_g17(qr.in_range_fraction) << "\n";
    out << "R,Q,density\n";
    const int b = qr.bins;
    for (int iq = 0; iq < b; ++iq) {
        const double qc = -qr.q_lim + (iq + 0.5) * (2 * qr.q_lim / b);
        for (int ir = 0; ir < b; ++ir) {
            const double rc = -qr.r_lim + (ir + 0.5) * (2 * qr.r_lim / b);
            out << format_g17(rc) << "," << format_g17(qc) << ","
                << format_g17(qr.joint[std::size_t(iq) * b + ir]) << "\n";
        }
    }
}

void write_curve_csv(const std::string& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& pts) {
    auto out = open_csv(path);
    out << header << "\n";
    for (const auto& [x, y] : pts) out << format_g17(x) << "," << format_g17(y) << "\n";
}

void write_sf_csv(const std::string& path, const StructureFunctions& sf) {
    auto out = open_csv(path);
    for (int p = 0; p < 4; ++p)
        fit_comment(out, "zeta_" + std::to_string(p + 2), sf.zeta[std::size_t(p)]);
    for (int p = 2; p <= 5; ++p)
        out << "# reference zeta_" << p << " K41=" << format_g17(zeta_K41(p))
            << " SL94=" << format_g17(zeta_SL94(p)) << "\n";
    out << "r,S_2,S_3,S_4,S_5,stderr_2,stderr_3,stderr_4,stderr_5\n";
    for (std::size_t i = 0; i < sf.r.size(); ++i) {
        out << format_g17(sf.r[i]);
        for (int p = 0; p < 4; ++p) out << "," << format_g17(sf.S[i][std::size_t(p)]);
        for (int p = 0; p < 4; ++p) out << "," << format_g17(sf.stderr_[i][std::size_t(p)]);
        out << "\n";
    }
}

void write_kv_csv(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& rows) {
    auto out = open_csv(path);
    out << "key,value\n";
    for (const auto& [k, v] : rows) out << k << "," << v << "\n";
}

} // namespace turbogen
