#include "turbogen/config.hpp"
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace turbogen {
namespace {

constexpr double kPi = 3.141592653589793238462643;

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw std::runtime_error("config error at " + path + ": " + msg);
}

double plain_number(const std::string& t, const char*& endck) {
    const char* c = t.c_str();
    char* end = nullptr;
    const double v = std::strtod(c, &end);
    endck = end;
    return v;
}

} // namespace

double parse_real(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("empty numeric value");
    if (t == "pi") return kPi;
    if (t == "-pi") return -kPi;
    const auto slash = t.find('/');
    if (slash != std::string::npos) {
        const char* e1 = nullptr; const char* e2 = nullptr;
        const double num = plain_number(t.substr(0, slash), e1);
        const std::string den_s = trim(t.substr(slash + 1));
        const double den = plain_number(den_s, e2);
        if (*e1 != '\0' && !trim(std::string(e1)).empty())
            throw std::invalid_argument("bad fraction numerator in '" + t + "'");
        if (den_s.empty() || (*e2 != '\0' && !trim(std::string(e2)).empty()) || den == 0)
            throw std::invalid_argument("bad fraction denominator in '" + t + "'");
        return num / den;
    }
    const char* end = nullptr;
    const double v = plain_number(t, end);
    if (end == t.c_str()) throw std::invalid_argument("not a number: '" + t + "'");
    std::string rest = trim(std::string(end));
    if (rest == "pi") return v * kPi;
    if (!rest.empty()) throw std::invalid_argument("trailing junk in number: '" + t + "'");
    return v;
}

PairSet parse_pairs(const std::string& text) {
    PairSet out;
    std::size_t i = 0;
    const std::string t = trim(text);
    while (i < t.size()) {
        while (i < t.size() && (std::isspace(static_cast<unsigned char>(t[i])) || t[i] == ','))
            ++i;
        if (i >= t.size()) break;
        if (t[i] != '(') throw std::invalid_argument("expected '(' in pair list: '" + t + "'");
        const auto close = t.find(')', i);
        if (close == std::string::npos)
            throw std::invalid_argument("unbalanced '(' in pair list: '" + t + "'");
        const std::string body = t.substr(i + 1, close - i - 1);
        const auto comma = body.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("pair needs two indices: '(" + body + ")'");
        const double a = parse_real(body.substr(0, comma));
        const double b = parse_real(body.substr(comma + 1));
        if (a != std::floor(a) || b != std::floor(b))
            throw std::invalid_argument("pair indices must be integers: '(" + body + ")'");
        out.emplace_back(int(a), int(b));
        i = close + 1;
    }
    return out;
}

CircuitSpec RunConfig::circuit(std::uint64_t seed) const {
    CircuitSpec c;
    c.grid = grid;
    c.R = R;
    c.r = r;
    c.pair_sets = pair_sets;
    c.shaping = shaping;
    c.seed = seed;
    return c;
}

bool RunConfig::diag_enabled(const std::string& name) const {
    if (diagnostics == "all") return true;
    std::size_t i = 0;
    while (i <= diagnostics.size()) {
        auto c = diagnostics.find(',', i);
        if (c == std::string::npos) c = diagnostics.size();
        if (trim(diagnostics.substr(i, c - i)) == name) return true;
        i = c + 1;
    }
    return false;
}

void RunConfig::validate() const {
    if (grid.d < 1) throw std::runtime_error("config error at [grid].qubits: missing grid");
    shaping.validate();
    circuit(seed_up).validate(); // pair indices, R/r positivity, grid consistency
    if (!allow_equal_seeds && seed_up == seed_down)
        throw std::runtime_error(
            "config error at [circuit].seed_down: spin-component seeds must be distinct "
            "(set allow_equal_seeds = true to override)");
    if (precision != "double" && precision != "single")
        throw std::runtime_error("config error at [output].precision: expected single or double");
    if (observables != "both" && observables != "physical" && observables != "spectral")
        throw std::runtime_error(
            "config error at [output].observables: expected physical, spectral, or both");
    if (diagnostics.empty())
        throw std::runtime_error("config error at [output].diagnostics: empty selection");
    if (diag.sf_separations < 2)
        throw std::runtime_error("config error at [diagnostics].sf_separations: need >= 2");
    if (diag.pdf_bins < 4 || diag.qr_bins < 2)
        throw std::runtime_error("config error at [diagnostics]: bin counts too small");
    if (diag.sf_samples < 1)
        throw std::runtime_error("config error at [diagnostics].sf_samples: need >= 1");
    if (!(diag.k_L > 0) || !(diag.k_eta_factor > 0))
        throw std::runtime_error("config error at [diagnostics]: k_L and k_eta_factor must be > 0");
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    std::map<std::string, std::map<std::string, std::string>> kv;
    std::vector<std::string> section_order;
    {
        std::istringstream is(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    fail(origin + ":" + std::to_string(lineno), "malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                if (!kv.count(section)) section_order.push_back(section);
                kv[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                fail(origin + ":" + std::to_string(lineno), "expected key = value");
            if (section.empty())
                fail(origin + ":" + std::to_string(lineno), "key outside any section");
            const std::string key = trim(line.substr(0, eq));
            if (kv[section].count(key))
                fail("[" + section + "]." + key, "duplicate key");
            kv[section][key] = trim(line.substr(eq + 1));
        }
    }

    RunConfig cfg;
    auto section_required = [&](const std::string& name, const std::vector<std::string>& keys) {
        if (!kv.count(name)) fail("[" + name + "]", "missing section (keys: " + [&] {
            std::string s;
            for (const auto& k : keys) s += (s.empty() ? "" : ", ") + k;
            return s;
        }() + ")");
    };
    auto get = [&](const std::string& sec, const std::string& key) -> const std::string& {
        const auto s = kv.find(sec);
        if (s == kv.end() || !s->second.count(key)) fail("[" + sec + "]." + key, "missing key");
        return s->second.at(key);
    };
    auto get_opt = [&](const std::string& sec, const std::string& key) -> const std::string* {
        const auto s = kv.find(sec);
        if (s == kv.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    };
    auto real_at = [&](const std::string& sec, const std::string& key) {
        try {
            return parse_real(get(sec, key));
        } catch (const std::invalid_argument& e) {
            fail("[" + sec + "]." + key, e.what());
        }
    };
    auto int_at = [&](const std::string& sec, const std::string& key) {
        const double v = real_at(sec, key);
        if (v != std::floor(v)) fail("[" + sec + "]." + key, "expected an integer");
        return std::int64_t(v);
    };
    std::map<std::string, std::set<std::string>> known = {
        {"grid", {"qubits", "length"}},
        {"shaping", {"lambda", "L", "c_L", "p0", "eta", "c_eta", "beta"}},
        {"circuit", {"modules", "rotation_layers", "seed_up", "seed_down", "allow_equal_seeds"}},
        {"diagnostics",
         {"spectrum_fit", "vsf_fit", "sf_range", "sf_samples", "sf_seed", "sf_separations",
          "pdf_bins", "qr_bins", "k_L", "k_eta_factor"}},
        {"output", {"directory", "precision", "observables", "diagnostics"}},
    };

    section_required("grid", {"qubits"});
    section_required("shaping", {"lambda", "L", "c_L", "p0", "eta", "c_eta", "beta"});
    section_required("circuit", {"modules", "rotation_layers", "seed_up", "seed_down"});

    {
        std::istringstream qs(get("grid", "qubits"));
        std::vector<int> nb;
        std::string tok;
        while (qs >> tok) {
            const double v = parse_real(tok);
            if (v != std::floor(v) || v < 1) fail("[grid].qubits", "expected positive integers");
            nb.push_back(int(v));
        }
        if (nb.empty()) fail("[grid].qubits", "expected at least one dimension");
        double length = 2 * kPi;
        if (const auto* L = get_opt("grid", "length")) length = parse_real(*L);
        if (!(length > 0)) fail("[grid].length", "box size must be > 0");
        cfg.grid = GridSpec(nb, length);
    }

    cfg.shaping.lambda = real_at("shaping", "lambda");
    cfg.shaping.L = real_at("shaping", "L");
    cfg.shaping.c_L = real_at("shaping", "c_L");
    cfg.shaping.p0 = real_at("shaping", "p0");
    cfg.shaping.eta = real_at("shaping", "eta");
    cfg.shaping.c_eta = real_at("shaping", "c_eta");
    cfg.shaping.beta = real_at("shaping", "beta");

    cfg.R = int(int_at("circuit", "modules"));
    cfg.r = int(int_at("circuit", "rotation_layers"));
    if (cfg.R < 1 || cfg.r < 1) fail("[circuit]", "modules and rotation_layers must be >= 1");
    cfg.seed_up = std::uint64_t(int_at("circuit", "seed_up"));
    cfg.seed_down = std::uint64_t(int_at("circuit", "seed_down"));
    if (const auto* v = get_opt("circuit", "allow_equal_seeds")) {
        if (*v == "true")
            cfg.allow_equal_seeds = true;
        else if (*v == "false")
            cfg.allow_equal_seeds = false;
        else
            fail("[circuit].allow_equal_seeds", "expected true or false");
    }

    cfg.pair_sets.resize(std::size_t(cfg.R));
    for (int ell = 1; ell <= cfg.R; ++ell) {
        const std::string sec = "pairs." + std::to_string(ell);
        known[sec] = {"pairs"};
        section_required(sec, {"pairs"});
        try {
            cfg.pair_sets[std::size_t(ell - 1)] = parse_pairs(get(sec, "pairs"));
        } catch (const std::invalid_argument& e) {
            fail("[" + sec + "].pairs", e.what());
        }
        for (const auto& [a, b] : cfg.pair_sets[std::size_t(ell - 1)])
            if (a < 1 || b < 1 || a > cfg.grid.n_q() || b > cfg.grid.n_q() || a == b)
                fail("[" + sec + "].pairs",
                     "qubit indices are 1-based in [1, " + std::to_string(cfg.grid.n_q()) +
                         "], got (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }

    if (kv.count("diagnostics")) {
        auto range_at = [&](const std::string& key, double& lo, double& hi) {
            std::istringstream rs(get("diagnostics", key));
            std::string t1, t2, extra;
            if (!(rs >> t1 >> t2) || (rs >> extra))
                fail("[diagnostics]." + key, "expected two numbers");
            lo = parse_real(t1);
            hi = parse_real(t2);
            if (!(lo > 0) || !(hi > lo)) fail("[diagnostics]." + key, "need 0 < lo < hi");
        };
        if (get_opt("diagnostics", "spectrum_fit"))
            range_at("spectrum_fit", cfg.diag.spectrum_fit_lo, cfg.diag.spectrum_fit_hi);
        if (get_opt("diagnostics", "vsf_fit"))
            range_at("vsf_fit", cfg.diag.vsf_fit_lo, cfg.diag.vsf_fit_hi);
        if (get_opt("diagnostics", "sf_range"))
            range_at("sf_range", cfg.diag.sf_r_lo, cfg.diag.sf_r_hi);
        if (get_opt("diagnostics", "sf_samples"))
            cfg.diag.sf_samples = int_at("diagnostics", "sf_samples");
        if (get_opt("diagnostics", "sf_seed"))
            cfg.diag.sf_seed = std::uint64_t(int_at("diagnostics", "sf_seed"));
        if (get_opt("diagnostics", "sf_separations"))
            cfg.diag.sf_separations = int(int_at("diagnostics", "sf_separations"));
        if (get_opt("diagnostics", "pdf_bins")) cfg.diag.pdf_bins = int(int_at("diagnostics", "pdf_bins"));
        if (get_opt("diagnostics", "qr_bins")) cfg.diag.qr_bins = int(int_at("diagnostics", "qr_bins"));
        if (get_opt("diagnostics", "k_L")) cfg.diag.k_L = real_at("diagnostics", "k_L");
        if (get_opt("diagnostics", "k_eta_factor"))
            cfg.diag.k_eta_factor = real_at("diagnostics", "k_eta_factor");
    }
    if (kv.count("output")) {
        if (const auto* v = get_opt("output", "directory")) cfg.out_dir = *v;
        if (const auto* v = get_opt("output", "precision")) cfg.precision = *v;
        if (const auto* v = get_opt("output", "observables")) cfg.observables = *v;
        if (const auto* v = get_opt("output", "diagnostics")) cfg.diagnostics = *v;
    }

    for (const auto& sec : section_order) {
        const auto it = known.find(sec);
        if (it == known.end()) fail("[" + sec + "]", "unknown section");
        for (const auto& [key, val] : kv[sec]) {
            (void)val;
            if (!it->second.count(key)) fail("[" + sec + "]." + key, "unknown key");
        }
    }

    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("config error at " + path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

} // namespace turbogen
