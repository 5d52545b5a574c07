#include "CLI11.hpp"
#include "turbogen/config.hpp"
#include "turbogen/pipeline.hpp"
#include <cstdint>
#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"turbogen: shallow-circuit spectral encoding of synthetic turbulence\n"
                 "stages: generate (statevectors) -> measure (observable fields) -> "
                 "diagnose (statistics); verify runs desk-scale oracles"};
    app.require_subcommand(1);

    std::string config_path, out_dir, precision;
    std::uint64_t seed_up = 0, seed_down = 0;
    int nq_override = 0;

    struct SubDef {
        const char* name;
        const char* desc;
    };
    const SubDef defs[] = {
        {"generate", "run both spin-component circuits and dump the statevectors"},
        {"measure", "deconvolve the statevector dumps into rho, J, u, s fields"},
        {"diagnose", "compute spectra, PDFs, Q-R, structure functions from field dumps"},
        {"verify", "run exhaustive desk-scale conformance oracles"},
        {"export-circuit", "write the gate lists without simulating"},
    };
    std::map<std::string, CLI::App*> subs;
    std::map<std::string, CLI::Option*> seed_up_opt, seed_down_opt, out_opt, prec_opt;
    for (const auto& d : defs) {
        CLI::App* s = app.add_subcommand(d.name, d.desc);
        s->add_option("--config", config_path, "run configuration file")
            ->required()
            ->check(CLI::ExistingFile);
        seed_up_opt[d.name] = s->add_option("--seed-up", seed_up, "override spin-up seed");
        seed_down_opt[d.name] =
            s->add_option("--seed-down", seed_down, "override spin-down seed");
        out_opt[d.name] = s->add_option("--out", out_dir, "override output directory");
        prec_opt[d.name] =
            s->add_option("--precision", precision, "single or double")
                ->check(CLI::IsMember({"single", "double"}));
        if (std::string(d.name) == "verify")
            s->add_option("--nq", nq_override, "oracle-suite qubit count (max 12)");
        subs[d.name] = s;
    }

    CLI11_PARSE(app, argc, argv);

    try {
        turbogen::RunConfig cfg = turbogen::load_config(config_path);
        const std::string cmd = app.get_subcommands().at(0)->get_name();
        if (seed_up_opt[cmd]->count()) cfg.seed_up = seed_up;
        if (seed_down_opt[cmd]->count()) cfg.seed_down = seed_down;
        if (out_opt[cmd]->count()) cfg.out_dir = out_dir;
        if (prec_opt[cmd]->count()) cfg.precision = precision;
        cfg.validate();

        if (cmd == "generate") return turbogen::cmd_generate(cfg);
        if (cmd == "measure") return turbogen::cmd_measure(cfg);
        if (cmd == "diagnose") return turbogen::cmd_diagnose(cfg);
        if (cmd == "verify") return turbogen::cmd_verify(cfg, nq_override);
        if (cmd == "export-circuit") return turbogen::cmd_export_circuit(cfg);
        std::cerr << "error: unknown subcommand " << cmd << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
