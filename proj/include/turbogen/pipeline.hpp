#pragma once
#include "turbogen/config.hpp"
#include <string>

namespace turbogen {

// memory model: both spin statevectors resident, 2 * 2^{n_q} * bytes/amp (MiB)
double required_mb(int n_q, const std::string& precision);
// cap from TURBOGEN_MEM_MB, default 4096
double memory_cap_mb();

int cmd_generate(const RunConfig& cfg);
int cmd_measure(const RunConfig& cfg);
int cmd_diagnose(const RunConfig& cfg);
// n_q_override picks the oracle-suite size (0 = built-in ladder); > 12 refused
int cmd_verify(const RunConfig& cfg, int n_q_override = 0);
int cmd_export_circuit(const RunConfig& cfg);

} // namespace turbogen
