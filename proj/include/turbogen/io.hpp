#pragma once
#include "turbogen/diagnostics.hpp"
#include "turbogen/lattice.hpp"
#include "turbogen/madelung.hpp"
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace turbogen {

// dump format: one-line magic header
//   turbogen-dump v1 kind=<kind> shape=<n0>x<n1>x<n2> dtype=<dtype>\n
// followed by the raw payload, little-endian, flat-index order (dimension 0
// fastest). dtypes: complex128, complex64, float64. Every dump gets a JSON
// sidecar <path>.json carrying kind/shape/dtype/checksum plus caller metadata.

std::uint64_t fnv1a64(const void* data, std::size_t nbytes);

using Metadata = std::map<std::string, std::string>; // values are JSON fragments

void write_spec_field(const std::string& path, const std::string& kind, const GridSpec& grid,
                      const SpecField& f, const Metadata& extra = {});
void write_spec_field_single(const std::string& path, const std::string& kind,
                             const GridSpec& grid,
                             const std::vector<std::complex<float>>& f,
                             const Metadata& extra = {});
void write_real_field(const std::string& path, const std::string& kind, const GridSpec& grid,
                      const RealField& f, const Metadata& extra = {});

// verify header, grid, and sidecar checksum; complex64 payloads upconvert
SpecField read_spec_field(const std::string& path, const std::string& kind_expect,
                          const GridSpec& grid);
RealField read_real_field(const std::string& path, const std::string& kind_expect,
                          const GridSpec& grid);

// sidecar of an existing dump (raw JSON text -> flat string map, one level)
Metadata read_sidecar(const std::string& dump_path);

// CSV (17 significant digits; '#'-prefixed metadata/fit blocks)
void write_spectrum_csv(const std::string& path, const ShellSpectrum& spec,
                        const std::vector<std::pair<std::string, ScalingFit>>& fits = {});
void write_pdf_csv(const std::string& path, const Histogram& hist,
                   const std::vector<std::string>& comments = {});
void write_qr_csv(const std::string& path, const QRResult& qr);
void write_curve_csv(const std::string& path, const std::string& header,
                     const std::vector<std::pair<double, double>>& pts);
void write_sf_csv(const std::string& path, const StructureFunctions& sf);
void write_kv_csv(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& rows);

std::string format_g17(double v);

} // namespace turbogen
