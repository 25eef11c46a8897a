// SPDX-License-Identifier: Apache-2.0
#ifndef HEATLAB_IO_HPP
#define HEATLAB_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "heatlab/bounds.hpp"
#include "heatlab/criticality.hpp"
#include "heatlab/harmonic.hpp"
#include "heatlab/heatkernel.hpp"

namespace heatlab {

inline constexpr const char* kVersion = "0.1.0";

/// Full-precision scientific formatting (17 significant digits) so CSV
/// outputs diff bit-stably across runs.
std::string format_full(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// FNV-1a hash of a byte string, hex-encoded; used to stamp outputs with the
/// config they came from.
std::string fnv1a_hex(const std::string& bytes);

void write_profile_csv(const std::string& path, const HarmonicProfile& profile);
nlohmann::json profile_json(const HarmonicProfile& profile);
nlohmann::json criticality_json(const CriticalityReport& report);
nlohmann::json mu_star_json(const MuStarResult& result);
nlohmann::json fit_report_json(const FitReport& report);
void write_slice_csv(const std::string& path, const KernelSlice& slice);

void write_text(const std::string& path, const std::string& text);

} // namespace heatlab

#endif
