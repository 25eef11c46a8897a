// SPDX-License-Identifier: Apache-2.0
#include "heatlab/io.hpp"

#include <cstdio>
#include <fstream>

namespace heatlab {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    for (size_t i = 0; i < header.size(); ++i) {
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    }
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            out << format_full(row[i]) << (i + 1 < row.size() ? "," : "\n");
        }
    }
}

std::string fnv1a_hex(const std::string& bytes) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_profile_csv(const std::string& path, const HarmonicProfile& profile) {
    std::vector<std::vector<double>> rows;
    rows.reserve(profile.grid.size());
    for (int i = 0; i < profile.grid.size(); ++i) {
        rows.push_back({profile.grid.nodes[i], profile.values[i], profile.derivative[i]});
    }
    write_csv(path, {"r", "U", "dU"}, rows);
}

nlohmann::json profile_json(const HarmonicProfile& profile) {
    nlohmann::json j;
    j["r_min"] = profile.grid.r_min;
    j["r_max"] = profile.grid.r_max;
    j["points_per_decade"] = profile.grid.points_per_decade;
    j["near_zero_exponent"] = profile.near_zero_exponent;
    j["correction_exponent"] = profile.correction_exponent;
    if (profile.tail) {
        j["tail"] = {{"c1", profile.tail->c1},
                     {"c2", profile.tail->c2},
                     {"residual", profile.tail->residual},
                     {"log_branch", profile.tail->log_branch},
                     {"window", {profile.tail->window_lo, profile.tail->window_hi}}};
    }
    return j;
}

namespace {
const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Subcritical: return "subcritical";
        case Verdict::Critical: return "critical";
        case Verdict::Supercritical: return "supercritical";
    }
    return "?";
}
const char* case_name(TailCase c) {
    switch (c) {
        case TailCase::A: return "a";
        case TailCase::B: return "b";
        case TailCase::C: return "c";
        case TailCase::D: return "d";
        case TailCase::None: return "none";
    }
    return "?";
}
} // namespace

nlohmann::json criticality_json(const CriticalityReport& report) {
    nlohmann::json j;
    j["verdict"] = verdict_name(report.verdict);
    j["case"] = case_name(report.tail_case);
    j["branch_ratio"] = report.branch_ratio;
    if (report.first_zero) j["first_zero"] = *report.first_zero;
    if (report.tail) {
        j["tail"] = {{"c1", report.tail->c1},
                     {"c2", report.tail->c2},
                     {"residual", report.tail->residual},
                     {"log_branch", report.tail->log_branch}};
    }
    return j;
}

nlohmann::json mu_star_json(const MuStarResult& result) {
    nlohmann::json j;
    j["mu_star"] = result.mu_star;
    j["bracket_width"] = result.bracket_width;
    j["iterations"] = result.iterations;
    j["verdict_lo"] = criticality_json(result.verdict_lo);
    j["verdict_hi"] = criticality_json(result.verdict_hi);
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& [mu, zero] : result.trace) {
        trace.push_back({{"mu", mu}, {"has_zero", zero}});
    }
    j["trace"] = trace;
    return j;
}

nlohmann::json fit_report_json(const FitReport& report) {
    nlohmann::json j;
    j["side"] = report.side == FitSide::Upper ? "upper" : "lower";
    j["constant"] = report.fitted_constant;
    j["ratio_min"] = report.ratio_min;
    j["ratio_max"] = report.ratio_max;
    j["ratio_median"] = report.ratio_median;
    j["worst_sample"] = {{"rx", report.worst_sample.rx},
                         {"ry", report.worst_sample.ry},
                         {"cos_theta", report.worst_sample.cos_theta},
                         {"t", report.worst_sample.t},
                         {"p", report.worst_sample.p}};
    return j;
}

void write_slice_csv(const std::string& path, const KernelSlice& slice) {
    std::vector<std::vector<double>> rows;
    rows.reserve(slice.samples.size());
    for (const auto& s : slice.samples) {
        rows.push_back({s.rx, s.ry, s.cos_theta, s.t, s.p, s.truncation});
    }
    write_csv(path, {"rx", "ry", "cos_theta", "t", "p", "truncation"}, rows);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    out << text;
}

} // namespace heatlab
