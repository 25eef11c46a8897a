// SPDX-License-Identifier: Apache-2.0
//
// heatlab: batch driver for the radial Schrodinger heat-kernel laboratory.
//
// Subcommands: exponents, harmonic, classify, mu-star, a2, kernel, verify,
// supersolution. Most read a JSON config file and write JSON/CSV results to
// an output directory (--out, else $HEATLAB_OUT_DIR, else the working
// directory). Exit codes: 0 success, 2 validation failure, 3 convergence
// failure, 4 I/O failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "heatlab/bounds.hpp"
#include "heatlab/criticality.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/harmonic.hpp"
#include "heatlab/heatkernel.hpp"
#include "heatlab/io.hpp"
#include "heatlab/potential.hpp"
#include "heatlab/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
    std::string config_path;
    std::string out_dir;
    json config;
    std::string config_hash;
};

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("HEATLAB_OUT_DIR"); env && *env) return env;
    return ".";
}

void load_config(Context& ctx) {
    std::ifstream in(ctx.config_path);
    if (!in) throw heatlab::io_error("cannot read config file: " + ctx.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    ctx.config_hash = heatlab::fnv1a_hex(bytes);
    try {
        ctx.config = json::parse(bytes);
    } catch (const json::exception& e) {
        throw heatlab::validation_error(std::string("config is not valid JSON: ") + e.what());
    }
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw heatlab::io_error("cannot create output directory: " + ctx.out_dir);
}

json stamp(const Context& ctx, json j) {
    j["version"] = heatlab::kVersion;
    j["config_hash"] = ctx.config_hash;
    return j;
}

void write_json(const Context& ctx, const std::string& name, const json& j) {
    const std::string path = (fs::path(ctx.out_dir) / name).string();
    std::ofstream out(path);
    if (!out) throw heatlab::io_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw heatlab::io_error("write failed: " + path);
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw heatlab::validation_error("config: missing numeric field '" + key + "'");
    }
    return j[key].get<double>();
}

heatlab::PotentialSpec parse_potential(const json& cfg) {
    if (!cfg.contains("potential") || !cfg["potential"].is_object()) {
        throw heatlab::validation_error("config: missing 'potential' object");
    }
    const json& p = cfg["potential"];
    const int dim = cfg.value("dimension", 3);
    if (dim < 2) throw heatlab::validation_error("config: dimension must be >= 2");
    const std::string family = p.value("family", "");
    if (family == "zero") return heatlab::PotentialSpec::zero(dim);
    if (family == "pure") return heatlab::PotentialSpec::pure(dim, require_number(p, "lambda"));
    if (family == "blended") {
        return heatlab::PotentialSpec::blended(dim, require_number(p, "lambda1"),
                                               require_number(p, "lambda2"),
                                               p.value("theta", 1.0));
    }
    if (family == "bump") {
        if (!p.contains("bump") || !p["bump"].is_object()) {
            throw heatlab::validation_error("config: bump family needs a 'bump' object");
        }
        heatlab::BumpShape shape;
        shape.r_inner = p["bump"].value("r_inner", 0.0);
        shape.r_outer = require_number(p["bump"], "r_outer");
        shape.width = p["bump"].value("width", 1e-3);
        return heatlab::PotentialSpec::with_bump(dim, p.value("lambda", 0.0),
                                                 p.value("mu", 0.0), shape,
                                                 p.value("theta", 1.0));
    }
    throw heatlab::validation_error("config: potential.family must be zero|pure|blended|bump");
}

heatlab::RadialGrid parse_grid(const json& cfg, const char* key, double def_lo, double def_hi,
                               int def_ppd) {
    double r_min = def_lo, r_max = def_hi;
    int ppd = def_ppd;
    if (cfg.contains(key) && cfg[key].is_object()) {
        const json& g = cfg[key];
        r_min = g.value("r_min", r_min);
        r_max = g.value("r_max", r_max);
        ppd = g.value("points_per_decade", ppd);
    }
    return heatlab::make_grid(r_min, r_max, ppd);
}

std::vector<double> number_list(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].empty()) {
        throw heatlab::validation_error("config: missing numeric array '" + key + "'");
    }
    std::vector<double> out;
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw heatlab::validation_error("config: '" + key + "' must be numeric");
        out.push_back(v.get<double>());
    }
    return out;
}

// ---------------------------------------------------------------------------
// kernel slices shared by `kernel` and `verify`
// ---------------------------------------------------------------------------

struct SliceRequest {
    std::vector<double> radii;
    std::vector<double> source_radii;
    std::vector<double> cosines;
    std::vector<double> times;
    bool use_oracle = false;
    heatlab::SolverConfig solver;
};

SliceRequest parse_slice(const json& cfg, const heatlab::PotentialSpec& spec) {
    SliceRequest req;
    req.radii = number_list(cfg, "radii");
    req.source_radii = number_list(cfg, "source_radii");
    req.cosines = number_list(cfg, "cosines");
    req.times = number_list(cfg, "times");
    const bool pure_like = spec.family == heatlab::ProfileFamily::Zero ||
                           spec.family == heatlab::ProfileFamily::PureInverseSquare;
    req.use_oracle = cfg.value("oracle", pure_like);
    if (req.use_oracle && !pure_like) {
        throw heatlab::validation_error(
            "config: the exact Bessel-series kernel is only available for zero/pure potentials");
    }
    if (cfg.contains("solver") && cfg["solver"].is_object()) {
        const json& s = cfg["solver"];
        req.solver.grid = heatlab::make_grid(s.value("r_min", req.solver.grid.r_min),
                                             s.value("r_max", req.solver.grid.r_max),
                                             s.value("points_per_decade",
                                                     req.solver.grid.points_per_decade));
        req.solver.l_max = s.value("l_max", req.solver.l_max);
        req.solver.dt_ratio = s.value("dt_ratio", req.solver.dt_ratio);
        req.solver.source_width = s.value("source_width", req.solver.source_width);
        req.solver.richardson = s.value("richardson", req.solver.richardson);
    }
    return req;
}

heatlab::KernelSlice compute_slice(const heatlab::PotentialSpec& spec, const SliceRequest& req) {
    heatlab::KernelSlice slice;
    if (req.use_oracle) {
        const double lambda = spec.family == heatlab::ProfileFamily::Zero ? 0.0 : spec.lambda;
        for (double rho : req.source_radii)
            for (double r : req.radii)
                for (double c : req.cosines)
                    for (double t : req.times) {
                        heatlab::KernelSample s;
                        s.rx = r;
                        s.ry = rho;
                        s.cos_theta = c;
                        s.t = t;
                        s.p = heatlab::oracle_kernel(spec.dim, lambda, r, rho, c, t);
                        slice.samples.push_back(s);
                    }
        return slice;
    }
    for (double rho : req.source_radii) {
        std::vector<heatlab::ModeKernel> modes;
        modes.reserve(req.solver.l_max + 1);
        for (int l = 0; l <= req.solver.l_max; ++l) {
            modes.push_back(heatlab::solve_mode(spec, l, rho, req.times, req.solver));
        }
        for (double r : req.radii) {
            for (size_t ti = 0; ti < req.times.size(); ++ti) {
                std::vector<double> mode_values;
                mode_values.reserve(modes.size());
                for (const auto& m : modes) mode_values.push_back(m.at(r, static_cast<int>(ti)));
                for (double c : req.cosines) {
                    const auto asm_res = heatlab::assemble(mode_values, spec.dim, c);
                    heatlab::KernelSample s;
                    s.rx = r;
                    s.ry = rho;
                    s.cos_theta = c;
                    s.t = req.times[ti];
                    s.p = asm_res.value;
                    s.truncation = asm_res.truncation;
                    slice.samples.push_back(s);
                }
            }
        }
    }
    return slice;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_exponents(int dim, double lambda) {
    const auto e = heatlab::exponents(dim, lambda);
    json j;
    j["version"] = heatlab::kVersion;
    j["dimension"] = dim;
    j["lambda"] = lambda;
    j["lambda_star"] = heatlab::lambda_star(dim);
    j["a_plus"] = e.a_plus;
    j["a_minus"] = e.a_minus;
    j["discriminant"] = e.discriminant;
    j["sigma"] = e.sigma;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_harmonic(Context& ctx) {
    load_config(ctx);
    const auto spec = parse_potential(ctx.config);
    const auto grid = parse_grid(ctx.config, "grid", 1e-6, 1e6, 64);
    const auto report = heatlab::validate_asymptotics(spec, ctx.config.value("asym_tol", 1e-6));
    if (!report.passed) {
        throw heatlab::validation_error("asymptotic hypotheses failed: " + report.message);
    }
    heatlab::PipelineOptions opts;
    opts.r_cut = ctx.config.value("r_cut", opts.r_cut);
    const auto profile = heatlab::build_profile(spec, grid, opts);
    heatlab::write_profile_csv((fs::path(ctx.out_dir) / "profile.csv").string(), profile);
    write_json(ctx, "profile.json", stamp(ctx, heatlab::profile_json(profile)));
    std::cout << "wrote profile.csv, profile.json to " << ctx.out_dir << "\n";
    return 0;
}

int cmd_classify(Context& ctx) {
    load_config(ctx);
    const auto spec = parse_potential(ctx.config);
    heatlab::ClassifyOptions opts;
    opts.grid = parse_grid(ctx.config, "grid", opts.grid.r_min, opts.grid.r_max,
                           opts.grid.points_per_decade);
    opts.asym_tol = ctx.config.value("asym_tol", opts.asym_tol);
    const auto report = heatlab::classify_operator(spec, opts);
    write_json(ctx, "classify.json", stamp(ctx, heatlab::criticality_json(report)));
    std::cout << heatlab::criticality_json(report)["verdict"].get<std::string>() << "\n";
    return 0;
}

int cmd_mu_star(Context& ctx) {
    load_config(ctx);
    const auto spec = parse_potential(ctx.config);
    const double mu_lo = require_number(ctx.config, "mu_lo");
    const double mu_hi = require_number(ctx.config, "mu_hi");
    const double tol = ctx.config.value("tol", 1e-3);
    heatlab::ClassifyOptions opts;
    opts.grid = parse_grid(ctx.config, "grid", opts.grid.r_min, opts.grid.r_max,
                           opts.grid.points_per_decade);
    const auto result = heatlab::find_mu_star(spec, mu_lo, mu_hi, tol, opts);
    write_json(ctx, "mu_star.json", stamp(ctx, heatlab::mu_star_json(result)));
    std::cout << "mu_star = " << heatlab::format_full(result.mu_star) << "\n";
    return 0;
}

int cmd_a2(Context& ctx) {
    load_config(ctx);
    const auto spec = parse_potential(ctx.config);
    const auto grid = parse_grid(ctx.config, "grid", 1e-6, 1e6, 64);
    const auto profile = heatlab::build_profile(spec, grid);
    const auto weight = heatlab::WeightProfile::from_profile(profile, spec);
    const auto screen = heatlab::a2_quick_test(weight, spec.dim);
    json j;
    j["near_zero_power"] = weight.near_zero_power;
    j["tail_powers"] = {weight.tail_power_bounds.first, weight.tail_power_bounds.second};
    j["screen"] = screen == heatlab::A2Screen::IsA2
                      ? "a2"
                      : (screen == heatlab::A2Screen::NotA2 ? "not_a2" : "inconclusive");
    std::vector<std::pair<double, double>> balls;
    if (ctx.config.contains("ball_samples")) {
        for (const auto& b : ctx.config["ball_samples"]) {
            balls.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
        }
    } else {
        for (double d : {0.0, 1e-3, 1.0, 10.0})
            for (double r : {1e-2, 1.0, 100.0}) balls.emplace_back(d, r);
    }
    const auto est = heatlab::a2_constant(weight, balls);
    j["a2_constant_lower_bound"] = est.value;
    j["balls_skipped"] = est.skipped;
    write_json(ctx, "a2.json", stamp(ctx, j));
    std::cout << j["screen"].get<std::string>()
              << " (sampled constant >= " << est.value << ")\n";
    return 0;
}

int cmd_kernel(Context& ctx) {
    load_config(ctx);
    const auto spec = parse_potential(ctx.config);
    const auto req = parse_slice(ctx.config, spec);
    const auto slice = compute_slice(spec, req);
    heatlab::write_slice_csv((fs::path(ctx.out_dir) / "kernel.csv").string(), slice);
    json j;
    j["samples"] = slice.samples.size();
    j["method"] = req.use_oracle ? "bessel_series" : "mode_solver";
    if (!req.use_oracle) {
        j["solver"] = {{"r_min", req.solver.grid.r_min},
                       {"r_max", req.solver.grid.r_max},
                       {"points_per_decade", req.solver.grid.points_per_decade},
                       {"l_max", req.solver.l_max},
                       {"dt_ratio", req.solver.dt_ratio}};
    }
    write_json(ctx, "kernel.json", stamp(ctx, j));
    std::cout << "wrote " << slice.samples.size() << " samples to kernel.csv\n";
    return 0;
}

int cmd_verify(Context& ctx) {
    load_config(ctx);
    const auto spec = parse_potential(ctx.config);
    const auto req = parse_slice(ctx.config, spec);
    const auto full_slice = compute_slice(spec, req);
    // drop samples the mode series cannot resolve in double precision
    heatlab::KernelSlice slice;
    for (const auto& s : full_slice.samples) {
        if (heatlab::series_resolvable(s.rx, s.ry, s.cos_theta, s.t)) {
            slice.samples.push_back(s);
        }
    }
    if (slice.samples.empty()) {
        throw heatlab::validation_error(
            "verify: no requested sample is resolvable by the mode series");
    }

    const auto grid = parse_grid(ctx.config, "grid", 1e-6, 1e6, 64);
    const auto profile = heatlab::build_profile(spec, grid);
    const auto weight = heatlab::WeightProfile::from_profile(profile, spec);

    heatlab::Envelope env;
    env.dim = spec.dim;
    env.epsilon = ctx.config.value("epsilon", env.epsilon);
    const std::string kind = ctx.config.value("envelope", "two_sided");
    if (kind == "two_sided") env.kind = heatlab::EnvelopeKind::TwoSided;
    else if (kind == "global") env.kind = heatlab::EnvelopeKind::Global;
    else if (kind == "polynomial") env.kind = heatlab::EnvelopeKind::Polynomial;
    else if (kind == "gaussian_rate") env.kind = heatlab::EnvelopeKind::GaussianRate;
    else throw heatlab::validation_error("config: unknown envelope kind '" + kind + "'");
    env.ingredients.U = [&profile](double r) { return profile.interp(r); };
    env.ingredients.ball_mass = [&weight](double d, double r) {
        return heatlab::ball_mass(weight, d, r);
    };

    if (env.kind == heatlab::EnvelopeKind::Global) {
        heatlab::ClassifyOptions copts;
        copts.grid = grid;
        const auto report = heatlab::classify_operator(spec, copts);
        heatlab::check_global_envelope_hypothesis(report, spec);
    }

    json j;
    if (ctx.config.value("rate_only", false) || env.kind == heatlab::EnvelopeKind::GaussianRate) {
        const auto rate = heatlab::gaussian_rate(slice, env.ingredients, env.epsilon);
        j["rate"] = {{"slope", rate.slope},
                     {"passed", rate.passed},
                     {"used_samples", rate.used_samples},
                     {"epsilon", env.epsilon}};
    }
    if (!ctx.config.value("rate_only", false)) {
        const std::string side_name = ctx.config.value("side", "upper");
        const auto side =
            side_name == "lower" ? heatlab::FitSide::Lower : heatlab::FitSide::Upper;
        const double c_lo = ctx.config.value("c_lo", 1e-3);
        const double c_hi = ctx.config.value("c_hi", 1e3);
        const auto fit = heatlab::fit_constant(slice, env, side, c_lo, c_hi);
        j["fit"] = heatlab::fit_report_json(fit);
        j["envelope"] = kind;
    }
    j["samples_used"] = slice.samples.size();
    j["samples_dropped_unresolvable"] = full_slice.samples.size() - slice.samples.size();
    write_json(ctx, "verify.json", stamp(ctx, j));
    heatlab::write_slice_csv((fs::path(ctx.out_dir) / "verify_samples.csv").string(), slice);
    std::cout << "wrote verify.json (" << slice.samples.size() << " samples)\n";
    return 0;
}

int cmd_supersolution(Context& ctx) {
    load_config(ctx);
    const auto spec = parse_potential(ctx.config);
    const auto grid = parse_grid(ctx.config, "grid", 1e-6, 1e6, 64);
    const auto profile = heatlab::build_profile(spec, grid);
    const auto FU = heatlab::f_of_u(profile, spec.dim);

    heatlab::ZetaSpec zeta;
    if (ctx.config.contains("zeta")) {
        const json& z = ctx.config["zeta"];
        zeta.gamma1 = z.value("gamma1", zeta.gamma1);
        zeta.gamma2 = z.value("gamma2", zeta.gamma2);
        zeta.c = z.value("c", zeta.c);
        zeta.T = z.value("T", zeta.T);
    }
    const double kappa =
        ctx.config.value("kappa", heatlab::zeta_kappa(zeta) *
                                      ctx.config.value("kappa_factor", 1.0));

    heatlab::SupersolutionRegion region;
    if (ctx.config.contains("region")) {
        const json& reg = ctx.config["region"];
        region.r_lo = reg.value("r_lo", region.r_lo);
        region.r_hi = reg.value("r_hi", region.r_hi);
        region.cone_factor = reg.value("cone_factor", region.cone_factor);
        if (reg.contains("times")) region.times = number_list(reg, "times");
    }
    if (region.times.empty()) region.times = {1.0, 4.0, 16.0, 64.0};

    const auto report = heatlab::verify_supersolution(profile, FU, zeta, kappa, spec, region);
    json j;
    j["kappa"] = kappa;
    j["zeta"] = {{"gamma1", zeta.gamma1}, {"gamma2", zeta.gamma2}, {"c", zeta.c}, {"T", zeta.T}};
    j["min_residual"] = report.min_residual;
    j["disc_tol"] = report.disc_tol;
    j["passed"] = report.passed;
    j["w_positive"] = report.w_positive;
    j["min_w"] = report.min_w;
    write_json(ctx, "supersolution.json", stamp(ctx, j));
    std::cout << (report.passed && report.w_positive ? "supersolution check passed"
                                                     : "supersolution check FAILED")
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"heatlab: heat kernels for radial Schrodinger operators with "
                 "inverse-square-type potentials"};
    app.require_subcommand(1);

    int dim = 3;
    double lambda = 0.0;
    auto* exp_cmd = app.add_subcommand("exponents", "characteristic exponents A+-(lambda)");
    exp_cmd->add_option("-N,--dimension", dim, "space dimension")->check(CLI::Range(2, 64));
    exp_cmd->add_option("-l,--lambda", lambda, "inverse-square coefficient")->required();

    Context ctx;
    std::string out_flag;
    struct Sub {
        const char* name;
        const char* desc;
        int (*run)(Context&);
        CLI::App* cmd = nullptr;
    };
    Sub subs[] = {
        {"harmonic", "build the positive harmonic profile U", cmd_harmonic},
        {"classify", "criticality classification of H = -Delta + V", cmd_classify},
        {"mu-star", "threshold coupling for a compact perturbation", cmd_mu_star},
        {"a2", "A2 screen and sampled constant for omega = U^2", cmd_a2},
        {"kernel", "heat kernel slice (mode solver or exact series)", cmd_kernel},
        {"verify", "fit/check two-sided and Gaussian envelopes", cmd_verify},
        {"supersolution", "discrete supersolution inequality for zeta (U - kappa F/t)",
         cmd_supersolution},
    };
    for (auto& s : subs) {
        s.cmd = app.add_subcommand(s.name, s.desc);
        s.cmd->add_option("-c,--config", ctx.config_path, "JSON config file")->required();
        s.cmd->add_option("-o,--out", out_flag, "output directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (exp_cmd->parsed()) return cmd_exponents(dim, lambda);
        ctx.out_dir = resolve_out_dir(out_flag);
        for (auto& s : subs) {
            if (s.cmd->parsed()) return s.run(ctx);
        }
        return 2;
    } catch (const heatlab::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const heatlab::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const heatlab::convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
