#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "frontspeed/analysis.hpp"
#include "frontspeed/direct_solver.hpp"
#include "frontspeed/errors.hpp"
#include "frontspeed/harness.hpp"
#include "frontspeed/io.hpp"
#include "frontspeed/quadrature.hpp"
#include "frontspeed/reduced_solver.hpp"

using namespace frontspeed;

namespace {

nlohmann::json parse_json_arg(const std::string& arg, const std::string& what) {
    if (!arg.empty() && arg.front() == '{') return nlohmann::json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw ConfigError("cannot open " + what + " file: " + arg);
    nlohmann::json j;
    in >> j;
    return j;
}

Nonlinearity parse_g(const std::string& arg) {
    return Nonlinearity::from_json(parse_json_arg(arg, "forcing"));
}

void print(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

ExperimentConfig load_config(const std::string& path, ExperimentKind expected) {
    if (path.empty()) throw ConfigError("this subcommand needs --config <file>");
    ExperimentConfig cfg = ExperimentConfig::load(path);
    if (cfg.kind != expected) {
        throw ConfigError("config kind '" + kind_name(cfg.kind) + "' does not match subcommand (" +
                          kind_name(expected) + " expected)");
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for front speeds of the scaled reaction-diffusion model"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int jobs = 1;
    unsigned long seed = 0;
    app.add_option("--config", config_path, "experiment config JSON file");
    app.add_option("--out-dir", out_dir, "directory for CSV and summary outputs");
    app.add_option("--jobs", jobs, "max concurrent runs inside a sweep")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed recorded with randomized trials");

    // single-run CSVs land in out_dir like the sweep outputs do
    const auto out_path = [&out_dir](const std::string& name) {
        std::filesystem::create_directories(out_dir);
        return (std::filesystem::path(out_dir) / name).string();
    };

    int exit_code = 0;

    // effective-speed
    auto* sc_speed = app.add_subcommand("effective-speed", "print the closed-form limit speed c(p)");
    std::string speed_g;
    double speed_p = 1.0;
    int speed_nodes = kDefaultQuadratureNodes;
    sc_speed->add_option("--g", speed_g, "forcing description (inline JSON or file)")->required();
    sc_speed->add_option("--p", speed_p, "slope magnitude")->required();
    sc_speed->add_option("--N", speed_nodes, "quadrature nodes");
    sc_speed->callback([&]() {
        const EffectiveSpeed sp = effective_speed(speed_p, parse_g(speed_g), speed_nodes);
        print({{"value", sp.value}, {"case", to_string(sp.case_tag)}});
    });

    // validate-g
    auto* sc_validate = app.add_subcommand("validate-g", "check a forcing description");
    std::string val_g;
    int val_samples = 4096;
    sc_validate->add_option("--g", val_g)->required();
    sc_validate->add_option("--M", val_samples, "sample count");
    sc_validate->callback([&]() {
        const ValidationReport rep = validate(parse_g(val_g), val_samples);
        print(rep.to_json());
        if (!rep.pass()) exit_code = 1;
    });

    // run-chi
    auto* sc_chi = app.add_subcommand("run-chi", "integrate the periodic profile equation");
    std::string chi_g, chi_out = "chi.csv";
    double chi_eps = 0.1, chi_alpha = 0.0, chi_p = 1.0, chi_T = 0.0, chi_dt = 0.0, chi_window = 0.5;
    int chi_N = 256, chi_sample = 0;
    sc_chi->add_option("--g", chi_g)->required();
    sc_chi->add_option("--eps", chi_eps)->required();
    sc_chi->add_option("--alpha", chi_alpha);
    sc_chi->add_option("--p", chi_p);
    sc_chi->add_option("--N", chi_N);
    sc_chi->add_option("--T", chi_T, "horizon (0 = policy default)");
    sc_chi->add_option("--dt", chi_dt, "time step (0 = policy default)");
    sc_chi->add_option("--sample-every", chi_sample);
    sc_chi->add_option("--window", chi_window, "speed fit window fraction");
    sc_chi->add_option("--out", chi_out, "trajectory CSV path");
    sc_chi->callback([&]() {
        const Nonlinearity g = parse_g(chi_g);
        const ModelParams params{chi_eps, chi_alpha, chi_p};
        const PeriodicGrid grid(chi_N);
        ChiRunOptions opts;
        opts.horizon = chi_T > 0.0 ? chi_T : default_horizon_chi(params, g, 10.0);
        opts.dt = chi_dt > 0.0 ? chi_dt : default_dt_chi(params, g, grid);
        opts.sample_every = chi_sample;
        const Trajectory traj = solve_chi(params, g, grid, opts);
        const std::string csv = out_path(chi_out);
        write_trajectory_csv(csv, traj);
        nlohmann::json out = {{"csv", csv}, {"T", opts.horizon}, {"dt", opts.dt}};
        try {
            out["estimate"] = extract_speed(traj, params, chi_window).to_json();
            out["limit_speed"] = effective_speed(chi_p, g).value;
        } catch (const NonStationary& e) {
            out["estimate_error"] = e.what();
        }
        print(out);
    });

    // run-ode
    auto* sc_ode = app.add_subcommand("run-ode", "integrate the zero-slope vertical-travel problem");
    std::string ode_g, ode_out = "ode.csv";
    double ode_eps = 0.1, ode_alpha = 0.0, ode_T = 0.0, ode_dt = 0.0, ode_window = 0.5;
    sc_ode->add_option("--g", ode_g)->required();
    sc_ode->add_option("--eps", ode_eps)->required();
    sc_ode->add_option("--alpha", ode_alpha);
    sc_ode->add_option("--T", ode_T, "horizon (0 = policy default)");
    sc_ode->add_option("--dt", ode_dt, "time step (0 = policy default)");
    sc_ode->add_option("--window", ode_window);
    sc_ode->add_option("--out", ode_out, "trajectory CSV path");
    sc_ode->callback([&]() {
        const Nonlinearity g = parse_g(ode_g);
        const ModelParams params{ode_eps, ode_alpha, 0.0};
        const double horizon = ode_T > 0.0 ? ode_T : default_horizon_ode(params, g, 40.0);
        const double dt = ode_dt > 0.0 ? ode_dt : default_dt_ode(params, g);
        const Trajectory traj = solve_ode_p0(params, g, horizon, dt);
        const std::string csv = out_path(ode_out);
        write_trajectory_csv(csv, traj);
        nlohmann::json out = {{"csv", csv}, {"T", horizon}, {"dt", dt}};
        try {
            out["estimate"] = extract_speed(traj, params, ode_window).to_json();
            out["limit_speed"] = effective_speed(0.0, g).value;
        } catch (const NonStationary& e) {
            out["estimate_error"] = e.what();
        }
        print(out);
    });

    // run-direct
    auto* sc_direct = app.add_subcommand("run-direct", "integrate the truncated-line problem");
    std::string dir_g, dir_v0, dir_out = "direct.csv";
    double dir_eps = 0.1, dir_alpha = 0.0, dir_p = 1.0, dir_L = 3.0, dir_T = 0.5, dir_dt = 0.0;
    int dir_M = 385, dir_sample = 0, dir_refnodes = 256;
    long dir_shift = 0;
    sc_direct->add_option("--g", dir_g)->required();
    sc_direct->add_option("--eps", dir_eps)->required();
    sc_direct->add_option("--alpha", dir_alpha);
    sc_direct->add_option("--p", dir_p, "slope of the planar part");
    sc_direct->add_option("--L", dir_L, "domain half width");
    sc_direct->add_option("--M", dir_M, "node count");
    sc_direct->add_option("--T", dir_T)->required();
    sc_direct->add_option("--dt", dir_dt, "time step (0 = policy default)");
    sc_direct->add_option("--v0", dir_v0, "perturbation description (inline JSON or file)");
    sc_direct->add_option("--shift", dir_shift, "integer vertical period shift");
    sc_direct->add_option("--sample-every", dir_sample);
    sc_direct->add_option("--ref-nodes", dir_refnodes, "reduced nodes of the boundary reference");
    sc_direct->add_option("--out", dir_out, "final snapshot CSV path");
    sc_direct->callback([&]() {
        const Nonlinearity g = parse_g(dir_g);
        const ModelParams params{dir_eps, dir_alpha, std::abs(dir_p)};
        InitialDatum datum;
        datum.slope = dir_p;
        if (!dir_v0.empty()) datum.v0 = Perturbation::from_json(parse_json_arg(dir_v0, "perturbation"));
        datum.period_shift = dir_shift;
        const LineDomain domain(dir_L, dir_M);
        DirectRunOptions opts;
        opts.horizon = dir_T;
        opts.dt = dir_dt;
        opts.sample_every = dir_sample;
        opts.reference_nodes = dir_refnodes;
        const FieldTrajectory traj = solve_direct(datum, params, g, domain, opts);
        const std::string csv = out_path(dir_out);
        write_field_csv(csv, traj);
        print({{"csv", csv}, {"final_time", traj.t.back()}, {"samples", traj.size()}});
    });

    // config-driven experiments
    auto* sc_sweep_eps = app.add_subcommand("sweep-eps", "speed convergence across an eps list");
    auto* sc_sweep_p = app.add_subcommand("sweep-p", "speed jump across a slope list");
    auto* sc_sandwich = app.add_subcommand("sandwich", "perturbed run between planar envelopes");
    for (auto [sc, kind] : {std::pair{sc_sweep_eps, ExperimentKind::eps_sweep},
                            std::pair{sc_sweep_p, ExperimentKind::p_sweep},
                            std::pair{sc_sandwich, ExperimentKind::sandwich}}) {
        sc->callback([&, kind]() {
            const Summary summary = run_config(load_config(config_path, kind), out_dir, jobs);
            print(summary.to_json());
            if (!summary.all_pass) exit_code = 1;
        });
    }

    // check-bernstein: config mode or trajectory-CSV mode
    auto* sc_bern = app.add_subcommand("check-bernstein", "gradient scaling law across an eps sweep");
    std::vector<std::string> bern_in;
    std::vector<double> bern_eps;
    std::string bern_g;
    double bern_p = 1.0, bern_alpha = 0.0;
    sc_bern->add_option("--in", bern_in, "per-eps trajectory CSVs")->delimiter(',');
    sc_bern->add_option("--eps", bern_eps, "eps value per CSV, decreasing")->delimiter(',');
    sc_bern->add_option("--g", bern_g);
    sc_bern->add_option("--p", bern_p);
    sc_bern->add_option("--alpha", bern_alpha);
    sc_bern->callback([&]() {
        if (!config_path.empty()) {
            const Summary summary =
                run_config(load_config(config_path, ExperimentKind::bernstein_sweep), out_dir, jobs);
            print(summary.to_json());
            if (!summary.all_pass) exit_code = 1;
            return;
        }
        if (bern_in.empty() || bern_in.size() != bern_eps.size() || bern_g.empty())
            throw ConfigError("check-bernstein needs --config, or matched --in/--eps plus --g");
        std::vector<SweepObservation> sweep;
        for (std::size_t i = 0; i < bern_in.size(); ++i) {
            const Trajectory traj = read_trajectory_csv(bern_in[i]);
            SweepObservation obs;
            obs.eps = bern_eps[i];
            for (std::size_t k = 0; k < traj.size(); ++k) {
                obs.grad_observable = std::max(obs.grad_observable, bern_p * traj.grad_sup[k]);
                obs.oscillation_sup = std::max(obs.oscillation_sup, traj.oscillation(k));
            }
            sweep.push_back(obs);
        }
        const ModelParams params{bern_eps.front(), bern_alpha, bern_p};
        const ScalingFit fit = bernstein_scaling(sweep, params, parse_g(bern_g));
        const OscillationReport osc = oscillation_check(sweep);
        print({{"scaling", fit.to_json()}, {"oscillation", osc.to_json()}});
        if (!fit.pass || !osc.pass) exit_code = 1;
    });

    // extract-speed
    auto* sc_extract = app.add_subcommand("extract-speed", "least-squares speed from a trajectory CSV");
    std::string ext_in;
    double ext_eps = 0.1, ext_alpha = 0.0, ext_p = 1.0, ext_window = 0.5;
    sc_extract->add_option("--in", ext_in)->required();
    sc_extract->add_option("--eps", ext_eps)->required();
    sc_extract->add_option("--alpha", ext_alpha);
    sc_extract->add_option("--p", ext_p);
    sc_extract->add_option("--window", ext_window);
    sc_extract->callback([&]() {
        const ModelParams params{ext_eps, ext_alpha, ext_p};
        const SpeedEstimate est = extract_speed(read_trajectory_csv(ext_in), params, ext_window);
        print(est.to_json());
    });

    // check-band
    auto* sc_band = app.add_subcommand("check-band", "band half-width stability under T-doubling");
    std::string band_in, band_in2;
    double band_eps = 0.1, band_alpha = 0.0, band_p = 1.0, band_window = 0.5;
    sc_band->add_option("--in", band_in, "trajectory over [0, T]")->required();
    sc_band->add_option("--in2", band_in2, "trajectory over [0, 2T]")->required();
    sc_band->add_option("--eps", band_eps)->required();
    sc_band->add_option("--alpha", band_alpha);
    sc_band->add_option("--p", band_p);
    sc_band->add_option("--window", band_window);
    sc_band->callback([&]() {
        const ModelParams params{band_eps, band_alpha, band_p};
        const Trajectory t1 = read_trajectory_csv(band_in);
        const Trajectory t2 = read_trajectory_csv(band_in2);
        const BandReport b1 = band_check(t1, extract_speed(t1, params, band_window));
        const BandReport b2 = band_check(t2, extract_speed(t2, params, band_window));
        const BandStability stability = band_stability(b1, b2);
        print({{"k_emp", b1.k_emp}, {"k_emp_doubled", b2.k_emp}, {"stability", stability.to_json()}});
        if (!stability.pass) exit_code = 1;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}
