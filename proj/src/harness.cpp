#include "frontspeed/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <stdexcept>
#include <thread>

#include "frontspeed/analysis.hpp"
#include "frontspeed/direct_solver.hpp"
#include "frontspeed/errors.hpp"
#include "frontspeed/io.hpp"
#include "frontspeed/quadrature.hpp"
#include "frontspeed/reduced_solver.hpp"

namespace frontspeed {

namespace {

const std::vector<std::pair<std::string, ExperimentKind>> kKindNames = {
    {"chi-run", ExperimentKind::chi_run},
    {"ode-run", ExperimentKind::ode_run},
    {"direct-run", ExperimentKind::direct_run},
    {"eps-sweep", ExperimentKind::eps_sweep},
    {"p-sweep", ExperimentKind::p_sweep},
    {"bernstein-sweep", ExperimentKind::bernstein_sweep},
    {"sandwich", ExperimentKind::sandwich},
};

std::vector<double> number_or_list(const nlohmann::json& j, const std::string& key) {
    std::vector<double> out;
    if (j.is_number()) {
        out.push_back(j.get<double>());
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (!v.is_number()) throw ConfigError("config: '" + key + "' entries must be numbers");
            out.push_back(v.get<double>());
        }
    } else {
        throw ConfigError("config: '" + key + "' must be a number or a list of numbers");
    }
    return out;
}

void require_decreasing(const std::vector<double>& v, const std::string& key) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1]))
            throw ConfigError("config: '" + key + "' must be strictly decreasing");
    }
}

}  // namespace

ExperimentKind parse_kind(const std::string& name) {
    for (const auto& [n, k] : kKindNames) {
        if (n == name) return k;
    }
    throw ConfigError("config: unknown experiment kind '" + name + "'");
}

std::string kind_name(ExperimentKind kind) {
    for (const auto& [n, k] : kKindNames) {
        if (k == kind) return n;
    }
    return "unknown";
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
    static const std::vector<std::string> allowed = {
        "kind",   "g",           "alpha",  "eps",          "p",
        "N",      "m_periods",   "dt",     "T",            "window_fraction",
        "sample_every", "seed",  "domain", "v0",           "period_shift"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("config: unknown key '" + key + "'");
    }
    if (!doc.contains("kind")) throw ConfigError("config: missing 'kind'");
    if (!doc.contains("g")) throw ConfigError("config: missing 'g'");

    ExperimentConfig cfg;
    cfg.raw = doc;
    cfg.kind = parse_kind(doc.at("kind").get<std::string>());
    try {
        cfg.g = Nonlinearity::from_json(doc.at("g"));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: bad forcing description: ") + e.what());
    }
    const ValidationReport report = validate(cfg.g);
    if (!report.pass()) {
        std::string bad;
        for (const auto& c : report.checks) {
            if (!c.pass) bad += (bad.empty() ? "" : ", ") + c.name;
        }
        throw ConfigError("config: forcing fails validation (" + bad + ")");
    }

    cfg.alpha = doc.value("alpha", 0.0);
    if (!(cfg.alpha >= 0.0 && cfg.alpha < 1.0)) throw ConfigError("config: alpha must lie in [0, 1)");

    if (!doc.contains("eps")) throw ConfigError("config: missing 'eps'");
    cfg.eps_list = number_or_list(doc.at("eps"), "eps");
    if (cfg.eps_list.empty()) throw ConfigError("config: empty eps list");
    for (double e : cfg.eps_list) {
        if (!(e > 0.0 && e <= 1.0)) throw ConfigError("config: eps values must lie in (0, 1]");
    }

    if (doc.contains("p")) {
        cfg.p_list = number_or_list(doc.at("p"), "p");
    } else {
        cfg.p_list = {cfg.kind == ExperimentKind::ode_run ? 0.0 : 1.0};
    }
    if (cfg.p_list.empty()) throw ConfigError("config: empty p list");
    for (double p : cfg.p_list) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw ConfigError("config: p values must be finite and >= 0");
    }

    cfg.n_nodes = doc.value("N", 256);
    if (cfg.n_nodes < 16) throw ConfigError("config: N must be at least 16");
    cfg.m_periods = doc.value("m_periods", 0.0);
    if (cfg.m_periods < 0.0) throw ConfigError("config: m_periods must be >= 0");
    cfg.dt = doc.value("dt", 0.0);
    if (cfg.dt < 0.0) throw ConfigError("config: dt must be >= 0");
    cfg.horizon = doc.value("T", 0.0);
    if (cfg.horizon < 0.0) throw ConfigError("config: T must be >= 0");
    cfg.window_fraction = doc.value("window_fraction", 0.5);
    if (!(cfg.window_fraction > 0.0 && cfg.window_fraction <= 1.0))
        throw ConfigError("config: window_fraction must lie in (0, 1]");
    cfg.sample_every = doc.value("sample_every", 0);
    if (cfg.sample_every < 0) throw ConfigError("config: sample_every must be >= 0");
    cfg.seed = doc.value("seed", 0UL);
    if (doc.contains("domain")) {
        const auto& dom = doc.at("domain");
        cfg.domain_half_width = dom.value("L", 3.0);
        cfg.domain_nodes = dom.value("M", 385);
        if (!(cfg.domain_half_width > 0.0)) throw ConfigError("config: domain.L must be positive");
        if (cfg.domain_nodes < 64) throw ConfigError("config: domain.M must be at least 64");
    }
    if (doc.contains("v0")) {
        cfg.v0 = doc.at("v0");
        try {
            Perturbation::from_json(cfg.v0);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: bad v0 description: ") + e.what());
        }
    }
    cfg.period_shift = doc.value("period_shift", 0L);

    const auto single = [&](const std::vector<double>& v, const std::string& key) {
        if (v.size() != 1) throw ConfigError("config: '" + key + "' must be a single value for this kind");
    };
    switch (cfg.kind) {
        case ExperimentKind::chi_run:
            single(cfg.eps_list, "eps");
            single(cfg.p_list, "p");
            if (!(cfg.p_list[0] > 0.0)) throw ConfigError("config: chi-run needs p > 0");
            break;
        case ExperimentKind::ode_run:
            single(cfg.eps_list, "eps");
            single(cfg.p_list, "p");
            if (cfg.p_list[0] != 0.0) throw ConfigError("config: ode-run requires p = 0");
            break;
        case ExperimentKind::direct_run:
        case ExperimentKind::sandwich:
            single(cfg.eps_list, "eps");
            single(cfg.p_list, "p");
            if (cfg.kind == ExperimentKind::sandwich && !(cfg.p_list[0] > 0.0))
                throw ConfigError("config: sandwich needs p > 0");
            if (!(cfg.horizon > 0.0))
                throw ConfigError("config: direct kinds need an explicit T > 0");
            break;
        case ExperimentKind::eps_sweep:
            if (cfg.eps_list.size() < 3) throw ConfigError("config: eps-sweep needs >= 3 eps values");
            require_decreasing(cfg.eps_list, "eps");
            single(cfg.p_list, "p");
            break;
        case ExperimentKind::p_sweep:
            single(cfg.eps_list, "eps");
            if (cfg.p_list.size() < 2) throw ConfigError("config: p-sweep needs >= 2 p values");
            for (std::size_t i = 1; i < cfg.p_list.size(); ++i) {
                if (!(cfg.p_list[i] > cfg.p_list[i - 1]))
                    throw ConfigError("config: p-sweep values must strictly increase");
            }
            break;
        case ExperimentKind::bernstein_sweep:
            if (cfg.eps_list.size() < 4)
                throw ConfigError("config: bernstein-sweep needs >= 4 eps values");
            require_decreasing(cfg.eps_list, "eps");
            if (cfg.eps_list.front() < 10.0 * cfg.eps_list.back() * (1.0 - 1e-9))
                throw ConfigError("config: bernstein-sweep eps range must span a decade");
            single(cfg.p_list, "p");
            if (!(cfg.p_list[0] > 0.0)) throw ConfigError("config: bernstein-sweep needs p > 0");
            break;
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
    }
    return from_json(doc);
}

std::string config_hash(const nlohmann::json& doc) {
    const std::string dump = doc.dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

nlohmann::json RunRecord::to_json() const {
    return {{"params", params}, {"payload", payload}, {"status", status}};
}

nlohmann::json Summary::to_json() const {
    nlohmann::json j;
    j["config_hash"] = hash;
    j["runs"] = nlohmann::json::array();
    for (const auto& r : runs) j["runs"].push_back(r.to_json());
    j["checks"] = checks;
    j["all_pass"] = all_pass;
    return j;
}

namespace {

struct TaskResult {
    RunRecord rec;
    std::optional<SpeedEstimate> est;
    std::optional<SweepObservation> obs;
    double dt_used = 0.0;
};

nlohmann::json make_check(const std::string& name, bool pass, double measured, double expected,
                          double tolerance) {
    return {{"name", name}, {"pass", pass}, {"measured", measured}, {"expected", expected},
            {"tolerance", tolerance}};
}

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

TaskResult chi_task(const ExperimentConfig& cfg, double eps, double p, const std::string& out_dir) {
    TaskResult res;
    Stopwatch watch;
    const ModelParams params{eps, cfg.alpha, p};
    res.rec.params = {{"kind", "chi-run"}, {"eps", eps}, {"alpha", cfg.alpha}, {"p", p},
                      {"N", cfg.n_nodes}};
    try {
        const PeriodicGrid grid(cfg.n_nodes);
        const double m = cfg.m_periods > 0.0 ? cfg.m_periods : 10.0;
        ChiRunOptions opts;
        opts.horizon = cfg.horizon > 0.0 ? cfg.horizon : default_horizon_chi(params, cfg.g, m);
        opts.dt = cfg.dt > 0.0 ? cfg.dt : default_dt_chi(params, cfg.g, grid);
        opts.sample_every = cfg.sample_every;
        res.rec.params["T"] = opts.horizon;
        res.rec.params["dt"] = opts.dt;
        res.dt_used = opts.dt;

        const Trajectory traj = solve_chi(params, cfg.g, grid, opts);
        write_trajectory_csv(out_dir + "/chi_eps" + format_double(eps) + "_p" + format_double(p) +
                                 ".csv",
                             traj);
        SweepObservation obs;
        obs.eps = eps;
        for (std::size_t k = 0; k < traj.size(); ++k) {
            obs.grad_observable = std::max(obs.grad_observable, p * traj.grad_sup[k]);
            obs.oscillation_sup = std::max(obs.oscillation_sup, traj.oscillation(k));
        }
        res.obs = obs;

        const SpeedEstimate est = extract_speed(traj, params, cfg.window_fraction);
        res.est = est;
        const EffectiveSpeed limit = effective_speed(p, cfg.g);
        res.rec.payload = {{"estimate", est.to_json()},
                           {"limit_speed", limit.value},
                           {"speed_error", std::abs(est.scaled_speed - limit.value)},
                           {"grad_observable", obs.grad_observable},
                           {"oscillation_sup", obs.oscillation_sup}};
    } catch (const std::exception& e) {
        res.rec.status = e.what();
    }
    res.rec.wall_ms = watch.ms();
    return res;
}

TaskResult ode_task(const ExperimentConfig& cfg, double eps, const std::string& out_dir) {
    TaskResult res;
    Stopwatch watch;
    const ModelParams params{eps, cfg.alpha, 0.0};
    res.rec.params = {{"kind", "ode-run"}, {"eps", eps}, {"alpha", cfg.alpha}, {"p", 0.0}};
    try {
        const double m = cfg.m_periods > 0.0 ? cfg.m_periods : 40.0;
        const double horizon =
            cfg.horizon > 0.0 ? cfg.horizon : default_horizon_ode(params, cfg.g, m);
        const double dt = cfg.dt > 0.0 ? cfg.dt : default_dt_ode(params, cfg.g);
        res.rec.params["T"] = horizon;
        res.rec.params["dt"] = dt;
        res.dt_used = dt;

        const Trajectory traj =
            solve_ode_p0(params, cfg.g, horizon, dt, std::max(1, cfg.sample_every));
        write_trajectory_csv(out_dir + "/ode_eps" + format_double(eps) + ".csv", traj);

        const SpeedEstimate est = extract_speed(traj, params, cfg.window_fraction);
        res.est = est;
        const EffectiveSpeed limit = effective_speed(0.0, cfg.g);
        res.rec.payload = {{"estimate", est.to_json()},
                           {"limit_speed", limit.value},
                           {"speed_error", std::abs(est.scaled_speed - limit.value)}};
    } catch (const std::exception& e) {
        res.rec.status = e.what();
    }
    res.rec.wall_ms = watch.ms();
    return res;
}

TaskResult direct_task(const ExperimentConfig& cfg, double eps, double p, const InitialDatum& datum,
                       const std::string& out_dir, const std::string& label,
                       FieldTrajectory* keep = nullptr) {
    TaskResult res;
    Stopwatch watch;
    const ModelParams params{eps, cfg.alpha, std::abs(p)};
    res.rec.params = {{"kind", "direct-run"}, {"eps", eps}, {"alpha", cfg.alpha}, {"p", p},
                      {"L", cfg.domain_half_width}, {"M", cfg.domain_nodes},
                      {"period_shift", datum.period_shift}, {"label", label}};
    try {
        const LineDomain domain(cfg.domain_half_width, cfg.domain_nodes);
        DirectRunOptions opts;
        opts.horizon = cfg.horizon;
        opts.dt = cfg.dt > 0.0 ? cfg.dt : default_direct_dt(params, cfg.g, opts.horizon);
        opts.sample_every = cfg.sample_every;
        opts.reference_nodes = cfg.n_nodes;
        res.rec.params["T"] = opts.horizon;
        res.rec.params["dt"] = opts.dt;
        res.dt_used = opts.dt;

        const FieldTrajectory traj = solve_direct(datum, params, cfg.g, domain, opts);
        write_field_csv(out_dir + "/direct_" + label + "_eps" + format_double(eps) + "_p" +
                            format_double(p) + ".csv",
                        traj);
        res.rec.payload = {{"final_time", traj.t.back()},
                           {"samples", traj.size()},
                           {"v0", datum.v0.to_json()}};
        if (keep != nullptr) *keep = traj;
    } catch (const std::exception& e) {
        res.rec.status = e.what();
    }
    res.rec.wall_ms = watch.ms();
    return res;
}

std::vector<TaskResult> run_tasks(std::vector<std::function<TaskResult()>>& tasks, int jobs) {
    std::vector<TaskResult> results(tasks.size());
    if (jobs <= 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
        return results;
    }
    std::atomic<std::size_t> next{0};
    const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), tasks.size());
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        workers.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) break;
                results[i] = tasks[i]();
            }
        });
    }
    for (auto& t : workers) t.join();
    return results;
}

void append_speed_checks(Summary& summary, const ExperimentConfig& cfg, const TaskResult& res,
                         double eps, double p) {
    if (res.rec.status != "ok" || !res.est) {
        summary.checks.push_back(make_check("run_completed", false, 0.0, 1.0, 0.0));
        return;
    }
    const ModelParams params{eps, cfg.alpha, p};
    const BoundsReport bounds = check_speed_bounds(*res.est, params, cfg.g);
    summary.checks.push_back(
        make_check("speed_bounds", bounds.pass, bounds.c_eps, bounds.upper_bound, 1e-9));
}

}  // namespace

Summary run_config(const ExperimentConfig& cfg, const std::string& out_dir, int jobs) {
    std::filesystem::create_directories(out_dir);
    Summary summary;
    summary.hash = config_hash(cfg.raw);

    std::vector<std::function<TaskResult()>> tasks;
    std::vector<TaskResult> results;

    switch (cfg.kind) {
        case ExperimentKind::chi_run: {
            const double eps = cfg.eps_list[0];
            const double p = cfg.p_list[0];
            tasks.push_back([&, eps, p]() { return chi_task(cfg, eps, p, out_dir); });
            results = run_tasks(tasks, jobs);
            append_speed_checks(summary, cfg, results[0], eps, p);
            break;
        }
        case ExperimentKind::ode_run: {
            const double eps = cfg.eps_list[0];
            tasks.push_back([&, eps]() { return ode_task(cfg, eps, out_dir); });
            results = run_tasks(tasks, jobs);
            append_speed_checks(summary, cfg, results[0], eps, 0.0);
            break;
        }
        case ExperimentKind::direct_run: {
            const double eps = cfg.eps_list[0];
            const double p = cfg.p_list[0];
            InitialDatum datum;
            datum.slope = p;
            datum.v0 = cfg.v0.is_null() ? Perturbation() : Perturbation::from_json(cfg.v0);
            datum.period_shift = cfg.period_shift;
            tasks.push_back([&, eps, p, datum]() {
                return direct_task(cfg, eps, p, datum, out_dir, "run");
            });
            results = run_tasks(tasks, jobs);
            summary.checks.push_back(
                make_check("run_completed", results[0].rec.status == "ok",
                           results[0].rec.status == "ok" ? 1.0 : 0.0, 1.0, 0.0));
            break;
        }
        case ExperimentKind::eps_sweep: {
            const double p = cfg.p_list[0];
            for (double eps : cfg.eps_list) {
                if (p > 0.0) {
                    tasks.push_back([&, eps, p]() { return chi_task(cfg, eps, p, out_dir); });
                } else {
                    tasks.push_back([&, eps]() { return ode_task(cfg, eps, out_dir); });
                }
            }
            results = run_tasks(tasks, jobs);
            const EffectiveSpeed limit = effective_speed(p, cfg.g);
            std::vector<double> errors;
            for (const auto& res : results) {
                if (res.rec.status == "ok" && res.est)
                    errors.push_back(std::abs(res.est->scaled_speed - limit.value));
            }
            double max_increase = 0.0;
            for (std::size_t i = 1; i < errors.size(); ++i)
                max_increase = std::max(max_increase, errors[i] - errors[i - 1]);
            summary.checks.push_back(make_check("speed_error_nonincreasing",
                                                errors.size() >= 2 && max_increase <= 1e-12,
                                                max_increase, 0.0, 1e-12));
            break;
        }
        case ExperimentKind::p_sweep: {
            const double eps = cfg.eps_list[0];
            for (double p : cfg.p_list) {
                if (p > 0.0) {
                    tasks.push_back([&, eps, p]() { return chi_task(cfg, eps, p, out_dir); });
                } else {
                    tasks.push_back([&, eps]() { return ode_task(cfg, eps, out_dir); });
                }
            }
            results = run_tasks(tasks, jobs);
            double nonzero_min = 0.0, nonzero_max = 0.0;
            bool have_nonzero = false;
            std::optional<double> zero_speed;
            for (std::size_t i = 0; i < results.size(); ++i) {
                if (results[i].rec.status != "ok" || !results[i].est) continue;
                const double s = results[i].est->scaled_speed;
                if (cfg.p_list[i] == 0.0) {
                    zero_speed = s;
                } else if (!have_nonzero) {
                    nonzero_min = nonzero_max = s;
                    have_nonzero = true;
                } else {
                    nonzero_min = std::min(nonzero_min, s);
                    nonzero_max = std::max(nonzero_max, s);
                }
            }
            if (have_nonzero && nonzero_max > 0.0) {
                const double spread = (nonzero_max - nonzero_min) / nonzero_max;
                summary.checks.push_back(
                    make_check("p_independence", spread <= 0.02, spread, 0.0, 0.02));
            }
            if (zero_speed && have_nonzero) {
                summary.checks.push_back(make_check("lower_semicontinuity",
                                                    *zero_speed <= nonzero_min + 1e-3, *zero_speed,
                                                    nonzero_min, 1e-3));
            }
            break;
        }
        case ExperimentKind::bernstein_sweep: {
            const double p = cfg.p_list[0];
            for (double eps : cfg.eps_list) {
                tasks.push_back([&, eps, p]() { return chi_task(cfg, eps, p, out_dir); });
            }
            results = run_tasks(tasks, jobs);
            std::vector<SweepObservation> sweep;
            for (const auto& res : results) {
                if (res.obs) sweep.push_back(*res.obs);
            }
            if (sweep.size() != cfg.eps_list.size()) {
                summary.checks.push_back(make_check("sweep_complete", false,
                                                    static_cast<double>(sweep.size()),
                                                    static_cast<double>(cfg.eps_list.size()), 0.0));
                break;
            }
            const ModelParams params{cfg.eps_list[0], cfg.alpha, p};
            const ScalingFit fit = bernstein_scaling(sweep, params, cfg.g);
            const OscillationReport osc = oscillation_check(sweep);
            summary.checks.push_back(make_check("gradient_slope", fit.flat || fit.slope >= fit.slope_floor,
                                                fit.slope, fit.slope_floor, 0.0));
            summary.checks.push_back(make_check("gradient_ratio_bounded",
                                                fit.ratio_max <= kBernsteinRatioBound, fit.ratio_max,
                                                kBernsteinRatioBound, 0.0));
            summary.checks.push_back(
                make_check("oscillation_bounded", osc.bounded, osc.oscillation_max, 3.0, 0.0));
            double max_osc_increase = 0.0;
            for (std::size_t i = 1; i < sweep.size(); ++i) {
                max_osc_increase =
                    std::max(max_osc_increase, sweep[i].oscillation_sup - sweep[i - 1].oscillation_sup);
            }
            summary.checks.push_back(
                make_check("oscillation_monotone", osc.monotone, max_osc_increase, 0.0, 1e-9));
            break;
        }
        case ExperimentKind::sandwich: {
            const double eps = cfg.eps_list[0];
            const double p = cfg.p_list[0];
            InitialDatum perturbed;
            perturbed.slope = p;
            perturbed.v0 = cfg.v0.is_null() ? Perturbation() : Perturbation::from_json(cfg.v0);
            perturbed.period_shift = cfg.period_shift;
            InitialDatum planar;
            planar.slope = p;

            FieldTrajectory traj_perturbed, traj_planar;
            ExperimentConfig chi_cfg = cfg;
            chi_cfg.horizon = 0.0;  // the support run uses the reduced-time policy horizon
            chi_cfg.dt = 0.0;
            tasks.push_back([&, eps, p]() { return chi_task(chi_cfg, eps, p, out_dir); });
            tasks.push_back([&, eps, p]() {
                return direct_task(cfg, eps, p, perturbed, out_dir, "perturbed", &traj_perturbed);
            });
            tasks.push_back([&, eps, p]() {
                return direct_task(cfg, eps, p, planar, out_dir, "planar", &traj_planar);
            });
            results = run_tasks(tasks, jobs);

            const bool all_ok = results[0].rec.status == "ok" && results[1].rec.status == "ok" &&
                                results[2].rec.status == "ok" && results[0].est.has_value();
            if (!all_ok) {
                summary.checks.push_back(make_check("sweep_complete", false, 0.0, 3.0, 0.0));
                break;
            }
            const double shift = eps * static_cast<double>(perturbed.period_shift);
            const double inf_total = perturbed.v0.inf_value() + shift;
            const double sup_total = perturbed.v0.sup_value() + shift;
            const long k_lo = static_cast<long>(std::floor(inf_total / eps));
            const long k_hi = static_cast<long>(std::ceil(sup_total / eps)) + 1;

            double worst_lower = 0.0, worst_upper = 0.0;
            for (std::size_t k = 0; k < traj_perturbed.size(); ++k) {
                for (std::size_t i = 0; i < traj_perturbed.x.size(); ++i) {
                    const double lo = traj_planar.u[k][i] + eps * static_cast<double>(k_lo);
                    const double hi = traj_planar.u[k][i] + eps * static_cast<double>(k_hi);
                    worst_lower = std::max(worst_lower, lo - traj_perturbed.u[k][i]);
                    worst_upper = std::max(worst_upper, traj_perturbed.u[k][i] - hi);
                }
            }
            summary.checks.push_back(
                make_check("envelope_lower", worst_lower <= 1e-10, worst_lower, 0.0, 1e-10));
            summary.checks.push_back(
                make_check("envelope_upper", worst_upper <= 1e-10, worst_upper, 0.0, 1e-10));

            const LineDomain domain(cfg.domain_half_width, cfg.domain_nodes);
            const double h = domain.spacing();
            const double scheme_tol = 2.0 * (h * h + results[1].dt_used);
            const double slack = results[0].est->k_emp * eps + 2.0 * eps + scheme_tol;
            const double c_limit = effective_speed(p, cfg.g).value;
            const SandwichReport rep = sandwich_check(traj_perturbed, c_limit, perturbed,
                                                      0.5 * cfg.domain_half_width, slack);
            summary.checks.push_back(make_check("sandwich_band", rep.pass,
                                                std::max(rep.max_deviation - sup_total,
                                                         inf_total - rep.min_deviation),
                                                0.0, slack));
            summary.runs.push_back(results[0].rec);
            summary.runs.push_back(results[1].rec);
            summary.runs.push_back(results[2].rec);
            summary.runs.back().payload["sandwich"] = rep.to_json();
            for (const auto& c : summary.checks) {
                if (!c.at("pass").get<bool>()) summary.all_pass = false;
            }
            std::ofstream out(out_dir + "/summary.json", std::ios::binary);
            out << summary.to_json().dump(2) << '\n';
            return summary;
        }
    }

    for (auto& res : results) summary.runs.push_back(std::move(res.rec));
    for (const auto& c : summary.checks) {
        if (!c.at("pass").get<bool>()) summary.all_pass = false;
    }
    std::ofstream out(out_dir + "/summary.json", std::ios::binary);
    out << summary.to_json().dump(2) << '\n';
    return summary;
}

}  // namespace frontspeed
