#include "frontspeed/reduced_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "frontspeed/errors.hpp"
#include "frontspeed/quadrature.hpp"
#include "tridiag.hpp"

namespace frontspeed {

double ModelParams::reaction_scale() const { return std::pow(eps, 1.0 - alpha); }

void validate_params(const ModelParams& p) {
    if (!(p.eps > 0.0 && p.eps <= 1.0)) throw std::invalid_argument("params: eps must lie in (0, 1]");
    if (!(p.alpha >= 0.0 && p.alpha < 1.0)) throw std::invalid_argument("params: alpha must lie in [0, 1)");
    if (!(p.p_norm >= 0.0)) throw std::invalid_argument("params: p_norm must be >= 0");
}

PeriodicGrid::PeriodicGrid(int n_nodes) : n(n_nodes) {
    if (n_nodes < 16) throw std::invalid_argument("PeriodicGrid: needs at least 16 nodes");
}

ChiState init_chi(const PeriodicGrid& grid) {
    return ChiState{0.0, std::vector<double>(static_cast<std::size_t>(grid.n), 0.0)};
}

namespace {

void check_reaction_step(double dt, const ModelParams& params, const Nonlinearity& g) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const double level = dt * params.reaction_scale() * g.lipschitz_constant();
    if (level > 1.0) {
        throw MonotonicityViolation("step: dt * eps^(1-alpha) * Lip(g) = " + std::to_string(level) +
                                    " exceeds 1; the explicit reaction update is not monotone");
    }
}

void reaction_rhs(const std::vector<double>& chi, const ModelParams& params, const Nonlinearity& g,
                  const PeriodicGrid& grid, double dt, std::vector<double>& out) {
    const double scale = dt * params.reaction_scale();
    for (int j = 0; j < grid.n; ++j) {
        out[static_cast<std::size_t>(j)] =
            chi[static_cast<std::size_t>(j)] - scale * g(chi[static_cast<std::size_t>(j)] + grid.z(j));
    }
}

void record_sample(Trajectory& traj, double t, const std::vector<double>& chi,
                   const PeriodicGrid& grid, bool store_snapshot) {
    const std::size_t n = chi.size();
    double acc = 0.0;
    double lo = chi[0], hi = chi[0];
    for (double v : chi) {
        acc += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double grad = 0.0;
    const double inv_2h = 0.5 * grid.n;
    for (std::size_t j = 0; j < n; ++j) {
        const double up = chi[(j + 1) % n];
        const double dn = chi[(j + n - 1) % n];
        grad = std::max(grad, std::abs(up - dn) * inv_2h);
    }
    traj.t.push_back(t);
    traj.mean.push_back(acc / static_cast<double>(n));
    traj.lo.push_back(lo);
    traj.hi.push_back(hi);
    traj.grad_sup.push_back(grad);
    if (store_snapshot) {
        traj.snapshot_t.push_back(t);
        traj.snapshots.push_back(chi);
    }
}

}  // namespace

ChiState step_imex(const ChiState& state, const ModelParams& params, const Nonlinearity& g,
                   const PeriodicGrid& grid, double dt) {
    validate_params(params);
    if (!(params.p_norm > 0.0)) throw std::invalid_argument("step_imex: requires p_norm > 0");
    if (state.values.size() != static_cast<std::size_t>(grid.n))
        throw std::invalid_argument("step_imex: state size does not match grid");
    check_reaction_step(dt, params, g);

    const double h = grid.spacing();
    const double r = dt * params.p_norm * params.p_norm / (h * h);
    ChiState out;
    out.t = state.t + dt;
    out.values.resize(state.values.size());
    reaction_rhs(state.values, params, g, grid, dt, out.values);
    detail::CyclicDiffusionSolver solver(grid.n, r);
    solver.solve(out.values);
    return out;
}

ChiState step_explicit(const ChiState& state, const ModelParams& params, const Nonlinearity& g,
                       const PeriodicGrid& grid, double dt) {
    validate_params(params);
    if (!(params.p_norm > 0.0)) throw std::invalid_argument("step_explicit: requires p_norm > 0");
    if (state.values.size() != static_cast<std::size_t>(grid.n))
        throw std::invalid_argument("step_explicit: state size does not match grid");
    check_reaction_step(dt, params, g);

    const double h = grid.spacing();
    const double p2 = params.p_norm * params.p_norm;
    if (dt > h * h / (2.0 * p2)) {
        throw CflViolation("step_explicit: dt = " + std::to_string(dt) + " exceeds h^2 / (2 p^2) = " +
                           std::to_string(h * h / (2.0 * p2)));
    }

    const std::size_t n = state.values.size();
    const double nu = dt * p2 / (h * h);
    const double scale = dt * params.reaction_scale();
    ChiState out;
    out.t = state.t + dt;
    out.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double c = state.values[j];
        const double up = state.values[(j + 1) % n];
        const double dn = state.values[(j + n - 1) % n];
        const double lap = (up - c) - (c - dn);
        out.values[j] = c + nu * lap - scale * g(c + grid.z(static_cast<int>(j)));
    }
    return out;
}

Trajectory solve_chi(const ModelParams& params, const Nonlinearity& g, const PeriodicGrid& grid,
                     const ChiRunOptions& opts) {
    validate_params(params);
    if (!(params.p_norm > 0.0)) throw std::invalid_argument("solve_chi: requires p_norm > 0");
    if (!(opts.horizon > 0.0)) throw std::invalid_argument("solve_chi: horizon must be positive");
    const double dt = opts.dt > 0.0 ? opts.dt : default_dt_chi(params, g, grid);
    check_reaction_step(dt, params, g);

    const long n_steps = std::max(1L, static_cast<long>(std::ceil(opts.horizon / dt - 1e-9)));
    const long sample_every =
        opts.sample_every > 0 ? opts.sample_every : std::max(1L, n_steps / 1500L);

    const double h = grid.spacing();
    const double r = dt * params.p_norm * params.p_norm / (h * h);
    detail::CyclicDiffusionSolver solver(grid.n, r);

    std::vector<double> cur(static_cast<std::size_t>(grid.n), 0.0);
    std::vector<double> nxt(cur.size());
    Trajectory traj;
    record_sample(traj, 0.0, cur, grid, opts.store_snapshots);
    for (long k = 1; k <= n_steps; ++k) {
        reaction_rhs(cur, params, g, grid, dt, nxt);
        solver.solve(nxt);
        cur.swap(nxt);
        if (k % sample_every == 0 || k == n_steps) {
            record_sample(traj, static_cast<double>(k) * dt, cur, grid, opts.store_snapshots);
        }
    }
    return traj;
}

Trajectory solve_ode_p0(const ModelParams& params, const Nonlinearity& g, double horizon, double dt,
                        int sample_every, double v0) {
    validate_params(params);
    if (!(horizon > 0.0)) throw std::invalid_argument("solve_ode_p0: horizon must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("solve_ode_p0: dt must be positive");
    if (sample_every <= 0) sample_every = 1;

    const double scale = params.reaction_scale();
    auto f = [&](double v) { return -scale * g(v); };

    const long n_steps = std::max(1L, static_cast<long>(std::ceil(horizon / dt - 1e-9)));
    double v = v0;
    Trajectory traj;
    auto record = [&](double t, double value) {
        traj.t.push_back(t);
        traj.mean.push_back(value);
        traj.lo.push_back(value);
        traj.hi.push_back(value);
        traj.grad_sup.push_back(0.0);
    };
    record(0.0, v);
    for (long k = 1; k <= n_steps; ++k) {
        const double k1 = f(v);
        const double k2 = f(v + 0.5 * dt * k1);
        const double k3 = f(v + 0.5 * dt * k2);
        const double k4 = f(v + dt * k3);
        v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (k % sample_every == 0 || k == n_steps) record(static_cast<double>(k) * dt, v);
    }
    return traj;
}

double time_of_value_p0(const ModelParams& params, const Nonlinearity& g, double v_target,
                        int n_panels) {
    validate_params(params);
    if (!(v_target >= 0.0) || !std::isfinite(v_target))
        throw std::invalid_argument("time_of_value_p0: v_target must be finite and >= 0");
    if (n_panels < 1) throw std::invalid_argument("time_of_value_p0: n_panels must be >= 1");
    if (g.max_value() >= kDegenerateMaxG) {
        throw DegenerateForcing("time_of_value_p0: g touches zero, the travel time diverges");
    }
    if (v_target == 0.0) return 0.0;

    // Composite Simpson over [a, a+len] with n_panels panels; 1/g is
    // 1-periodic, so a full period is integrated once and reused. Splitting
    // at integer periods keeps the panel density independent of v_target.
    const auto simpson = [&](double a, double len) {
        double acc = 0.0;
        for (int i = 0; i < n_panels; ++i) {
            const double l = a + len * i / n_panels;
            const double r = a + len * (i + 1) / n_panels;
            const double m = 0.5 * (l + r);
            acc += (r - l) / 6.0 * (1.0 / g(l) + 4.0 / g(m) + 1.0 / g(r));
        }
        return acc;
    };
    const double whole = std::floor(v_target);
    double acc = 0.0;
    if (whole >= 1.0) acc += whole * simpson(0.0, 1.0);
    const double rest = v_target - whole;
    if (rest > 0.0) acc += simpson(whole, rest);
    return -std::pow(params.eps, params.alpha - 1.0) * acc;
}

double default_dt_chi(const ModelParams& params, const Nonlinearity& g, const PeriodicGrid& grid) {
    const double reaction = params.reaction_scale() * g.lipschitz_constant();
    const double dt_reaction =
        reaction > 0.0 ? 0.5 / reaction : std::numeric_limits<double>::infinity();
    const double dt_accuracy = 0.1 * grid.spacing() / std::max(1.0, params.p_norm);
    return std::min(dt_reaction, dt_accuracy);
}

double default_horizon_chi(const ModelParams& params, const Nonlinearity& g, double m_periods) {
    const double rate = params.reaction_scale() * g.sup_norm();
    return rate > 0.0 ? m_periods / rate : 1.0;
}

double vertical_period_p0(const ModelParams& params, const Nonlinearity& g) {
    if (g.max_value() >= kDegenerateMaxG) return std::numeric_limits<double>::infinity();
    return time_of_value_p0(params, g, 1.0, 512);
}

double default_dt_ode(const ModelParams& params, const Nonlinearity& g) {
    const double period = vertical_period_p0(params, g);
    if (std::isfinite(period)) return period / 256.0;
    return default_horizon_chi(params, g, 10.0) / 2048.0;
}

double default_horizon_ode(const ModelParams& params, const Nonlinearity& g, double m_periods) {
    const double period = vertical_period_p0(params, g);
    if (std::isfinite(period)) return m_periods * period;
    return default_horizon_chi(params, g, 10.0);
}

}  // namespace frontspeed
