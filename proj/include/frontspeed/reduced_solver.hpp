#pragma once

#include <cstddef>
#include <vector>

#include "frontspeed/nonlinearity.hpp"

namespace frontspeed {

/** Scaling parameters shared by the solvers. eps in (0,1], alpha in [0,1),
 *  p_norm >= 0. */
struct ModelParams {
    double eps = 0.1;
    double alpha = 0.0;
    double p_norm = 1.0;

    /** eps^(1-alpha), the factor in front of the reaction term of the
     *  rescaled equation. */
    double reaction_scale() const;
};

void validate_params(const ModelParams& p);

/** Uniform grid on the period [0, 1) with nodes z_j = j/n, j = 0..n-1.
 *  The spacing is carried as the rational 1/n; spacing() rounds once. */
struct PeriodicGrid {
    explicit PeriodicGrid(int n_nodes);  // n_nodes >= 16

    int n = 0;
    double spacing() const { return 1.0 / n; }
    double z(int j) const { return static_cast<double>(j) / n; }
};

/** Profile of the periodic corrector at one time. */
struct ChiState {
    double t = 0.0;
    std::vector<double> values;
};

/** All-zero initial corrector state. */
ChiState init_chi(const PeriodicGrid& grid);

/**
 * Sampled diagnostics of a run. Per sample: time, spatial mean, min, max
 * (oscillation = hi - lo) and the sup of the central-difference gradient.
 * Full profiles are kept only when snapshots were requested.
 */
struct Trajectory {
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<double> grad_sup;

    std::vector<double> snapshot_t;
    std::vector<std::vector<double>> snapshots;

    std::size_t size() const { return t.size(); }
    double oscillation(std::size_t k) const { return hi[k] - lo[k]; }
};

/**
 * One step of the IMEX scheme for
 *   chi_t - p^2 chi_zz + eps^(1-alpha) g(chi + z) = 0,
 * diffusion backward Euler (cyclic tridiagonal solve), reaction explicit.
 * Monotone when dt * eps^(1-alpha) * Lip(g) <= 1; larger steps throw
 * MonotonicityViolation. Requires p_norm > 0.
 */
ChiState step_imex(const ChiState& state, const ModelParams& params, const Nonlinearity& g,
                   const PeriodicGrid& grid, double dt);

/** Fully explicit step of the same equation; needs dt <= h^2 / (2 p^2)
 *  (CflViolation) on top of the reaction bound (MonotonicityViolation).
 *  Kept as an independent cross-check for the IMEX path. */
ChiState step_explicit(const ChiState& state, const ModelParams& params, const Nonlinearity& g,
                       const PeriodicGrid& grid, double dt);

struct ChiRunOptions {
    double horizon = 1.0;
    double dt = 0.0;           // <= 0 picks default_dt_chi
    int sample_every = 1;      // <= 0 picks roughly 1500 samples
    bool store_snapshots = false;
};

/** Integrate from the zero state to t >= horizon with the IMEX scheme,
 *  sampling diagnostics every sample_every steps (plus first and last). */
Trajectory solve_chi(const ModelParams& params, const Nonlinearity& g, const PeriodicGrid& grid,
                     const ChiRunOptions& opts);

/** Zero-slope dynamics: RK4 on v' = -eps^(1-alpha) g(v), v(0) = v0.
 *  The trajectory is flat in z: mean = lo = hi = v, grad_sup = 0. */
Trajectory solve_ode_p0(const ModelParams& params, const Nonlinearity& g, double horizon,
                        double dt, int sample_every = 1, double v0 = 0.0);

/**
 * Time at which the zero-slope solution reaches v_target, from the closed
 * form  t(v) = -eps^(alpha-1) \int_0^v ds / g(s)  via composite Simpson with
 * n_panels panels. Throws DegenerateForcing when g touches zero.
 */
double time_of_value_p0(const ModelParams& params, const Nonlinearity& g, double v_target,
                        int n_panels = 512);

/** dt policy: min(0.5 / (eps^(1-alpha) Lip(g)), 0.1 h / max(1, p)). */
double default_dt_chi(const ModelParams& params, const Nonlinearity& g, const PeriodicGrid& grid);

/** Horizon policy: m_periods vertical periods at the crude rate
 *  eps^(1-alpha) ||g||_inf. */
double default_horizon_chi(const ModelParams& params, const Nonlinearity& g,
                           double m_periods = 10.0);

/** Exact vertical period of the zero-slope solution (time to travel one unit),
 *  infinite-horizon fallback when g touches zero. */
double vertical_period_p0(const ModelParams& params, const Nonlinearity& g);

/** dt policy for the zero-slope ODE: 1/256 of a vertical period. */
double default_dt_ode(const ModelParams& params, const Nonlinearity& g);

/** Horizon policy for the zero-slope ODE: m_periods exact vertical periods,
 *  so fit windows cover whole periods. */
double default_horizon_ode(const ModelParams& params, const Nonlinearity& g,
                           double m_periods = 40.0);

}  // namespace frontspeed
