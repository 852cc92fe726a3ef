#pragma once

#include <vector>

#include <json.hpp>

#include "frontspeed/nonlinearity.hpp"
#include "frontspeed/reduced_solver.hpp"

namespace frontspeed {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
    double residual_sup = 0.0;
};

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

struct SpeedEstimate {
    double c_eps = 0.0;         // slope of mean(t) over the fit window
    double scaled_speed = 0.0;  // c_eps * eps^(alpha - 1)
    double window_lo = 0.0;
    double window_hi = 0.0;
    double fit_residual_sup = 0.0;
    double k_emp = 0.0;  // sup over window samples of max_z |chi(z, t) - c_eps * t|
    bool stationary = false;
    nlohmann::json to_json() const;
};

// Least-squares speed over the trailing window_fraction of the trajectory.
// Throws NonStationary when the slopes over [T/2, 3T/4] and [3T/4, T] disagree
// by 1% or more (the horizon was too short).
SpeedEstimate extract_speed(const Trajectory& traj, const ModelParams& params,
                            double window_fraction = 0.5);

struct BoundsReport {
    bool pass = false;
    bool degenerate = false;  // p = 0 with g touching zero: the speed is exactly 0
    double c_eps = 0.0;
    double upper_bound = 0.0;
    nlohmann::json to_json() const;
};

// 0 < c_eps <= eps^(1-alpha) * sup|g|, with headroom 1e-9 for fit noise.
BoundsReport check_speed_bounds(const SpeedEstimate& est, const ModelParams& params,
                                const Nonlinearity& g);

struct BandReport {
    double k_emp = 0.0;  // over the full horizon, not just the fit window
    nlohmann::json to_json() const;
};

BandReport band_check(const Trajectory& traj, const SpeedEstimate& est);

struct BandStability {
    bool pass = false;
    double rel_change = 0.0;
    nlohmann::json to_json() const;
};

// The band half-width must not grow with the horizon: compare a run over [0, T]
// against one over [0, 2T].
BandStability band_stability(const BandReport& base, const BandReport& doubled,
                             double tolerance = 0.10);

struct SweepObservation {
    double eps = 0.0;
    double grad_observable = 0.0;  // sup over t of |p| * sup_z |d_z chi|
    double oscillation_sup = 0.0;  // sup over t of (max_z chi - min_z chi)
};

struct ScalingFit {
    std::vector<double> eps_list;
    std::vector<double> observables;
    double slope = 0.0;
    double r2 = 0.0;
    double ratio_max = 0.0;
    double slope_floor = 0.0;
    bool flat = false;  // observable identically ~0 (constant g), fit skipped
    bool pass = false;
    nlohmann::json to_json() const;
};

// Log-log fit of the gradient observable against eps. Passes when the fitted
// slope is at least (1-alpha)/4 - 0.05 and the ratio
// observable / (eps^((1-alpha)/4) * (1 + |p|) * lipschitz_norm(g)) stays below
// a fixed constant across the sweep; the bound is one-sided, faster decay is fine.
ScalingFit bernstein_scaling(const std::vector<SweepObservation>& sweep, const ModelParams& params,
                             const Nonlinearity& g);

inline constexpr double kBernsteinRatioBound = 10.0;

struct OscillationReport {
    bool pass = false;
    double oscillation_max = 0.0;
    bool bounded = false;    // every oscillation <= 2 + 1
    bool monotone = false;   // nonincreasing as eps decreases
    nlohmann::json to_json() const;
};

OscillationReport oscillation_check(const std::vector<SweepObservation>& sweep);

}  // namespace frontspeed
