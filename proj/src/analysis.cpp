#include "frontspeed/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frontspeed/errors.hpp"

namespace frontspeed {

LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("linear_fit: needs two equal-length samples at least");
    const std::size_t n = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx;
        const double dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
        fit.residual_sup = std::max(fit.residual_sup, std::abs(r));
    }
    fit.r2 = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

namespace {

LinearFit fit_between(const Trajectory& traj, double t_lo, double t_hi) {
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.t[k] >= t_lo - 1e-12 && traj.t[k] <= t_hi + 1e-12) {
            xs.push_back(traj.t[k]);
            ys.push_back(traj.mean[k]);
        }
    }
    if (xs.size() < 2)
        throw std::invalid_argument("extract_speed: too few samples in a diagnostic window");
    return linear_fit(xs, ys);
}

}  // namespace

nlohmann::json SpeedEstimate::to_json() const {
    return {{"c_eps", c_eps},
            {"scaled_speed", scaled_speed},
            {"window", {window_lo, window_hi}},
            {"fit_residual_sup", fit_residual_sup},
            {"k_emp", k_emp},
            {"stationary", stationary}};
}

SpeedEstimate extract_speed(const Trajectory& traj, const ModelParams& params,
                            double window_fraction) {
    validate_params(params);
    if (!(window_fraction > 0.0 && window_fraction <= 1.0))
        throw std::invalid_argument("extract_speed: window_fraction must lie in (0, 1]");
    if (traj.size() < 2) throw std::invalid_argument("extract_speed: trajectory too short");
    const double horizon = traj.t.back();
    if (!(horizon > 0.0)) throw std::invalid_argument("extract_speed: horizon must be positive");

    const double window_start = horizon * (1.0 - window_fraction);
    std::vector<double> ts, ms;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (traj.t[k] >= window_start - 1e-12 * horizon) {
            ts.push_back(traj.t[k]);
            ms.push_back(traj.mean[k]);
            idx.push_back(k);
        }
    }
    if (ts.size() < 20)
        throw std::invalid_argument("extract_speed: needs at least 20 samples in the fit window");

    const LinearFit fit = linear_fit(ts, ms);
    const LinearFit first_half = fit_between(traj, 0.5 * horizon, 0.75 * horizon);
    const LinearFit second_half = fit_between(traj, 0.75 * horizon, horizon);
    const double scale = std::max(std::abs(first_half.slope), std::abs(second_half.slope));
    bool stationary;
    if (scale < 1e-14 * std::max(1.0, std::abs(fit.slope))) {
        stationary = true;  // flat trajectory, e.g. the degenerate touching case
    } else {
        stationary = std::abs(first_half.slope - second_half.slope) / scale < 0.01;
    }
    if (!stationary) {
        throw NonStationary("extract_speed: half-window slopes differ by >= 1%; the horizon is too "
                            "short for the mean drift to settle");
    }

    SpeedEstimate est;
    est.c_eps = fit.slope;
    est.scaled_speed = fit.slope * std::pow(params.eps, params.alpha - 1.0);
    est.window_lo = ts.front();
    est.window_hi = ts.back();
    est.fit_residual_sup = fit.residual_sup;
    est.stationary = stationary;
    for (std::size_t k : idx) {
        const double ct = est.c_eps * traj.t[k];
        est.k_emp = std::max(est.k_emp, std::max(traj.hi[k] - ct, ct - traj.lo[k]));
    }
    return est;
}

nlohmann::json BoundsReport::to_json() const {
    return {{"pass", pass}, {"degenerate", degenerate}, {"c_eps", c_eps}, {"upper_bound", upper_bound}};
}

BoundsReport check_speed_bounds(const SpeedEstimate& est, const ModelParams& params,
                                const Nonlinearity& g) {
    BoundsReport rep;
    rep.c_eps = est.c_eps;
    rep.upper_bound = std::pow(params.eps, 1.0 - params.alpha) * g.sup_norm();
    rep.degenerate = params.p_norm == 0.0 && g.attains_zero();
    if (rep.degenerate) {
        rep.pass = std::abs(est.c_eps) <= 1e-9;
    } else {
        rep.pass = est.c_eps > 0.0 && est.c_eps <= rep.upper_bound + 1e-9;
    }
    return rep;
}

nlohmann::json BandReport::to_json() const { return {{"k_emp", k_emp}}; }

BandReport band_check(const Trajectory& traj, const SpeedEstimate& est) {
    if (traj.size() == 0) throw std::invalid_argument("band_check: empty trajectory");
    BandReport rep;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const double ct = est.c_eps * traj.t[k];
        rep.k_emp = std::max(rep.k_emp, std::max(traj.hi[k] - ct, ct - traj.lo[k]));
    }
    return rep;
}

nlohmann::json BandStability::to_json() const {
    return {{"pass", pass}, {"rel_change", rel_change}};
}

BandStability band_stability(const BandReport& base, const BandReport& doubled, double tolerance) {
    BandStability rep;
    const double denom = std::max({base.k_emp, doubled.k_emp, 1e-10});
    rep.rel_change = std::abs(doubled.k_emp - base.k_emp) / denom;
    rep.pass = rep.rel_change < tolerance;
    return rep;
}

nlohmann::json ScalingFit::to_json() const {
    return {{"eps_list", eps_list}, {"observables", observables}, {"slope", slope},
            {"r2", r2},             {"ratio_max", ratio_max},     {"slope_floor", slope_floor},
            {"flat", flat},         {"pass", pass}};
}

ScalingFit bernstein_scaling(const std::vector<SweepObservation>& sweep, const ModelParams& params,
                             const Nonlinearity& g) {
    if (sweep.size() < 4) throw std::invalid_argument("bernstein_scaling: needs >= 4 eps values");
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        if (!(sweep[i].eps < sweep[i - 1].eps))
            throw std::invalid_argument("bernstein_scaling: eps values must strictly decrease");
    }
    if (sweep.front().eps < 10.0 * sweep.back().eps * (1.0 - 1e-9))
        throw std::invalid_argument("bernstein_scaling: the eps range must span a decade");

    ScalingFit fit;
    const double exponent = (1.0 - params.alpha) / 4.0;
    fit.slope_floor = exponent - 0.05;
    double obs_max = 0.0;
    for (const auto& s : sweep) {
        fit.eps_list.push_back(s.eps);
        fit.observables.push_back(s.grad_observable);
        obs_max = std::max(obs_max, s.grad_observable);
        const double envelope =
            std::pow(s.eps, exponent) * (1.0 + params.p_norm) * g.lipschitz_norm();
        if (envelope > 0.0) fit.ratio_max = std::max(fit.ratio_max, s.grad_observable / envelope);
    }
    if (obs_max < 1e-14) {
        fit.flat = true;  // flat profile (constant g); nothing to fit, the bound holds trivially
        fit.pass = true;
        return fit;
    }
    std::vector<double> lx, ly;
    for (const auto& s : sweep) {
        if (!(s.grad_observable > 0.0))
            throw std::invalid_argument("bernstein_scaling: nonpositive observable in a non-flat sweep");
        lx.push_back(std::log(s.eps));
        ly.push_back(std::log(s.grad_observable));
    }
    const LinearFit ll = linear_fit(lx, ly);
    fit.slope = ll.slope;
    fit.r2 = ll.r2;
    fit.pass = fit.slope >= fit.slope_floor && fit.ratio_max <= kBernsteinRatioBound;
    return fit;
}

nlohmann::json OscillationReport::to_json() const {
    return {{"pass", pass}, {"oscillation_max", oscillation_max}, {"bounded", bounded},
            {"monotone", monotone}};
}

OscillationReport oscillation_check(const std::vector<SweepObservation>& sweep) {
    if (sweep.empty()) throw std::invalid_argument("oscillation_check: empty sweep");
    OscillationReport rep;
    rep.bounded = true;
    rep.monotone = true;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        rep.oscillation_max = std::max(rep.oscillation_max, sweep[i].oscillation_sup);
        if (sweep[i].oscillation_sup > 2.0 + 1.0) rep.bounded = false;
        if (i > 0 && sweep[i].oscillation_sup > sweep[i - 1].oscillation_sup + 1e-9)
            rep.monotone = false;
    }
    rep.pass = rep.bounded && rep.monotone;
    return rep;
}

}  // namespace frontspeed
