#include <doctest.h>

#include <cmath>
#include <vector>

#include "frontspeed/analysis.hpp"
#include "frontspeed/errors.hpp"

using namespace frontspeed;

namespace {

// mean(t) = slope * t + intercept, with a band [mean - below, mean + above]
Trajectory synthetic(double horizon, std::size_t samples, double slope, double intercept,
                     double below, double above) {
    Trajectory traj;
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = horizon * static_cast<double>(k) / static_cast<double>(samples - 1);
        traj.t.push_back(t);
        traj.mean.push_back(slope * t + intercept);
        traj.lo.push_back(slope * t + intercept - below);
        traj.hi.push_back(slope * t + intercept + above);
        traj.grad_sup.push_back(0.0);
    }
    return traj;
}

}  // namespace

TEST_CASE("linear fit recovers exact lines") {
    const std::vector<double> xs = {0.0, 1.0, 2.0, 3.0, 4.0};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(3.0 * x - 1.0);
    const LinearFit fit = linear_fit(xs, ys);
    CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fit.residual_sup < 1e-13);

    CHECK_THROWS_AS(linear_fit({1.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(linear_fit({1.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(linear_fit({1.0, 2.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("speed extraction on a synthetic drift") {
    const ModelParams params{0.04, 0.5, 1.0};
    const Trajectory traj = synthetic(100.0, 201, 0.2, 0.01, 0.05, 0.07);
    const SpeedEstimate est = extract_speed(traj, params);
    CHECK(est.c_eps == doctest::Approx(0.2).epsilon(1e-12));
    // eps^(alpha - 1) = 0.04^(-0.5) = 5
    CHECK(est.scaled_speed == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(est.stationary);
    CHECK(est.window_lo >= 50.0 - 1e-9);
    CHECK(est.window_hi == 100.0);
    CHECK(est.fit_residual_sup < 1e-12);
    // hi sits intercept + above over c t, lo sits below - intercept under it
    CHECK(est.k_emp == doctest::Approx(0.08).epsilon(1e-10));
}

TEST_CASE("speed extraction invariances") {
    const ModelParams params{0.1, 0.0, 1.0};
    const Trajectory base = synthetic(60.0, 181, 0.15, 0.02, 0.03, 0.03);
    const SpeedEstimate ref = extract_speed(base, params);

    // joint rescaling of time and mean keeps the slope
    Trajectory scaled = base;
    for (std::size_t k = 0; k < scaled.size(); ++k) {
        scaled.t[k] *= 2.0;
        scaled.mean[k] *= 2.0;
        scaled.lo[k] *= 2.0;
        scaled.hi[k] *= 2.0;
    }
    CHECK(extract_speed(scaled, params).c_eps == doctest::Approx(ref.c_eps).epsilon(1e-12));

    // constant vertical shift keeps the slope
    Trajectory shifted = base;
    for (std::size_t k = 0; k < shifted.size(); ++k) {
        shifted.mean[k] += 7.0;
        shifted.lo[k] += 7.0;
        shifted.hi[k] += 7.0;
    }
    CHECK(extract_speed(shifted, params).c_eps == doctest::Approx(ref.c_eps).epsilon(1e-11));
}

TEST_CASE("speed extraction guards") {
    const ModelParams params{0.1, 0.0, 1.0};

    // accelerating drift: the two half-window slopes disagree
    Trajectory curved;
    for (int k = 0; k <= 200; ++k) {
        const double t = static_cast<double>(k) / 200.0;
        curved.t.push_back(t);
        curved.mean.push_back(t * t);
        curved.lo.push_back(t * t);
        curved.hi.push_back(t * t);
        curved.grad_sup.push_back(0.0);
    }
    CHECK_THROWS_AS(extract_speed(curved, params), NonStationary);

    CHECK_THROWS_AS(extract_speed(synthetic(10.0, 10, 1.0, 0.0, 0.0, 0.0), params),
                    std::invalid_argument);
    CHECK_THROWS_AS(extract_speed(synthetic(10.0, 100, 1.0, 0.0, 0.0, 0.0), params, 1.5),
                    std::invalid_argument);
}

TEST_CASE("flat trajectories count as stationary") {
    const ModelParams params{0.1, 0.0, 0.0};
    const Trajectory flat = synthetic(10.0, 101, 0.0, 0.4, 0.0, 0.0);
    const SpeedEstimate est = extract_speed(flat, params);
    CHECK(est.stationary);
    CHECK(std::abs(est.c_eps) < 1e-14);

    // with a touching forcing this is the expected degenerate answer
    const BoundsReport degenerate = check_speed_bounds(est, params, Nonlinearity::touching(1.0));
    CHECK(degenerate.degenerate);
    CHECK(degenerate.pass);

    // with a strictly negative forcing a zero speed is a failure
    const BoundsReport stuck = check_speed_bounds(est, params, Nonlinearity::shifted_cosine(2.0, 1.0));
    CHECK(!stuck.degenerate);
    CHECK(!stuck.pass);
}

TEST_CASE("speed bounds") {
    const ModelParams params{0.1, 0.0, 1.0};
    const Nonlinearity g = Nonlinearity::shifted_cosine(2.0, 1.0);  // upper bound 0.3
    SpeedEstimate est;
    est.c_eps = 0.25;
    CHECK(check_speed_bounds(est, params, g).pass);
    est.c_eps = 0.31;
    CHECK(!check_speed_bounds(est, params, g).pass);
    est.c_eps = -0.1;
    CHECK(!check_speed_bounds(est, params, g).pass);
}

TEST_CASE("band over the full horizon dominates the window band") {
    const ModelParams params{0.1, 0.0, 1.0};
    Trajectory traj = synthetic(80.0, 161, 0.2, 0.0, 0.02, 0.02);
    // an early transient that the fit window never sees
    traj.hi[3] += 0.5;
    const SpeedEstimate est = extract_speed(traj, params);
    const BandReport full = band_check(traj, est);
    CHECK(full.k_emp >= est.k_emp + 0.4);
    CHECK(est.k_emp == doctest::Approx(0.02).epsilon(1e-9));
}

TEST_CASE("band stability") {
    CHECK(band_stability({0.10}, {0.105}).pass);
    CHECK(!band_stability({0.10}, {0.2}).pass);
    CHECK(band_stability({0.0}, {0.0}).pass);  // empty bands stay empty
    const BandStability rep = band_stability({0.10}, {0.105});
    CHECK(rep.rel_change == doctest::Approx(0.005 / 0.105).epsilon(1e-12));
}

TEST_CASE("gradient scaling fit") {
    const ModelParams params{0.1, 0.0, 1.0};
    const Nonlinearity g = Nonlinearity::shifted_cosine(2.0, 1.0);
    const std::vector<double> eps = {0.1, 0.05, 0.02, 0.01};

    auto sweep_for = [&](double prefactor, double exponent) {
        std::vector<SweepObservation> sweep;
        for (double e : eps) sweep.push_back({e, prefactor * std::pow(e, exponent), 1.0});
        return sweep;
    };

    // clean quarter-power decay passes
    const ScalingFit good = bernstein_scaling(sweep_for(2.0, 0.25), params, g);
    CHECK(good.pass);
    CHECK(good.slope == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(good.slope_floor == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(good.ratio_max < 1.0);
    CHECK(!good.flat);

    // too-slow decay fails the slope floor
    CHECK(!bernstein_scaling(sweep_for(2.0, 0.1), params, g).pass);
    // right slope, absurd constant fails the envelope ratio
    CHECK(!bernstein_scaling(sweep_for(500.0, 0.25), params, g).pass);
    // faster decay than required is fine
    CHECK(bernstein_scaling(sweep_for(2.0, 0.5), params, g).pass);

    // flat observable short-circuits
    std::vector<SweepObservation> flat;
    for (double e : eps) flat.push_back({e, 0.0, 0.0});
    const ScalingFit trivial = bernstein_scaling(flat, params, g);
    CHECK(trivial.flat);
    CHECK(trivial.pass);

    // input validation
    std::vector<SweepObservation> short_sweep = {{0.1, 1.0, 1.0}, {0.05, 1.0, 1.0}};
    CHECK_THROWS_AS(bernstein_scaling(short_sweep, params, g), std::invalid_argument);
    std::vector<SweepObservation> narrow;
    for (double e : {0.1, 0.08, 0.06, 0.05}) narrow.push_back({e, 1.0, 1.0});
    CHECK_THROWS_AS(bernstein_scaling(narrow, params, g), std::invalid_argument);
    std::vector<SweepObservation> unsorted;
    for (double e : {0.01, 0.02, 0.05, 0.1}) unsorted.push_back({e, 1.0, 1.0});
    CHECK_THROWS_AS(bernstein_scaling(unsorted, params, g), std::invalid_argument);
}

TEST_CASE("oscillation budget") {
    std::vector<SweepObservation> sweep = {
        {0.1, 1.0, 1.8}, {0.05, 1.0, 1.2}, {0.02, 1.0, 0.9}, {0.01, 1.0, 0.9}};
    const OscillationReport good = oscillation_check(sweep);
    CHECK(good.pass);
    CHECK(good.oscillation_max == 1.8);

    sweep[0].oscillation_sup = 3.2;  // above the 2 + 1 budget
    CHECK(!oscillation_check(sweep).pass);
    sweep[0].oscillation_sup = 0.5;  // oscillation grows along the sweep
    const OscillationReport growing = oscillation_check(sweep);
    CHECK(growing.bounded);
    CHECK(!growing.monotone);
    CHECK_THROWS_AS(oscillation_check({}), std::invalid_argument);
}
