#pragma once

#include <string>

#include "frontspeed/nonlinearity.hpp"

namespace frontspeed {

/** Forcings whose maximum lies above this threshold are treated as touching
 *  zero: harmonic-mean quadrature refuses them and the zero-slope speed
 *  degenerates to 0. */
constexpr double kDegenerateMaxG = -1e-12;

/** Default node count for the periodic quadratures; the trapezoid rule is
 *  spectrally accurate on smooth 1-periodic integrands, so 256 nodes put the
 *  closed-form families far below 1e-12. */
constexpr int kDefaultQuadratureNodes = 256;

/** Trapezoid value of \int_0^1 g(s) ds on n_nodes uniform nodes (n_nodes >= 8). */
double mean_g(const Nonlinearity& g, int n_nodes = kDefaultQuadratureNodes);

/** Trapezoid value of \int_0^1 ds / g(s); negative for admissible g.
 *  Throws DegenerateForcing when max g >= kDegenerateMaxG. */
double harmonic_time_g(const Nonlinearity& g, int n_nodes = kDefaultQuadratureNodes);

enum class SpeedCase { p_nonzero, p_zero_strict, p_zero_touching };

std::string to_string(SpeedCase c);

/** Asymptotic propagation speed together with the formula branch that
 *  produced it. value is always >= 0. */
struct EffectiveSpeed {
    double value = 0.0;
    SpeedCase case_tag = SpeedCase::p_nonzero;
};

/**
 * Effective front speed for slope magnitude p_norm:
 *   p_norm > 0:                 -\int_0^1 g
 *   p_norm = 0, g < 0 strictly: -(\int_0^1 1/g)^{-1}
 *   p_norm = 0, max g ~ 0:      0
 * Discontinuous at p_norm = 0 (the harmonic mean never exceeds the
 * arithmetic one), and independent of the direction of p.
 */
EffectiveSpeed effective_speed(double p_norm, const Nonlinearity& g,
                               int n_nodes = kDefaultQuadratureNodes);

}  // namespace frontspeed
