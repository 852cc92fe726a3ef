#include "frontspeed/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "frontspeed/errors.hpp"

namespace frontspeed {

namespace {
void require_nodes(int n_nodes) {
    if (n_nodes < 8) throw std::invalid_argument("quadrature: n_nodes must be >= 8");
}
}  // namespace

std::string to_string(SpeedCase c) {
    switch (c) {
        case SpeedCase::p_nonzero: return "p_nonzero";
        case SpeedCase::p_zero_strict: return "p_zero_strict";
        case SpeedCase::p_zero_touching: return "p_zero_touching";
    }
    return "unknown";
}

double mean_g(const Nonlinearity& g, int n_nodes) {
    require_nodes(n_nodes);
    // Periodic trapezoid rule = rectangle rule on the period.
    double acc = 0.0;
    for (int j = 0; j < n_nodes; ++j) acc += g(static_cast<double>(j) / n_nodes);
    return acc / n_nodes;
}

double harmonic_time_g(const Nonlinearity& g, int n_nodes) {
    require_nodes(n_nodes);
    if (g.max_value() >= kDegenerateMaxG) {
        throw DegenerateForcing("harmonic_time_g: g touches zero (max g = " +
                                std::to_string(g.max_value()) + "), 1/g is not integrable");
    }
    double acc = 0.0;
    for (int j = 0; j < n_nodes; ++j) acc += 1.0 / g(static_cast<double>(j) / n_nodes);
    return acc / n_nodes;
}

EffectiveSpeed effective_speed(double p_norm, const Nonlinearity& g, int n_nodes) {
    p_norm = std::abs(p_norm);  // only the slope magnitude matters
    if (p_norm > 0.0) return {-mean_g(g, n_nodes), SpeedCase::p_nonzero};
    if (g.max_value() >= kDegenerateMaxG) return {0.0, SpeedCase::p_zero_touching};
    return {-1.0 / harmonic_time_g(g, n_nodes), SpeedCase::p_zero_strict};
}

}  // namespace frontspeed
