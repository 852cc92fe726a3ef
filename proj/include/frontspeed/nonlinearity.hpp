#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

namespace frontspeed {

/** Reduce v to the fundamental period [0, 1). Identical bits for arguments
 *  that differ by an exactly representable integer. */
inline double periodic_frac(double v) {
    double r = v - std::floor(v);
    return (r < 1.0) ? r : 0.0;
}

enum class ForcingFamily { constant, shifted_cosine, touching, tabulated };

std::string to_string(ForcingFamily f);

/**
 * 1-periodic, nonpositive, Lipschitz reaction term g.
 *
 * Immutable after construction. Closed-form families carry analytically exact
 * norm and range data; tabulated forcings are piecewise linear between uniform
 * samples on [0, 1] and get exact segment-based norms. Run validate() before
 * feeding a tabulated forcing to a solver; the closed-form factories already
 * reject parameters outside their domain.
 */
class Nonlinearity {
public:
    /** g(v) = c, c <= 0. */
    static Nonlinearity constant(double c);
    /** g(v) = -(a + b cos(2 pi v)), a >= b >= 0. Strictly negative iff a > b. */
    static Nonlinearity shifted_cosine(double a, double b);
    /** g(v) = -(a/2)(1 - cos(2 pi v)), a >= 0. Attains zero at integers. */
    static Nonlinearity touching(double a);
    /** Piecewise linear through samples at v_i = i/(K-1), i = 0..K-1, K >= 2.
     *  Periodicity (matching endpoints) and sign are checked by validate(),
     *  not here. */
    static Nonlinearity tabulated(std::vector<double> samples);

    static Nonlinearity from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    double operator()(double v) const;

    ForcingFamily family() const { return family_; }
    /** sup |g| over one period. */
    double sup_norm() const { return sup_norm_; }
    /** Lipschitz constant of g (sup |g'| for the smooth families). */
    double lipschitz_constant() const { return lip_constant_; }
    /** W^{1,inf} norm: sup norm plus Lipschitz constant. */
    double lipschitz_norm() const { return sup_norm_ + lip_constant_; }
    double max_value() const { return max_value_; }
    double min_value() const { return min_value_; }
    bool strictly_negative() const { return max_value_ < 0.0; }
    bool attains_zero() const { return max_value_ == 0.0; }

    /** Family parameters, for serialization and diagnostics. */
    double param_a() const { return a_; }
    double param_b() const { return b_; }
    const std::vector<double>& samples() const { return samples_; }

private:
    Nonlinearity() = default;

    ForcingFamily family_ = ForcingFamily::constant;
    double a_ = 0.0;
    double b_ = 0.0;
    std::vector<double> samples_;
    double sup_norm_ = 0.0;
    double lip_constant_ = 0.0;
    double max_value_ = 0.0;
    double min_value_ = 0.0;
};

struct ValidationCheck {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool pass() const;
    nlohmann::json to_json() const;
};

/**
 * Check periodicity, sign, flag consistency and norm consistency of g on a
 * uniform grid with sample_count >= 16 nodes. A forcing must pass before it
 * is used in a solver; the closed-form factories always pass.
 */
ValidationReport validate(const Nonlinearity& g, int sample_count = 4096);

}  // namespace frontspeed
