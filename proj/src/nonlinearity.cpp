#include "frontspeed/nonlinearity.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace frontspeed {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}
}  // namespace

std::string to_string(ForcingFamily f) {
    switch (f) {
        case ForcingFamily::constant: return "constant";
        case ForcingFamily::shifted_cosine: return "shifted_cosine";
        case ForcingFamily::touching: return "touching";
        case ForcingFamily::tabulated: return "tabulated";
    }
    return "unknown";
}

Nonlinearity Nonlinearity::constant(double c) {
    require(std::isfinite(c), "constant forcing: c must be finite");
    require(c <= 0.0, "constant forcing: requires c <= 0, got c = " + std::to_string(c));
    Nonlinearity g;
    g.family_ = ForcingFamily::constant;
    g.a_ = c;
    g.sup_norm_ = -c;
    g.lip_constant_ = 0.0;
    g.max_value_ = c;
    g.min_value_ = c;
    return g;
}

Nonlinearity Nonlinearity::shifted_cosine(double a, double b) {
    require(std::isfinite(a) && std::isfinite(b), "shifted_cosine forcing: parameters must be finite");
    require(a >= b && b >= 0.0,
            "shifted_cosine forcing: requires a >= b >= 0, got a = " + std::to_string(a) +
                ", b = " + std::to_string(b));
    Nonlinearity g;
    g.family_ = ForcingFamily::shifted_cosine;
    g.a_ = a;
    g.b_ = b;
    g.sup_norm_ = a + b;
    g.lip_constant_ = kTwoPi * b;
    g.max_value_ = -(a - b);
    g.min_value_ = -(a + b);
    return g;
}

Nonlinearity Nonlinearity::touching(double a) {
    require(std::isfinite(a), "touching forcing: a must be finite");
    require(a >= 0.0, "touching forcing: requires a >= 0, got a = " + std::to_string(a));
    Nonlinearity g;
    g.family_ = ForcingFamily::touching;
    g.a_ = a;
    g.sup_norm_ = a;
    g.lip_constant_ = std::numbers::pi * a;
    g.max_value_ = 0.0;
    g.min_value_ = -a;
    return g;
}

Nonlinearity Nonlinearity::tabulated(std::vector<double> samples) {
    require(samples.size() >= 2, "tabulated forcing: needs at least 2 samples");
    for (double s : samples) require(std::isfinite(s), "tabulated forcing: samples must be finite");
    Nonlinearity g;
    g.family_ = ForcingFamily::tabulated;
    g.samples_ = std::move(samples);
    const auto& s = g.samples_;
    const double inv_h = static_cast<double>(s.size() - 1);
    double sup = 0.0, lip = 0.0;
    double lo = s[0], hi = s[0];
    for (std::size_t i = 0; i < s.size(); ++i) {
        sup = std::max(sup, std::abs(s[i]));
        lo = std::min(lo, s[i]);
        hi = std::max(hi, s[i]);
        if (i + 1 < s.size()) lip = std::max(lip, std::abs(s[i + 1] - s[i]) * inv_h);
    }
    g.sup_norm_ = sup;
    g.lip_constant_ = lip;
    g.max_value_ = hi;
    g.min_value_ = lo;
    return g;
}

double Nonlinearity::operator()(double v) const {
    switch (family_) {
        case ForcingFamily::constant:
            return a_;
        case ForcingFamily::shifted_cosine:
            return -(a_ + b_ * std::cos(kTwoPi * periodic_frac(v)));
        case ForcingFamily::touching:
            return -0.5 * a_ * (1.0 - std::cos(kTwoPi * periodic_frac(v)));
        case ForcingFamily::tabulated: {
            const double r = periodic_frac(v);
            const double x = r * static_cast<double>(samples_.size() - 1);
            std::size_t i = std::min(static_cast<std::size_t>(x), samples_.size() - 2);
            const double theta = x - static_cast<double>(i);
            return samples_[i] * (1.0 - theta) + samples_[i + 1] * theta;
        }
    }
    return 0.0;
}

Nonlinearity Nonlinearity::from_json(const nlohmann::json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "constant") return constant(j.at("c").get<double>());
    if (family == "shifted_cosine")
        return shifted_cosine(j.at("a").get<double>(), j.at("b").get<double>());
    if (family == "touching") return touching(j.at("a").get<double>());
    if (family == "tabulated") return tabulated(j.at("samples").get<std::vector<double>>());
    throw std::invalid_argument("unknown forcing family: " + family);
}

nlohmann::json Nonlinearity::to_json() const {
    nlohmann::json j;
    j["family"] = to_string(family_);
    switch (family_) {
        case ForcingFamily::constant: j["c"] = a_; break;
        case ForcingFamily::shifted_cosine: j["a"] = a_; j["b"] = b_; break;
        case ForcingFamily::touching: j["a"] = a_; break;
        case ForcingFamily::tabulated: j["samples"] = samples_; break;
    }
    return j;
}

bool ValidationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.pass; });
}

nlohmann::json ValidationReport::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : checks) {
        rows.push_back({{"name", c.name}, {"pass", c.pass}, {"measured", c.measured}, {"detail", c.detail}});
    }
    return {{"pass", pass()}, {"checks", rows}};
}

ValidationReport validate(const Nonlinearity& g, int sample_count) {
    if (sample_count < 16) throw std::invalid_argument("validate: sample_count must be >= 16");
    const int m = sample_count;
    const double scale = std::max(1.0, g.sup_norm());
    const double tol = 1e-12 * scale;

    double period_dev = 0.0;
    double sign_max = -std::numeric_limits<double>::infinity();
    double grid_max_abs = 0.0;
    double grid_max_val = -std::numeric_limits<double>::infinity();
    double fd_slope = 0.0;
    double prev = g(0.0);
    for (int j = 0; j <= m; ++j) {
        const double v = static_cast<double>(j) / m;
        const double gv = g(v);
        period_dev = std::max(period_dev, std::abs(gv - g(v + 1.0)));
        sign_max = std::max(sign_max, gv);
        grid_max_abs = std::max(grid_max_abs, std::abs(gv));
        grid_max_val = std::max(grid_max_val, gv);
        if (j > 0) fd_slope = std::max(fd_slope, std::abs(gv - prev) * m);
        prev = gv;
    }

    ValidationReport report;
    auto push = [&](const std::string& name, bool pass, double measured, const std::string& detail) {
        report.checks.push_back({name, pass, measured, detail});
    };

    if (g.family() == ForcingFamily::tabulated) {
        const auto& s = g.samples();
        const double mismatch = std::abs(s.front() - s.back());
        push("periodicity", mismatch <= tol, mismatch, "endpoint mismatch |g(0) - g(1)|");
    } else {
        push("periodicity", period_dev <= tol, period_dev, "max |g(v) - g(v+1)| on grid");
    }
    push("sign", sign_max <= 0.0, sign_max, "max g on grid, must be <= 0");

    // The stored extreme can exceed the grid extreme by at most one grid cell
    // worth of Lipschitz slack.
    const double cell_slack = g.lipschitz_constant() / m + tol;
    const bool flags_ok = (g.strictly_negative() != g.attains_zero()) &&
                          (grid_max_val <= g.max_value() + tol) &&
                          (g.max_value() <= grid_max_val + cell_slack);
    push("flag_consistency", flags_ok, grid_max_val,
         "strictly_negative xor attains_zero, max g consistent with grid");
    push("sup_norm", g.sup_norm() + tol >= grid_max_abs, grid_max_abs,
         "stored sup norm dominates grid max |g|");
    push("lipschitz_norm", g.lipschitz_norm() + tol >= fd_slope, fd_slope,
         "stored W^{1,inf} norm dominates max finite-difference slope");
    return report;
}

}  // namespace frontspeed
