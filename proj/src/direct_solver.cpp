#include "frontspeed/direct_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "frontspeed/errors.hpp"
#include "tridiag.hpp"

namespace frontspeed {

LineDomain::LineDomain(double half_width_, int n_nodes) : half_width(half_width_), n(n_nodes) {
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("LineDomain: half_width must be positive");
    if (n < 64) throw std::invalid_argument("LineDomain: needs at least 64 nodes");
}

double Bump::operator()(double x) const {
    const double s = (x - center) / half_width;
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    return height * std::exp(1.0 - 1.0 / q);
}

double Plateau::operator()(double x) const {
    const double d = std::abs(x - center) - core_half_width;
    if (d <= 0.0) return height;
    if (d >= edge_width) return 0.0;
    const double q = 1.0 - d / edge_width;
    return height * q * q * (3.0 - 2.0 * q);
}

Perturbation& Perturbation::add(const Bump& b) {
    if (!(b.half_width > 0.0)) throw std::invalid_argument("Bump: half_width must be positive");
    if (!std::isfinite(b.height) || !std::isfinite(b.center))
        throw std::invalid_argument("Bump: parameters must be finite");
    bumps_.push_back(b);
    return *this;
}

Perturbation& Perturbation::add(const Plateau& p) {
    if (!(p.core_half_width >= 0.0) || !(p.edge_width > 0.0))
        throw std::invalid_argument("Plateau: needs core_half_width >= 0 and edge_width > 0");
    if (!std::isfinite(p.height) || !std::isfinite(p.center))
        throw std::invalid_argument("Plateau: parameters must be finite");
    plateaus_.push_back(p);
    return *this;
}

double Perturbation::operator()(double x) const {
    double v = offset_;
    for (const auto& b : bumps_) v += b(x);
    for (const auto& p : plateaus_) v += p(x);
    return v;
}

double Perturbation::feature_radius() const {
    double r = 0.0;
    for (const auto& b : bumps_) r = std::max(r, std::abs(b.center) + b.half_width);
    for (const auto& p : plateaus_)
        r = std::max(r, std::abs(p.center) + p.core_half_width + p.edge_width);
    return r;
}

void Perturbation::extrema(double& lo, double& hi) const {
    const std::size_t count = bumps_.size() + plateaus_.size();
    if (count == 0) {
        lo = hi = 0.0;
        return;
    }
    if (count == 1) {
        // A single feature ranges between 0 (outside support) and its height.
        const double h = bumps_.empty() ? plateaus_.front().height : bumps_.front().height;
        lo = std::min(0.0, h);
        hi = std::max(0.0, h);
        return;
    }
    // Overlapping features: scan the support and pad by the largest sampled slope.
    const double r = feature_radius();
    const int m = 8192;
    double prev = 0.0, max_jump = 0.0;
    lo = 0.0;
    hi = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double x = -r + 2.0 * r * i / m;
        const double v = (*this)(x)-offset_;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (i > 0) max_jump = std::max(max_jump, std::abs(v - prev));
        prev = v;
    }
    lo -= 0.5 * max_jump;
    hi += 0.5 * max_jump;
}

double Perturbation::inf_value() const {
    double lo, hi;
    extrema(lo, hi);
    return offset_ + lo;
}

double Perturbation::sup_value() const {
    double lo, hi;
    extrema(lo, hi);
    return offset_ + hi;
}

Perturbation Perturbation::from_json(const nlohmann::json& j) {
    Perturbation out;
    if (j.contains("offset")) out.offset_ = j.at("offset").get<double>();
    if (!std::isfinite(out.offset_)) throw std::invalid_argument("perturbation: offset must be finite");
    if (j.contains("bumps")) {
        for (const auto& jb : j.at("bumps")) {
            Bump b;
            b.height = jb.at("height").get<double>();
            b.center = jb.value("center", 0.0);
            b.half_width = jb.at("half_width").get<double>();
            out.add(b);
        }
    }
    if (j.contains("plateaus")) {
        for (const auto& jp : j.at("plateaus")) {
            Plateau p;
            p.height = jp.at("height").get<double>();
            p.center = jp.value("center", 0.0);
            p.core_half_width = jp.at("core_half_width").get<double>();
            p.edge_width = jp.at("edge_width").get<double>();
            out.add(p);
        }
    }
    return out;
}

nlohmann::json Perturbation::to_json() const {
    nlohmann::json j;
    j["offset"] = offset_;
    j["bumps"] = nlohmann::json::array();
    for (const auto& b : bumps_) {
        j["bumps"].push_back({{"height", b.height}, {"center", b.center}, {"half_width", b.half_width}});
    }
    j["plateaus"] = nlohmann::json::array();
    for (const auto& p : plateaus_) {
        j["plateaus"].push_back({{"height", p.height},
                                 {"center", p.center},
                                 {"core_half_width", p.core_half_width},
                                 {"edge_width", p.edge_width}});
    }
    return j;
}

PlanarReference::PlanarReference(const InitialDatum& datum, const ModelParams& params,
                                 const Nonlinearity& g, int n_z)
    : slope_(datum.slope), offset_(datum.v0.offset()), params_(params), g_(g), n_z_(n_z) {
    validate_params(params_);
    if (!std::isfinite(slope_)) throw std::invalid_argument("PlanarReference: slope must be finite");
    params_.p_norm = std::abs(slope_);
    if (params_.p_norm > 0.0) {
        if (n_z_ < 16) throw std::invalid_argument("PlanarReference: needs at least 16 profile nodes");
        chi_.assign(static_cast<std::size_t>(n_z_), 0.0);
        work_.resize(chi_.size());
    }
    const double lip = g_.lipschitz_constant();
    const double scale = params_.reaction_scale();
    dtau_cap_ = (lip > 0.0) ? std::min(0.5 / (scale * lip), 0.1) : 0.1;
}

void PlanarReference::advance_to(double t) {
    if (t < t_ - 1e-12 * std::max(1.0, std::abs(t_)))
        throw std::invalid_argument("PlanarReference: time must advance monotonically");
    const double tau_target = t / std::pow(params_.eps, 2.0 - params_.alpha);
    const double dtau_total = tau_target - tau_;
    if (dtau_total <= 0.0) {
        t_ = std::max(t_, t);
        return;
    }
    const long n_sub = std::max(1L, static_cast<long>(std::ceil(dtau_total / dtau_cap_ - 1e-12)));
    const double sub = dtau_total / static_cast<double>(n_sub);
    const double scale = params_.reaction_scale();
    if (params_.p_norm > 0.0) {
        const double r = sub * params_.p_norm * params_.p_norm * n_z_ * static_cast<double>(n_z_);
        detail::CyclicDiffusionSolver solver(n_z_, r);
        for (long s = 0; s < n_sub; ++s) {
            for (int j = 0; j < n_z_; ++j) {
                const double z = static_cast<double>(j) / n_z_;
                work_[static_cast<std::size_t>(j)] =
                    chi_[static_cast<std::size_t>(j)] - sub * scale * g_(chi_[static_cast<std::size_t>(j)] + z);
            }
            solver.solve(work_);
            chi_.swap(work_);
        }
    } else {
        const double base = offset_ / params_.eps;
        auto f = [&](double v) { return -scale * g_(v + base); };
        for (long s = 0; s < n_sub; ++s) {
            const double k1 = f(v_);
            const double k2 = f(v_ + 0.5 * sub * k1);
            const double k3 = f(v_ + 0.5 * sub * k2);
            const double k4 = f(v_ + sub * k3);
            v_ += sub / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    tau_ = tau_target;
    t_ = t;
}

double PlanarReference::value_at(double x) const {
    if (params_.p_norm == 0.0) return offset_ + params_.eps * v_;
    const double base = slope_ * x + offset_;
    const double z = periodic_frac(base / params_.eps);
    const double pos = z * n_z_;
    int idx = static_cast<int>(pos);
    if (idx >= n_z_) idx = n_z_ - 1;
    const double w = pos - idx;
    const double chi_val = (1.0 - w) * chi_[static_cast<std::size_t>(idx)] +
                           w * chi_[static_cast<std::size_t>((idx + 1) % n_z_)];
    return base + params_.eps * chi_val;
}

double default_direct_dt(const ModelParams& params, const Nonlinearity& g, double horizon) {
    const double lip = g.lipschitz_constant();
    const double dt = (lip > 0.0) ? 0.5 * params.eps / lip : horizon / 1024.0;
    return std::min(dt, horizon);
}

FieldTrajectory solve_direct(const InitialDatum& datum, const ModelParams& params,
                             const Nonlinearity& g, const LineDomain& domain,
                             const DirectRunOptions& opts) {
    validate_params(params);
    if (!std::isfinite(datum.slope)) throw std::invalid_argument("solve_direct: slope must be finite");
    if (!(opts.horizon > 0.0)) throw std::invalid_argument("solve_direct: horizon must be positive");

    const double dt = opts.dt > 0.0 ? opts.dt : default_direct_dt(params, g, opts.horizon);
    const double lip = g.lipschitz_constant();
    if (dt * lip / params.eps > 1.0) {
        throw MonotonicityViolation("solve_direct: dt * Lip(g) / eps = " +
                                    std::to_string(dt * lip / params.eps) +
                                    " exceeds 1; the explicit reaction g(u/eps) is not monotone");
    }
    const double half = 0.5 * domain.half_width;
    if (std::pow(params.eps, params.alpha) * opts.horizon > half * half / 4.0) {
        throw DomainTooSmall("solve_direct: eps^alpha * T exceeds (L/2)^2 / 4; boundary influence "
                             "would reach the interior check region");
    }
    if (datum.v0.has_features() && datum.v0.feature_radius() > half) {
        throw DomainTooSmall("solve_direct: perturbation support must stay inside [-L/2, L/2]");
    }

    const long n_steps = std::max(1L, static_cast<long>(std::ceil(opts.horizon / dt - 1e-9)));
    const long sample_every =
        opts.sample_every > 0 ? opts.sample_every : std::max(1L, n_steps / 50L);

    const int m = domain.n;
    const double h = domain.spacing();
    const double r = dt * std::pow(params.eps, params.alpha) / (h * h);

    std::vector<double> u(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) u[static_cast<std::size_t>(i)] = datum.slope * domain.x(i) + datum.v0(domain.x(i));

    detail::TridiagSolver solver;
    solver.reset(std::vector<double>(static_cast<std::size_t>(m - 2), 1.0 + 2.0 * r), -r);
    std::vector<double> rhs(static_cast<std::size_t>(m - 2));

    PlanarReference ref(datum, params, g, opts.reference_nodes);

    FieldTrajectory traj;
    traj.eps = params.eps;
    traj.slope = datum.slope;
    traj.period_shift = datum.period_shift;
    traj.x.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) traj.x[static_cast<std::size_t>(i)] = domain.x(i);

    const double shift = params.eps * static_cast<double>(datum.period_shift);
    auto record = [&](double t) {
        traj.t.push_back(t);
        traj.u.push_back(u);
        if (datum.period_shift != 0) {
            for (double& v : traj.u.back()) v += shift;
        }
    };
    record(0.0);

    for (long k = 1; k <= n_steps; ++k) {
        const double t_new = static_cast<double>(k) * dt;
        ref.advance_to(t_new);
        const double bl = ref.value_at(domain.x(0));
        const double br = ref.value_at(domain.x(m - 1));
        for (int i = 1; i < m - 1; ++i) {
            const double ui = u[static_cast<std::size_t>(i)];
            rhs[static_cast<std::size_t>(i - 1)] = ui - dt * g(ui / params.eps);
        }
        rhs.front() += r * bl;
        rhs.back() += r * br;
        solver.solve(rhs);
        u.front() = bl;
        u.back() = br;
        std::copy(rhs.begin(), rhs.end(), u.begin() + 1);
        if (k % sample_every == 0 || k == n_steps) record(t_new);
    }
    return traj;
}

nlohmann::json SandwichReport::to_json() const {
    return {{"pass", pass},
            {"min_deviation", min_deviation},
            {"max_deviation", max_deviation},
            {"lower_bound", lower_bound},
            {"upper_bound", upper_bound},
            {"slack", slack}};
}

SandwichReport sandwich_check(const FieldTrajectory& traj, double c_p, const InitialDatum& datum,
                              double region_half_width, double slack) {
    if (traj.size() == 0) throw std::invalid_argument("sandwich_check: empty trajectory");
    const double shift = traj.eps * static_cast<double>(traj.period_shift);
    SandwichReport rep;
    rep.slack = slack;
    rep.lower_bound = datum.v0.inf_value() + shift - slack;
    rep.upper_bound = datum.v0.sup_value() + shift + slack;
    rep.min_deviation = std::numeric_limits<double>::infinity();
    rep.max_deviation = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        for (std::size_t i = 0; i < traj.x.size(); ++i) {
            if (std::abs(traj.x[i]) > region_half_width + 1e-12) continue;
            const double d = traj.u[k][i] - traj.slope * traj.x[i] - c_p * traj.t[k];
            rep.min_deviation = std::min(rep.min_deviation, d);
            rep.max_deviation = std::max(rep.max_deviation, d);
        }
    }
    rep.pass = rep.min_deviation >= rep.lower_bound && rep.max_deviation <= rep.upper_bound;
    return rep;
}

nlohmann::json ComparisonReport::to_json() const {
    return {{"pass", pass}, {"max_violation", max_violation}};
}

ComparisonReport comparison_check(const InitialDatum& datum_a, const InitialDatum& datum_b,
                                  const ModelParams& params, const Nonlinearity& g,
                                  const LineDomain& domain, const DirectRunOptions& opts,
                                  double tolerance) {
    if (datum_a.slope != datum_b.slope)
        throw std::invalid_argument("comparison_check: both data must share the slope");
    const double shift_a = params.eps * static_cast<double>(datum_a.period_shift);
    const double shift_b = params.eps * static_cast<double>(datum_b.period_shift);
    for (int i = 0; i < domain.n; ++i) {
        const double x = domain.x(i);
        const double va = datum_a.v0(x) + shift_a;
        const double vb = datum_b.v0(x) + shift_b;
        if (va > vb + 1e-14 * std::max(1.0, std::abs(vb)))
            throw std::invalid_argument("comparison_check: datum_a must lie below datum_b");
    }
    const FieldTrajectory ta = solve_direct(datum_a, params, g, domain, opts);
    const FieldTrajectory tb = solve_direct(datum_b, params, g, domain, opts);

    ComparisonReport rep;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < ta.size(); ++k) {
        for (std::size_t i = 0; i < ta.x.size(); ++i) {
            rep.max_violation = std::max(rep.max_violation, ta.u[k][i] - tb.u[k][i]);
        }
    }
    rep.pass = rep.max_violation <= tolerance;
    return rep;
}

}  // namespace frontspeed
