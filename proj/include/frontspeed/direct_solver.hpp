#pragma once

#include <vector>

#include <json.hpp>

#include "frontspeed/nonlinearity.hpp"
#include "frontspeed/reduced_solver.hpp"

namespace frontspeed {

// Truncated line [-L, L] with M nodes; the two end nodes carry Dirichlet data.
struct LineDomain {
    LineDomain(double half_width, int n_nodes);
    double half_width;
    int n;
    double spacing() const { return 2.0 * half_width / (n - 1); }
    double x(int i) const {
        return (i == n - 1) ? half_width : -half_width + static_cast<double>(i) * spacing();
    }
};

// Smooth compactly supported profile height * exp(1 - 1/(1 - s^2)), s = (x - center)/half_width.
struct Bump {
    double height = 0.0;
    double center = 0.0;
    double half_width = 1.0;
    double operator()(double x) const;
};

// Mollified step: flat at `height` on |x - center| <= core_half_width, smoothstep ramp
// down to 0 over an additional edge_width on each side.
struct Plateau {
    double height = 0.0;
    double center = 0.0;
    double core_half_width = 1.0;
    double edge_width = 0.5;
    double operator()(double x) const;
};

// Bounded perturbation v0: constant offset plus compactly supported features.
// The offset shifts the planar part of the datum; only the features must fit
// inside the safe region of the truncated domain.
class Perturbation {
  public:
    Perturbation() = default;
    explicit Perturbation(double offset) : offset_(offset) {}
    Perturbation& add(const Bump& b);
    Perturbation& add(const Plateau& p);
    double operator()(double x) const;
    double offset() const { return offset_; }
    bool has_features() const { return !bumps_.empty() || !plateaus_.empty(); }
    double feature_radius() const;
    double inf_value() const;
    double sup_value() const;
    static Perturbation from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

  private:
    void extrema(double& lo, double& hi) const;
    double offset_ = 0.0;
    std::vector<Bump> bumps_;
    std::vector<Plateau> plateaus_;
};

// u(x, 0) = slope * x + v0(x) + eps * period_shift. The integer shift is tracked
// exactly rather than folded into v0: adding eps * k maps discrete solutions to
// discrete solutions, so it can be factored out of the evolution and reapplied
// on output without any floating-point drift.
struct InitialDatum {
    double slope = 1.0;
    Perturbation v0;
    long period_shift = 0;
};

// Exact planar solution slope * x + offset + eps * chi(z, t / eps^(2 - alpha)),
// z = frac((slope * x + offset) / eps), maintained incrementally for Dirichlet
// pinning and cross-checks. For slope = 0 the profile collapses to the scalar
// vertical-travel problem.
class PlanarReference {
  public:
    PlanarReference(const InitialDatum& datum, const ModelParams& params, const Nonlinearity& g,
                    int n_z = 256);
    void advance_to(double t);
    double value_at(double x) const;
    double time() const { return t_; }
    double reduced_time() const { return tau_; }
    const std::vector<double>& chi() const { return chi_; }

  private:
    double slope_;
    double offset_;
    ModelParams params_;
    Nonlinearity g_;
    int n_z_;
    std::vector<double> chi_;
    std::vector<double> work_;
    double v_ = 0.0;
    double t_ = 0.0;
    double tau_ = 0.0;
    double dtau_cap_;
};

struct FieldTrajectory {
    std::vector<double> x;
    std::vector<double> t;
    std::vector<std::vector<double>> u;
    double eps = 0.0;
    double slope = 0.0;
    long period_shift = 0;
    std::size_t size() const { return t.size(); }
};

struct DirectRunOptions {
    double horizon = 1.0;
    double dt = 0.0;        // <= 0 picks default_direct_dt
    int sample_every = 0;   // <= 0 keeps roughly 50 snapshots
    int reference_nodes = 256;
};

FieldTrajectory solve_direct(const InitialDatum& datum, const ModelParams& params,
                             const Nonlinearity& g, const LineDomain& domain,
                             const DirectRunOptions& opts);

double default_direct_dt(const ModelParams& params, const Nonlinearity& g, double horizon);

struct SandwichReport {
    bool pass = false;
    double min_deviation = 0.0;
    double max_deviation = 0.0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    double slack = 0.0;
    nlohmann::json to_json() const;
};

// Checks inf v0 - slack <= u - slope * x - c_p * t <= sup v0 + slack over
// |x| <= region_half_width at every sample time.
SandwichReport sandwich_check(const FieldTrajectory& traj, double c_p, const InitialDatum& datum,
                              double region_half_width, double slack);

struct ComparisonReport {
    bool pass = false;
    double max_violation = 0.0;  // max over samples of (u_a - u_b), positive = order broken
    nlohmann::json to_json() const;
};

// datum_a <= datum_b pointwise must hold on the grid; the discrete solutions
// must then stay ordered at every sample time (monotone scheme).
ComparisonReport comparison_check(const InitialDatum& datum_a, const InitialDatum& datum_b,
                                  const ModelParams& params, const Nonlinearity& g,
                                  const LineDomain& domain, const DirectRunOptions& opts,
                                  double tolerance = 1e-10);

}  // namespace frontspeed
