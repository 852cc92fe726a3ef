#pragma once

#include <string>
#include <vector>

#include "frontspeed/direct_solver.hpp"
#include "frontspeed/reduced_solver.hpp"

namespace frontspeed {

// Shortest decimal representation that round-trips; keeps CSV output
// byte-stable across runs and platforms with the same FP behavior.
std::string format_double(double v);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Reads the t,mean,oscillation,grad_sup schema. The per-sample min and max are
// not stored in the file, so lo/hi are rebuilt symmetrically about the mean;
// band quantities computed from a reread trajectory inherit that approximation.
Trajectory read_trajectory_csv(const std::string& path);

void write_profile_csv(const std::string& path, const std::string& x_name,
                       const std::string& y_name, const std::vector<double>& xs,
                       const std::vector<double>& ys);

// Final snapshot of a direct run in the x,u schema.
void write_field_csv(const std::string& path, const FieldTrajectory& traj);

}  // namespace frontspeed
