#include "frontspeed/io.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace frontspeed {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::vector<double> parse_row(const std::string& line, std::size_t expected,
                              const std::string& path) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str()) throw std::runtime_error("bad numeric cell in " + path);
        row.push_back(v);
    }
    if (row.size() != expected) throw std::runtime_error("wrong column count in " + path);
    return row;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "t,mean,oscillation,grad_sup\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << format_double(traj.t[k]) << ',' << format_double(traj.mean[k]) << ','
            << format_double(traj.oscillation(k)) << ',' << format_double(traj.grad_sup[k]) << '\n';
    }
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "t,mean,oscillation,grad_sup")
        throw std::runtime_error("not a trajectory CSV (bad header): " + path);
    Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto row = parse_row(line, 4, path);
        traj.t.push_back(row[0]);
        traj.mean.push_back(row[1]);
        traj.lo.push_back(row[1] - 0.5 * row[2]);
        traj.hi.push_back(row[1] + 0.5 * row[2]);
        traj.grad_sup.push_back(row[3]);
    }
    return traj;
}

void write_profile_csv(const std::string& path, const std::string& x_name,
                       const std::string& y_name, const std::vector<double>& xs,
                       const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("write_profile_csv: mismatched column lengths");
    auto out = open_out(path);
    out << x_name << ',' << y_name << '\n';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out << format_double(xs[i]) << ',' << format_double(ys[i]) << '\n';
    }
}

void write_field_csv(const std::string& path, const FieldTrajectory& traj) {
    if (traj.size() == 0) throw std::invalid_argument("write_field_csv: empty trajectory");
    write_profile_csv(path, "x", "u", traj.x, traj.u.back());
}

}  // namespace frontspeed
