#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace frontspeed::detail {

/** Thomas factorization of a tridiagonal matrix with constant off-diagonal
 *  value and the given diagonal. The factorization is reused across solves. */
class TridiagSolver {
public:
    TridiagSolver() = default;
    TridiagSolver(std::vector<double> diag, double off) { reset(std::move(diag), off); }

    void reset(std::vector<double> diag, double off) {
        off_ = off;
        const std::size_t n = diag.size();
        cp_.assign(n, 0.0);
        m_.assign(n, 0.0);
        m_[0] = 1.0 / diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            cp_[i - 1] = off_ * m_[i - 1];
            m_[i] = 1.0 / (diag[i] - off_ * cp_[i - 1]);
        }
    }

    void solve(std::vector<double>& d) const {
        const std::size_t n = d.size();
        d[0] *= m_[0];
        for (std::size_t i = 1; i < n; ++i) d[i] = (d[i] - off_ * d[i - 1]) * m_[i];
        for (std::size_t i = n - 1; i-- > 0;) d[i] -= cp_[i] * d[i + 1];
    }

private:
    double off_ = 0.0;
    std::vector<double> cp_;
    std::vector<double> m_;
};

/** Solver for (I - r D2) x = d on an n-point cyclic grid, D2 the periodic
 *  second-difference stencil. The wrap entries are removed by a rank-one
 *  correction, so each solve costs two ordinary tridiagonal sweeps (one of
 *  them precomputed). */
class CyclicDiffusionSolver {
public:
    CyclicDiffusionSolver(int n, double r) : r_(r), b_(1.0 + 2.0 * r) {
        const double gamma = -b_;
        std::vector<double> diag(static_cast<std::size_t>(n), b_);
        diag.front() = b_ - gamma;
        diag.back() = b_ + (r_ * r_) / b_;
        base_.reset(std::move(diag), -r_);
        q_.assign(static_cast<std::size_t>(n), 0.0);
        q_.front() = gamma;
        q_.back() = -r_;
        base_.solve(q_);
        vn_ = r_ / b_;
        denom_ = 1.0 + q_.front() + vn_ * q_.back();
    }

    void solve(std::vector<double>& d) const {
        base_.solve(d);
        const double fac = (d.front() + vn_ * d.back()) / denom_;
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= fac * q_[i];
    }

private:
    double r_;
    double b_;
    double vn_ = 0.0;
    double denom_ = 1.0;
    TridiagSolver base_;
    std::vector<double> q_;
};

}  // namespace frontspeed::detail
