#pragma once

#include <stdexcept>
#include <string>

namespace frontspeed {

/** Forcing term attains (or almost attains) zero where a strictly negative one
 *  is required, e.g. in harmonic-mean quadrature. */
struct DegenerateForcing : std::runtime_error {
    explicit DegenerateForcing(const std::string& what) : std::runtime_error(what) {}
};

/** Time step too large for the explicit reaction update to stay monotone. */
struct MonotonicityViolation : std::runtime_error {
    explicit MonotonicityViolation(const std::string& what) : std::runtime_error(what) {}
};

/** Time step violates the diffusion stability bound of the explicit scheme. */
struct CflViolation : std::runtime_error {
    explicit CflViolation(const std::string& what) : std::runtime_error(what) {}
};

/** Truncated line domain too small for the requested horizon. */
struct DomainTooSmall : std::runtime_error {
    explicit DomainTooSmall(const std::string& what) : std::runtime_error(what) {}
};

/** Trajectory has not reached a stationary drift rate inside the fit window. */
struct NonStationary : std::runtime_error {
    explicit NonStationary(const std::string& what) : std::runtime_error(what) {}
};

/** Invalid or inconsistent experiment configuration. */
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace frontspeed
