#pragma once

#include <cmath>

namespace ddqpc {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }

/// Angle reduced to [0, 360). The Bloch parameterization is 360-periodic in
/// both angles at the density-matrix level, but the half-angle factors are
/// not, so reduction happens before any trig.
inline double normalize_angle_deg(double deg) {
    double a = std::fmod(deg, 360.0);
    if (a < 0.0) a += 360.0;
    return a;
}

/// Reduced density matrix of the double-dot charge qubit in the site basis.
/// Only the upper triangle is stored; sigma21 is always conj(sigma12).
struct QubitState {
    double sigma11 = 1.0;
    double sigma22 = 0.0;
    double sigma12_re = 0.0;
    double sigma12_im = 0.0;

    double trace() const { return sigma11 + sigma22; }
    double sigma12_sq() const { return sigma12_re * sigma12_re + sigma12_im * sigma12_im; }
    double determinant() const { return sigma11 * sigma22 - sigma12_sq(); }

    /// Unit trace, nonnegative populations and determinant, up to roundoff.
    bool is_physical(double trace_tol = 1e-12, double positivity_tol = 1e-12) const {
        return std::abs(trace() - 1.0) <= trace_tol &&
               sigma11 >= -positivity_tol && sigma22 >= -positivity_tol &&
               determinant() >= -positivity_tol;
    }
};

/// Pure state cos(theta/2)|1> + sin(theta/2) e^{i phi}|2>, angles in degrees.
QubitState initial_state(double theta_deg, double phi_deg);

} // namespace ddqpc
