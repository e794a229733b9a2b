#pragma once

#include "ddqpc/state.hpp"

namespace ddqpc {

/// Dimensionless model: every rate is measured against the interdot coupling
/// Omega0, and time is tau = Omega0 * t.
///   alpha        detector-induced dephasing rate over Omega0
///   epsilon_norm level asymmetry (E2 - E1) over Omega0
struct ModelParams {
    double alpha = 0.0;
    double epsilon_norm = 0.0;
    double theta_deg = 0.0;
    double phi_deg = 0.0;
};

/// Raw experimental knobs. T1 is the detector transmission with the dot
/// electron on the near site, Vd the source-drain bias driving the current.
struct PhysicalParams {
    double t1 = 0.0;
    double vd = 0.0;
    double omega0 = 1.0;
    double e1 = 0.0;
    double e2 = 0.0;
};

struct PhysicalConversion {
    ModelParams model;
    double gamma_d = 0.0; // dephasing rate before normalization
    double i1 = 0.0;      // detector current, dot electron near
    double i2 = 0.0;      // detector current, dot electron far (fully blocking QPC)
};

/// Maps detector transmission and bias to the dephasing rate
/// Gamma_d = T1 * Vd / (2 pi) and normalizes by Omega0. The far-site
/// transmission is taken as zero (fully blocking detector), so i2 = 0.
/// Throws std::invalid_argument unless omega0 > 0, 0 <= t1 <= 1, vd >= 0.
PhysicalConversion params_from_physical(const PhysicalParams& phys,
                                        double theta_deg = 0.0,
                                        double phi_deg = 0.0);

} // namespace ddqpc
