#pragma once

#include <utility>
#include <vector>

#include "ddqpc/dynamics.hpp"
#include "ddqpc/state.hpp"

namespace ddqpc {

enum class LogBase { base2, natural };

std::string to_string(LogBase b);
LogBase parse_log_base(const std::string& name);

/// ln of the base, the divisor that converts nats to the requested unit.
double log_divisor(LogBase base);

/// Schmidt coefficients lambda+- = (1 +- sqrt(1 - 4 det)) / 2 of the joint
/// dot-detector pure state, largest first. A radicand slightly outside [0, 1]
/// (within 1e-9) is clamped; anything further out throws std::domain_error.
std::pair<double, double> schmidt_eigenvalues(const QubitState& s);

/// Binary entropy of lambda+, i.e. the entanglement entropy of the dot with
/// the detector. 0 log 0 = 0 by convention.
double entropy_of_entanglement(const QubitState& s, LogBase base = LogBase::base2);

/// dS/dtau from the exact determinant flow d(det)/dtau = alpha |sigma12|^2,
/// assembled from raw ingredients so that degenerate limits can be probed
/// directly. Conventions at the singular points:
///   |2 lambda+ - 1| < 1e-8        second-order Taylor, 2 alpha |sigma12|^2 / ln(base)
///   lambda+ > 1 - 1e-12, coherence present   +infinity (product state leaving the pole)
///   sigma12_sq == 0               0 (stationary in the measure)
double entanglement_rate_from(double lambda_plus, double sigma12_sq, double alpha,
                              LogBase base = LogBase::base2);

/// entanglement_rate_from evaluated on an actual state. Exact for every
/// level asymmetry: the asymmetry term drops out of the determinant flow.
double entanglement_rate_analytic(const QubitState& s, double alpha,
                                  LogBase base = LogBase::base2);

/// Central-difference dS/dtau at interior index i of a uniformly sampled
/// trajectory. Throws std::invalid_argument at the boundary or when the
/// local spacing is not uniform to within 1e-9 relative.
double entanglement_rate_numeric(const Trajectory& traj, std::size_t i,
                                 LogBase base = LogBase::base2);

/// l1 coherence of the reduced state, sqrt(2) |sigma12| for this
/// normalization; proportional to the concurrence-like envelope the
/// asymmetric dot oscillates in.
double coherence_measure(const QubitState& s);

struct MeasureSample {
    double tau = 0.0;
    double lambda_plus = 1.0;
    double lambda_minus = 0.0;
    double entropy = 0.0;
    double rate = 0.0;
    double coherence = 0.0;
};

/// All measures along a trajectory. The rate is the analytic one, so the
/// tau = 0 conventions above apply at the first sample.
std::vector<MeasureSample> measure_trajectory(const Trajectory& traj,
                                              LogBase base = LogBase::base2);

} // namespace ddqpc
