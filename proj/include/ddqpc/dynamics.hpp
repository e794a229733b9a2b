#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ddqpc/model.hpp"
#include "ddqpc/state.hpp"

namespace ddqpc {

/// Default fixed step for the explicit integrator, in units of tau.
inline constexpr double kDefaultStep = 1e-4;

/// Width of the window around alpha^2 = 64 treated as critically damped.
inline constexpr double kCriticalWindow = 1e-6;

enum class Branch { oscillatory, critical, overdamped };

std::string to_string(Branch b);

struct BranchInfo {
    Branch branch = Branch::oscillatory;
    /// sqrt(|alpha^2 - 64|): the oscillation frequency below threshold, the
    /// real decay-splitting rate above it.
    double magnitude = 0.0;
};

/// Classifies the damping regime of the coherence envelope. The dividing
/// point alpha = 8 comes from the characteristic roots -alpha/4 +- w/4 with
/// w^2 = alpha^2 - 64.
BranchInfo omega_branch(double alpha);

struct StateDerivative {
    double dsigma11 = 0.0;
    double dsigma22 = 0.0;
    double dsigma12_re = 0.0;
    double dsigma12_im = 0.0;
};

/// Right-hand side of the ensemble-averaged rate equations in tau units.
/// dsigma22 is the exact negation of dsigma11, so the integrator preserves
/// the trace identically.
StateDerivative rate_rhs(const QubitState& s, double alpha, double epsilon_norm);

/// Exact solution of the rate equations for a symmetric dot (epsilon = 0).
/// Valid on every damping branch, including alpha = 8, and safe against
/// overflow deep in the overdamped regime. Throws std::invalid_argument if
/// params.epsilon_norm != 0, params.alpha < 0, or tau < 0.
QubitState closed_form_state(const ModelParams& params, double tau);

enum class Method { closed_form, integrated };

std::string to_string(Method m);
Method parse_method(const std::string& name);

struct Trajectory {
    ModelParams params;
    Method method = Method::closed_form;
    std::vector<double> tau;
    std::vector<QubitState> states;
};

/// Uniform grid of n points on [0, tau_max], first point exactly 0 and last
/// exactly tau_max. Throws std::invalid_argument unless tau_max > 0, n >= 2.
std::vector<double> uniform_grid(double tau_max, std::size_t n);

/// Classical RK4 on the rate equations with fixed step, plus one shortened
/// final step to land exactly on tau_end. States are recorded after every
/// step. Throws std::invalid_argument unless 0 < step <= tau_end and
/// params.alpha >= 0.
Trajectory integrate_rate_equations(const ModelParams& params, double tau_end,
                                    double step = kDefaultStep);

/// Same integrator, but recording only at the given grid points. Each grid
/// interval is subdivided into equal substeps no longer than max_step, so
/// every grid point is hit exactly. The grid must be strictly increasing and
/// start at 0.
Trajectory integrate_on_grid(const ModelParams& params,
                             const std::vector<double>& tau_grid,
                             double max_step = kDefaultStep);

/// Closed-form solution evaluated on a uniform grid (epsilon = 0 only).
Trajectory closed_form_trajectory(const ModelParams& params, double tau_max,
                                  std::size_t n_samples);

} // namespace ddqpc
