#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ddqpc/measures.hpp"

namespace ddqpc {

/// Refined coherence minima at or below this level count as exact zeros of
/// the envelope-compensated |sigma12|^2.
inline constexpr double kCoherenceZeroFloor = 1e-12;

struct GoldenResult {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search for a maximum of a unimodal function on [lo, hi].
/// x_tol is the absolute bracket width at which the search stops.
GoldenResult golden_section_maximize(const std::function<double(double)>& f,
                                     double lo, double hi, double x_tol = 1e-6,
                                     int max_iter = 200);

struct CouplingScanResult {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    double tau = 0.0;
    std::vector<double> alphas;
    std::vector<double> entropies;
    std::vector<double> ds_dalpha; // filled only when requested
    double alpha_star = 0.0;       // grid argmax, ties to the smaller alpha
    std::size_t star_index = 0;
};

/// Entanglement entropy at fixed (theta, phi, tau) over a grid of couplings.
/// Alphas must be positive and strictly increasing.
CouplingScanResult scan_coupling(double theta_deg, double phi_deg, double tau,
                                 const std::vector<double>& alphas,
                                 LogBase base = LogBase::base2,
                                 bool with_derivative = false);

struct OptimalCoupling {
    double alpha_star = 0.0;
    double entropy_star = 0.0;
    double grid_argmax_alpha = 0.0;
    bool boundary = false; // argmax pinned to an end of the search interval
};

/// Coarse grid scan followed by golden-section refinement between the grid
/// neighbors of the argmax. A boundary argmax is reported as-is with the
/// flag set instead of being refined.
OptimalCoupling optimal_coupling(double theta_deg, double phi_deg, double tau,
                                 double alpha_lo, double alpha_hi,
                                 std::size_t n_grid = 256,
                                 LogBase base = LogBase::base2,
                                 double x_tol = 1e-4);

struct DsDalphaResult {
    double analytic = 0.0;           // chain rule through d(det)/d(alpha)
    double central_difference = 0.0; // direct difference of the entropy
};

/// Sensitivity of the entropy to the coupling at fixed (theta, phi, tau),
/// by two independent routes. Throws std::domain_error when the state sits
/// within 1e-8 of the maximally entangled point, where the chain-rule factor
/// log(lambda+/lambda-)/(2 lambda+ - 1) degenerates.
DsDalphaResult ds_dalpha(double theta_deg, double phi_deg, double tau, double alpha,
                         double delta, LogBase base = LogBase::base2);

struct CyclingReport {
    double alpha = 0.0;
    Branch branch = Branch::oscillatory;
    std::vector<double> zero_times;
    std::optional<double> period_estimate; // mean spacing, needs >= 2 zeros
};

/// Exact zeros of the coherence of a symmetric-dot trajectory (epsilon = 0).
/// Works on the envelope-compensated |sigma12|^2 e^{alpha tau / 2}, which
/// stays bounded below threshold: sampled local minima are refined by
/// golden-section search and classified against kCoherenceZeroFloor. Above
/// threshold the coherence never recurs and the report is empty. The sampling
/// resolution must give at least 50 points per oscillation period.
CyclingReport detect_cycling(double alpha, double theta_deg = 0.0,
                             double phi_deg = 0.0, double tau_max = 10.0,
                             std::size_t resolution = 20001);

struct RateWindowReport {
    double alpha = 0.0;
    double ratio_mean = 0.0;
    double max_rel_deviation = 0.0;
    bool passes = false; // deviation within 20 percent
    std::vector<double> ratios;
};

/// Early-time law for a superposition start: the rate divided by
/// alpha log(lambda+/lambda-) e^{-alpha tau / 2} holds near a constant
/// across the window (exactly 1/4 for the balanced superposition).
/// The window must lie inside (0, 0.1]; theta must not be a basis state.
RateWindowReport small_tau_rate_check(double theta_deg, double phi_deg, double alpha,
                                      double window_lo, double window_hi,
                                      std::size_t n_points = 50,
                                      LogBase base = LogBase::base2);

struct CrossoverReport {
    double theta_deg = 0.0;
    std::vector<double> alphas;
    std::vector<double> entropy_small;
    std::vector<double> entropy_large;
    bool small_tau_increasing = false;
    bool large_tau_decreasing = false;
    bool passes = false;
};

/// Partial superpositions inherit both limits: stronger coupling entangles
/// faster at small tau yet freezes the dot at large tau. The large-tau
/// ordering is only required between couplings already in the frozen regime
/// (pairs starting at alpha >= 100, or the last pair when none qualify).
CrossoverReport crossover_check(double theta_deg,
                                const std::vector<double>& alphas = {10.0, 100.0, 1000.0},
                                double tau_small = 0.01, double tau_large = 5.0,
                                LogBase base = LogBase::base2);

struct MonotonicityViolation {
    std::size_t sample_index = 0;
    double alpha = 0.0;
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    std::size_t tau_index = 0;
    double drop = 0.0;
};

/// Indices i with entropies[i] < entropies[i-1] - tol.
std::vector<std::size_t> entropy_decrease_indices(const std::vector<double>& entropies,
                                                  double tol = 1e-9);

/// Randomized sweep over initial states (cos theta uniform on [-1, 1], phi
/// uniform) and couplings (log-uniform on [1e-2, 1e3]) checking that the
/// symmetric-dot entropy never decreases along any trajectory. Deterministic
/// for a fixed seed. Returns every violation found.
std::vector<MonotonicityViolation> monotonicity_scan(std::size_t n_random,
                                                     std::uint64_t seed,
                                                     std::size_t n_tau = 2000,
                                                     double tau_max = 10.0,
                                                     double tol = 1e-9);

} // namespace ddqpc
