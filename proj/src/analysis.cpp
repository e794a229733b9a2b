#include "ddqpc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ddqpc {

namespace {

double entropy_at(double theta_deg, double phi_deg, double tau, double alpha, LogBase base) {
    const ModelParams p{alpha, 0.0, theta_deg, phi_deg};
    return entropy_of_entanglement(closed_form_state(p, tau), base);
}

} // namespace

GoldenResult golden_section_maximize(const std::function<double(double)>& f, double lo,
                                     double hi, double x_tol, int max_iter) {
    if (!(hi > lo)) throw std::invalid_argument("golden_section_maximize: empty interval");
    if (!(x_tol > 0.0)) throw std::invalid_argument("golden_section_maximize: x_tol must be positive");
    constexpr double inv_phi = 0.6180339887498949; // (sqrt 5 - 1) / 2
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (fc >= fd) { // ties move the bracket left, toward the smaller x
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

CouplingScanResult scan_coupling(double theta_deg, double phi_deg, double tau,
                                 const std::vector<double>& alphas, LogBase base,
                                 bool with_derivative) {
    if (alphas.empty()) throw std::invalid_argument("scan_coupling: empty coupling grid");
    if (!(tau > 0.0)) throw std::invalid_argument("scan_coupling: tau must be positive");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0))
            throw std::invalid_argument("scan_coupling: couplings must be positive");
        if (i > 0 && !(alphas[i] > alphas[i - 1]))
            throw std::invalid_argument("scan_coupling: couplings must be strictly increasing");
    }
    CouplingScanResult r;
    r.theta_deg = theta_deg;
    r.phi_deg = phi_deg;
    r.tau = tau;
    r.alphas = alphas;
    r.entropies.reserve(alphas.size());
    for (double a : alphas) r.entropies.push_back(entropy_at(theta_deg, phi_deg, tau, a, base));
    r.star_index = 0;
    for (std::size_t i = 1; i < r.entropies.size(); ++i)
        if (r.entropies[i] > r.entropies[r.star_index]) r.star_index = i;
    r.alpha_star = alphas[r.star_index];
    if (with_derivative) {
        r.ds_dalpha.reserve(alphas.size());
        for (double a : alphas) {
            double delta = 1e-5 * std::max(1.0, a);
            if (delta >= a) delta = 0.5 * a;
            const double s_hi = entropy_at(theta_deg, phi_deg, tau, a + delta, base);
            const double s_lo = entropy_at(theta_deg, phi_deg, tau, a - delta, base);
            r.ds_dalpha.push_back((s_hi - s_lo) / (2.0 * delta));
        }
    }
    return r;
}

OptimalCoupling optimal_coupling(double theta_deg, double phi_deg, double tau, double alpha_lo,
                                 double alpha_hi, std::size_t n_grid, LogBase base,
                                 double x_tol) {
    if (!(alpha_lo > 0.0) || !(alpha_hi > alpha_lo))
        throw std::invalid_argument("optimal_coupling: need 0 < alpha_lo < alpha_hi");
    if (n_grid < 2) throw std::invalid_argument("optimal_coupling: need at least two grid points");
    if (!(tau > 0.0)) throw std::invalid_argument("optimal_coupling: tau must be positive");
    std::vector<double> grid(n_grid);
    const double da = (alpha_hi - alpha_lo) / static_cast<double>(n_grid - 1);
    for (std::size_t i = 0; i < n_grid; ++i) grid[i] = alpha_lo + static_cast<double>(i) * da;
    grid.back() = alpha_hi;
    std::size_t best = 0;
    std::vector<double> entropies(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) {
        entropies[i] = entropy_at(theta_deg, phi_deg, tau, grid[i], base);
        if (entropies[i] > entropies[best]) best = i;
    }
    OptimalCoupling out;
    out.grid_argmax_alpha = grid[best];
    if (best == 0 || best + 1 == n_grid) {
        out.boundary = true;
        out.alpha_star = grid[best];
        out.entropy_star = entropies[best];
        return out;
    }
    const auto f = [&](double a) { return entropy_at(theta_deg, phi_deg, tau, a, base); };
    const GoldenResult g = golden_section_maximize(f, grid[best - 1], grid[best + 1], x_tol);
    out.alpha_star = g.x;
    out.entropy_star = g.value;
    return out;
}

DsDalphaResult ds_dalpha(double theta_deg, double phi_deg, double tau, double alpha,
                         double delta, LogBase base) {
    if (!(alpha > 0.0)) throw std::invalid_argument("ds_dalpha: coupling must be positive");
    if (!(delta > 0.0) || delta >= alpha)
        throw std::invalid_argument("ds_dalpha: need 0 < delta < alpha");
    if (!(tau >= 0.0)) throw std::invalid_argument("ds_dalpha: negative time");
    const ModelParams p{alpha, 0.0, theta_deg, phi_deg};
    const QubitState s = closed_form_state(p, tau);
    const auto [lp, lm] = schmidt_eigenvalues(s);
    const double gap = 2.0 * lp - 1.0;
    if (std::abs(gap) < 1e-8)
        throw std::domain_error("ds_dalpha: maximally entangled point, the chain-rule factor degenerates");
    const ModelParams p_hi{alpha + delta, 0.0, theta_deg, phi_deg};
    const ModelParams p_lo{alpha - delta, 0.0, theta_deg, phi_deg};
    const double ddet = (closed_form_state(p_hi, tau).determinant() -
                         closed_form_state(p_lo, tau).determinant()) /
                        (2.0 * delta);
    DsDalphaResult r;
    const double coef = std::log(lp / lm) / (gap * log_divisor(base));
    r.analytic = (ddet == 0.0) ? 0.0 : coef * ddet;
    r.central_difference = (entropy_at(theta_deg, phi_deg, tau, alpha + delta, base) -
                            entropy_at(theta_deg, phi_deg, tau, alpha - delta, base)) /
                           (2.0 * delta);
    return r;
}

CyclingReport detect_cycling(double alpha, double theta_deg, double phi_deg, double tau_max,
                             std::size_t resolution) {
    if (alpha < 0.0) throw std::invalid_argument("detect_cycling: negative coupling");
    if (!(tau_max > 0.0)) throw std::invalid_argument("detect_cycling: tau_max must be positive");
    if (resolution < 3) throw std::invalid_argument("detect_cycling: resolution too small");
    CyclingReport rep;
    rep.alpha = alpha;
    const BranchInfo info = omega_branch(alpha);
    rep.branch = info.branch;
    if (info.branch != Branch::oscillatory) return rep;

    const double omega = info.magnitude;
    const double period = 4.0 * kPi / omega;
    const std::vector<double> grid = uniform_grid(tau_max, resolution);
    if (grid[1] - grid[0] > period / 50.0)
        throw std::invalid_argument("detect_cycling: need at least 50 samples per oscillation period");

    const double th = deg_to_rad(normalize_angle_deg(theta_deg));
    const double ph = deg_to_rad(normalize_angle_deg(phi_deg));
    const double shc = std::sin(th / 2.0) * std::cos(th / 2.0);
    const double cth = std::cos(th);
    // |sigma12|^2 with the global decay e^{-alpha tau / 2} divided out, built
    // from the raw oscillatory basis; bounded uniformly in tau, zero exactly
    // where the coherence vanishes.
    const auto compensated = [&](double tau) {
        const double arg = omega * tau / 4.0;
        const double c = std::cos(arg);
        const double sw = std::sin(arg) / omega;
        const double xr = shc * std::cos(ph) * std::exp(-alpha * tau / 4.0);
        const double yr = 4.0 * cth * sw - shc * std::sin(ph) * (c - alpha * sw);
        return xr * xr + yr * yr;
    };

    std::vector<double> u(resolution);
    for (std::size_t i = 0; i < resolution; ++i) u[i] = compensated(grid[i]);

    const auto negated = [&](double tau) { return -compensated(tau); };
    for (std::size_t i = 1; i + 1 < resolution; ++i) {
        if (!(u[i] <= u[i - 1] && u[i] <= u[i + 1])) continue;
        const GoldenResult g = golden_section_maximize(negated, grid[i - 1], grid[i + 1], 1e-9);
        if (-g.value > kCoherenceZeroFloor) continue;
        if (!rep.zero_times.empty() && g.x - rep.zero_times.back() < 1e-6 * period) continue;
        rep.zero_times.push_back(g.x);
    }
    if (rep.zero_times.size() >= 2)
        rep.period_estimate = (rep.zero_times.back() - rep.zero_times.front()) /
                              static_cast<double>(rep.zero_times.size() - 1);
    return rep;
}

RateWindowReport small_tau_rate_check(double theta_deg, double phi_deg, double alpha,
                                      double window_lo, double window_hi,
                                      std::size_t n_points, LogBase base) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("small_tau_rate_check: coupling must be positive");
    if (!(window_lo > 0.0) || !(window_hi > window_lo) || window_hi > 0.1)
        throw std::invalid_argument("small_tau_rate_check: window must lie inside (0, 0.1]");
    if (n_points < 2)
        throw std::invalid_argument("small_tau_rate_check: need at least two points");
    const double th = deg_to_rad(normalize_angle_deg(theta_deg));
    if (std::abs(std::sin(th / 2.0) * std::cos(th / 2.0)) < 1e-12)
        throw std::invalid_argument("small_tau_rate_check: basis-state start carries no early-time coherence law");

    RateWindowReport rep;
    rep.alpha = alpha;
    rep.ratios.reserve(n_points);
    const ModelParams p{alpha, 0.0, theta_deg, phi_deg};
    const double dw = (window_hi - window_lo) / static_cast<double>(n_points - 1);
    for (std::size_t j = 0; j < n_points; ++j) {
        const double tau = window_lo + static_cast<double>(j) * dw;
        const QubitState s = closed_form_state(p, tau);
        const auto [lp, lm] = schmidt_eigenvalues(s);
        const double rate = entanglement_rate_from(lp, s.sigma12_sq(), alpha, base);
        const double denom =
            alpha * std::log(lp / lm) / log_divisor(base) * std::exp(-alpha * tau / 2.0);
        rep.ratios.push_back(rate / denom);
    }
    double sum = 0.0;
    for (double r : rep.ratios) sum += r;
    rep.ratio_mean = sum / static_cast<double>(n_points);
    double max_dev = 0.0;
    for (double r : rep.ratios) {
        const double dev = std::abs(r - rep.ratio_mean) / std::abs(rep.ratio_mean);
        if (!(dev <= max_dev)) max_dev = dev; // lets NaN through on purpose
    }
    rep.max_rel_deviation = max_dev;
    rep.passes = std::isfinite(max_dev) && max_dev <= 0.2;
    return rep;
}

CrossoverReport crossover_check(double theta_deg, const std::vector<double>& alphas,
                                double tau_small, double tau_large, LogBase base) {
    const double th = normalize_angle_deg(theta_deg);
    if (!(th > 0.0) || !(th < 90.0))
        throw std::invalid_argument("crossover_check: theta must lie strictly between 0 and 90 degrees");
    if (alphas.size() < 2)
        throw std::invalid_argument("crossover_check: need at least two couplings");
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0))
            throw std::invalid_argument("crossover_check: couplings must be positive");
        if (i > 0 && !(alphas[i] > alphas[i - 1]))
            throw std::invalid_argument("crossover_check: couplings must be strictly increasing");
    }
    if (!(tau_small > 0.0) || !(tau_large > tau_small))
        throw std::invalid_argument("crossover_check: need 0 < tau_small < tau_large");

    CrossoverReport rep;
    rep.theta_deg = theta_deg;
    rep.alphas = alphas;
    for (double a : alphas) {
        rep.entropy_small.push_back(entropy_at(theta_deg, 0.0, tau_small, a, base));
        rep.entropy_large.push_back(entropy_at(theta_deg, 0.0, tau_large, a, base));
    }
    rep.small_tau_increasing = true;
    for (std::size_t i = 1; i < alphas.size(); ++i)
        if (!(rep.entropy_small[i] > rep.entropy_small[i - 1])) rep.small_tau_increasing = false;

    // The frozen-dot ordering only binds once both couplings are deep in the
    // measurement-dominated regime; below that the large-time entropy is not
    // monotone in the coupling.
    bool any_pair = false;
    rep.large_tau_decreasing = true;
    for (std::size_t i = 0; i + 1 < alphas.size(); ++i) {
        if (alphas[i] < 100.0) continue;
        any_pair = true;
        if (!(rep.entropy_large[i + 1] < rep.entropy_large[i])) rep.large_tau_decreasing = false;
    }
    if (!any_pair) {
        const std::size_t i = alphas.size() - 2;
        rep.large_tau_decreasing = rep.entropy_large[i + 1] < rep.entropy_large[i];
    }
    rep.passes = rep.small_tau_increasing && rep.large_tau_decreasing;
    return rep;
}

std::vector<std::size_t> entropy_decrease_indices(const std::vector<double>& entropies,
                                                  double tol) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < entropies.size(); ++i)
        if (entropies[i] < entropies[i - 1] - tol) out.push_back(i);
    return out;
}

std::vector<MonotonicityViolation> monotonicity_scan(std::size_t n_random, std::uint64_t seed,
                                                     std::size_t n_tau, double tau_max,
                                                     double tol) {
    if (n_tau < 2) throw std::invalid_argument("monotonicity_scan: need at least two samples");
    if (!(tau_max > 0.0)) throw std::invalid_argument("monotonicity_scan: tau_max must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<MonotonicityViolation> out;
    for (std::size_t k = 0; k < n_random; ++k) {
        const double u_cos = unit(rng);
        const double u_phi = unit(rng);
        const double u_alpha = unit(rng);
        const double theta = std::acos(1.0 - 2.0 * u_cos) * (180.0 / kPi);
        const double phi = 360.0 * u_phi;
        const double alpha = std::pow(10.0, -2.0 + 5.0 * u_alpha);
        const ModelParams p{alpha, 0.0, theta, phi};
        const Trajectory traj = closed_form_trajectory(p, tau_max, n_tau);
        std::vector<double> entropies;
        entropies.reserve(n_tau);
        for (const QubitState& s : traj.states)
            entropies.push_back(entropy_of_entanglement(s, LogBase::base2));
        for (std::size_t idx : entropy_decrease_indices(entropies, tol))
            out.push_back({k, alpha, theta, phi, idx, entropies[idx - 1] - entropies[idx]});
    }
    return out;
}

} // namespace ddqpc
