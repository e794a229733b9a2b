#include "ddqpc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddqpc {

QubitState initial_state(double theta_deg, double phi_deg) {
    const double th = deg_to_rad(normalize_angle_deg(theta_deg));
    const double ph = deg_to_rad(normalize_angle_deg(phi_deg));
    const double c = std::cos(th / 2.0);
    const double s = std::sin(th / 2.0);
    QubitState q;
    q.sigma11 = c * c;
    q.sigma22 = s * s;
    q.sigma12_re = s * c * std::cos(ph);
    q.sigma12_im = -s * c * std::sin(ph);
    return q;
}

PhysicalConversion params_from_physical(const PhysicalParams& phys, double theta_deg,
                                        double phi_deg) {
    if (!(phys.omega0 > 0.0))
        throw std::invalid_argument("params_from_physical: omega0 must be positive");
    if (phys.t1 < 0.0 || phys.t1 > 1.0)
        throw std::invalid_argument("params_from_physical: transmission must lie in [0, 1]");
    if (phys.vd < 0.0)
        throw std::invalid_argument("params_from_physical: bias must be nonnegative");
    PhysicalConversion out;
    out.gamma_d = phys.t1 * phys.vd / (2.0 * kPi);
    out.i1 = out.gamma_d;
    out.i2 = 0.0;
    out.model.alpha = out.gamma_d / phys.omega0;
    out.model.epsilon_norm = (phys.e2 - phys.e1) / phys.omega0;
    out.model.theta_deg = theta_deg;
    out.model.phi_deg = phi_deg;
    return out;
}

std::string to_string(Branch b) {
    switch (b) {
    case Branch::oscillatory: return "oscillatory";
    case Branch::critical: return "critical";
    case Branch::overdamped: return "overdamped";
    }
    return "unknown";
}

std::string to_string(Method m) {
    return m == Method::closed_form ? "closed-form" : "integrated";
}

Method parse_method(const std::string& name) {
    if (name == "closed-form") return Method::closed_form;
    if (name == "integrated") return Method::integrated;
    throw std::invalid_argument("parse_method: expected \"closed-form\" or \"integrated\", got \"" +
                                name + "\"");
}

BranchInfo omega_branch(double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("omega_branch: negative coupling");
    const double w2 = alpha * alpha - 64.0;
    BranchInfo info;
    info.magnitude = std::sqrt(std::abs(w2));
    if (std::abs(w2) < kCriticalWindow) info.branch = Branch::critical;
    else if (w2 < 0.0) info.branch = Branch::oscillatory;
    else info.branch = Branch::overdamped;
    return info;
}

namespace {

// e^{-alpha tau/4} cosh(w tau/4) and e^{-alpha tau/4} sinh(w tau/4) / w with
// w^2 = alpha^2 - 64, continued smoothly through w^2 <= 0. Near the critical
// point both are evaluated as series in the signed (w tau/4)^2; deep in the
// overdamped regime the two characteristic modes are assembled from half
// exponentials because cosh overflows while the envelope underflows.
void damped_basis(double alpha, double tau, double& e_cosh, double& e_sinh) {
    const double w2 = alpha * alpha - 64.0;
    const double q = tau / 4.0;
    if (std::abs(w2) < kCriticalWindow) {
        const double env = std::exp(-alpha * q);
        const double u2 = w2 * q * q;
        e_cosh = env * (1.0 + u2 / 2.0 + u2 * u2 / 24.0);
        e_sinh = env * q * (1.0 + u2 / 6.0 + u2 * u2 / 120.0);
        return;
    }
    if (w2 < 0.0) {
        const double omega = std::sqrt(-w2);
        const double env = std::exp(-alpha * q);
        e_cosh = env * std::cos(omega * q);
        e_sinh = env * std::sin(omega * q) / omega;
        return;
    }
    const double w = std::sqrt(w2);
    if (w * q <= 350.0 && alpha * q <= 700.0) {
        const double env = std::exp(-alpha * q);
        e_cosh = env * std::cosh(w * q);
        e_sinh = env * std::sinh(w * q) / w;
        return;
    }
    const double slow = 0.5 * std::exp((w - alpha) * q);
    const double fast = 0.5 * std::exp(-(w + alpha) * q);
    e_cosh = slow + fast;
    e_sinh = (slow - fast) / w;
}

} // namespace

QubitState closed_form_state(const ModelParams& params, double tau) {
    if (params.epsilon_norm != 0.0)
        throw std::invalid_argument("closed_form_state: needs a symmetric dot (epsilon = 0)");
    if (params.alpha < 0.0)
        throw std::invalid_argument("closed_form_state: negative coupling");
    if (tau < 0.0)
        throw std::invalid_argument("closed_form_state: negative time");
    const double th = deg_to_rad(normalize_angle_deg(params.theta_deg));
    const double ph = deg_to_rad(normalize_angle_deg(params.phi_deg));
    const double shc = std::sin(th / 2.0) * std::cos(th / 2.0);
    const double cth = std::cos(th);
    const double alpha = params.alpha;
    double e_cosh = 0.0, e_sinh = 0.0;
    damped_basis(alpha, tau, e_cosh, e_sinh);
    QubitState s;
    s.sigma12_re = shc * std::cos(ph) * std::exp(-alpha * tau / 2.0);
    s.sigma12_im = 4.0 * cth * e_sinh - shc * std::sin(ph) * (e_cosh - alpha * e_sinh);
    const double z = cth * (e_cosh + alpha * e_sinh) + 16.0 * shc * std::sin(ph) * e_sinh;
    s.sigma11 = 0.5 * (1.0 + z);
    s.sigma22 = 0.5 * (1.0 - z);
    return s;
}

StateDerivative rate_rhs(const QubitState& s, double alpha, double epsilon_norm) {
    StateDerivative d;
    d.dsigma11 = -2.0 * s.sigma12_im;
    d.dsigma22 = -d.dsigma11;
    d.dsigma12_re = -epsilon_norm * s.sigma12_im - 0.5 * alpha * s.sigma12_re;
    d.dsigma12_im = epsilon_norm * s.sigma12_re + (s.sigma11 - s.sigma22) - 0.5 * alpha * s.sigma12_im;
    return d;
}

namespace {

// Integration state (z, x, y) = (population difference, Re sigma12,
// Im sigma12). The populations are reconstructed from z afterwards, which
// keeps the trace exactly 1 no matter how many steps are taken.
struct Vec3 {
    double z = 0.0, x = 0.0, y = 0.0;
};

inline Vec3 rhs3(const Vec3& v, double alpha, double eps) {
    return {-4.0 * v.y,
            -eps * v.y - 0.5 * alpha * v.x,
            eps * v.x + v.z - 0.5 * alpha * v.y};
}

inline Vec3 rk4_step(const Vec3& v, double h, double alpha, double eps) {
    const Vec3 k1 = rhs3(v, alpha, eps);
    const Vec3 k2 = rhs3({v.z + 0.5 * h * k1.z, v.x + 0.5 * h * k1.x, v.y + 0.5 * h * k1.y},
                         alpha, eps);
    const Vec3 k3 = rhs3({v.z + 0.5 * h * k2.z, v.x + 0.5 * h * k2.x, v.y + 0.5 * h * k2.y},
                         alpha, eps);
    const Vec3 k4 = rhs3({v.z + h * k3.z, v.x + h * k3.x, v.y + h * k3.y}, alpha, eps);
    return {v.z + h / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
            v.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            v.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y)};
}

inline QubitState vec_to_state(const Vec3& v) {
    QubitState s;
    s.sigma11 = 0.5 * (1.0 + v.z);
    s.sigma22 = 0.5 * (1.0 - v.z);
    s.sigma12_re = v.x;
    s.sigma12_im = v.y;
    return s;
}

inline Vec3 state_to_vec(const QubitState& s) {
    return {s.sigma11 - s.sigma22, s.sigma12_re, s.sigma12_im};
}

} // namespace

std::vector<double> uniform_grid(double tau_max, std::size_t n) {
    if (!(tau_max > 0.0)) throw std::invalid_argument("uniform_grid: tau_max must be positive");
    if (n < 2) throw std::invalid_argument("uniform_grid: need at least two samples");
    std::vector<double> g(n);
    const double dt = tau_max / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i) * dt;
    g.back() = tau_max;
    return g;
}

Trajectory integrate_rate_equations(const ModelParams& params, double tau_end, double step) {
    if (params.alpha < 0.0)
        throw std::invalid_argument("integrate_rate_equations: negative coupling");
    if (!(tau_end > 0.0))
        throw std::invalid_argument("integrate_rate_equations: tau_end must be positive");
    if (!(step > 0.0) || step > tau_end)
        throw std::invalid_argument("integrate_rate_equations: need 0 < step <= tau_end");
    std::vector<double> grid;
    const std::size_t n_steps =
        static_cast<std::size_t>(std::ceil(tau_end / step - 1e-9));
    grid.reserve(n_steps + 1);
    for (std::size_t k = 0; k < n_steps; ++k) grid.push_back(static_cast<double>(k) * step);
    grid.push_back(tau_end);
    return integrate_on_grid(params, grid, step);
}

Trajectory integrate_on_grid(const ModelParams& params, const std::vector<double>& tau_grid,
                             double max_step) {
    if (params.alpha < 0.0)
        throw std::invalid_argument("integrate_on_grid: negative coupling");
    if (!(max_step > 0.0))
        throw std::invalid_argument("integrate_on_grid: max_step must be positive");
    if (tau_grid.size() < 2 || tau_grid.front() != 0.0)
        throw std::invalid_argument("integrate_on_grid: grid must start at 0 with at least two points");
    for (std::size_t i = 1; i < tau_grid.size(); ++i)
        if (!(tau_grid[i] > tau_grid[i - 1]))
            throw std::invalid_argument("integrate_on_grid: grid must be strictly increasing");

    Trajectory traj;
    traj.params = params;
    traj.method = Method::integrated;
    traj.tau = tau_grid;
    traj.states.reserve(tau_grid.size());

    const QubitState start = initial_state(params.theta_deg, params.phi_deg);
    traj.states.push_back(start);
    Vec3 v = state_to_vec(start);
    for (std::size_t i = 1; i < tau_grid.size(); ++i) {
        const double len = tau_grid[i] - tau_grid[i - 1];
        const std::size_t m = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(len / max_step - 1e-12)));
        const double h = len / static_cast<double>(m);
        for (std::size_t k = 0; k < m; ++k)
            v = rk4_step(v, h, params.alpha, params.epsilon_norm);
        traj.states.push_back(vec_to_state(v));
    }
    return traj;
}

Trajectory closed_form_trajectory(const ModelParams& params, double tau_max,
                                  std::size_t n_samples) {
    if (params.epsilon_norm != 0.0)
        throw std::invalid_argument("closed_form_trajectory: needs a symmetric dot (epsilon = 0)");
    if (params.alpha < 0.0)
        throw std::invalid_argument("closed_form_trajectory: negative coupling");
    Trajectory traj;
    traj.params = params;
    traj.method = Method::closed_form;
    traj.tau = uniform_grid(tau_max, n_samples);
    traj.states.reserve(n_samples);
    traj.states.push_back(initial_state(params.theta_deg, params.phi_deg));
    for (std::size_t i = 1; i < traj.tau.size(); ++i)
        traj.states.push_back(closed_form_state(params, traj.tau[i]));
    return traj;
}

} // namespace ddqpc
