#include "ddqpc/measures.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ddqpc {

namespace {

// Tolerances for the singular conventions of the rate, see the header.
constexpr double kDegenerateGap = 1e-8;
constexpr double kPoleEdge = 1e-12;
constexpr double kRadicandSlack = 1e-9;

} // namespace

std::string to_string(LogBase b) { return b == LogBase::base2 ? "2" : "e"; }

double log_divisor(LogBase base) {
    return base == LogBase::base2 ? std::numbers::ln2 : 1.0;
}

LogBase parse_log_base(const std::string& name) {
    if (name == "2") return LogBase::base2;
    if (name == "e") return LogBase::natural;
    throw std::invalid_argument("parse_log_base: expected \"2\" or \"e\", got \"" + name + "\"");
}

std::pair<double, double> schmidt_eigenvalues(const QubitState& s) {
    double radicand = 1.0 - 4.0 * s.determinant();
    if (radicand < 0.0) {
        if (radicand < -kRadicandSlack)
            throw std::domain_error("schmidt_eigenvalues: determinant above 1/4, state is not physical");
        radicand = 0.0;
    } else if (radicand > 1.0) {
        if (radicand > 1.0 + kRadicandSlack)
            throw std::domain_error("schmidt_eigenvalues: negative determinant, state is not physical");
        radicand = 1.0;
    }
    const double root = std::sqrt(radicand);
    return {0.5 * (1.0 + root), 0.5 * (1.0 - root)};
}

namespace {

inline double binary_entropy_nats(double lp, double lm) {
    double h = 0.0;
    if (lp > 0.0) h -= lp * std::log(lp);
    if (lm > 0.0) h -= lm * std::log(lm);
    return h;
}

} // namespace

double entropy_of_entanglement(const QubitState& s, LogBase base) {
    const auto [lp, lm] = schmidt_eigenvalues(s);
    return binary_entropy_nats(lp, lm) / log_divisor(base);
}

double entanglement_rate_from(double lambda_plus, double sigma12_sq, double alpha,
                              LogBase base) {
    const double gap = 2.0 * lambda_plus - 1.0;
    if (std::abs(gap) < kDegenerateGap)
        return 2.0 * alpha * sigma12_sq / log_divisor(base);
    if (lambda_plus > 1.0 - kPoleEdge)
        return sigma12_sq > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    if (sigma12_sq == 0.0) return 0.0;
    const double log_ratio = std::log(lambda_plus / (1.0 - lambda_plus));
    return alpha * sigma12_sq * log_ratio / (gap * log_divisor(base));
}

double entanglement_rate_analytic(const QubitState& s, double alpha, LogBase base) {
    const auto [lp, lm] = schmidt_eigenvalues(s);
    (void)lm;
    return entanglement_rate_from(lp, s.sigma12_sq(), alpha, base);
}

double entanglement_rate_numeric(const Trajectory& traj, std::size_t i, LogBase base) {
    if (traj.states.size() != traj.tau.size())
        throw std::invalid_argument("entanglement_rate_numeric: malformed trajectory");
    if (i == 0 || i + 1 >= traj.tau.size())
        throw std::invalid_argument("entanglement_rate_numeric: needs an interior sample");
    const double hl = traj.tau[i] - traj.tau[i - 1];
    const double hr = traj.tau[i + 1] - traj.tau[i];
    if (std::abs(hr - hl) > 1e-9 * std::max(std::abs(hl), std::abs(hr)))
        throw std::invalid_argument("entanglement_rate_numeric: spacing is not uniform at the sample");
    const double s_next = entropy_of_entanglement(traj.states[i + 1], base);
    const double s_prev = entropy_of_entanglement(traj.states[i - 1], base);
    return (s_next - s_prev) / (hl + hr);
}

double coherence_measure(const QubitState& s) {
    return std::numbers::sqrt2 * std::sqrt(s.sigma12_sq());
}

std::vector<MeasureSample> measure_trajectory(const Trajectory& traj, LogBase base) {
    if (traj.states.size() != traj.tau.size())
        throw std::invalid_argument("measure_trajectory: malformed trajectory");
    std::vector<MeasureSample> out;
    out.reserve(traj.tau.size());
    const double divisor = log_divisor(base);
    for (std::size_t i = 0; i < traj.tau.size(); ++i) {
        const QubitState& s = traj.states[i];
        const auto [lp, lm] = schmidt_eigenvalues(s);
        MeasureSample m;
        m.tau = traj.tau[i];
        m.lambda_plus = lp;
        m.lambda_minus = lm;
        m.entropy = binary_entropy_nats(lp, lm) / divisor;
        m.rate = entanglement_rate_from(lp, s.sigma12_sq(), traj.params.alpha, base);
        m.coherence = coherence_measure(s);
        out.push_back(m);
    }
    return out;
}

} // namespace ddqpc
