#include "ddqpc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "ddqpc/analysis.hpp"

namespace ddqpc {

SweepError::SweepError(std::string what, std::vector<CellFailure> failures)
    : std::runtime_error(std::move(what)), failures_(std::move(failures)) {}

namespace {

void validate_grid(const SweepGrid& g) {
    if (g.alphas.empty() || g.thetas_deg.empty() || g.phis_deg.empty())
        throw std::invalid_argument("run_sweep: every grid axis needs at least one value");
    if (!(g.tau_max > 0.0)) throw std::invalid_argument("run_sweep: tau_max must be positive");
    if (g.n_samples < 2) throw std::invalid_argument("run_sweep: need at least two samples");
    if (!(g.step > 0.0)) throw std::invalid_argument("run_sweep: step must be positive");
    if (g.method == Method::closed_form && g.epsilon_norm != 0.0)
        throw std::invalid_argument("run_sweep: closed form needs a symmetric dot (epsilon = 0)");
}

struct Cell {
    double alpha = 0.0;
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    std::size_t slot = 0;
};

} // namespace

SweepResult run_sweep(const SweepGrid& grid, std::size_t workers) {
    validate_grid(grid);
    if (workers == 0) throw std::invalid_argument("run_sweep: need at least one worker");

    std::vector<Cell> cells;
    cells.reserve(grid.alphas.size() * grid.thetas_deg.size() * grid.phis_deg.size());
    for (double a : grid.alphas)
        for (double t : grid.thetas_deg)
            for (double p : grid.phis_deg)
                cells.push_back({a, t, p, cells.size() * grid.n_samples});

    SweepResult result;
    result.grid = grid;
    result.rows.resize(cells.size() * grid.n_samples);

    std::mutex failure_mutex;
    std::vector<CellFailure> failures;
    std::atomic<std::size_t> next{0};

    const auto worker_fn = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= cells.size()) return;
            const Cell& cell = cells[k];
            try {
                const ModelParams params{cell.alpha, grid.epsilon_norm, cell.theta_deg,
                                         cell.phi_deg};
                const Trajectory traj =
                    grid.method == Method::closed_form
                        ? closed_form_trajectory(params, grid.tau_max, grid.n_samples)
                        : integrate_on_grid(params, uniform_grid(grid.tau_max, grid.n_samples),
                                            grid.step);
                const std::vector<MeasureSample> samples = measure_trajectory(traj, grid.log_base);
                for (std::size_t i = 0; i < grid.n_samples; ++i) {
                    SweepRow& row = result.rows[cell.slot + i];
                    row.alpha = cell.alpha;
                    row.theta_deg = cell.theta_deg;
                    row.phi_deg = cell.phi_deg;
                    row.state = traj.states[i];
                    row.measures = samples[i];
                }
            } catch (const std::exception& e) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                failures.push_back({cell.alpha, cell.theta_deg, cell.phi_deg, e.what()});
            }
        }
    };

    if (workers == 1) {
        worker_fn();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker_fn);
        for (std::thread& t : pool) t.join();
    }

    if (!failures.empty()) {
        std::sort(failures.begin(), failures.end(), [](const CellFailure& a, const CellFailure& b) {
            if (a.alpha != b.alpha) return a.alpha < b.alpha;
            if (a.theta_deg != b.theta_deg) return a.theta_deg < b.theta_deg;
            return a.phi_deg < b.phi_deg;
        });
        std::string msg = "run_sweep: " + std::to_string(failures.size()) + " cell(s) failed:";
        for (const CellFailure& f : failures) {
            char coords[96];
            std::snprintf(coords, sizeof coords, " [alpha=%g, theta=%g, phi=%g: ", f.alpha,
                          f.theta_deg, f.phi_deg);
            msg += coords;
            msg += f.message;
            msg += "]";
        }
        throw SweepError(msg, std::move(failures));
    }
    return result;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

std::size_t write_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << kCsvHeader << '\n';
    for (const SweepRow& r : result.rows) {
        out << format_number(r.alpha) << ',' << format_number(r.theta_deg) << ','
            << format_number(r.phi_deg) << ',' << format_number(r.measures.tau) << ','
            << format_number(r.state.sigma11) << ',' << format_number(r.state.sigma22) << ','
            << format_number(r.state.sigma12_re) << ',' << format_number(r.state.sigma12_im)
            << ',' << format_number(r.measures.lambda_plus) << ','
            << format_number(r.measures.entropy) << ',' << format_number(r.measures.rate) << ','
            << format_number(r.measures.coherence) << '\n';
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
    return result.rows.size();
}

nlohmann::ordered_json grid_to_json(const SweepGrid& grid) {
    nlohmann::ordered_json j;
    j["alphas"] = grid.alphas;
    j["thetas_deg"] = grid.thetas_deg;
    j["phis_deg"] = grid.phis_deg;
    j["epsilon_norm"] = grid.epsilon_norm;
    j["tau_max"] = grid.tau_max;
    j["n_samples"] = grid.n_samples;
    j["method"] = to_string(grid.method);
    j["log_base"] = to_string(grid.log_base);
    j["step"] = grid.step;
    return j;
}

SweepGrid grid_from_json(const nlohmann::ordered_json& j) {
    SweepGrid g;
    g.alphas = j.at("alphas").get<std::vector<double>>();
    g.thetas_deg = j.at("thetas_deg").get<std::vector<double>>();
    g.phis_deg = j.at("phis_deg").get<std::vector<double>>();
    g.epsilon_norm = j.at("epsilon_norm").get<double>();
    g.tau_max = j.at("tau_max").get<double>();
    g.n_samples = j.at("n_samples").get<std::size_t>();
    g.method = parse_method(j.at("method").get<std::string>());
    g.log_base = parse_log_base(j.at("log_base").get<std::string>());
    g.step = j.at("step").get<double>();
    return g;
}

namespace {

// Coherence zeros of one sampled curve, by parabolic refinement through each
// interior local minimum of |sigma12|^2. Works for any level asymmetry but
// is only as sharp as the sampling; both neighbors must be nonzero so that a
// stretch of underflowed samples is not mistaken for a zero.
std::size_t count_zeros_sampled(const SweepRow* block, std::size_t n) {
    std::size_t count = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double u0 = block[i - 1].state.sigma12_sq();
        const double u1 = block[i].state.sigma12_sq();
        const double u2 = block[i + 1].state.sigma12_sq();
        if (!(u1 <= u0 && u1 <= u2)) continue;
        if (!(u0 > 0.0 && u2 > 0.0)) continue;
        const double scale = std::max(u0, u2);
        double v_min = u1;
        const double denom = u0 - 2.0 * u1 + u2;
        if (denom > 0.0) {
            const double off = 0.5 * (u0 - u2) / denom;
            if (std::abs(off) <= 1.0) v_min = u1 - 0.25 * (u0 - u2) * off;
        }
        if (v_min <= 1e-9 * scale) ++count;
    }
    return count;
}

std::size_t count_zeros(const SweepGrid& grid, const SweepRow* block, std::size_t n) {
    const double alpha = block[0].alpha;
    if (grid.epsilon_norm == 0.0 && alpha >= 0.0) {
        const BranchInfo info = omega_branch(alpha);
        if (info.branch == Branch::oscillatory) {
            const double period = 4.0 * kPi / info.magnitude;
            std::size_t res =
                static_cast<std::size_t>(std::ceil(50.0 * grid.tau_max / period)) + 2;
            res = std::max({res, grid.n_samples, static_cast<std::size_t>(101)});
            return detect_cycling(alpha, block[0].theta_deg, block[0].phi_deg, grid.tau_max, res)
                .zero_times.size();
        }
        return count_zeros_sampled(block, n);
    }
    return count_zeros_sampled(block, n);
}

} // namespace

nlohmann::ordered_json summary_json(const SweepResult& result) {
    const std::size_t n = result.grid.n_samples;
    if (n == 0 || result.rows.size() % n != 0)
        throw std::invalid_argument("summary_json: row count is not a whole number of curves");
    nlohmann::ordered_json j;
    j["grid"] = grid_to_json(result.grid);
    j["n_curves"] = result.rows.size() / n;
    j["n_rows"] = result.rows.size();
    nlohmann::ordered_json curves = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c * n < result.rows.size(); ++c) {
        const SweepRow* block = &result.rows[c * n];
        nlohmann::ordered_json jc;
        jc["alpha"] = block[0].alpha;
        jc["theta_deg"] = block[0].theta_deg;
        jc["phi_deg"] = block[0].phi_deg;
        jc["final_entropy"] = block[n - 1].measures.entropy;
        double max_rate = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = block[i].measures.rate;
            if (std::isfinite(r) && r > max_rate) max_rate = r;
        }
        jc["max_finite_rate"] = max_rate;
        jc["coherence_zero_count"] = count_zeros(result.grid, block, n);
        curves.push_back(std::move(jc));
    }
    j["curves"] = std::move(curves);
    return j;
}

nlohmann::ordered_json write_json_summary(const SweepResult& result, const std::string& path) {
    nlohmann::ordered_json j = summary_json(result);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_json_summary: cannot open " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write_json_summary: write failed for " + path);
    return j;
}

Figure parse_figure(const std::string& name) {
    if (name == "fig2") return Figure::fig2;
    if (name == "fig3") return Figure::fig3;
    if (name == "fig4") return Figure::fig4;
    if (name == "fig5") return Figure::fig5;
    if (name == "fig6") return Figure::fig6;
    throw std::invalid_argument("parse_figure: unknown preset \"" + name + "\"");
}

std::string to_string(Figure f) {
    switch (f) {
    case Figure::fig2: return "fig2";
    case Figure::fig3: return "fig3";
    case Figure::fig4: return "fig4";
    case Figure::fig5: return "fig5";
    case Figure::fig6: return "fig6";
    }
    return "unknown";
}

SweepGrid figure_preset(Figure f) {
    SweepGrid g;
    g.phis_deg = {0.0};
    g.epsilon_norm = 0.0;
    g.tau_max = 10.0;
    g.n_samples = 1000;
    g.method = Method::closed_form;
    g.log_base = LogBase::base2;
    const std::vector<double> standard{0.1, 1.0, 10.0, 100.0, 1000.0};
    switch (f) {
    case Figure::fig2:
        g.alphas = standard;
        g.thetas_deg = {0.0};
        break;
    case Figure::fig3:
        g.alphas = {0.01, 1.0};
        g.thetas_deg = {0.0};
        break;
    case Figure::fig4:
        g.alphas = standard;
        g.thetas_deg = {90.0};
        break;
    case Figure::fig5:
        g.alphas = standard;
        g.thetas_deg = {90.0};
        break;
    case Figure::fig6:
        g.alphas = standard;
        g.thetas_deg = {30.0};
        break;
    }
    return g;
}

std::string figure_primary_measure(Figure f) {
    return (f == Figure::fig3 || f == Figure::fig5) ? "coherence" : "entropy";
}

} // namespace ddqpc
