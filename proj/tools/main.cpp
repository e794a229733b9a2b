#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ddqpc/analysis.hpp"
#include "ddqpc/dynamics.hpp"
#include "ddqpc/measures.hpp"
#include "ddqpc/sweep.hpp"

namespace {

// Configuration problems detected after parsing; mapped to exit code 2 like
// parse errors, while numeric failures inside the library map to 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SimulateOpts {
    double alpha = 0.0;
    double t1 = 0.0, vd = 0.0, omega0 = 0.0, e1 = 0.0, e2 = 0.0;
    double theta = 0.0, phi = 0.0, epsilon = 0.0;
    double tau_max = 10.0;
    std::size_t samples = 1000;
    double step = ddqpc::kDefaultStep;
    std::string method = "auto";
    std::string log_base = "2";
    std::string output = "trajectory.csv";
    bool physical = false;
};

struct SweepOpts {
    std::vector<double> alphas;
    std::vector<double> thetas{0.0};
    std::vector<double> phis{0.0};
    double epsilon = 0.0;
    double tau_max = 10.0;
    std::size_t samples = 1000;
    double step = ddqpc::kDefaultStep;
    std::string method = "auto";
    std::string log_base = "2";
    std::size_t workers = 1;
    std::string output = "sweep.csv";
    std::string summary;
};

struct FiguresOpts {
    std::string name;
    std::string out_dir = ".";
    std::size_t workers = 1;
};

struct OptimizeOpts {
    double theta = 0.0;
    double phi = 0.0;
    double tau = 1.0;
    double alpha_lo = 0.1;
    double alpha_hi = 20.0;
    std::size_t grid_points = 256;
    std::string log_base = "2";
};

struct CyclingOpts {
    double alpha = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    double tau_max = 10.0;
    std::size_t resolution = 20001;
    std::string output;
};

ddqpc::Method resolve_method(const std::string& name, double epsilon) {
    if (name == "auto")
        return epsilon == 0.0 ? ddqpc::Method::closed_form : ddqpc::Method::integrated;
    return ddqpc::parse_method(name);
}

ddqpc::SweepResult single_curve_result(const ddqpc::Trajectory& traj,
                                       const std::vector<ddqpc::MeasureSample>& samples,
                                       ddqpc::LogBase base, double step) {
    ddqpc::SweepResult res;
    res.grid.alphas = {traj.params.alpha};
    res.grid.thetas_deg = {traj.params.theta_deg};
    res.grid.phis_deg = {traj.params.phi_deg};
    res.grid.epsilon_norm = traj.params.epsilon_norm;
    res.grid.tau_max = traj.tau.back();
    res.grid.n_samples = traj.tau.size();
    res.grid.method = traj.method;
    res.grid.log_base = base;
    res.grid.step = step;
    res.rows.resize(traj.tau.size());
    for (std::size_t i = 0; i < traj.tau.size(); ++i) {
        res.rows[i].alpha = traj.params.alpha;
        res.rows[i].theta_deg = traj.params.theta_deg;
        res.rows[i].phi_deg = traj.params.phi_deg;
        res.rows[i].state = traj.states[i];
        res.rows[i].measures = samples[i];
    }
    return res;
}

int run_simulate(const SimulateOpts& o) {
    ddqpc::ModelParams params;
    if (o.physical) {
        const ddqpc::PhysicalParams phys{o.t1, o.vd, o.omega0, o.e1, o.e2};
        params = ddqpc::params_from_physical(phys, o.theta, o.phi).model;
    } else {
        params = {o.alpha, o.epsilon, o.theta, o.phi};
    }
    const ddqpc::Method method = resolve_method(o.method, params.epsilon_norm);
    const ddqpc::Trajectory traj =
        method == ddqpc::Method::closed_form
            ? ddqpc::closed_form_trajectory(params, o.tau_max, o.samples)
            : ddqpc::integrate_on_grid(params, ddqpc::uniform_grid(o.tau_max, o.samples), o.step);
    const ddqpc::LogBase base = ddqpc::parse_log_base(o.log_base);
    const std::vector<ddqpc::MeasureSample> samples = ddqpc::measure_trajectory(traj, base);
    const ddqpc::SweepResult res = single_curve_result(traj, samples, base, o.step);
    const std::size_t rows = ddqpc::write_csv(res, o.output);
    std::printf("wrote %zu rows to %s\n", rows, o.output.c_str());
    std::printf("final_entropy = %.12g\n", samples.back().entropy);
    return 0;
}

int run_sweep_cmd(const SweepOpts& o) {
    ddqpc::SweepGrid grid;
    grid.alphas = o.alphas;
    grid.thetas_deg = o.thetas;
    grid.phis_deg = o.phis;
    grid.epsilon_norm = o.epsilon;
    grid.tau_max = o.tau_max;
    grid.n_samples = o.samples;
    grid.method = resolve_method(o.method, o.epsilon);
    grid.log_base = ddqpc::parse_log_base(o.log_base);
    grid.step = o.step;
    const ddqpc::SweepResult result = ddqpc::run_sweep(grid, o.workers);
    const std::size_t rows = ddqpc::write_csv(result, o.output);
    std::printf("wrote %zu rows to %s\n", rows, o.output.c_str());
    if (!o.summary.empty()) {
        ddqpc::write_json_summary(result, o.summary);
        std::printf("wrote summary to %s\n", o.summary.c_str());
    }
    return 0;
}

int run_figures(const FiguresOpts& o) {
    ddqpc::Figure fig;
    try {
        fig = ddqpc::parse_figure(o.name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const ddqpc::SweepGrid grid = ddqpc::figure_preset(fig);
    const ddqpc::SweepResult result = ddqpc::run_sweep(grid, o.workers);
    const std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    const std::string csv_path = (dir / (o.name + ".csv")).string();
    const std::string json_path = (dir / (o.name + "_summary.json")).string();
    const std::size_t rows = ddqpc::write_csv(result, csv_path);
    nlohmann::ordered_json j = ddqpc::summary_json(result);
    j["figure"] = o.name;
    j["primary_output"] = ddqpc::figure_primary_measure(fig);
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + json_path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + json_path);
    std::printf("wrote %zu rows to %s\n", rows, csv_path.c_str());
    std::printf("wrote summary to %s\n", json_path.c_str());
    return 0;
}

int run_optimize(const OptimizeOpts& o) {
    if (!(o.alpha_hi > o.alpha_lo))
        throw UsageError("--alpha-max must exceed --alpha-min");
    const ddqpc::LogBase base = ddqpc::parse_log_base(o.log_base);
    const ddqpc::OptimalCoupling oc = ddqpc::optimal_coupling(
        o.theta, o.phi, o.tau, o.alpha_lo, o.alpha_hi, o.grid_points, base);
    const ddqpc::ModelParams ref{5.0, 0.0, o.theta, o.phi};
    const double s_ref =
        ddqpc::entropy_of_entanglement(ddqpc::closed_form_state(ref, o.tau), base);
    std::printf("alpha_star = %.6f\n", oc.alpha_star);
    std::printf("entropy_star = %.9f\n", oc.entropy_star);
    std::printf("entropy_at_5 = %.9f\n", s_ref);
    std::printf("ratio_5_to_star = %.6f\n", s_ref / oc.entropy_star);
    if (oc.boundary) std::printf("note: maximum pinned to the search boundary\n");
    return 0;
}

int run_cycling(const CyclingOpts& o) {
    ddqpc::CyclingReport rep;
    try {
        rep = ddqpc::detect_cycling(o.alpha, o.theta, o.phi, o.tau_max, o.resolution);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    nlohmann::ordered_json j;
    j["alpha"] = rep.alpha;
    j["branch"] = ddqpc::to_string(rep.branch);
    j["zero_count"] = rep.zero_times.size();
    j["zero_times"] = rep.zero_times;
    if (rep.period_estimate) j["period_estimate"] = *rep.period_estimate;
    else j["period_estimate"] = nullptr;
    const std::string text = j.dump(2);
    if (o.output.empty()) {
        std::printf("%s\n", text.c_str());
    } else {
        std::ofstream out(o.output, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + o.output);
        out << text << '\n';
        if (!out) throw std::runtime_error("write failed for " + o.output);
        std::printf("wrote report to %s\n", o.output.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement dynamics of a double-dot charge qubit measured by a "
                 "point-contact detector"};
    app.require_subcommand(1);

    SimulateOpts sim;
    CLI::App* c_sim = app.add_subcommand(
        "simulate", "Evolve one initial state and write every measure along the trajectory");
    CLI::Option* o_alpha =
        c_sim->add_option("--alpha", sim.alpha, "Dephasing over tunneling, Gamma_d / Omega0")
            ->check(CLI::NonNegativeNumber);
    CLI::Option* o_t1 = c_sim->add_option("--t1", sim.t1, "Detector transmission, near site")
                            ->check(CLI::Range(0.0, 1.0));
    CLI::Option* o_vd = c_sim->add_option("--vd", sim.vd, "Detector source-drain bias")
                            ->check(CLI::NonNegativeNumber);
    CLI::Option* o_w0 = c_sim->add_option("--omega0", sim.omega0, "Interdot tunneling amplitude")
                            ->check(CLI::PositiveNumber);
    CLI::Option* o_e1 = c_sim->add_option("--e1", sim.e1, "Site 1 energy");
    CLI::Option* o_e2 = c_sim->add_option("--e2", sim.e2, "Site 2 energy");
    c_sim->add_option("--theta", sim.theta, "Initial polar angle, degrees");
    c_sim->add_option("--phi", sim.phi, "Initial azimuthal angle, degrees");
    CLI::Option* o_eps =
        c_sim->add_option("--epsilon", sim.epsilon, "Level asymmetry over tunneling");
    c_sim->add_option("--tau-max", sim.tau_max, "End of the time window, units of 1/Omega0")
        ->check(CLI::PositiveNumber);
    c_sim->add_option("--samples", sim.samples, "Points on the uniform output grid");
    c_sim->add_option("--step", sim.step, "Integrator substep")->check(CLI::PositiveNumber);
    c_sim->add_option("--method", sim.method, "auto, closed-form or integrated")
        ->check(CLI::IsMember({"auto", "closed-form", "integrated"}));
    c_sim->add_option("--log-base", sim.log_base, "Entropy unit: 2 for bits, e for nats")
        ->check(CLI::IsMember({"2", "e"}));
    c_sim->add_option("--output", sim.output, "CSV path");
    for (CLI::Option* phys_opt : {o_t1, o_vd, o_w0, o_e1, o_e2}) {
        o_alpha->excludes(phys_opt);
        o_eps->excludes(phys_opt);
    }

    SweepOpts swp;
    CLI::App* c_swp = app.add_subcommand(
        "sweep", "Run a grid of couplings and initial angles, write one CSV block per curve");
    c_swp->add_option("--alphas", swp.alphas, "Couplings, comma separated")
        ->required()
        ->delimiter(',')
        ->check(CLI::NonNegativeNumber);
    c_swp->add_option("--thetas", swp.thetas, "Polar angles, degrees")->delimiter(',');
    c_swp->add_option("--phis", swp.phis, "Azimuthal angles, degrees")->delimiter(',');
    c_swp->add_option("--epsilon", swp.epsilon, "Level asymmetry over tunneling");
    c_swp->add_option("--tau-max", swp.tau_max, "End of the time window")
        ->check(CLI::PositiveNumber);
    c_swp->add_option("--samples", swp.samples, "Points per curve");
    c_swp->add_option("--step", swp.step, "Integrator substep")->check(CLI::PositiveNumber);
    c_swp->add_option("--method", swp.method, "auto, closed-form or integrated")
        ->check(CLI::IsMember({"auto", "closed-form", "integrated"}));
    c_swp->add_option("--log-base", swp.log_base, "Entropy unit: 2 for bits, e for nats")
        ->check(CLI::IsMember({"2", "e"}));
    c_swp->add_option("--workers", swp.workers, "Worker threads; the output does not depend on it")
        ->check(CLI::PositiveNumber);
    c_swp->add_option("--output", swp.output, "CSV path");
    c_swp->add_option("--summary", swp.summary, "Optional JSON summary path");

    FiguresOpts fig;
    CLI::App* c_fig = app.add_subcommand(
        "figures", "Regenerate the data behind a published curve set (fig2 through fig6)");
    c_fig->add_option("name", fig.name, "Preset name, fig2 through fig6")->required();
    c_fig->add_option("--out-dir", fig.out_dir, "Output directory, created if missing");
    c_fig->add_option("--workers", fig.workers, "Worker threads")->check(CLI::PositiveNumber);

    OptimizeOpts opt;
    CLI::App* c_opt = app.add_subcommand(
        "optimize", "Find the coupling that maximizes the entropy at a fixed time");
    c_opt->add_option("--theta", opt.theta, "Initial polar angle, degrees")->required();
    c_opt->add_option("--phi", opt.phi, "Initial azimuthal angle, degrees");
    c_opt->add_option("--tau", opt.tau, "Evaluation time")->check(CLI::PositiveNumber);
    c_opt->add_option("--alpha-min", opt.alpha_lo, "Lower edge of the search interval")
        ->check(CLI::PositiveNumber);
    c_opt->add_option("--alpha-max", opt.alpha_hi, "Upper edge of the search interval")
        ->check(CLI::PositiveNumber);
    c_opt->add_option("--grid-points", opt.grid_points, "Coarse scan resolution");
    c_opt->add_option("--log-base", opt.log_base, "Entropy unit: 2 for bits, e for nats")
        ->check(CLI::IsMember({"2", "e"}));

    CyclingOpts cyc;
    CLI::App* c_cyc = app.add_subcommand(
        "cycling", "Locate the exact coherence zeros of a symmetric-dot trajectory");
    c_cyc->add_option("--alpha", cyc.alpha, "Coupling")->required()->check(CLI::NonNegativeNumber);
    c_cyc->add_option("--theta", cyc.theta, "Initial polar angle, degrees");
    c_cyc->add_option("--phi", cyc.phi, "Initial azimuthal angle, degrees");
    c_cyc->add_option("--tau-max", cyc.tau_max, "End of the scan window")
        ->check(CLI::PositiveNumber);
    c_cyc->add_option("--resolution", cyc.resolution, "Scan samples");
    c_cyc->add_option("--output", cyc.output, "Optional JSON path; stdout when omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_sim->parsed()) {
            const bool phys = o_t1->count() || o_vd->count() || o_w0->count() ||
                              o_e1->count() || o_e2->count();
            if (!phys && o_alpha->count() == 0)
                throw UsageError("provide either --alpha or the physical set --t1 --vd --omega0");
            if (phys && !(o_t1->count() && o_vd->count() && o_w0->count()))
                throw UsageError("the physical parameterization needs --t1, --vd and --omega0 together");
            if (sim.samples < 2) throw UsageError("--samples must be at least 2");
            sim.physical = phys;
            return run_simulate(sim);
        }
        if (c_swp->parsed()) {
            if (swp.samples < 2) throw UsageError("--samples must be at least 2");
            return run_sweep_cmd(swp);
        }
        if (c_fig->parsed()) return run_figures(fig);
        if (c_opt->parsed()) {
            if (opt.grid_points < 2) throw UsageError("--grid-points must be at least 2");
            return run_optimize(opt);
        }
        if (c_cyc->parsed()) {
            if (cyc.resolution < 3) throw UsageError("--resolution must be at least 3");
            return run_cycling(cyc);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
