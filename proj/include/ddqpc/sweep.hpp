#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ddqpc/measures.hpp"

namespace ddqpc {

struct SweepGrid {
    std::vector<double> alphas;
    std::vector<double> thetas_deg{0.0};
    std::vector<double> phis_deg{0.0};
    double epsilon_norm = 0.0;
    double tau_max = 10.0;
    std::size_t n_samples = 1000;
    Method method = Method::closed_form;
    LogBase log_base = LogBase::base2;
    double step = kDefaultStep; // integrator substep, unused by closed form
};

struct SweepRow {
    double alpha = 0.0;
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    QubitState state;
    MeasureSample measures;
};

struct CellFailure {
    double alpha = 0.0;
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    std::string message;
};

/// Raised after a sweep finishes when one or more cells failed; the
/// remaining cells are not reported, only the failures.
class SweepError : public std::runtime_error {
  public:
    SweepError(std::string what, std::vector<CellFailure> failures);
    const std::vector<CellFailure>& failures() const { return failures_; }

  private:
    std::vector<CellFailure> failures_;
};

struct SweepResult {
    SweepGrid grid;
    /// Lexicographic in (alpha, theta, phi, tau); one block of n_samples rows
    /// per curve.
    std::vector<SweepRow> rows;
};

/// Runs every (alpha, theta, phi) curve of the grid. The worker count only
/// changes the wall time: rows are written into preassigned slots, so the
/// result is bit-identical for any worker count. Per-cell failures are
/// collected and thrown together as a SweepError once all cells finish.
SweepResult run_sweep(const SweepGrid& grid, std::size_t workers = 1);

/// Scientific notation with 12 significant digits; infinities map to the
/// bare tokens "inf" / "-inf".
std::string format_number(double v);

inline constexpr const char* kCsvHeader =
    "alpha,theta_deg,phi_deg,tau,sigma11,sigma22,re_sigma12,im_sigma12,"
    "lambda_plus,entropy,rate,coherence";

/// Writes the rows as CSV with the fixed header, LF line endings. Returns the
/// number of data rows written. Throws std::runtime_error on I/O failure.
std::size_t write_csv(const SweepResult& result, const std::string& path);

nlohmann::ordered_json grid_to_json(const SweepGrid& grid);
SweepGrid grid_from_json(const nlohmann::ordered_json& j);

/// Per-curve summary: final entropy, largest finite rate, and the number of
/// coherence zeros in (0, tau_max). Zero counting is exact (golden-section
/// refined) for symmetric-dot curves and parabolic-interpolation based
/// otherwise. The grid echo round-trips through grid_from_json exactly.
nlohmann::ordered_json summary_json(const SweepResult& result);

nlohmann::ordered_json write_json_summary(const SweepResult& result,
                                          const std::string& path);

enum class Figure { fig2, fig3, fig4, fig5, fig6 };

Figure parse_figure(const std::string& name);
std::string to_string(Figure f);

/// The sweep behind each published curve set: symmetric-dot trajectories on
/// tau in [0, 10], 1000 samples, phi = 0.
SweepGrid figure_preset(Figure f);

/// Which column carries the headline content of the preset: "coherence" for
/// the coherence-decay studies, "entropy" for the rest.
std::string figure_primary_measure(Figure f);

} // namespace ddqpc
