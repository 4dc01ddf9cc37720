#pragma once

// End-to-end pipeline used by the command-line tool: single points, 1-D
// sweeps, delay traces and the linear-response cavity optimum.

#include <iosfwd>
#include <string>
#include <vector>

#include "rydcav/correlators.hpp"
#include "rydcav/effective.hpp"
#include "rydcav/model.hpp"
#include "rydcav/perturbative.hpp"

namespace rydcav {

struct PointResult {
  SystemParams params;
  DampingMode mode = DampingMode::Radiative;
  Detunings detunings;
  FirstOrderState first;
  InteractionKernel kernel;
  SecondOrderMoments second;
  double condition = 0.0;
  CorrelationReport correlations;
  EffectiveNonlinearity effective;
  Diagnostics diagnostics;
};

// Errors are re-raised with the offending parameter values appended.
PointResult run_point(const ModelConfig& config);

// Human-readable summary, 9 significant digits.
std::string format_point(const PointResult& r);

// ---------------------------------------------------------------------------

const std::vector<std::string>& scan_parameters();
const std::vector<std::string>& scan_observables();

struct ScanSpec {
  std::string parameter;  // delta_c, theta_c, omega_cf, delta_e, delta_r, alpha, c6
  double start = 0.0;
  double stop = 0.0;
  int n_points = 0;
  std::vector<std::string> observables;

  void validate() const;  // throws Error(Config)
  double value_at(int index) const;
};

double observable_value(const PointResult& r, const std::string& name);

struct ScanRow {
  double value = 0.0;
  std::vector<double> observables;  // NaN on failure
  std::string error;                // empty on success
};

// Evaluates every point; `threads` <= 0 picks the hardware concurrency.
// Rows come back in scan order regardless of scheduling.
std::vector<ScanRow> compute_scan(const ModelConfig& config, const ScanSpec& spec, int threads = 0);

// Writes the CSV to `out` and one diagnostic line per failed point to `err`.
// Returns the number of failed points.
int run_scan(const ModelConfig& config, const ScanSpec& spec, std::ostream& out, std::ostream& err,
             int threads = 0);

std::string format_csv_number(double v);

// ---------------------------------------------------------------------------

struct TauRunOptions {
  TauOptions solver;
  bool reflected = false;  // adds the experimental reflected g2(tau) column
};

TauTrace run_tau(const ModelConfig& config, double tau_max, int n_pts, std::ostream& out,
                 const TauRunOptions& options = {});

// ---------------------------------------------------------------------------

struct LinearOptimum {
  double delta_c0 = 0.0;
  double peak = 0.0;        // |<a>|^2 at the optimum
  double window = 0.0;      // half-width of the searched interval
  int evaluations = 0;
};

// Maximises |<a>|^2 over delta_c: coarse grid, then golden section to 1e-4
// or better. Throws NoInteriorMaximum if the grid maximum sits on the edge.
// half_width <= 0 picks a window that always contains the pulled resonance.
LinearOptimum find_linear_optimum(const ModelConfig& config, int grid_points = 2001, double half_width = 0.0);

}  // namespace rydcav
