#include "rydcav/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "rydcav/errors.hpp"

namespace rydcav {

namespace {

std::string context(const ModelConfig& c) {
  const SystemParams& p = c.params;
  std::ostringstream s;
  s.precision(9);
  s << " [delta_c=" << p.delta_c << " delta_e=" << p.delta_e << " delta_r=" << p.delta_r
    << " omega_cf=" << p.omega_cf << " g2N=" << p.g2N << " c6=" << p.c6 << " volume=" << p.volume
    << " alpha=" << p.alpha << " mode=" << to_string(c.mode) << "]";
  return s.str();
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

PointResult run_point(const ModelConfig& config) {
  try {
    config.params.validate();
    PointResult r;
    r.params = config.params;
    r.mode = config.mode;
    r.detunings = effective_detunings(r.params, r.mode, &r.diagnostics);
    r.first = first_order(r.params, r.detunings);
    r.kernel = kernel_analytic(r.params, r.detunings);
    const LinearSolve ls =
        solve_moment_system(assemble_second_order(r.params, r.detunings, r.first, r.kernel.k));
    r.second = ls.moments;
    r.condition = ls.condition;
    r.correlations = correlation_report(r.params, r.first, r.second);
    r.effective = effective_kappa(r.params, r.detunings, r.kernel);
    return r;
  } catch (const Error& e) {
    throw Error(e.kind(), e.detail() + context(config));
  }
}

std::string format_point(const PointResult& r) {
  std::ostringstream s;
  s.precision(9);
  auto line = [&](const char* name, auto value) { s << name << " = " << value << '\n'; };
  auto cline = [&](const char* name, cplx z) { s << name << " = " << z.real() << " " << std::showpos << z.imag() << std::noshowpos << "i\n"; };
  line("mode", to_string(r.mode));
  line("cooperativity", cooperativity(r.params));
  cline("a1", r.first.a1);
  cline("b1", r.first.b1);
  cline("c1", r.first.c1);
  cline("V_b", r.kernel.v_b);
  cline("N_b", r.kernel.n_b);
  cline("K", r.kernel.k);
  cline("aa", r.second.aa);
  cline("ab", r.second.ab);
  cline("ac", r.second.ac);
  cline("bb", r.second.bb);
  cline("bc", r.second.bc);
  cline("cc", r.second.cc);
  line("condition", r.condition);
  line("g2_t_0", r.correlations.g2_t_zero);
  line("g2_r_0", r.correlations.g2_r_zero);
  line("i_trans", r.correlations.i_trans);
  line("i_refl", r.correlations.i_refl);
  line("pair_refl", r.correlations.pair_refl);
  line("i_refl_raw", r.correlations.i_refl_raw);
  line("pair_refl_raw", r.correlations.pair_refl_raw);
  cline("kappa", r.effective.kappa);
  line("kappa_r", r.effective.kappa_r);
  line("kappa_i", r.effective.kappa_i);
  return s.str();
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& scan_parameters() {
  static const std::vector<std::string> names{"delta_c", "theta_c", "omega_cf", "delta_e",
                                              "delta_r", "alpha",   "c6"};
  return names;
}

const std::vector<std::string>& scan_observables() {
  static const std::vector<std::string> names{"g2_t_0", "g2_r_0", "i_trans", "i_refl",
                                              "pair_refl", "kappa_r", "kappa_i"};
  return names;
}

void ScanSpec::validate() const {
  const auto& params = scan_parameters();
  if (std::find(params.begin(), params.end(), parameter) == params.end()) {
    throw Error(ErrorKind::Config, "cannot scan parameter '" + parameter + "'");
  }
  if (n_points < 2) throw Error(ErrorKind::Config, "a scan needs at least 2 points");
  if (!std::isfinite(start) || !std::isfinite(stop) || start == stop) {
    throw Error(ErrorKind::Config, "scan start and stop must be finite and distinct");
  }
  if (observables.empty()) throw Error(ErrorKind::Config, "no observables requested");
  const auto& obs = scan_observables();
  for (const auto& o : observables) {
    if (std::find(obs.begin(), obs.end(), o) == obs.end()) {
      throw Error(ErrorKind::Config, "unknown observable '" + o + "'");
    }
  }
}

double ScanSpec::value_at(int index) const {
  if (index == n_points - 1) return stop;
  return start + (stop - start) * index / (n_points - 1);
}

double observable_value(const PointResult& r, const std::string& name) {
  const CorrelationReport& c = r.correlations;
  if (name == "g2_t_0") return c.g2_t_zero;
  if (name == "g2_r_0") return c.g2_r_zero;
  if (name == "i_trans") return c.i_trans;
  if (name == "i_refl") return c.i_refl;
  if (name == "pair_refl") return c.pair_refl;
  if (name == "kappa_r") return r.effective.kappa_r;
  if (name == "kappa_i") return r.effective.kappa_i;
  throw Error(ErrorKind::Config, "unknown observable '" + name + "'");
}

std::vector<ScanRow> compute_scan(const ModelConfig& config, const ScanSpec& spec, int threads) {
  spec.validate();
  config.params.validate();

  double offset = 0.0;
  std::string param = spec.parameter;
  if (param == "theta_c") {
    offset = find_linear_optimum(config).delta_c0;
    param = "delta_c";
  }

  std::vector<ScanRow> rows(spec.n_points);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < spec.n_points; i = next++) {
      ScanRow& row = rows[i];
      row.value = spec.value_at(i);
      ModelConfig local = config;
      try {
        set_parameter(local.params, param, offset + row.value);
        const PointResult r = run_point(local);
        for (const auto& o : spec.observables) row.observables.push_back(observable_value(r, o));
      } catch (const std::exception& e) {
        row.observables.assign(spec.observables.size(), kNan);
        row.error = e.what();
      }
    }
  };

  int n_threads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::clamp(n_threads, 1, spec.n_points);
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

std::string format_csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

int run_scan(const ModelConfig& config, const ScanSpec& spec, std::ostream& out, std::ostream& err,
             int threads) {
  const std::vector<ScanRow> rows = compute_scan(config, spec, threads);
  out << spec.parameter;
  for (const auto& o : spec.observables) out << ',' << o;
  out << '\n';
  int failures = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << format_csv_number(rows[i].value);
    for (double v : rows[i].observables) out << ',' << format_csv_number(v);
    out << '\n';
    if (!rows[i].error.empty()) {
      ++failures;
      err << "point " << i << " (" << spec.parameter << " = " << format_csv_number(rows[i].value)
          << "): " << rows[i].error << '\n';
    }
  }
  return failures;
}

// ---------------------------------------------------------------------------

TauTrace run_tau(const ModelConfig& config, double tau_max, int n_pts, std::ostream& out,
                 const TauRunOptions& options) {
  const PointResult r = run_point(config);
  TauTrace trace;
  try {
    trace = g2_tau(r.params, r.detunings, r.first, r.second, tau_max, n_pts, options.solver);
  } catch (const Error& e) {
    throw Error(e.kind(), e.detail() + context(config));
  }
  out << "tau,g2_tau,re_aa_tau,im_aa_tau";
  if (options.reflected) out << ",g2_r_tau";
  out << '\n';
  for (std::size_t k = 0; k < trace.tau_grid.size(); ++k) {
    out << format_csv_number(trace.tau_grid[k]) << ',' << format_csv_number(trace.g2_tau[k]) << ','
        << format_csv_number(trace.raw[k].real()) << ',' << format_csv_number(trace.raw[k].imag());
    if (options.reflected) out << ',' << format_csv_number(trace.g2_r_tau[k]);
    out << '\n';
  }
  return trace;
}

// ---------------------------------------------------------------------------

LinearOptimum find_linear_optimum(const ModelConfig& config, int grid_points, double half_width) {
  config.params.validate();
  if (grid_points < 3) throw Error(ErrorKind::Config, "optimum grid needs at least 3 points");
  SystemParams p = config.params;
  LinearOptimum out;

  auto intensity = [&](double delta_c) {
    p.delta_c = delta_c;
    ++out.evaluations;
    const Detunings d = effective_detunings(p, config.mode);
    return std::norm(first_order(p, d).a1);
  };

  // The pulled resonance Re(g2N / (D_e - W^2/4D_r)) is bounded by g2N / gamma_e,
  // so this window always contains it; the edges guard against degenerate input.
  out.window = half_width > 0.0 ? half_width : 20.0 * (1.0 + p.gamma_c()) + p.g2N / p.gamma_e;
  const double lo = -out.window;
  const double hi = out.window;
  const double step = (hi - lo) / (grid_points - 1);
  int best = 0;
  double best_val = -1.0;
  for (int i = 0; i < grid_points; ++i) {
    const double v = intensity(lo + step * i);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  if (best == 0 || best == grid_points - 1) {
    std::ostringstream msg;
    msg << "|<a>|^2 is largest at the edge of the searched window delta_c = " << (lo + step * best);
    throw Error(ErrorKind::NoInteriorMaximum, msg.str());
  }

  // golden section on the bracketing grid cells
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo + step * (best - 1);
  double b = lo + step * (best + 1);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = intensity(x1);
  double f2 = intensity(x2);
  while (b - a > 1e-9 * std::max(1.0, std::abs(a))) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = intensity(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = intensity(x2);
    }
  }
  out.delta_c0 = 0.5 * (a + b);
  out.peak = intensity(out.delta_c0);
  return out;
}

}  // namespace rydcav
