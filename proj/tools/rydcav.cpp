// Command-line front end: point, scan, tau, optimum, oracle-check.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "rydcav/errors.hpp"
#include "rydcav/lindblad.hpp"
#include "rydcav/scan.hpp"

using namespace rydcav;

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::string mode;
  std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config,-c", args.config, "key = value config file");
  cmd->add_option("--set,-s", args.overrides, "override a parameter, key=value (repeatable)");
  cmd->add_option("--mode", args.mode, "radiative | dephasing");
  cmd->add_option("--out,-o", args.out, "write output to FILE instead of stdout");
}

ModelConfig load(const CommonArgs& args) {
  ConfigMap map;
  if (!args.config.empty()) map = load_config_file(args.config);
  for (const auto& o : args.overrides) apply_override(map, o);
  if (!args.mode.empty()) map["mode"] = args.mode;
  ModelConfig cfg = model_from_config(map);
  cfg.params.validate();
  return cfg;
}

// Stdout or a file, chosen at run time.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorKind::Config, "cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void print_warnings(const Diagnostics& d) {
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon statistics of a Rydberg-EIT cavity"};
  app.require_subcommand(1);

  CommonArgs point_args, scan_args, tau_args, opt_args, oracle_args;

  CLI::App* point = app.add_subcommand("point", "evaluate a single parameter point");
  add_common(point, point_args);

  CLI::App* scan = app.add_subcommand("scan", "1-D parameter sweep to CSV");
  add_common(scan, scan_args);
  ScanSpec spec;
  int threads = 0;
  scan->add_option("--param,-p", spec.parameter, "delta_c | theta_c | omega_cf | delta_e | delta_r | alpha | c6")
      ->required();
  scan->add_option("--start", spec.start)->required();
  scan->add_option("--stop", spec.stop)->required();
  scan->add_option("--points,-n", spec.n_points)->required();
  scan->add_option("--observables,-O", spec.observables, "g2_t_0 g2_r_0 i_trans i_refl pair_refl kappa_r kappa_i")
      ->delimiter(',')
      ->required();
  scan->add_option("--threads,-j", threads, "worker threads (0 = all cores)");

  CLI::App* tau = app.add_subcommand("tau", "delay-resolved g2(tau) trace to CSV");
  add_common(tau, tau_args);
  double tau_max = 50.0;
  int tau_points = 201;
  TauRunOptions tau_opts;
  tau->add_option("--tau-max", tau_max, "largest delay [1/gamma_e]");
  tau->add_option("--points,-n", tau_points);
  tau->add_flag("--stepper", tau_opts.solver.force_stepper, "use the adaptive ODE stepper");
  tau->add_flag("--reflected", tau_opts.reflected, "add the experimental reflected g2(tau) column");

  CLI::App* opt = app.add_subcommand("optimum", "cavity detuning maximising the linear photon number");
  add_common(opt, opt_args);

  CLI::App* oracle = app.add_subcommand("oracle-check", "compare against the truncated master equation");
  add_common(oracle, oracle_args);
  std::vector<int> dims{4, 4, 4};
  int atoms = 0;
  double pair_shift = 0.0;
  int cavity_levels = 5;
  oracle->add_option("--dims", dims, "three-boson truncation, e.g. 4,4,4")->delimiter(',')->expected(3);
  oracle->add_option("--factorization", atoms, "run the few-atom factorization check with N atoms (1-3)");
  oracle->add_option("--pair-shift", pair_shift, "Rydberg pair shift for the few-atom check");
  oracle->add_option("--cavity-levels", cavity_levels, "cavity truncation for the few-atom check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*point) {
      const ModelConfig cfg = load(point_args);
      const PointResult r = run_point(cfg);
      print_warnings(r.diagnostics);
      Output out(point_args.out);
      out.stream() << format_point(r);
    } else if (*scan) {
      const ModelConfig cfg = load(scan_args);
      Diagnostics diag;
      effective_detunings(cfg.params, cfg.mode, &diag);
      print_warnings(diag);
      Output out(scan_args.out);
      run_scan(cfg, spec, out.stream(), std::cerr, threads);
    } else if (*tau) {
      const ModelConfig cfg = load(tau_args);
      Output out(tau_args.out);
      const TauTrace t = run_tau(cfg, tau_max, tau_points, out.stream(), tau_opts);
      std::cerr << "tau solver: " << (t.method == TauMethod::Eigen ? "eigen" : "stepper") << '\n';
    } else if (*opt) {
      const ModelConfig cfg = load(opt_args);
      const LinearOptimum o = find_linear_optimum(cfg);
      Output out(opt_args.out);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.9g", o.delta_c0);
      out.stream() << "delta_c0 = " << buf << '\n';
      std::snprintf(buf, sizeof buf, "%.9g", o.peak);
      out.stream() << "peak_intensity = " << buf << '\n';
    } else if (*oracle) {
      const ModelConfig cfg = load(oracle_args);
      Output out(oracle_args.out);
      std::ostream& os = out.stream();
      os.precision(9);
      if (atoms > 0) {
        FactorizationOptions fo;
        fo.n_atoms = atoms;
        fo.pair_shift = pair_shift;
        fo.cavity_levels = cavity_levels;
        const FactorizationReport rep = factorization_check(cfg.params, fo);
        print_warnings(rep.diagnostics);
        os << "alpha,intensity_defect,pair_defect\n";
        for (const auto& pt : rep.points) {
          os << format_csv_number(pt.alpha) << ',' << format_csv_number(pt.intensity_defect) << ','
             << format_csv_number(pt.pair_defect) << '\n';
        }
        os << "intensity_slope = " << rep.intensity_slope << " (expected 4)\n";
        os << "pair_slope = " << rep.pair_slope << " (expected 6)\n";
        const bool ok = std::abs(rep.intensity_slope - 4.0) <= 0.3 && std::abs(rep.pair_slope - 6.0) <= 0.3;
        return ok ? 0 : 3;
      }
      const PointResult r = run_point(cfg);
      print_warnings(r.diagnostics);
      const OracleReport o =
          three_boson_oracle(r.params, r.detunings, r.effective.kappa, {dims[0], dims[1], dims[2]});
      const double e_a = rel(o.mean_a, r.first.a1);
      const double e_aa = rel(o.mean_aa, r.second.aa);
      const double e_g2 = std::abs(o.g2_zero - r.correlations.g2_t_zero) / r.correlations.g2_t_zero;
      os << "dims = " << o.dims[0] << "," << o.dims[1] << "," << o.dims[2] << '\n';
      os << "truncation_error = " << o.truncation_error << (o.reliable ? "" : " (unreliable)") << '\n';
      os << "residual = " << o.state.residual << (o.state.direct_fallback ? " (direct LU fallback)" : "")
         << ", gmres iterations " << o.state.iterations << '\n';
      os << "a: oracle " << o.mean_a << " perturbative " << r.first.a1 << " rel " << e_a << '\n';
      os << "aa: oracle " << o.mean_aa << " perturbative " << r.second.aa << " rel " << e_aa << '\n';
      os << "g2_t_0: oracle " << o.g2_zero << " perturbative " << r.correlations.g2_t_zero << " rel " << e_g2
         << '\n';
      const bool ok = e_a <= 1e-2 && e_aa <= 1e-2 && e_g2 <= 1e-2;
      os << (ok ? "agreement within 1e-2" : "DISAGREEMENT above 1e-2") << '\n';
      return ok ? 0 : 3;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
