#pragma once

// Physical parameter model of a driven cavity filled with a ladder-type
// (ground / intermediate / Rydberg) atomic ensemble. Every rate, detuning and
// frequency is expressed in units of the intermediate-state decay rate
// gamma_e, which is therefore fixed to 1. Lengths are in micrometres.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rydcav {

using cplx = std::complex<double>;

enum class DampingMode {
  Radiative,  // Rydberg coherence decays at gamma_r
  Dephasing,  // gamma_r replaced by the technical dephasing rate gamma_d
};

std::string_view to_string(DampingMode mode);
DampingMode damping_mode_from_string(std::string_view name);

struct SystemParams {
  double delta_c = 0.0;
  double delta_e = 0.0;
  double delta_r = 0.0;
  double gamma_c_L = 0.3;
  double gamma_c_R = 0.0;
  double gamma_e = 1.0;
  double gamma_r = 0.01;
  double gamma_d = 0.0;
  double omega_cf = 0.0;
  double g2N = 0.0;       // collective coupling g^2 N
  double alpha = 0.01;    // cavity feeding rate
  double c6 = 0.0;        // van der Waals coefficient [gamma_e um^6]
  double volume = 1.0e4;  // sample volume [um^3]
  long long n_atoms = 10000;

  double gamma_c() const { return gamma_c_L + gamma_c_R; }
  // Collective single-photon coupling g sqrt(N).
  double coupling() const;

  // Throws Error(Config) when an invariant is violated.
  void validate() const;
};

// Complex effective detunings D_k = Delta_k + i gamma_k.
struct Detunings {
  cplx d_c;
  cplx d_e;
  cplx d_r;
  cplx d_er;
};

struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  bool empty() const { return warnings.empty(); }
};

double cooperativity(const SystemParams& p);
double g2N_from_cooperativity(double cooperativity, double gamma_e, double gamma_c);

// "Much less than" margin used by the dephasing regime check.
inline constexpr double kMuchLessFactor = 5.0;

// Rydberg coherence decay rate in force for the given mode.
double rydberg_decay(const SystemParams& p, DampingMode mode);

// True when gamma_r << gamma_d << N gamma_r with a factor-5 margin each side.
bool dephasing_regime_ok(const SystemParams& p);

Detunings effective_detunings(const SystemParams& p, DampingMode mode,
                              Diagnostics* diag = nullptr);

// ---------------------------------------------------------------------------
// Config files: one `key = value` per line, `#` starts a comment. Keys are the
// SystemParams field names plus `cooperativity` (alternative to g2N) and
// `mode` (radiative | dephasing).

struct ModelConfig {
  SystemParams params;
  DampingMode mode = DampingMode::Radiative;
};

using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(std::string_view text);
ConfigMap load_config_file(const std::string& path);

// Applies `key=value` on top of an existing map.
void apply_override(ConfigMap& config, std::string_view assignment);

ModelConfig model_from_config(const ConfigMap& config);

// Sets a single named parameter. Unknown names raise Error(Config).
void set_parameter(SystemParams& p, std::string_view name, double value);
double get_parameter(const SystemParams& p, std::string_view name);

}  // namespace rydcav
