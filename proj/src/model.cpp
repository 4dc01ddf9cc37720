#include "rydcav/model.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rydcav/errors.hpp"

namespace rydcav {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw Error(ErrorKind::Config,
                "value for '" + std::string(key) + "' is not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::Config, message);
}

}  // namespace

std::string_view to_string(DampingMode mode) {
  return mode == DampingMode::Radiative ? "radiative" : "dephasing";
}

DampingMode damping_mode_from_string(std::string_view name) {
  name = trim(name);
  if (name == "radiative") return DampingMode::Radiative;
  if (name == "dephasing") return DampingMode::Dephasing;
  throw Error(ErrorKind::Config, "unknown damping mode '" + std::string(name) + "'");
}

double SystemParams::coupling() const { return std::sqrt(g2N); }

void SystemParams::validate() const {
  for (double v : {delta_c, delta_e, delta_r, gamma_c_L, gamma_c_R, gamma_e, gamma_r, gamma_d,
                   omega_cf, g2N, alpha, c6, volume}) {
    require(std::isfinite(v), "all parameters must be finite");
  }
  require(gamma_c_L > 0.0, "gamma_c_L must be > 0");
  require(gamma_c_R >= 0.0, "gamma_c_R must be >= 0");
  require(std::abs(gamma_e - 1.0) <= 1e-12, "gamma_e is the unit of all rates and must equal 1");
  require(gamma_r > 0.0, "gamma_r must be > 0");
  require(gamma_d >= 0.0, "gamma_d must be >= 0");
  require(g2N >= 0.0, "g2N must be >= 0");
  require(volume > 0.0, "volume must be > 0");
  require(n_atoms >= 1, "n_atoms must be >= 1");
}

double cooperativity(const SystemParams& p) { return p.g2N / (2.0 * p.gamma_e * p.gamma_c()); }

double g2N_from_cooperativity(double c, double gamma_e, double gamma_c) {
  return 2.0 * c * gamma_e * gamma_c;
}

double rydberg_decay(const SystemParams& p, DampingMode mode) {
  return mode == DampingMode::Radiative ? p.gamma_r : p.gamma_d;
}

bool dephasing_regime_ok(const SystemParams& p) {
  const double n = static_cast<double>(p.n_atoms);
  return kMuchLessFactor * p.gamma_r <= p.gamma_d && kMuchLessFactor * p.gamma_d <= n * p.gamma_r;
}

Detunings effective_detunings(const SystemParams& p, DampingMode mode, Diagnostics* diag) {
  const double gr = rydberg_decay(p, mode);
  if (mode == DampingMode::Dephasing && diag != nullptr && !dephasing_regime_ok(p)) {
    std::ostringstream msg;
    msg << "dephasing substitution outside its validity regime: need gamma_r << gamma_d << N gamma_r"
        << " (gamma_r=" << p.gamma_r << ", gamma_d=" << p.gamma_d << ", N gamma_r="
        << static_cast<double>(p.n_atoms) * p.gamma_r << ")";
    diag->warn(msg.str());
  }
  Detunings d;
  d.d_c = {p.delta_c, p.gamma_c()};
  d.d_e = {p.delta_e, p.gamma_e};
  d.d_r = {p.delta_r, gr};
  d.d_er = {p.delta_r - p.delta_e, gr + p.gamma_e};
  return d;
}

// ---------------------------------------------------------------------------

ConfigMap parse_config_text(std::string_view text) {
  ConfigMap out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": empty key or value");
    }
    out[std::string(key)] = std::string(value);
  }
  return out;
}

ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void apply_override(ConfigMap& config, std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorKind::Config, "override must read key=value, got '" + std::string(assignment) + "'");
  }
  auto key = trim(assignment.substr(0, eq));
  auto value = trim(assignment.substr(eq + 1));
  if (key.empty() || value.empty()) throw Error(ErrorKind::Config, "empty key or value in override");
  config[std::string(key)] = std::string(value);
}

void set_parameter(SystemParams& p, std::string_view name, double value) {
  if (name == "delta_c") p.delta_c = value;
  else if (name == "delta_e") p.delta_e = value;
  else if (name == "delta_r") p.delta_r = value;
  else if (name == "gamma_c_L") p.gamma_c_L = value;
  else if (name == "gamma_c_R") p.gamma_c_R = value;
  else if (name == "gamma_e") p.gamma_e = value;
  else if (name == "gamma_r") p.gamma_r = value;
  else if (name == "gamma_d") p.gamma_d = value;
  else if (name == "omega_cf") p.omega_cf = value;
  else if (name == "g2N") p.g2N = value;
  else if (name == "alpha") p.alpha = value;
  else if (name == "c6") p.c6 = value;
  else if (name == "volume") p.volume = value;
  else if (name == "n_atoms") {
    if (value < 1.0 || value != std::floor(value)) {
      throw Error(ErrorKind::Config, "n_atoms must be a positive integer");
    }
    p.n_atoms = static_cast<long long>(value);
  } else {
    throw Error(ErrorKind::Config, "unknown parameter '" + std::string(name) + "'");
  }
}

double get_parameter(const SystemParams& p, std::string_view name) {
  if (name == "delta_c") return p.delta_c;
  if (name == "delta_e") return p.delta_e;
  if (name == "delta_r") return p.delta_r;
  if (name == "gamma_c_L") return p.gamma_c_L;
  if (name == "gamma_c_R") return p.gamma_c_R;
  if (name == "gamma_e") return p.gamma_e;
  if (name == "gamma_r") return p.gamma_r;
  if (name == "gamma_d") return p.gamma_d;
  if (name == "omega_cf") return p.omega_cf;
  if (name == "g2N") return p.g2N;
  if (name == "alpha") return p.alpha;
  if (name == "c6") return p.c6;
  if (name == "volume") return p.volume;
  if (name == "n_atoms") return static_cast<double>(p.n_atoms);
  throw Error(ErrorKind::Config, "unknown parameter '" + std::string(name) + "'");
}

ModelConfig model_from_config(const ConfigMap& config) {
  ModelConfig out;
  std::optional<double> coop;
  bool have_g2N = false;
  for (const auto& [key, value] : config) {
    if (key == "mode") {
      out.mode = damping_mode_from_string(value);
    } else if (key == "cooperativity") {
      coop = parse_double(key, value);
    } else {
      set_parameter(out.params, key, parse_double(key, value));
      have_g2N = have_g2N || key == "g2N";
    }
  }
  auto& p = out.params;
  if (coop) {
    require(*coop >= 0.0, "cooperativity must be >= 0");
    const double from_c = g2N_from_cooperativity(*coop, p.gamma_e, p.gamma_c());
    if (have_g2N) {
      const double scale = std::max(std::abs(p.g2N), std::abs(from_c));
      require(std::abs(p.g2N - from_c) <= 1e-12 * scale,
              "g2N and cooperativity are inconsistent: g2N must equal 2 C gamma_e gamma_c");
    } else {
      p.g2N = from_c;
    }
  }
  p.validate();
  return out;
}

}  // namespace rydcav
