#include "rydcav/correlators.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "rydcav/errors.hpp"

namespace rydcav {

namespace {

using Matrix3c = Eigen::Matrix<cplx, 3, 3>;
using Vector3c = Eigen::Matrix<cplx, 3, 1>;

double clip(double raw) { return raw < 0.0 ? 0.0 : raw; }

double incoming_intensity(const SystemParams& p) {
  const double n = p.alpha * p.alpha / (2.0 * p.gamma_c_L);
  if (!(n > 0.0)) {
    throw Error(ErrorKind::ZeroDenominator, "incoming intensity alpha^2 / 2 gamma_c^L is zero");
  }
  return n;
}

// Normalised reflected amplitude combination for a pair,
// (2 gc <a(t+tau) a(t)> + 2 i alpha <a> - alpha^2 / 2 gc) / (alpha^2 / 2 gc).
cplx reflected_pair_amplitude(const SystemParams& p, cplx a1, cplx pair) {
  const double gl = p.gamma_c_L;
  const double alpha = p.alpha;
  const double n = incoming_intensity(p);
  return (2.0 * gl * pair + 2.0 * cplx(0.0, 1.0) * alpha * a1 - alpha * alpha / (2.0 * gl)) / n;
}

}  // namespace

double ReflectedMoments::g2() const {
  if (!g2_r_zero) {
    throw Error(ErrorKind::ZeroDenominator, "reflected intensity underflows; g2_r(0) undefined");
  }
  return *g2_r_zero;
}

double transmitted_g2_zero(const FirstOrderState& fo, const SecondOrderMoments& so) {
  const double n = std::norm(fo.a1);
  if (!(std::abs(fo.a1) > kIntensityFloor)) {
    std::ostringstream msg;
    msg << "transmitted intensity underflows (|<a>| = " << std::abs(fo.a1) << ")";
    throw Error(ErrorKind::ZeroDenominator, msg.str());
  }
  return std::norm(so.aa) / (n * n);
}

double transmitted_intensity(const SystemParams& p, const FirstOrderState& fo) {
  return 2.0 * p.gamma_c_R * std::norm(fo.a1) / incoming_intensity(p);
}

ReflectedMoments reflected_moments(const SystemParams& p, const FirstOrderState& fo,
                                   const SecondOrderMoments& so) {
  const double gl = p.gamma_c_L;
  const double alpha = p.alpha;
  const double a2 = alpha * alpha;
  const cplx i(0.0, 1.0);
  const cplx a = fo.a1;
  const cplx aa = so.aa;
  const cplx a_dag = std::conj(a);
  const cplx aa_dag = std::conj(aa);

  // <a_out+ a_out> = 2 gc <a+a> + i alpha (<a+> - <a>) + alpha^2 / 2 gc
  const cplx intensity = 2.0 * gl * std::norm(a) + i * alpha * (a_dag - a) + a2 / (2.0 * gl);

  // <a_out+ a_out+ a_out a_out>; the alpha^2 bracket carries -<aa> so that the
  // moment is real (see README, "Reflected pair moment").
  const cplx pair = 4.0 * gl * gl * std::norm(aa) +
                    4.0 * i * alpha * gl * (aa_dag * a - a_dag * aa) +
                    i * alpha * a2 / gl * (a_dag - a) +
                    a2 * (4.0 * std::norm(a) - aa_dag - aa) +
                    a2 * a2 / (4.0 * gl * gl);

  const double n = incoming_intensity(p);
  ReflectedMoments out;
  out.i_refl_raw = intensity.real() / n;
  out.pair_refl_raw = pair.real() / (n * n);
  out.i_refl = clip(out.i_refl_raw);
  out.pair_refl = clip(out.pair_refl_raw);
  if (out.i_refl > kIntensityFloor) out.g2_r_zero = out.pair_refl / (out.i_refl * out.i_refl);
  return out;
}

CorrelationReport correlation_report(const SystemParams& p, const FirstOrderState& fo,
                                     const SecondOrderMoments& so) {
  CorrelationReport r;
  r.g2_t_zero = transmitted_g2_zero(fo, so);
  r.i_trans = transmitted_intensity(p, fo);
  const ReflectedMoments refl = reflected_moments(p, fo, so);
  r.i_refl = refl.i_refl;
  r.pair_refl = refl.pair_refl;
  r.i_refl_raw = refl.i_refl_raw;
  r.pair_refl_raw = refl.pair_refl_raw;
  r.g2_r_zero = refl.g2_r_zero.value_or(std::numeric_limits<double>::quiet_NaN());
  return r;
}

// ---------------------------------------------------------------------------

std::array<cplx, 3> tau_asymptote(const FirstOrderState& fo) {
  return {fo.a1 * fo.a1, fo.a1 * fo.b1, fo.a1 * fo.c1};
}

namespace {

Matrix3c delay_generator(const SystemParams& p, const Detunings& d) {
  const double g = p.coupling();
  const double w = p.omega_cf;
  Matrix3c m;
  m << -d.d_c, g, 0.0,
       g, -d.d_e, 0.5 * w,
       0.0, 0.5 * w, -d.d_r;
  // d/dtau v = -i alpha <a> e1 - i M v
  return cplx(0.0, -1.0) * m;
}

bool eigen_propagate(const Matrix3c& gen, const Vector3c& v0, const Vector3c& v_inf,
                     const std::vector<double>& grid, const TauOptions& opt, std::vector<cplx>& out) {
  Eigen::ComplexEigenSolver<Matrix3c> es(gen);
  if (es.info() != Eigen::Success) return false;
  const Matrix3c w = es.eigenvectors();
  const Vector3c lambda = es.eigenvalues();
  Eigen::JacobiSVD<Matrix3c> svd(w);
  const auto sv = svd.singularValues();
  if (!(sv(2) > 0.0) || sv(0) / sv(2) > opt.max_eigvec_condition) return false;
  const Matrix3c w_inv = w.inverse();
  const Matrix3c rebuilt = w * lambda.asDiagonal() * w_inv;
  if ((rebuilt - gen).norm() > opt.tolerance * gen.norm()) return false;

  const Vector3c coeff = w_inv * (v0 - v_inf);
  out.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    Vector3c e;
    for (int j = 0; j < 3; ++j) e(j) = std::exp(lambda(j) * grid[k]) * coeff(j);
    out[k] = (v_inf + w * e)(0);
  }
  out[0] = v0(0);
  return true;
}

bool stepper_propagate(const Matrix3c& gen, const Vector3c& drive, const Vector3c& v0,
                       const std::vector<double>& grid, const TauOptions& opt, std::vector<cplx>& out) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<cplx, 3>;
  auto rhs = [&](const State& v, State& dv, double) {
    for (int r = 0; r < 3; ++r) {
      cplx acc = drive(r);
      for (int c = 0; c < 3; ++c) acc += gen(r, c) * v[c];
      dv[r] = acc;
    }
  };
  State state{v0(0), v0(1), v0(2)};
  const double scale = std::max(v0.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  out.clear();
  out.reserve(grid.size());
  auto observer = [&](const State& v, double) { out.push_back(v[0]); };
  try {
    auto stepper = odeint::make_dense_output(opt.tolerance * 1e-3 * scale, opt.tolerance * 1e-3,
                                             odeint::runge_kutta_dopri5<State>());
    const double dt0 = grid.size() > 1 ? (grid[1] - grid[0]) * 1e-3 : 1e-3;
    odeint::integrate_times(stepper, rhs, state, grid.begin(), grid.end(), dt0, observer);
  } catch (const std::exception&) {
    return false;
  }
  if (out.size() != grid.size()) return false;
  for (const cplx& z : out) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

}  // namespace

TauTrace g2_tau(const SystemParams& p, const Detunings& d, const FirstOrderState& fo,
                const SecondOrderMoments& so, double tau_max, int n_pts, const TauOptions& options) {
  if (!(tau_max > 0.0) || n_pts < 2) {
    throw Error(ErrorKind::Config, "g2_tau needs tau_max > 0 and at least two grid points");
  }
  const double norm_a = std::norm(fo.a1);
  if (!(std::abs(fo.a1) > kIntensityFloor)) {
    throw Error(ErrorKind::ZeroDenominator, "transmitted intensity underflows; g2(tau) undefined");
  }

  TauTrace trace;
  trace.tau_grid.resize(n_pts);
  for (int k = 0; k < n_pts; ++k) trace.tau_grid[k] = tau_max * k / (n_pts - 1);

  const Matrix3c gen = delay_generator(p, d);
  Vector3c drive(cplx(0.0, -1.0) * p.alpha * fo.a1, 0.0, 0.0);
  const Vector3c v0(so.aa, so.ab, so.ac);
  const Vector3c v_inf = gen.partialPivLu().solve(-drive);

  bool ok = false;
  if (!options.force_stepper) {
    ok = eigen_propagate(gen, v0, v_inf, trace.tau_grid, options, trace.raw);
    trace.method = TauMethod::Eigen;
  }
  if (!ok) {
    ok = stepper_propagate(gen, drive, v0, trace.tau_grid, options, trace.raw);
    trace.method = TauMethod::Stepper;
  }
  if (!ok) {
    throw Error(ErrorKind::DegenerateSpectrum,
                "neither the eigen-decomposition nor the adaptive stepper resolved the delay equations");
  }

  const bool have_refl = p.alpha != 0.0;
  const double i_refl = have_refl ? reflected_moments(p, fo, so).i_refl : 0.0;
  trace.g2_tau.resize(n_pts);
  trace.g2_r_tau.resize(n_pts);
  for (int k = 0; k < n_pts; ++k) {
    trace.g2_tau[k] = std::norm(trace.raw[k]) / (norm_a * norm_a);
    trace.g2_r_tau[k] = i_refl > kIntensityFloor
                            ? std::norm(reflected_pair_amplitude(p, fo.a1, trace.raw[k])) / (i_refl * i_refl)
                            : std::numeric_limits<double>::quiet_NaN();
  }
  return trace;
}

}  // namespace rydcav
