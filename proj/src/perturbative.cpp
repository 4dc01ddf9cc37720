#include "rydcav/perturbative.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "quadrature.hpp"
#include "rydcav/errors.hpp"

namespace rydcav {

namespace {

constexpr double kSingularTol = 1e-14;
constexpr double kSaturationTol = 1e-12;
constexpr long kQuadratureBudget = 1'000'000;
constexpr double kQuadratureRelTol = 1e-10;

double rel_err(cplx lhs, cplx rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
  return std::abs(lhs - rhs) / scale;
}

// D_e + D_r - W^2 / (4 D_e)
cplx dressed_pair_detuning(const SystemParams& p, const Detunings& d) {
  const double w2 = p.omega_cf * p.omega_cf;
  return d.d_e + d.d_r - w2 / (4.0 * d.d_e);
}

}  // namespace

double sphere_radius(double volume) { return std::cbrt(3.0 * volume / (4.0 * std::numbers::pi)); }

double sphere_volume(double radius) { return 4.0 * std::numbers::pi * radius * radius * radius / 3.0; }

FirstOrderState first_order(const SystemParams& p, const Detunings& d) {
  const double w = p.omega_cf;
  const cplx eit = d.d_e - w * w / (4.0 * d.d_r);
  const cplx denom = d.d_c * eit - p.g2N;
  if (std::abs(denom) <= kSingularTol) {
    std::ostringstream msg;
    msg << "first-order denominator D_c(D_e - W^2/4D_r) - g2N = " << denom << " vanishes";
    throw Error(ErrorKind::SingularDenominator, msg.str());
  }
  FirstOrderState fo;
  fo.a1 = p.alpha * eit / denom;
  fo.b1 = p.alpha * p.coupling() / denom;
  fo.c1 = w * fo.b1 / (2.0 * d.d_r);
  return fo;
}

double first_order_residual(const SystemParams& p, const Detunings& d, const FirstOrderState& fo) {
  const double g = p.coupling();
  const double w = p.omega_cf;
  // D_c a = alpha + g b;  D_e b = g a + W/2 c;  D_r c = W/2 b
  return std::max({rel_err(d.d_c * fo.a1, p.alpha + g * fo.b1),
                   rel_err(d.d_e * fo.b1, g * fo.a1 + 0.5 * w * fo.c1),
                   rel_err(d.d_r * fo.c1, 0.5 * w * fo.b1)});
}

cplx bare_kernel(const SystemParams& p, const Detunings& d) {
  const double w2 = p.omega_cf * p.omega_cf;
  const cplx x = dressed_pair_detuning(p, d) * d.d_r - w2 / 4.0;
  if (std::abs(x) <= std::numeric_limits<double>::min()) {
    throw Error(ErrorKind::DegenerateKernel, "pair detuning of the kernel vanishes");
  }
  return 1.0 / x;
}

cplx bubble_volume(const SystemParams& p, const Detunings& d) {
  const double w2 = p.omega_cf * p.omega_cf;
  const cplx inner = 4.0 * (d.d_e + d.d_r) - w2 / d.d_e;
  if (std::abs(inner) < kSingularTol) {
    throw Error(ErrorKind::DegenerateKernel, "inner denominator 4(D_e + D_r) - W^2/D_e vanishes");
  }
  if (p.c6 == 0.0) return 0.0;
  const cplx shifted = d.d_r - w2 / inner;
  if (std::abs(shifted) < kSingularTol) {
    throw Error(ErrorKind::DegenerateKernel, "effective Rydberg detuning D_r - W^2/(...) vanishes");
  }
  constexpr double prefactor = std::numbers::sqrt2 * std::numbers::pi * std::numbers::pi / 3.0;
  return prefactor * std::sqrt(cplx(-p.c6) / shifted);
}

InteractionKernel kernel_analytic(const SystemParams& p, const Detunings& d) {
  InteractionKernel out;
  out.v_b = bubble_volume(p, d);
  out.radius = sphere_radius(p.volume);
  const cplx filling = 1.0 - out.v_b / p.volume;
  if (std::abs(filling) <= kSaturationTol) {
    std::ostringstream msg;
    msg << "blockade volume V_b = " << out.v_b << " um^3 equals the sample volume V = " << p.volume
        << " um^3 (|1 - V_b/V| = " << std::abs(filling) << ")";
    throw Error(ErrorKind::BlockadeSaturation, msg.str());
  }
  out.k = bare_kernel(p, d) * filling;
  out.n_b = out.v_b == cplx(0.0) ? cplx(std::numeric_limits<double>::infinity(), 0.0)
                                 : p.volume / out.v_b;
  return out;
}

QuadratureResult kernel_quadrature_detailed(const SystemParams& p, const Detunings& d, double r_max) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw Error(ErrorKind::Config, "kernel_quadrature needs a finite r_max > 0");
  }
  const cplx k0 = bare_kernel(p, d);
  if (p.c6 == 0.0) return {k0, 0.0, 0};

  const cplx pair = dressed_pair_detuning(p, d);
  const cplx x = 1.0 / k0;
  const cplx q = pair * p.c6 / 2.0;
  // r^2 / (pair (D_r - C6/2r^6) - W^2/4), multiplied through by r^6.
  auto integrand = [&](double r) -> cplx {
    const double r2 = r * r;
    const double r6 = r2 * r2 * r2;
    return r6 * r2 / (x * r6 - q);
  };

  const double r_block = std::pow(std::abs(q / x), 1.0 / 6.0);
  std::vector<double> points{0.0};
  for (double f : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0}) {
    if (f * r_block < r_max) points.push_back(f * r_block);
  }
  points.push_back(r_max);

  auto res = detail::integrate_adaptive(integrand, points, kQuadratureRelTol, 1e-300, kQuadratureBudget);
  const double norm = 3.0 / (r_max * r_max * r_max);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "radial kernel integral did not reach relative tolerance " << kQuadratureRelTol << " within "
        << res.evaluations << " evaluations (error estimate " << res.error * norm << ")";
    throw Error(ErrorKind::QuadratureFailure, msg.str());
  }
  return {res.value * norm, res.error * norm, res.evaluations};
}

cplx kernel_quadrature(const SystemParams& p, const Detunings& d, double r_max) {
  return kernel_quadrature_detailed(p, d, r_max).value;
}

// ---------------------------------------------------------------------------

MomentSystem assemble_common_rows(const SystemParams& p, const Detunings& d, const FirstOrderState& fo) {
  const double g = p.coupling();
  const double w = p.omega_cf;
  const double alpha = p.alpha;
  enum { AA, AB, AC, BB, BC, CC };

  MomentSystem s;
  s.matrix.setZero();
  s.rhs.setZero();

  // <aa> = g/D_c <ab> + alpha/D_c <a>
  s.matrix(0, AA) = 1.0;
  s.matrix(0, AB) = -g / d.d_c;
  s.rhs(0) = alpha / d.d_c * fo.a1;

  // <ab> = W/2(D_c+D_e) <ac> + g/(D_c+D_e) (<aa> + <bb>) + alpha/(D_c+D_e) <b>
  const cplx ce = d.d_c + d.d_e;
  s.matrix(1, AB) = 1.0;
  s.matrix(1, AC) = -w / (2.0 * ce);
  s.matrix(1, AA) = -g / ce;
  s.matrix(1, BB) = -g / ce;
  s.rhs(1) = alpha / ce * fo.b1;

  // <ac> = g/(D_c+D_r) <bc> + alpha/(D_c+D_r) <c> + W/2(D_c+D_r) <ab>
  const cplx cr = d.d_c + d.d_r;
  s.matrix(2, AC) = 1.0;
  s.matrix(2, BC) = -g / cr;
  s.matrix(2, AB) = -w / (2.0 * cr);
  s.rhs(2) = alpha / cr * fo.c1;

  // <bb> = W/2D_e <bc> + g/D_e <ab>
  s.matrix(3, BB) = 1.0;
  s.matrix(3, BC) = -w / (2.0 * d.d_e);
  s.matrix(3, AB) = -g / d.d_e;

  // <bc> = W/2(D_e+D_r) (<cc> + <bb>) + g/(D_e+D_r) <ac>
  const cplx er = d.d_e + d.d_r;
  s.matrix(4, BC) = 1.0;
  s.matrix(4, CC) = -w / (2.0 * er);
  s.matrix(4, AC) = -g / er;
  s.matrix(4, BB) = -w / (2.0 * er);
  return s;
}

MomentSystem assemble_second_order(const SystemParams& p, const Detunings& d,
                                   const FirstOrderState& fo, cplx kernel) {
  MomentSystem s = assemble_common_rows(p, d, fo);
  const double g = p.coupling();
  const double w = p.omega_cf;
  // <cc> = (W g/2) K <ac> + (W^2 g / 4D_e) K <ab>
  s.matrix(5, 5) = 1.0;
  s.matrix(5, 2) = -0.5 * w * g * kernel;
  s.matrix(5, 1) = -w * w * g / (4.0 * d.d_e) * kernel;
  return s;
}

double moment_residual(const MomentSystem& system, const SecondOrderMoments& x) {
  const auto arr = x.as_array();
  const Vector6c v = Eigen::Map<const Vector6c>(arr.data());
  const double scale = system.matrix.cwiseAbs().rowwise().sum().maxCoeff() * v.cwiseAbs().maxCoeff() +
                       system.rhs.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (system.matrix * v - system.rhs).cwiseAbs().maxCoeff() / scale;
}

LinearSolve solve_moment_system(const MomentSystem& system) {
  Eigen::PartialPivLU<Matrix6c> lu(system.matrix);
  const double rcond = lu.rcond();
  const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(condition <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "second-order moment matrix is ill-conditioned (condition estimate " << condition << ")";
    throw IllConditionedError(msg.str(), condition);
  }
  Vector6c x = lu.solve(system.rhs);
  // One step of iterative refinement.
  x += lu.solve(system.rhs - system.matrix * x);

  std::array<cplx, 6> arr;
  for (int i = 0; i < 6; ++i) arr[i] = x(i);
  LinearSolve out{SecondOrderMoments::from_array(arr), condition, 0.0};
  out.relative_residual = moment_residual(system, out.moments);
  return out;
}

SecondOrderMoments second_order(const SystemParams& p, const Detunings& d,
                                const FirstOrderState& fo, const InteractionKernel& kernel) {
  return solve_moment_system(assemble_second_order(p, d, fo, kernel.k)).moments;
}

}  // namespace rydcav
