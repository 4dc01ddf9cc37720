#pragma once

// Lowest-order steady state of the driven cavity + Rydberg-EIT medium:
// first-order amplitudes, the blockade interaction kernel and the closed
// linear system for the six same-time two-operator moments.

#include <array>

#include <Eigen/Dense>

#include "rydcav/model.hpp"

namespace rydcav {

// First-order amplitudes <a>, <b> = sqrt(N)<sigma_ge>, <c> = sqrt(N)<sigma_gr>,
// with b, c the symmetric collective atomic operators.
struct FirstOrderState {
  cplx a1;
  cplx b1;
  cplx c1;
};

struct InteractionKernel {
  cplx k;          // K [gamma_e^-2]
  cplx v_b;        // blockade ("bubble") volume [um^3]
  cplx n_b;        // V / V_b; +inf when V_b == 0
  double radius;   // radius of the equal-volume sphere [um]
};

struct SecondOrderMoments {
  cplx aa;
  cplx ab;
  cplx ac;
  cplx bb;
  cplx bc;
  cplx cc;

  std::array<cplx, 6> as_array() const { return {aa, ab, ac, bb, bc, cc}; }
  static SecondOrderMoments from_array(const std::array<cplx, 6>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }
};

double sphere_radius(double volume);
double sphere_volume(double radius);

FirstOrderState first_order(const SystemParams& p, const Detunings& d);

// Max relative residual of the three first-order steady equations.
double first_order_residual(const SystemParams& p, const Detunings& d, const FirstOrderState& fo);

// Interaction-free kernel 1 / ((D_e + D_r - W^2/4D_e) D_r - W^2/4).
cplx bare_kernel(const SystemParams& p, const Detunings& d);

// Blockade volume, principal square-root branch.
cplx bubble_volume(const SystemParams& p, const Detunings& d);

// Large-sample kernel; uses p.volume.
InteractionKernel kernel_analytic(const SystemParams& p, const Detunings& d);

struct QuadratureResult {
  cplx value;
  double error_estimate;
  long evaluations;
};

// Radial average of the pair kernel over a sphere of radius r_max.
QuadratureResult kernel_quadrature_detailed(const SystemParams& p, const Detunings& d, double r_max);
cplx kernel_quadrature(const SystemParams& p, const Detunings& d, double r_max);

// ---------------------------------------------------------------------------
// Second-order system A x = rhs with x = (aa, ab, ac, bb, bc, cc).

using Matrix6c = Eigen::Matrix<cplx, 6, 6>;
using Vector6c = Eigen::Matrix<cplx, 6, 1>;

struct MomentSystem {
  Matrix6c matrix;
  Vector6c rhs;
};

// Rows 1-5 are shared by the full and the effective three-boson model; they
// differ only in the <cc> row.
MomentSystem assemble_common_rows(const SystemParams& p, const Detunings& d, const FirstOrderState& fo);

// <cc> row closed with the interaction kernel K.
MomentSystem assemble_second_order(const SystemParams& p, const Detunings& d,
                                   const FirstOrderState& fo, cplx kernel);

inline constexpr double kMaxCondition = 1e12;

struct LinearSolve {
  SecondOrderMoments moments;
  double condition;          // 1-norm condition estimate
  double relative_residual;  // |A x - b| / (|A| |x| + |b|)
};

// Dense partial-pivot LU; throws IllConditionedError above kMaxCondition.
LinearSolve solve_moment_system(const MomentSystem& system);

double moment_residual(const MomentSystem& system, const SecondOrderMoments& x);

SecondOrderMoments second_order(const SystemParams& p, const Detunings& d,
                                const FirstOrderState& fo, const InteractionKernel& kernel);

}  // namespace rydcav
