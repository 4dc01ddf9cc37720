#include "rydcav/effective.hpp"

#include <cmath>
#include <sstream>

#include "rydcav/errors.hpp"

namespace rydcav {

EffectiveNonlinearity effective_kappa(const SystemParams& p, const Detunings& d,
                                      const InteractionKernel& kernel) {
  const double w2 = p.omega_cf * p.omega_cf;
  const cplx gap = p.volume - kernel.v_b;
  if (std::abs(gap) <= 1e-12 * std::abs(p.volume)) {
    std::ostringstream msg;
    msg << "blockade volume V_b = " << kernel.v_b << " um^3 equals the sample volume V = " << p.volume
        << " um^3; kappa diverges";
    throw Error(ErrorKind::BlockadeSaturation, msg.str());
  }
  const cplx pair = d.d_r + d.d_e - w2 / (4.0 * d.d_e);

  EffectiveNonlinearity out;
  out.kappa = 2.0 * (kernel.v_b / gap) * (w2 / (4.0 * pair) - d.d_r);
  out.kappa_r = out.kappa.real();
  out.kappa_i = -out.kappa.imag();
  out.k_reconstructed = 1.0 / ((d.d_r - 0.5 * out.kappa) * pair - 0.25 * w2);
  return out;
}

EffectiveNonlinearity effective_kappa(const SystemParams& p, const Detunings& d) {
  return effective_kappa(p, d, kernel_analytic(p, d));
}

MomentSystem assemble_effective_second_order(const SystemParams& p, const Detunings& d,
                                             const FirstOrderState& fo, cplx kappa) {
  MomentSystem s = assemble_common_rows(p, d, fo);
  const cplx shifted = d.d_r - 0.5 * kappa;
  if (std::abs(shifted) <= 1e-300) {
    throw Error(ErrorKind::SingularDenominator, "D_r - kappa/2 vanishes in the <cc> row");
  }
  s.matrix(5, 5) = 1.0;
  s.matrix(5, 4) = -p.omega_cf / (2.0 * shifted);
  return s;
}

SecondOrderMoments effective_second_order(const SystemParams& p, const Detunings& d, cplx kappa) {
  const FirstOrderState fo = first_order(p, d);
  return solve_moment_system(assemble_effective_second_order(p, d, fo, kappa)).moments;
}

}  // namespace rydcav
