#pragma once

// Effective three-boson description: the Rydberg mode c carries a Kerr-type
// nonlinearity (kappa_r / 2) c+c+cc and two-quanta absorption at rate kappa_i.
// kappa is chosen so that the moment equations coincide with the kernel
// closure of the perturbative solver.

#include "rydcav/model.hpp"
#include "rydcav/perturbative.hpp"

namespace rydcav {

struct EffectiveNonlinearity {
  cplx kappa;        // kappa_r - i kappa_i  [gamma_e]
  double kappa_r = 0.0;
  double kappa_i = 0.0;
  cplx k_reconstructed;  // 1 / ((D_r - kappa/2)(D_r + D_e - W^2/4D_e) - W^2/4)
};

EffectiveNonlinearity effective_kappa(const SystemParams& p, const Detunings& d,
                                      const InteractionKernel& kernel);

// Convenience: kappa from a fresh analytic kernel.
EffectiveNonlinearity effective_kappa(const SystemParams& p, const Detunings& d);

// Six-moment system with the <cc> row <cc> = W / (2 (D_r - kappa/2)) <bc>.
MomentSystem assemble_effective_second_order(const SystemParams& p, const Detunings& d,
                                             const FirstOrderState& fo, cplx kappa);

SecondOrderMoments effective_second_order(const SystemParams& p, const Detunings& d, cplx kappa);

}  // namespace rydcav
