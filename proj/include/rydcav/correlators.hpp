#pragma once

// Photon statistics of the light leaving the cavity, evaluated with the
// lowest-order factorization of normally ordered field moments:
//   <a+a> = |<a>|^2,  <a+a+a> = conj(<aa>) <a>,  <a+a+aa> = |<aa>|^2.

#include <optional>
#include <vector>

#include "rydcav/model.hpp"
#include "rydcav/perturbative.hpp"

namespace rydcav {

// Round-off below this magnitude is clipped to zero in reported observables.
inline constexpr double kNegativeClip = 1e-12;
inline constexpr double kIntensityFloor = 1e-30;

struct ReflectedMoments {
  double i_refl = 0.0;     // normalised by alpha^2 / 2 gamma_c^L
  double pair_refl = 0.0;  // normalised by (alpha^2 / 2 gamma_c^L)^2
  std::optional<double> g2_r_zero;
  double i_refl_raw = 0.0;
  double pair_refl_raw = 0.0;

  // Throws ZeroDenominator when the reflected intensity underflowed.
  double g2() const;
};

struct CorrelationReport {
  double g2_t_zero = 0.0;
  double g2_r_zero = 0.0;  // NaN when the reflected intensity underflows
  double i_trans = 0.0;
  double i_refl = 0.0;
  double pair_refl = 0.0;
  double i_refl_raw = 0.0;
  double pair_refl_raw = 0.0;
};

double transmitted_g2_zero(const FirstOrderState& fo, const SecondOrderMoments& so);

// Transmitted intensity 2 gamma_c^R |<a>|^2, normalised by alpha^2 / 2 gamma_c^L.
double transmitted_intensity(const SystemParams& p, const FirstOrderState& fo);

ReflectedMoments reflected_moments(const SystemParams& p, const FirstOrderState& fo,
                                   const SecondOrderMoments& so);

CorrelationReport correlation_report(const SystemParams& p, const FirstOrderState& fo,
                                     const SecondOrderMoments& so);

// ---------------------------------------------------------------------------

enum class TauMethod { Eigen, Stepper };

struct TauOptions {
  bool force_stepper = false;
  double max_eigvec_condition = 1e8;
  double tolerance = 1e-9;
};

struct TauTrace {
  std::vector<double> tau_grid;
  std::vector<double> g2_tau;
  std::vector<cplx> raw;  // <a(t+tau) a(t)>
  // Reflected g2(tau) through the same input-output combination as at zero
  // delay. Experimental: the lowest-order factorization is assumed to carry
  // over to unequal times.
  std::vector<double> g2_r_tau;
  TauMethod method = TauMethod::Eigen;
};

// Fixed point of the delay equations, <a> (<a>, <b>, <c>).
std::array<cplx, 3> tau_asymptote(const FirstOrderState& fo);

TauTrace g2_tau(const SystemParams& p, const Detunings& d, const FirstOrderState& fo,
                const SecondOrderMoments& so, double tau_max, int n_pts,
                const TauOptions& options = {});

}  // namespace rydcav
