#pragma once

// Parameter sets and random generators shared by unit and acceptance tests.

#include <cmath>
#include <numbers>
#include <random>

#include "rydcav/model.hpp"
#include "rydcav/perturbative.hpp"

namespace fixtures {

using rydcav::DampingMode;
using rydcav::ModelConfig;
using rydcav::SystemParams;

// 87Rb dispersive case: gamma_c = 1/3, C = 1000, 40 pi 15^2 um^3.
inline ModelConfig dispersive(DampingMode mode = DampingMode::Dephasing) {
  ModelConfig c;
  SystemParams& p = c.params;
  p.delta_c = -6.15206;
  p.delta_e = -35.0;
  p.delta_r = 0.4;
  p.omega_cf = 10.0;
  p.gamma_c_L = 1.0 / 6.0;
  p.gamma_c_R = 1.0 / 6.0;
  p.gamma_r = 0.01;
  p.gamma_d = 0.15;
  p.g2N = rydcav::g2N_from_cooperativity(1000.0, 1.0, 1.0 / 3.0);
  p.alpha = 0.01;
  p.c6 = -8.83e6;
  p.volume = 40.0 * std::numbers::pi * 225.0;
  p.n_atoms = 11310;
  c.mode = mode;
  return c;
}

// Resonant EIT: gamma_r = 0.1, gamma_c = 0.3 with gamma_c^R = 1e-3 gamma_c^L,
// C = 30, 50 pi 20^2 um^3.
inline ModelConfig resonant() {
  ModelConfig c;
  SystemParams& p = c.params;
  p.gamma_c_L = 0.3 / 1.001;
  p.gamma_c_R = 1e-3 * p.gamma_c_L;
  p.gamma_r = 0.1;
  p.g2N = 18.0;
  p.omega_cf = 2.0 * std::sqrt(0.1 * 59.0);
  p.alpha = 0.01;
  p.c6 = -8.83e6;
  p.volume = 50.0 * std::numbers::pi * 400.0;
  p.n_atoms = 25133;
  c.mode = DampingMode::Radiative;
  return c;
}

inline ModelConfig near_resonant() {
  ModelConfig c = resonant();
  c.params.delta_e = -2.0;
  c.params.delta_r = -0.1;
  c.params.omega_cf = 11.0;
  return c;
}

inline double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// Rates log-uniform in [1e-2, 1e2], detunings uniform in [-50, 50],
// |C6| log-uniform in [1e3, 1e7] with random sign, V log-uniform in
// [1e3, 1e6] um^3; draws with |V_b| / V >= 0.5 are rejected.
inline ModelConfig random_config(std::mt19937_64& rng, double alpha = 1e-3, bool interacting = true) {
  std::uniform_real_distribution<double> det(-50.0, 50.0);
  std::bernoulli_distribution sign(0.5);
  for (;;) {
    ModelConfig c;
    SystemParams& p = c.params;
    p.gamma_c_L = log_uniform(rng, 1e-2, 1e2);
    p.gamma_c_R = 0.0;
    p.gamma_r = log_uniform(rng, 1e-2, 1e2);
    p.omega_cf = log_uniform(rng, 1e-2, 1e2);
    p.g2N = log_uniform(rng, 1e-2, 1e2);
    p.delta_c = det(rng);
    p.delta_e = det(rng);
    p.delta_r = det(rng);
    p.alpha = alpha;
    const double c6 = log_uniform(rng, 1e3, 1e7);
    const double vol = log_uniform(rng, 1e3, 1e6);
    p.c6 = interacting ? (sign(rng) ? c6 : -c6) : 0.0;
    p.volume = vol;
    c.mode = DampingMode::Radiative;
    const auto d = rydcav::effective_detunings(p, c.mode);
    if (std::abs(rydcav::bubble_volume(p, d)) / p.volume < 0.5) return c;
  }
}

inline double rel(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace fixtures
