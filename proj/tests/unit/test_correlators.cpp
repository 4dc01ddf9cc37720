#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "rydcav/correlators.hpp"
#include "rydcav/errors.hpp"
#include "rydcav/scan.hpp"

using namespace rydcav;
using fixtures::rel;

namespace {

struct Pipeline {
  SystemParams p;
  Detunings d;
  FirstOrderState f;
  SecondOrderMoments s;
};

Pipeline solve(const ModelConfig& c) {
  Pipeline out{c.params, effective_detunings(c.params, c.mode), {}, {}};
  out.f = first_order(out.p, out.d);
  out.s = second_order(out.p, out.d, out.f, kernel_analytic(out.p, out.d));
  return out;
}

}  // namespace

TEST_SUITE("correlators") {

TEST_CASE("transmitted g2(0) of coherent light") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const Pipeline x = solve(fixtures::random_config(rng, 1e-3, false));
    CHECK(transmitted_g2_zero(x.f, x.s) == doctest::Approx(1.0).epsilon(1e-9));
  }
  ModelConfig empty = fixtures::dispersive();
  empty.params.g2N = 0.0;
  const Pipeline x = solve(empty);
  CHECK(transmitted_g2_zero(x.f, x.s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transmitted g2(0) needs a nonzero field") {
  ModelConfig c = fixtures::dispersive();
  c.params.alpha = 0.0;
  const Pipeline x = solve(c);
  try {
    transmitted_g2_zero(x.f, x.s);
    FAIL("expected ZeroDenominator");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDenominator);
  }
}

TEST_CASE("dispersive bunching peak exceeds one") {
  ModelConfig c = fixtures::dispersive();
  c.params.delta_c = -6.15206 - 3.5;
  const Pipeline x = solve(c);
  CHECK(transmitted_g2_zero(x.f, x.s) > 1.0);
}

TEST_CASE("empty single-port cavity reflects everything") {
  SystemParams p;
  p.gamma_c_L = 0.4;
  p.gamma_c_R = 0.0;
  p.g2N = 0.0;
  for (double dc : {0.0, -0.3, 2.0}) {
    p.delta_c = dc;
    const Pipeline x = solve({p, DampingMode::Radiative});
    const ReflectedMoments r = reflected_moments(x.p, x.f, x.s);
    CHECK(r.i_refl == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.pair_refl == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.g2() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("impedance-matched two-port cavity on resonance transmits everything") {
  SystemParams p;
  p.gamma_c_L = 0.5;
  p.gamma_c_R = 0.5;
  p.g2N = 0.0;
  const Pipeline x = solve({p, DampingMode::Radiative});
  const CorrelationReport r = correlation_report(x.p, x.f, x.s);
  CHECK(std::abs(r.i_refl) < 1e-12);
  CHECK(r.i_trans == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.i_refl >= 0.0);
}

TEST_CASE("underflowing reflected intensity leaves g2_r undefined") {
  SystemParams p;
  p.gamma_c_L = 0.5;
  p.gamma_c_R = 0.5;
  p.g2N = 0.0;
  p.alpha = 0.5;  // exact binary arithmetic: i_refl cancels to 0
  const Pipeline x = solve({p, DampingMode::Radiative});
  const ReflectedMoments r = reflected_moments(x.p, x.f, x.s);
  CHECK(r.i_refl == 0.0);
  CHECK_FALSE(r.g2_r_zero.has_value());
  CHECK_THROWS_AS(r.g2(), Error);
  CHECK(std::isnan(correlation_report(x.p, x.f, x.s).g2_r_zero));
}

TEST_CASE("lossless EIT reflects all light from a single-port cavity") {
  SystemParams p;
  p.gamma_c_L = 0.3;
  p.gamma_c_R = 0.0;
  p.g2N = 18.0;
  p.omega_cf = 5.0;
  p.delta_r = 0.0;
  p.gamma_r = 1e-9;
  p.c6 = 0.0;
  for (double dc : {-3.0, -0.5, 0.0, 0.25, 4.0}) {
    p.delta_c = dc;
    const Pipeline x = solve({p, DampingMode::Radiative});
    CHECK(reflected_moments(x.p, x.f, x.s).i_refl == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("reflected pair moment equals |<a_out a_out>|^2") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const Pipeline x = solve(fixtures::random_config(rng, 1e-2));
    const double gl = x.p.gamma_c_L;
    const double a = x.p.alpha;
    const cplx i1(0.0, 1.0);
    // a_out = sqrt(2 gl) a + i alpha / sqrt(2 gl)
    const cplx out_pair = 2.0 * gl * x.s.aa + 2.0 * i1 * a * x.f.a1 - a * a / (2.0 * gl);
    const cplx out_amp = std::sqrt(2.0 * gl) * x.f.a1 + i1 * a / std::sqrt(2.0 * gl);
    const double n = a * a / (2.0 * gl);
    const ReflectedMoments r = reflected_moments(x.p, x.f, x.s);
    CHECK(r.pair_refl_raw == doctest::Approx(std::norm(out_pair) / (n * n)).epsilon(1e-9));
    CHECK(r.i_refl_raw == doctest::Approx(std::norm(out_amp) / n).epsilon(1e-9));
    CHECK(r.i_refl >= 0.0);
    CHECK(r.pair_refl >= 0.0);
  }
}

TEST_CASE("resonant EIT: single photons absorbed, pairs reflected") {
  const Pipeline x = solve(fixtures::resonant());
  const ReflectedMoments r = reflected_moments(x.p, x.f, x.s);
  CHECK(r.i_refl < 1e-2);
  CHECK(r.pair_refl > 0.1);
}

TEST_CASE("near-resonant ladder: pairs absorbed, single photons reflected") {
  ModelConfig c = fixtures::near_resonant();
  double best_pair = 1e9, best_omega = 0.0, i_at = 0.0;
  for (int k = 0; k <= 300; ++k) {
    c.params.omega_cf = 5.0 + 15.0 * k / 300.0;
    const Pipeline x = solve(c);
    const ReflectedMoments r = reflected_moments(x.p, x.f, x.s);
    if (r.pair_refl < best_pair) {
      best_pair = r.pair_refl;
      best_omega = c.params.omega_cf;
      i_at = r.i_refl;
    }
  }
  CHECK(best_omega == doctest::Approx(11.0).epsilon(0.1));
  CHECK(best_pair < 1e-2);
  CHECK(i_at > 0.1);
}

TEST_CASE("joint sign flip of detunings and C6 conjugates the moments") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 25; ++i) {
    const ModelConfig c = fixtures::random_config(rng);
    ModelConfig m = c;
    m.params.delta_c = -c.params.delta_c;
    m.params.delta_e = -c.params.delta_e;
    m.params.delta_r = -c.params.delta_r;
    m.params.c6 = -c.params.c6;
    const Pipeline x = solve(c);
    const Pipeline y = solve(m);
    // operators a and c pick up a sign under the flip, b does not
    CHECK(rel(y.f.a1, -std::conj(x.f.a1)) < 1e-12);
    CHECK(rel(y.f.b1, std::conj(x.f.b1)) < 1e-12);
    CHECK(rel(y.f.c1, -std::conj(x.f.c1)) < 1e-12);
    CHECK(rel(y.s.aa, std::conj(x.s.aa)) < 1e-10);
    CHECK(rel(y.s.ab, -std::conj(x.s.ab)) < 1e-10);
    CHECK(rel(y.s.ac, std::conj(x.s.ac)) < 1e-10);
    CHECK(rel(y.s.bb, std::conj(x.s.bb)) < 1e-10);
    CHECK(rel(y.s.bc, -std::conj(x.s.bc)) < 1e-10);
    CHECK(rel(y.s.cc, std::conj(x.s.cc)) < 1e-10);
    CHECK(transmitted_g2_zero(y.f, y.s) == doctest::Approx(transmitted_g2_zero(x.f, x.s)).epsilon(1e-10));
  }
}

TEST_CASE("g2(tau): initial value, fixed point and decay to one") {
  ModelConfig c = fixtures::dispersive();
  c.params.delta_c = -6.15206 - 3.5;
  const Pipeline x = solve(c);
  const double tau_max = 50.0 / std::min(x.p.gamma_c(), x.p.gamma_e);
  const TauTrace t = g2_tau(x.p, x.d, x.f, x.s, tau_max, 401);
  CHECK(t.method == TauMethod::Eigen);
  CHECK(t.tau_grid.front() == 0.0);
  CHECK(t.tau_grid.back() == tau_max);
  CHECK(t.g2_tau[0] == doctest::Approx(transmitted_g2_zero(x.f, x.s)).epsilon(1e-8));
  CHECK(std::abs(t.g2_tau.back() - 1.0) < 1e-4);
  const auto v_inf = tau_asymptote(x.f);
  CHECK(rel(t.raw.back(), v_inf[0]) < 1e-6);
  const auto refl = reflected_moments(x.p, x.f, x.s);
  CHECK(t.g2_r_tau[0] == doctest::Approx(*refl.g2_r_zero).epsilon(1e-8));
}

TEST_CASE("g2(tau): adaptive stepper agrees with the eigen solution") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const Pipeline x = solve(fixtures::random_config(rng));
    TauOptions forced;
    forced.force_stepper = true;
    const TauTrace e = g2_tau(x.p, x.d, x.f, x.s, 10.0, 21);
    const TauTrace s = g2_tau(x.p, x.d, x.f, x.s, 10.0, 21, forced);
    CHECK(s.method == TauMethod::Stepper);
    for (std::size_t k = 0; k < e.raw.size(); ++k) {
      CHECK(std::abs(e.raw[k] - s.raw[k]) <= 1e-7 * std::abs(e.raw[0]) + 1e-7 * std::abs(e.raw[k]));
    }
  }
}

TEST_CASE("g2(tau): defective delay matrix falls back to the stepper") {
  // exceptional point of the cavity / intermediate-state block
  SystemParams p;
  p.gamma_c_L = 3.0;
  p.g2N = 1.0;
  p.omega_cf = 0.0;
  p.c6 = -1e5;
  const Pipeline x = solve({p, DampingMode::Radiative});
  const TauTrace t = g2_tau(x.p, x.d, x.f, x.s, 20.0, 41);
  TauOptions forced;
  forced.force_stepper = true;
  const TauTrace s = g2_tau(x.p, x.d, x.f, x.s, 20.0, 41, forced);
  MESSAGE("method at the exceptional point: " << (t.method == TauMethod::Eigen ? "eigen" : "stepper"));
  for (std::size_t k = 0; k < t.raw.size(); ++k) CHECK(rel(t.raw[k], s.raw[k]) < 1e-6);
}

TEST_CASE("g2(tau): coherent light stays coherent at every delay") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    const Pipeline x = solve(fixtures::random_config(rng, 1e-3, false));
    const TauTrace t = g2_tau(x.p, x.d, x.f, x.s, 30.0, 61);
    for (double g : t.g2_tau) CHECK(std::abs(g - 1.0) < 1e-9);
  }
}

TEST_CASE("g2(tau): argument checks") {
  const Pipeline x = solve(fixtures::dispersive());
  CHECK_THROWS_AS(g2_tau(x.p, x.d, x.f, x.s, 0.0, 10), Error);
  CHECK_THROWS_AS(g2_tau(x.p, x.d, x.f, x.s, 5.0, 1), Error);
  const TauTrace two = g2_tau(x.p, x.d, x.f, x.s, 5.0, 2);
  CHECK(two.g2_tau.size() == 2);
  CHECK(two.g2_tau[0] == doctest::Approx(transmitted_g2_zero(x.f, x.s)).epsilon(1e-12));
}

}  // TEST_SUITE
