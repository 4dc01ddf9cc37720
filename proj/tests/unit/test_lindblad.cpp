#include "doctest.h"

#include <random>

#include "fixtures.hpp"
#include "rydcav/correlators.hpp"
#include "rydcav/effective.hpp"
#include "rydcav/errors.hpp"
#include "rydcav/lindblad.hpp"

using namespace rydcav;
using fixtures::rel;

namespace {

ModelConfig weak(ModelConfig c, double alpha = 1e-3) {
  c.params.alpha = alpha;
  return c;
}

}  // namespace

TEST_SUITE("lindblad") {

TEST_CASE("Liouvillians are trace preserving") {
  const ModelConfig c = weak(fixtures::resonant());
  const Detunings d = effective_detunings(c.params, c.mode);
  const cplx kappa = effective_kappa(c.params, d).kappa;
  CHECK(trace_defect(build_three_boson(c.params, d, kappa, {3, 4, 5})) < 1e-10);
  FactorizationOptions o;
  o.n_atoms = 2;
  o.pair_shift = 2.0;
  CHECK(trace_defect(build_ladder_system(c.params, o, 1e-3)) < 1e-10);
}

TEST_CASE("linear three-boson model reproduces the first-order field") {
  ModelConfig c = weak(fixtures::resonant());
  c.params.c6 = 0.0;
  const Detunings d = effective_detunings(c.params, c.mode);
  const TruncatedSystem sys = build_three_boson(c.params, d, 0.0, {4, 4, 4});
  const SteadyState st = steady_state(sys);
  const cplx a = expectation(sys.lowering[0], st.rho);
  const cplx aa = expectation(SparseMatrixC(sys.lowering[0] * sys.lowering[0]), st.rho);
  CHECK(rel(a, first_order(c.params, d).a1) < 1e-4);
  // linear dynamics: coherent steady state
  CHECK(std::abs(aa - a * a) < 1e-6 * std::norm(a));
}

TEST_CASE("no drive: vacuum") {
  ModelConfig c = fixtures::resonant();
  c.params.alpha = 0.0;
  const Detunings d = effective_detunings(c.params, c.mode);
  const OracleReport r = three_boson_oracle(c.params, d, effective_kappa(c.params, d).kappa);
  CHECK(std::abs(r.state.rho(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(r.mean_a) < 1e-14);
  CHECK(std::abs(r.mean_aa) < 1e-14);
  CHECK(std::abs(r.n_photon) < 1e-14);
  CHECK(std::isnan(r.g2_zero));
}

TEST_CASE("steady states are density matrices") {
  for (const ModelConfig& c : {weak(fixtures::resonant()), weak(fixtures::near_resonant()), weak(fixtures::dispersive())}) {
    const Detunings d = effective_detunings(c.params, c.mode);
    const TruncatedSystem sys = build_three_boson(c.params, d, effective_kappa(c.params, d).kappa, {4, 4, 4});
    const SteadyState st = steady_state(sys);
    CHECK(st.residual <= kSteadyResidualTol);
    CHECK(st.trace_error < 1e-12);
    CHECK(st.hermiticity_error < 1e-12);
    CHECK(st.min_eigenvalue >= -1e-12);
  }
}

TEST_CASE("resonant g2 from the master equation") {
  const ModelConfig c = weak(fixtures::resonant());
  const Detunings d = effective_detunings(c.params, c.mode);
  const FirstOrderState f = first_order(c.params, d);
  const InteractionKernel k = kernel_analytic(c.params, d);
  const SecondOrderMoments s = second_order(c.params, d, f, k);
  const OracleReport r = three_boson_oracle(c.params, d, effective_kappa(c.params, d, k).kappa);
  CHECK(r.reliable);
  CHECK(r.truncation_error < 1e-3);
  CHECK(r.dims == std::array<int, 3>{5, 5, 5});
  CHECK(rel(r.mean_a, f.a1) < 1e-2);
  CHECK(rel(r.mean_aa, s.aa) < 1e-2);
  CHECK(r.g2_zero == doctest::Approx(transmitted_g2_zero(f, s)).epsilon(1e-2));
}

TEST_CASE("strong drive exhausts the truncation") {
  ModelConfig c = fixtures::resonant();
  c.params.alpha = 1.0;
  const Detunings d = effective_detunings(c.params, c.mode);
  OracleOptions o;
  o.max_dim = 3;
  try {
    three_boson_oracle(c.params, d, effective_kappa(c.params, d).kappa, {2, 2, 2}, o);
    FAIL("expected TruncationTooSmall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TruncationTooSmall);
  }
}

TEST_CASE("truncation below two levels is rejected") {
  const ModelConfig c = weak(fixtures::resonant());
  const Detunings d = effective_detunings(c.params, c.mode);
  CHECK_THROWS_AS(build_three_boson(c.params, d, 0.0, {1, 4, 4}), Error);
}

TEST_CASE("few-atom ladder matches the collective first-order field") {
  ModelConfig c = fixtures::resonant();
  FactorizationOptions o;
  for (int n : {1, 2}) {
    o.n_atoms = n;
    const TruncatedSystem sys = build_ladder_system(c.params, o, 1e-4);
    const SteadyState st = steady_state(sys);
    c.params.alpha = 1e-4;
    const FirstOrderState f = first_order(c.params, effective_detunings(c.params, DampingMode::Radiative));
    CHECK(rel(expectation(sys.lowering[0], st.rho), f.a1) < 1e-5);
  }
}

TEST_CASE("factorization: single atom") {
  const FactorizationReport r = factorization_check(fixtures::resonant().params);
  CHECK(r.diagnostics.empty());
  CHECK(r.intensity_slope == doctest::Approx(4.0).epsilon(0.3 / 4.0));
  CHECK(r.pair_slope == doctest::Approx(6.0).epsilon(0.3 / 6.0));
}

TEST_CASE("factorization: interacting pair") {
  FactorizationOptions o;
  o.n_atoms = 2;
  o.pair_shift = -3.0;
  const FactorizationReport r = factorization_check(fixtures::resonant().params, o);
  CHECK(std::abs(r.intensity_slope - 4.0) <= 0.3);
  CHECK(std::abs(r.pair_slope - 6.0) <= 0.3);
}

TEST_CASE("factorization: dephasing only adds a diagnostic") {
  SystemParams p = fixtures::resonant().params;
  p.gamma_d = 0.2;
  FactorizationReport r;
  CHECK_NOTHROW(r = factorization_check(p));
  CHECK_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics.warnings[0].find("DephasingMode") != std::string::npos);
}

TEST_CASE("factorization: atom count limits") {
  FactorizationOptions o;
  o.n_atoms = 4;
  CHECK_THROWS_AS(factorization_check(fixtures::resonant().params, o), Error);
}

TEST_CASE("log-log slope") {
  CHECK(loglog_slope({1e-1, 1e-2, 1e-3}, {3e-4, 3e-8, 3e-12}) == doctest::Approx(4.0));
}

}  // TEST_SUITE
