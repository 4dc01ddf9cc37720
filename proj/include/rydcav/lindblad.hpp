#pragma once

// Non-perturbative reference: Lindblad master equations in truncated number
// (or few-atom product) bases, solved for their steady state.
//
// Density matrices are vectorised row-major, vec(rho)[p*D + q] = rho_pq. The
// Liouvillian is stored after the similarity transform
//   rho_pq = s^(n_p + n_q) rho~_pq,
// with n_p the excitation number of basis state p and s ~ alpha. For weak
// drive this puts all entries of rho~ on a common scale so the tiny
// multi-excitation elements keep full relative precision.

#include <array>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "rydcav/model.hpp"

namespace rydcav {

using SparseMatrixC = Eigen::SparseMatrix<cplx>;

struct JumpOperator {
  double rate;  // D[J] rho = rate (J rho J+ - {J+J, rho}/2)
  SparseMatrixC op;
};

struct TruncatedSystem {
  std::vector<int> dims;
  std::vector<int> excitation;  // per Hilbert-space basis state
  std::vector<int> edge_states; // states at a truncation edge
  double scale = 1.0;
  SparseMatrixC hamiltonian;
  std::vector<JumpOperator> jumps;
  std::vector<SparseMatrixC> lowering;  // annihilation operator per bosonic mode
  SparseMatrixC liouvillian;            // scaled
};

// Assembles the scaled Liouvillian; basis state 0 must be the vacuum.
TruncatedSystem assemble_lindblad(std::vector<int> dims, SparseMatrixC hamiltonian,
                                  std::vector<JumpOperator> jumps, std::vector<int> excitation,
                                  std::vector<SparseMatrixC> lowering, std::vector<int> edge_states,
                                  double scale);

// Similarity scale used for a given drive strength.
double drive_scale(double alpha);

// Truncated three-boson model (cavity a, intermediate b, Rydberg c) with the
// effective nonlinearity kappa = kappa_r - i kappa_i. Damping rates are the
// imaginary parts of the complex detunings.
TruncatedSystem build_three_boson(const SystemParams& p, const Detunings& d, cplx kappa,
                                  std::array<int, 3> dims);

// max_col |Tr L(e_col)| / max|L| in the unscaled representation.
double trace_defect(const TruncatedSystem& sys);

inline constexpr double kSteadyResidualTol = 1e-10;
inline constexpr double kEdgePopulationTol = 1e-8;

struct SteadyState {
  Eigen::MatrixXcd rho;       // unscaled density matrix
  double residual = 0.0;      // |L~ rho~|_inf / (|L~|_inf |rho~|_inf)
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double edge_population = 0.0;
  long iterations = 0;        // GMRES iterations
  bool direct_fallback = false;  // sparse LU used after GMRES stalled
};

// Trace-one null vector. The vacuum element is pinned to 1 (its equation is
// redundant) and the system is solved by GMRES, preconditioned with the exact
// inverse of the excitation-conserving part -i(H_eff rho - rho H_eff+),
// H_eff = H - i/2 sum rate J+J. Sparse LU is the fallback for small
// systems. Throws NonConvergence.
SteadyState steady_state(const TruncatedSystem& sys);

cplx expectation(const SparseMatrixC& op, const Eigen::MatrixXcd& rho);

// ---------------------------------------------------------------------------

struct OracleOptions {
  double tolerance = 1e-3;  // relative change of g2 between truncations
  int max_dim = 8;
  bool refine = true;
};

struct OracleReport {
  cplx mean_a;
  cplx mean_aa;
  double n_photon = 0.0;
  double pair = 0.0;      // <a+a+aa>
  double g2_zero = 0.0;   // NaN for the vacuum
  double truncation_error = 0.0;
  bool reliable = false;
  std::array<int, 3> dims{};
  SteadyState state;
};

// Solves at dims and dims + 1, refining until the g2 change drops below the
// tolerance and the edge population is below kEdgePopulationTol, or max_dim
// is reached (report flagged unreliable). Throws TruncationTooSmall when the
// edge population is still too large at the last truncation.
OracleReport three_boson_oracle(const SystemParams& p, const Detunings& d, cplx kappa,
                                std::array<int, 3> dims = {4, 4, 4}, const OracleOptions& options = {});

// ---------------------------------------------------------------------------
// Exact few-atom ladder system coupled to a truncated cavity.

struct FactorizationOptions {
  int cavity_levels = 5;
  int n_atoms = 1;           // 1, 2 or 3
  double pair_shift = 0.0;   // Rydberg-Rydberg shift for every atom pair [gamma_e]
  std::vector<double> alphas{1e-2, 1e-3, 1e-4};
};

TruncatedSystem build_ladder_system(const SystemParams& p, const FactorizationOptions& options,
                                    double alpha);

struct FactorizationPoint {
  double alpha;
  cplx mean_a;
  cplx mean_aa;
  double n_photon;
  double pair;
  double intensity_defect;  // |<a+a> - |<a>|^2|
  double pair_defect;       // |<a+a+aa> - |<aa>|^2|
};

struct FactorizationReport {
  std::vector<FactorizationPoint> points;
  double intensity_slope = 0.0;  // expected 4
  double pair_slope = 0.0;       // expected 6
  Diagnostics diagnostics;
};

FactorizationReport factorization_check(const SystemParams& p, const FactorizationOptions& options = {});

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rydcav
