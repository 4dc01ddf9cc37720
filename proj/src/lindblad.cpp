#include "rydcav/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>
#include <unsupported/Eigen/KroneckerProduct>

#include "rydcav/errors.hpp"

namespace rydcav {

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseMatrixC identity(int n) {
  SparseMatrixC id(n, n);
  id.setIdentity();
  return id;
}

SparseMatrixC boson_lowering(int levels) {
  SparseMatrixC a(levels, levels);
  std::vector<Triplet> t;
  for (int n = 1; n < levels; ++n) t.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

SparseMatrixC kron(const SparseMatrixC& a, const SparseMatrixC& b) {
  SparseMatrixC out = Eigen::kroneckerProduct(a, b);
  return out;
}

// Embeds a single-factor operator into a tensor product of `dims` at `slot`.
SparseMatrixC embed(const SparseMatrixC& op, const std::vector<int>& dims, std::size_t slot) {
  SparseMatrixC out = slot == 0 ? op : identity(dims[0]);
  for (std::size_t k = 1; k < dims.size(); ++k) out = kron(out, k == slot ? op : identity(dims[k]));
  return out;
}

SparseMatrixC adjoint(const SparseMatrixC& m) { return SparseMatrixC(m.adjoint()); }

double inf_norm(const SparseMatrixC& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (int k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrixC::InnerIterator it(m, k); it; ++it) rows(it.row()) += std::abs(it.value());
  }
  return rows.maxCoeff();
}

// vec index of rho_pq
inline int vec_index(int p, int q, int dim) { return p * dim + q; }

}  // namespace

double drive_scale(double alpha) {
  const double a = std::abs(alpha);
  if (a == 0.0) return 1.0;
  return std::clamp(a, 1e-6, 1.0);
}

TruncatedSystem assemble_lindblad(std::vector<int> dims, SparseMatrixC hamiltonian,
                                  std::vector<JumpOperator> jumps, std::vector<int> excitation,
                                  std::vector<SparseMatrixC> lowering, std::vector<int> edge_states,
                                  double scale) {
  const int dim = static_cast<int>(hamiltonian.rows());
  if (static_cast<int>(excitation.size()) != dim || excitation[0] != 0) {
    throw Error(ErrorKind::Config, "excitation table must cover the basis and start at the vacuum");
  }
  const SparseMatrixC id = identity(dim);
  const cplx minus_i(0.0, -1.0);

  SparseMatrixC h_t = SparseMatrixC(hamiltonian.transpose());
  SparseMatrixC l = minus_i * (kron(hamiltonian, id) - kron(id, h_t));
  for (const JumpOperator& j : jumps) {
    if (j.rate == 0.0) continue;
    const SparseMatrixC jdj = adjoint(j.op) * j.op;
    const SparseMatrixC jdj_t = SparseMatrixC(jdj.transpose());
    const SparseMatrixC j_conj = SparseMatrixC(j.op.conjugate());
    l += j.rate * (kron(j.op, j_conj) - 0.5 * kron(jdj, id) - 0.5 * kron(id, jdj_t));
  }

  // L~_(pq),(rs) = L_(pq),(rs) s^(n_r + n_s - n_p - n_q)
  std::vector<Triplet> t;
  t.reserve(l.nonZeros());
  for (int k = 0; k < l.outerSize(); ++k) {
    for (SparseMatrixC::InnerIterator it(l, k); it; ++it) {
      const int row = static_cast<int>(it.row());
      const int col = static_cast<int>(it.col());
      const int grade = excitation[col / dim] + excitation[col % dim] - excitation[row / dim] -
                        excitation[row % dim];
      const cplx v = it.value() * std::pow(scale, grade);
      if (v != cplx(0.0)) t.emplace_back(row, col, v);
    }
  }

  TruncatedSystem sys;
  sys.dims = std::move(dims);
  sys.excitation = std::move(excitation);
  sys.edge_states = std::move(edge_states);
  sys.scale = scale;
  sys.hamiltonian = std::move(hamiltonian);
  sys.jumps = std::move(jumps);
  sys.lowering = std::move(lowering);
  sys.liouvillian.resize(dim * dim, dim * dim);
  sys.liouvillian.setFromTriplets(t.begin(), t.end());
  sys.liouvillian.makeCompressed();
  return sys;
}

TruncatedSystem build_three_boson(const SystemParams& p, const Detunings& d, cplx kappa,
                                  std::array<int, 3> dims) {
  for (int n : dims) {
    if (n < 2) throw Error(ErrorKind::Config, "three-boson truncation needs at least 2 levels per mode");
  }
  const std::vector<int> dv(dims.begin(), dims.end());
  const SparseMatrixC a = embed(boson_lowering(dims[0]), dv, 0);
  const SparseMatrixC b = embed(boson_lowering(dims[1]), dv, 1);
  const SparseMatrixC c = embed(boson_lowering(dims[2]), dv, 2);
  const SparseMatrixC ad = adjoint(a), bd = adjoint(b), cd = adjoint(c);
  const double g = p.coupling();
  const double w = p.omega_cf;

  SparseMatrixC h = -d.d_c.real() * (ad * a) + p.alpha * (a + ad) - d.d_e.real() * (bd * b) -
                    d.d_r.real() * (cd * c) + g * (a * bd + ad * b) + 0.5 * w * (b * cd + bd * c) +
                    0.5 * kappa.real() * (cd * cd * c * c);
  h.prune(cplx(0.0));

  std::vector<JumpOperator> jumps{{2.0 * d.d_c.imag(), a},
                                  {2.0 * d.d_e.imag(), b},
                                  {2.0 * d.d_r.imag(), c},
                                  {-kappa.imag(), SparseMatrixC(c * c)}};

  const int dim = dims[0] * dims[1] * dims[2];
  std::vector<int> ex(dim), edge;
  for (int ia = 0; ia < dims[0]; ++ia) {
    for (int ib = 0; ib < dims[1]; ++ib) {
      for (int ic = 0; ic < dims[2]; ++ic) {
        const int idx = (ia * dims[1] + ib) * dims[2] + ic;
        ex[idx] = ia + ib + ic;
        if (ia == dims[0] - 1 || ib == dims[1] - 1 || ic == dims[2] - 1) edge.push_back(idx);
      }
    }
  }
  return assemble_lindblad(dv, std::move(h), std::move(jumps), std::move(ex), {a, b, c}, std::move(edge),
                           drive_scale(p.alpha));
}

double trace_defect(const TruncatedSystem& sys) {
  const int dim = static_cast<int>(sys.excitation.size());
  const SparseMatrixC& l = sys.liouvillian;
  auto excitation_sum = [&](int i) { return sys.excitation[i / dim] + sys.excitation[i % dim]; };
  std::vector<cplx> col_sum(l.cols(), 0.0);
  double norm = 0.0;
  for (int k = 0; k < l.outerSize(); ++k) {
    for (SparseMatrixC::InnerIterator it(l, k); it; ++it) {
      const int row = static_cast<int>(it.row());
      const int col = static_cast<int>(it.col());
      const int p = row / dim;
      const int grade = excitation_sum(row) - excitation_sum(col);
      const cplx unscaled = it.value() * std::pow(sys.scale, grade);
      norm = std::max(norm, std::abs(unscaled));
      if (p == row % dim) col_sum[col] += unscaled;
    }
  }
  double worst = 0.0;
  for (const cplx& v : col_sum) worst = std::max(worst, std::abs(v));
  return norm > 0.0 ? worst / norm : 0.0;
}

cplx expectation(const SparseMatrixC& op, const Eigen::MatrixXcd& rho) {
  // Tr(op rho) = sum_{q,p} op_qp rho_pq
  cplx acc = 0.0;
  for (int k = 0; k < op.outerSize(); ++k) {
    for (SparseMatrixC::InnerIterator it(op, k); it; ++it) acc += it.value() * rho(it.col(), it.row());
  }
  return acc;
}

namespace {

// Exact inverse of rho -> -i(H_eff rho - rho H_eff+) on every excitation block
// (m, n); H_eff does not change the excitation number. The vacuum block maps
// to itself. Interface as expected by Eigen's iterative solvers.
class ExcitationPreconditioner {
 public:
  using Scalar = cplx;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic };

  ExcitationPreconditioner() = default;

  void setup(const TruncatedSystem& sys) {
    dim_ = static_cast<int>(sys.excitation.size());
    SparseMatrixC h_eff = sys.hamiltonian;
    for (const JumpOperator& j : sys.jumps) {
      h_eff -= cplx(0.0, 0.5 * j.rate) * SparseMatrixC(adjoint(j.op) * j.op);
    }
    const Eigen::MatrixXcd dense = Eigen::MatrixXcd(h_eff);
    const int top = *std::max_element(sys.excitation.begin(), sys.excitation.end());
    blocks_.assign(top + 1, {});
    for (int p = 0; p < dim_; ++p) blocks_[sys.excitation[p]].states.push_back(p);
    for (Block& b : blocks_) {
      const int n = static_cast<int>(b.states.size());
      if (n == 0) continue;
      Eigen::MatrixXcd h(n, n);
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) h(i, k) = dense(b.states[i], b.states[k]);
      }
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h);
      b.lambda = es.eigenvalues();
      b.v = es.eigenvectors();
      b.v_inv = b.v.inverse();
    }
  }

  template <typename M> ExcitationPreconditioner& analyzePattern(const M&) { return *this; }
  template <typename M> ExcitationPreconditioner& factorize(const M&) { return *this; }
  template <typename M> ExcitationPreconditioner& compute(const M&) { return *this; }
  Eigen::ComputationInfo info() const { return Eigen::Success; }

  template <typename Rhs>
  Eigen::VectorXcd solve(const Rhs& rhs) const {
    Eigen::VectorXcd out(rhs.size());
    const cplx minus_i(0.0, -1.0);
    for (std::size_t m = 0; m < blocks_.size(); ++m) {
      const Block& bm = blocks_[m];
      for (std::size_t n = 0; n < blocks_.size(); ++n) {
        const Block& bn = blocks_[n];
        const int rm = static_cast<int>(bm.states.size());
        const int rn = static_cast<int>(bn.states.size());
        if (rm == 0 || rn == 0) continue;
        Eigen::MatrixXcd r(rm, rn);
        for (int i = 0; i < rm; ++i) {
          for (int k = 0; k < rn; ++k) r(i, k) = rhs(vec_index(bm.states[i], bn.states[k], dim_));
        }
        if (m == 0 && n == 0) {
          out(0) = r(0, 0);
          continue;
        }
        // H_n+ = V_n^-+ conj(L_n) V_n^+
        Eigen::MatrixXcd y = bm.v_inv * r * bn.v_inv.adjoint();
        for (int i = 0; i < rm; ++i) {
          for (int k = 0; k < rn; ++k) {
            const cplx den = minus_i * (bm.lambda(i) - std::conj(bn.lambda(k)));
            y(i, k) = std::abs(den) > 1e-300 ? y(i, k) / den : y(i, k);
          }
        }
        const Eigen::MatrixXcd x = bm.v * y * bn.v.adjoint();
        for (int i = 0; i < rm; ++i) {
          for (int k = 0; k < rn; ++k) out(vec_index(bm.states[i], bn.states[k], dim_)) = x(i, k);
        }
      }
    }
    return out;
  }

 private:
  struct Block {
    std::vector<int> states;
    Eigen::VectorXcd lambda;
    Eigen::MatrixXcd v;
    Eigen::MatrixXcd v_inv;
  };
  std::vector<Block> blocks_;
  int dim_ = 0;
};

constexpr int kDirectFallbackLimit = 20000;

}  // namespace

SteadyState steady_state(const TruncatedSystem& sys) {
  const int dim = static_cast<int>(sys.excitation.size());
  const int n = dim * dim;
  const SparseMatrixC& l = sys.liouvillian;
  const double s = sys.scale;

  // Vacuum element pinned to one in place of its (redundant) equation.
  std::vector<Triplet> t;
  t.reserve(l.nonZeros() + 1);
  for (int k = 0; k < l.outerSize(); ++k) {
    for (SparseMatrixC::InnerIterator it(l, k); it; ++it) {
      if (it.row() != 0) t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    }
  }
  t.emplace_back(0, 0, 1.0);
  SparseMatrixC m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  rhs(0) = 1.0;

  const double l_norm = std::max(inf_norm(l), std::numeric_limits<double>::min());
  auto relative_residual = [&](const Eigen::VectorXcd& x) {
    if (!x.allFinite()) return std::numeric_limits<double>::infinity();
    const double xn = x.cwiseAbs().maxCoeff();
    if (xn == 0.0) return std::numeric_limits<double>::infinity();
    return (l * x).cwiseAbs().maxCoeff() / (l_norm * xn);
  };

  SteadyState out;
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
  x(0) = 1.0;
  bool ok = false;
  {
    Eigen::GMRES<SparseMatrixC, ExcitationPreconditioner> gmres;
    gmres.preconditioner().setup(sys);
    gmres.set_restart(80);
    gmres.setMaxIterations(2000);
    gmres.setTolerance(1e-15);
    gmres.compute(m);
    for (int pass = 0; pass < 3 && !ok; ++pass) {
      x = gmres.solveWithGuess(rhs, x);
      out.iterations += gmres.iterations();
      out.residual = relative_residual(x);
      ok = out.residual <= kSteadyResidualTol;
    }
  }
  if (!ok && n <= kDirectFallbackLimit) {
    out.direct_fallback = true;
    Eigen::SparseLU<SparseMatrixC, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(m);
    if (lu.info() == Eigen::Success) {
      x = lu.solve(rhs);
      if (x.allFinite()) x += lu.solve(rhs - m * x);
      out.residual = relative_residual(x);
      ok = out.residual <= kSteadyResidualTol;
    }
  }
  if (!ok) {
    std::ostringstream msg;
    msg << "steady state not found: relative residual " << out.residual << " above " << kSteadyResidualTol;
    throw Error(ErrorKind::NonConvergence, msg.str());
  }

  cplx trace = 0.0;
  for (int p = 0; p < dim; ++p) trace += std::pow(s, 2 * sys.excitation[p]) * x(vec_index(p, p, dim));
  if (!(std::abs(trace) > 0.0)) throw Error(ErrorKind::NonConvergence, "steady state has zero trace");
  x /= trace;

  out.rho.resize(dim, dim);
  for (int p = 0; p < dim; ++p) {
    for (int q = 0; q < dim; ++q) {
      out.rho(p, q) = x(vec_index(p, q, dim)) * std::pow(s, sys.excitation[p] + sys.excitation[q]);
    }
  }
  out.trace_error = std::abs(out.rho.trace() - 1.0);
  out.hermiticity_error = (out.rho - out.rho.adjoint()).cwiseAbs().maxCoeff();
  const Eigen::MatrixXcd herm = 0.5 * (out.rho + out.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  for (int e : sys.edge_states) out.edge_population += std::abs(out.rho(e, e).real());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

OracleReport oracle_at(const SystemParams& p, const Detunings& d, cplx kappa, std::array<int, 3> dims) {
  const TruncatedSystem sys = build_three_boson(p, d, kappa, dims);
  OracleReport r;
  r.dims = dims;
  r.state = steady_state(sys);
  const SparseMatrixC& a = sys.lowering[0];
  const SparseMatrixC ad = adjoint(a);
  const SparseMatrixC aa = a * a;
  r.mean_a = expectation(a, r.state.rho);
  r.mean_aa = expectation(aa, r.state.rho);
  r.n_photon = expectation(SparseMatrixC(ad * a), r.state.rho).real();
  r.pair = expectation(SparseMatrixC(ad * ad * aa), r.state.rho).real();
  r.g2_zero = r.n_photon > 1e-300 ? r.pair / (r.n_photon * r.n_photon)
                                  : std::numeric_limits<double>::quiet_NaN();
  r.truncation_error = std::numeric_limits<double>::infinity();
  return r;
}

void throw_truncation(const OracleReport& r) {
  std::ostringstream msg;
  msg << "population " << r.state.edge_population << " at the truncation edge of dims (" << r.dims[0] << ","
      << r.dims[1] << "," << r.dims[2] << ") exceeds " << kEdgePopulationTol;
  throw Error(ErrorKind::TruncationTooSmall, msg.str());
}

}  // namespace

OracleReport three_boson_oracle(const SystemParams& p, const Detunings& d, cplx kappa,
                                std::array<int, 3> dims, const OracleOptions& options) {
  OracleReport prev = oracle_at(p, d, kappa, dims);
  for (;;) {
    const std::array<int, 3> next{dims[0] + 1, dims[1] + 1, dims[2] + 1};
    if (*std::max_element(next.begin(), next.end()) > options.max_dim) {
      if (prev.state.edge_population > kEdgePopulationTol) throw_truncation(prev);
      prev.reliable = false;
      return prev;
    }
    OracleReport fine = oracle_at(p, d, kappa, next);
    const bool vacuum = std::isnan(fine.g2_zero) && std::isnan(prev.g2_zero);
    fine.truncation_error = vacuum ? 0.0 : std::abs(fine.g2_zero - prev.g2_zero) / std::abs(fine.g2_zero);
    const bool edge_ok = fine.state.edge_population <= kEdgePopulationTol;
    fine.reliable = edge_ok && fine.truncation_error <= options.tolerance;
    if (fine.reliable || !options.refine) {
      if (!edge_ok) throw_truncation(fine);
      return fine;
    }
    prev = std::move(fine);
    dims = next;
  }
}

// ---------------------------------------------------------------------------

TruncatedSystem build_ladder_system(const SystemParams& p, const FactorizationOptions& o, double alpha) {
  if (o.n_atoms < 1 || o.n_atoms > 3) {
    throw Error(ErrorKind::Config, "few-atom factorization check supports 1 to 3 atoms");
  }
  if (o.cavity_levels < 3) throw Error(ErrorKind::Config, "cavity truncation needs at least 3 levels");

  std::vector<int> dims{o.cavity_levels};
  for (int k = 0; k < o.n_atoms; ++k) dims.push_back(3);

  // atomic levels: 0 = g, 1 = e, 2 = r
  auto transition = [](int to, int from) {
    SparseMatrixC m(3, 3);
    m.insert(to, from) = 1.0;
    return m;
  };
  const SparseMatrixC a = embed(boson_lowering(o.cavity_levels), dims, 0);
  const SparseMatrixC ad = adjoint(a);
  const double g = std::sqrt(p.g2N / o.n_atoms);
  const double w = p.omega_cf;

  SparseMatrixC h = -p.delta_c * (ad * a) + alpha * (a + ad);
  std::vector<JumpOperator> jumps{{2.0 * p.gamma_c(), a}};
  std::vector<SparseMatrixC> rr;
  for (int k = 0; k < o.n_atoms; ++k) {
    const std::size_t slot = static_cast<std::size_t>(k) + 1;
    const SparseMatrixC s_eg = embed(transition(1, 0), dims, slot);
    const SparseMatrixC s_re = embed(transition(2, 1), dims, slot);
    const SparseMatrixC s_ge = embed(transition(0, 1), dims, slot);
    const SparseMatrixC s_gr = embed(transition(0, 2), dims, slot);
    const SparseMatrixC s_ee = embed(transition(1, 1), dims, slot);
    const SparseMatrixC s_rr = embed(transition(2, 2), dims, slot);
    h += -p.delta_e * s_ee - p.delta_r * s_rr + g * (a * s_eg + ad * s_ge) +
         0.5 * w * (s_re + adjoint(s_re));
    jumps.push_back({2.0 * p.gamma_e, s_ge});
    jumps.push_back({2.0 * p.gamma_r, s_gr});
    if (p.gamma_d > 0.0) jumps.push_back({2.0 * p.gamma_d, s_rr});
    rr.push_back(s_rr);
  }
  for (std::size_t i = 0; i < rr.size(); ++i) {
    for (std::size_t j = i + 1; j < rr.size(); ++j) h += o.pair_shift * (rr[i] * rr[j]);
  }
  h.prune(cplx(0.0));

  int dim = 1;
  for (int n : dims) dim *= n;
  std::vector<int> ex(dim), edge;
  int atom_block = dim / o.cavity_levels;
  for (int idx = 0; idx < dim; ++idx) {
    const int cav = idx / atom_block;
    int rest = idx % atom_block;
    int excited = 0;
    for (int k = 0; k < o.n_atoms; ++k) {
      if (rest % 3 != 0) ++excited;
      rest /= 3;
    }
    ex[idx] = cav + excited;
    if (cav == o.cavity_levels - 1) edge.push_back(idx);
  }
  return assemble_lindblad(dims, std::move(h), std::move(jumps), std::move(ex), {a}, std::move(edge),
                           drive_scale(alpha));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error(ErrorKind::Config, "slope fit needs at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

FactorizationReport factorization_check(const SystemParams& p, const FactorizationOptions& options) {
  FactorizationReport report;
  if (p.gamma_d > 0.0) {
    report.diagnostics.warn(
        "DephasingMode: gamma_d > 0 adds a Rydberg dephasing channel; the factorization argument assumes "
        "purely radiative damping, results are empirical");
  }
  std::vector<double> xs, y1, y2;
  for (double alpha : options.alphas) {
    const TruncatedSystem sys = build_ladder_system(p, options, alpha);
    const SteadyState st = steady_state(sys);
    if (st.edge_population > kEdgePopulationTol) {
      std::ostringstream msg;
      msg << "cavity truncation at " << options.cavity_levels << " levels too small at alpha = " << alpha
          << " (edge population " << st.edge_population << ")";
      throw Error(ErrorKind::TruncationTooSmall, msg.str());
    }
    const SparseMatrixC& a = sys.lowering[0];
    const SparseMatrixC ad = adjoint(a);
    FactorizationPoint pt;
    pt.alpha = alpha;
    pt.mean_a = expectation(a, st.rho);
    pt.mean_aa = expectation(SparseMatrixC(a * a), st.rho);
    pt.n_photon = expectation(SparseMatrixC(ad * a), st.rho).real();
    pt.pair = expectation(SparseMatrixC(ad * ad * a * a), st.rho).real();
    pt.intensity_defect = std::abs(pt.n_photon - std::norm(pt.mean_a));
    pt.pair_defect = std::abs(pt.pair - std::norm(pt.mean_aa));
    report.points.push_back(pt);
    xs.push_back(alpha);
    y1.push_back(pt.intensity_defect);
    y2.push_back(pt.pair_defect);
  }
  auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double z) { return z > 0.0; });
  };
  if (xs.size() >= 2 && positive(y1) && positive(y2)) {
    report.intensity_slope = loglog_slope(xs, y1);
    report.pair_slope = loglog_slope(xs, y2);
  } else {
    report.intensity_slope = report.pair_slope = std::numeric_limits<double>::quiet_NaN();
    report.diagnostics.warn("factorization defects vanish identically; slopes undefined");
  }
  return report;
}

}  // namespace rydcav
