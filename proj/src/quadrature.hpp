#pragma once

// Globally adaptive 7/15-point Gauss-Kronrod quadrature for complex-valued
// integrands on a finite interval. Internal to the kernel module.

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

namespace rydcav::detail {

struct GkSegment {
  double lo;
  double hi;
  std::complex<double> value;
  double error;
  bool operator<(const GkSegment& other) const { return error < other.error; }
};

template <class F>
GkSegment gk15(F& f, double lo, double hi) {
  static constexpr double xgk[8] = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr double wgk[8] = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr double wg[4] = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const std::complex<double> fc = f(center);
  std::complex<double> kronrod = fc * wgk[7];
  std::complex<double> gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xgk[j];
    const std::complex<double> pair = f(center - dx) + f(center + dx);
    kronrod += wgk[j] * pair;
    if (j % 2 == 1) gauss += wg[j / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

struct GkResult {
  std::complex<double> value;
  double error;
  long evaluations;
  bool converged;
};

// Integrates f over the consecutive intervals given by `points` (sorted,
// at least two entries) until the summed error estimate is below
// max(abs_tol, rel_tol |I|) or `max_evaluations` is exhausted.
template <class F>
GkResult integrate_adaptive(F f, const std::vector<double>& points, double rel_tol, double abs_tol,
                            long max_evaluations) {
  std::priority_queue<GkSegment> queue;
  long evaluations = 0;
  std::complex<double> total = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] <= points[i]) continue;
    GkSegment s = gk15(f, points[i], points[i + 1]);
    evaluations += 15;
    total += s.value;
    error += s.error;
    queue.push(s);
  }
  while (!queue.empty() && error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (evaluations + 30 > max_evaluations) return {total, error, evaluations, false};
    GkSegment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) return {total, error, evaluations, false};
    GkSegment left = gk15(f, worst.lo, mid);
    GkSegment right = gk15(f, mid, worst.hi);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  std::complex<double> resummed = 0.0;
  double err = 0.0;
  while (!queue.empty()) {
    resummed += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  return {resummed, err, evaluations, true};
}

}  // namespace rydcav::detail
