#include "jacobi_scatter/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "jacobi_scatter/errors.hpp"

namespace jacobi_scatter {

Tridiagonal leading_block(const CoefficientModel& model, long n) {
  if (n < 1) throw InvalidParameter("leading_block: n >= 1");
  Tridiagonal t;
  t.diag.resize(std::size_t(n));
  t.off.resize(std::size_t(n) - 1);
  for (long i = 0; i < n; ++i) t.diag[std::size_t(i)] = model.b(i);
  for (long i = 0; i + 1 < n; ++i) t.off[std::size_t(i)] = model.a(i);
  return t;
}

Tridiagonal perturbation_block(const CoefficientModel& model, long n) {
  Tridiagonal t = leading_block(model, n);
  for (auto& x : t.off) x -= 0.5;
  return t;
}

long sturm_count_below(const Tridiagonal& t, double x) {
  long count = 0;
  double d = 1.0;
  const double tiny = std::numeric_limits<double>::min() /
                      std::numeric_limits<double>::epsilon();
  for (long i = 0; i < t.n(); ++i) {
    const double off2 = i == 0 ? 0.0 : t.off[std::size_t(i) - 1] * t.off[std::size_t(i) - 1];
    d = (t.diag[std::size_t(i)] - x) - off2 / d;
    if (d == 0.0) d = tiny;
    if (d < 0.0) ++count;
  }
  return count;
}

void gershgorin_bounds(const Tridiagonal& t, double* lo, double* hi) {
  double l = std::numeric_limits<double>::infinity();
  double h = -l;
  for (long i = 0; i < t.n(); ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(t.off[std::size_t(i) - 1]);
    if (i + 1 < t.n()) r += std::abs(t.off[std::size_t(i)]);
    l = std::min(l, t.diag[std::size_t(i)] - r);
    h = std::max(h, t.diag[std::size_t(i)] + r);
  }
  if (lo) *lo = l;
  if (hi) *hi = h;
}

double eigenvalue_by_index(const Tridiagonal& t, long k, double tol) {
  if (k < 0 || k >= t.n()) throw InvalidParameter("eigenvalue index out of range");
  double lo, hi;
  gershgorin_bounds(t, &lo, &hi);
  lo -= 1e-12;
  hi += 1e-12;
  while (hi - lo > tol * (1.0 + std::abs(lo) + std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count_below(t, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> all_eigenvalues(const Tridiagonal& t, double tol) {
  std::vector<double> ev(std::size_t(t.n()));
  for (long k = 0; k < t.n(); ++k) ev[std::size_t(k)] = eigenvalue_by_index(t, k, tol);
  return ev;
}

std::vector<double> eigenvalues_outside_band(const Tridiagonal& t, double margin,
                                             double tol) {
  std::vector<double> out;
  const long below = sturm_count_below(t, -1.0 - margin);
  for (long k = 0; k < below; ++k) out.push_back(eigenvalue_by_index(t, k, tol));
  const long upto = sturm_count_below(t, 1.0 + margin);
  for (long k = upto; k < t.n(); ++k) out.push_back(eigenvalue_by_index(t, k, tol));
  return out;
}

double trace_norm(const Tridiagonal& t, double tol) {
  double s = 0.0;
  for (double ev : all_eigenvalues(t, tol)) s += std::abs(ev);
  return s;
}

std::vector<Complex> shifted_solve_unit(const Tridiagonal& t, Complex z, long k) {
  const long n = t.n();
  if (k < 0 || k >= n) throw InvalidParameter("shifted_solve_unit: bad unit index");
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<Complex> c(un);
  std::vector<Complex> dvec(un);
  // Thomas sweep for (T - z) x = e_k
  Complex denom = t.diag[0] - z;
  if (std::abs(denom) < 1e-300) throw EigenvalueProximity("shifted solve: zero pivot");
  c[0] = n > 1 ? t.off[0] / denom : 0.0;
  dvec[0] = (k == 0 ? 1.0 : 0.0) / denom;
  for (long i = 1; i < n; ++i) {
    const double e = t.off[std::size_t(i) - 1];
    denom = (t.diag[std::size_t(i)] - z) - e * c[std::size_t(i) - 1];
    if (std::abs(denom) < 1e-300)
      throw EigenvalueProximity("shifted solve: zero pivot");
    if (i + 1 < n) c[std::size_t(i)] = t.off[std::size_t(i)] / denom;
    const Complex rhs = (i == k ? 1.0 : 0.0) - e * dvec[std::size_t(i) - 1];
    dvec[std::size_t(i)] = rhs / denom;
  }
  std::vector<Complex> x(un);
  x[un - 1] = dvec[un - 1];
  for (long i = n - 2; i >= 0; --i)
    x[std::size_t(i)] = dvec[std::size_t(i)] - c[std::size_t(i)] * x[std::size_t(i) + 1];
  return x;
}

}  // namespace jacobi_scatter
