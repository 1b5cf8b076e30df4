#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace jacobi_scatter {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// ---- sequence extrapolation ----------------------------------------------

// Limit of s(M), s(2M), s(4M), ... assuming an error expansion
// c1/M + c2/M^2 + ... (Romberg scheme with ratio 2, integer powers).
// Returns the extrapolated value; if err_est is non-null it receives the
// magnitude of the last correction, a practical error indicator.
Complex extrapolate_doubling(const std::vector<Complex>& s, double* err_est = nullptr);
double extrapolate_doubling(const std::vector<double>& s, double* err_est = nullptr);

// Entrywise version for vectors sharing one doubling ladder.
std::vector<Complex> extrapolate_doubling_vectors(
    const std::vector<std::vector<Complex>>& ladders, double* err_est = nullptr);

// Aitken delta-squared step on three consecutive sequence values.
Complex aitken(Complex s0, Complex s1, Complex s2);
double aitken(double s0, double s1, double s2);

// ---- small helpers ---------------------------------------------------------

// Least-squares line y = a + b*x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Sum of c*m^-p over m >= from (Euler-Maclaurin tail of a power sequence).
double power_tail_sum(double c, double p, double from);

// ---- parallel grid evaluation ---------------------------------------------

// Runs fn(i) for i in [0,n) on a bounded worker pool.  Worker count is
// min(hardware, JACOBI_SCATTER_THREADS).  Results must be written to
// caller-owned slots indexed by i so output order never depends on
// scheduling.  Exceptions are captured and rethrown on the caller thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

std::size_t worker_count();

}  // namespace jacobi_scatter
