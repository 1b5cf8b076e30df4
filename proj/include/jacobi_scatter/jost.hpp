#pragma once

#include <optional>
#include <vector>

#include "jacobi_scatter/coefficients.hpp"
#include "jacobi_scatter/lattice.hpp"

namespace jacobi_scatter {

// Truncation schedule shared by the backward and Volterra solvers so the two
// routes solve identical finite problems pass by pass.  For fast tails a
// single pass at truncation_index(tol) is exact enough; slow (power-law)
// tails get a doubling ladder whose passes are extrapolated.
struct JostSchedule {
  std::vector<long> passes;
  bool extrapolate = false;
};
JostSchedule jost_schedule(const CoefficientModel& model, double tol);

// Jost solution f_n = zeta^n (1 + O(rho_n)) sampled on [-1, m_keep], together
// with the reduced values h_n = f_n zeta^-n used for tail diagnostics.
struct JostSolution {
  SpectralParameter sp;
  std::vector<Complex> f;  // index n stored at slot n+1
  std::vector<Complex> h;
  long m_keep = 0;
  double tail_error = 0.0;      // truncation estimate
  double decay_constant = 0.0;  // fitted C in |h_n - 1| <= C rho_n
  std::vector<double> volterra_iterate_sup;  // per-iteration sup norms

  Complex f_at(long n) const { return f.at(std::size_t(n + 1)); }
  Complex h_at(long n) const { return h.at(std::size_t(n + 1)); }
  Complex omega() const { return -0.5 * f_at(-1); }   // {P, f}
  Complex Omega() const { return sp.zeta() * f_at(-1); }
  PolySequence sequence() const;
};

// Backward recurrence from a free-tail seed at the truncation index; the Jost
// solution is the backward-dominant direction, so the pass is self-correcting.
JostSolution jost_backward(const CoefficientModel& model, const SpectralParameter& sp,
                           double tol = 1e-10);

// Neumann iteration of the discrete Volterra equation in the reduced variable
// g_n = 2 a_n zeta^-n f_n; independent of the backward route, same schedule.
JostSolution jost_volterra(const CoefficientModel& model, const SpectralParameter& sp,
                           double tol = 1e-10);

// Kernel of the Volterra system (for bound monitoring).
Complex volterra_kernel(const CoefficientModel& model, const SpectralParameter& sp,
                        long n, long m);

// Omega = zeta f_{-1}; vanishes exactly at eigenvalues.
Complex jost_function(const CoefficientModel& model, const SpectralParameter& sp,
                      double tol = 1e-10);

// Independent route: Omega = 1 - 2 sum_n zeta^{n+1} (VP)_n, evaluated with the
// scaled polynomials zeta^n P_n so nothing overflows.
Complex jost_via_polynomials(const CoefficientModel& model, const SpectralParameter& sp,
                             long n_base);

// Scaled regular solution p_n = zeta^n P_n (bounded as n grows).
std::vector<Complex> scaled_regular_values(const CoefficientModel& model,
                                           const SpectralParameter& sp, long n_max);

// ---- spectrum edges ---------------------------------------------------------

// Jost solution at z = +-1 (requires summable first moments).
struct EdgeSolution {
  int sign = 1;
  std::vector<double> f;  // index n at slot n+1
  long m_keep = 0;
  double f_at(long n) const { return f.at(std::size_t(n + 1)); }
  double Omega() const { return double(sign) * f_at(-1); }  // zeta(+-1) = +-1
};
EdgeSolution edge_jost(const CoefficientModel& model, int sign, double tol = 1e-10);

struct ResonanceReport {
  bool is_resonance = false;
  double omega_edge = 0.0;   // Omega(+-1)
  double threshold = 0.0;
  // populated when is_resonance:
  double gamma_series = 0.0;  // 1 + 2 sum (+-1)^{m-1} m (VP)_m
  double gamma_limit = 0.0;   // lim (+-1)^n P_n(+-1)
  bool gamma_consistent = true;
  double edge_law_residual = 0.0;  // sup over a shrinking ladder of
                                   // |Omega(z)/(+-sqrt(z^2-1)) - gamma|
  std::optional<double> gamma() const {
    if (!is_resonance) return std::nullopt;
    return gamma_limit;
  }
};
ResonanceReport resonance_analysis(const CoefficientModel& model, int sign,
                                   double tol = 1e-8);

}  // namespace jacobi_scatter
