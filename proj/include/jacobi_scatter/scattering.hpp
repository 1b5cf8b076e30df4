#pragma once

#include <vector>

#include "jacobi_scatter/spectral.hpp"

namespace jacobi_scatter {

// Perturbation determinant Delta(z) = det(I + V R_0(z)) = A * Omega(z);
// Delta -> 1 as z -> infinity (zeta -> 0).
Complex perturbation_determinant(const CoefficientModel& model,
                                 const SpectralParameter& sp, double tol = 1e-10);

// Direct dense determinant on the active block (finite-support models only);
// the independent route the analytic formula is checked against.
Complex determinant_finite_rank(const CoefficientModel& model,
                                const SpectralParameter& sp);

// Tr(R(z) - R_0(z)) two ways: -Omega'/Omega (central differences in zeta,
// chain rule to z) and the diagonal resolvent sum up to N.  Throws
// OracleMismatch when the routes disagree beyond the expected tail.
struct TraceResolventResult {
  Complex log_derivative_route;
  Complex diagonal_sum_route;
  double disagreement;
};
TraceResolventResult trace_resolvent_difference(const CoefficientModel& model,
                                                const SpectralParameter& sp,
                                                long N = 10000, double tol = 1e-10);

// ---- phase / scattering ------------------------------------------------------

// arg Omega(lambda+i0) continued radially from zeta = 0 (where arg -> 0 since
// Omega(0) = 1/A > 0); pins the 2 pi k ambiguity of the limit phase.
double unwrapped_arg_Omega(const CoefficientModel& model, double theta,
                           double tol = 1e-8);

struct ScatteringProfile {
  std::vector<double> theta;   // grid on (0, pi)
  std::vector<double> lambda;  // cos theta
  std::vector<double> kappa;   // |Omega(lambda+i0)| (limit amplitude)
  std::vector<double> eta;     // unwrapped limit phase
  std::vector<double> xi;      // eta / pi (spectral shift function)
  std::vector<double> w;       // weight
  std::vector<Complex> S;      // e^{-2 i eta}
  std::vector<Complex> delta_plus;  // Delta(lambda+i0)
};
ScatteringProfile phase_profile(const CoefficientModel& model,
                                const std::vector<double>& theta_grid,
                                double tol = 1e-8);

// S(lambda) = Omega(lambda-i0)/Omega(lambda+i0) = e^{-2 i eta}.
Complex scattering_matrix(const CoefficientModel& model, double lambda,
                          double tol = 1e-10);

// ---- stationary wave operators ------------------------------------------------

// (W_+- e_m, e_n) = integral psi_n(l) sigma_+-(l) psi^0_m(l) dl with
// psi_n = sqrt(w) P_n and sigma_+- = Omega(l +- i0)/|Omega|.
struct WaveOperatorBlock {
  long n_rows = 0, m_cols = 0;
  std::vector<Complex> entries;  // row-major
  Complex at(long n, long m) const { return entries[std::size_t(n * m_cols + m)]; }
};
WaveOperatorBlock wave_operator_block(const CoefficientModel& model, long n_rows,
                                      long m_cols, int sign, int base_panels = 48,
                                      int gl_order = 16, double tol = 1e-10);
Complex wave_operator_element(const CoefficientModel& model, long n, long m, int sign,
                              int base_panels = 48, int gl_order = 16,
                              double tol = 1e-10);

// ---- trace identities ---------------------------------------------------------

struct TraceIdentityResult {
  double lhs = 0.0;  // Tr(H^n - H0^n), truncated-matrix route
  double rhs = 0.0;  // n int xi l^{n-1} dl + eigenvalue ladder sums
  double residual = 0.0;
  double xi_integral = 0.0;
  double ladder_sum = 0.0;
};
TraceIdentityResult trace_power_identity(const CoefficientModel& model, int n_power,
                                         double tol = 1e-8);

// Diagonal sum of H^p - H0^p over the leading N x N block (exact for banded
// powers when N exceeds the active window).
double truncated_trace_power(const CoefficientModel& model, int p, long N);

// Tr(T_p(H) - T_p(H0)) via the Chebyshev matrix recurrence on the block.
double truncated_trace_chebyshev(const CoefficientModel& model, int p, long N);

// trace norm of the truncated perturbation (sum of singular values)
double perturbation_trace_norm(const CoefficientModel& model, long N = 4000);

// ---- Levinson -----------------------------------------------------------------

struct LevinsonResult {
  double xi_jump = 0.0;        // xi(1-0) - xi(-1+0)
  long n_eigenvalues = 0;
  double kappa_resonance = 0;  // 0, 1/2 or 1
  double residual = 0.0;
};
LevinsonResult levinson_check(const CoefficientModel& model, double tol = 1e-8);

}  // namespace jacobi_scatter
