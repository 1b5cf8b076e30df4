#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "jacobi_scatter/jost.hpp"
#include "jacobi_scatter/quadrature.hpp"
#include "jacobi_scatter/tridiagonal.hpp"

namespace jacobi_scatter {

// Weight of the absolutely continuous spectral measure at e_0:
// w(lambda) = (2/pi) sqrt(1-lambda^2) |Omega(lambda+i0)|^-2.
double weight(const CoefficientModel& model, double lambda, double tol = 1e-10);

// ln w, using the family's closed form when it has one (needed where w
// under/overflows), otherwise the Jost route.
double log_weight(const CoefficientModel& model, double lambda, double tol = 1e-10);

// Free resolvent (R_0(z) e_n, e_m) = (zeta^{n+m+2} - zeta^{|n-m|}) / sqrt(z^2-1).
Complex free_resolvent_element(const SpectralParameter& sp, long n, long m);

// (R(z) e_n, e_m) = omega^-1 P_min f_max.
Complex resolvent_element(const CoefficientModel& model, const SpectralParameter& sp,
                          long n, long m, double tol = 1e-10);

// d(E(lambda) e_n, e_m)/dlambda = (2/pi) sqrt(1-l^2) |Omega|^-2 P_n P_m.
double spectral_density_element(const CoefficientModel& model, double lambda, long n,
                                long m, double tol = 1e-10);

// Tridiagonal-solve oracle: entry (n,m) of (H_N - z)^-1.
Complex resolvent_oracle(const CoefficientModel& model, Complex z, long n, long m,
                         long N = 2000);

// ---- discrete spectrum ------------------------------------------------------

struct DiscreteSpectrum {
  std::vector<double> lambdas;  // |lambda| > 1, sorted by |lambda| descending
  std::vector<double> mus;      // disc images, mu + 1/mu = 2 lambda
  std::optional<bool> resonance_plus;   // set when the edge analysis applies
  std::optional<bool> resonance_minus;
  double window = 1.0;                  // Gershgorin bound Lambda
  double oracle_deviation = 0.0;        // worst |lambda_k - sturm root|
};

// Zeros of Omega on the real axis outside [-1,1], bracketed on a scan grid
// and bisected; every root is confirmed against the truncated-matrix oracle.
DiscreteSpectrum eigenvalues(const CoefficientModel& model, double tol = 1e-10,
                             long oracle_n = 4000);

// Eigenvalues of the N x N leading block (Sturm bisection), ascending.
std::vector<double> truncated_eigenvalues_oracle(const CoefficientModel& model, long N);
double truncated_largest_eigenvalue(const CoefficientModel& model, long N);

// ---- measure integrals and reconstruction ------------------------------------

// integral of F d rho over (-1,1) evaluated in theta on a graded mesh
// (absorbs endpoint singularities of the weight).
double integrate_against_weight(const CoefficientModel& model,
                                const std::function<double(double)>& F,
                                int base_panels = 48, int gl_order = 16,
                                double tol = 1e-10);

double weight_mass(const CoefficientModel& model, double tol = 1e-10);

struct RecurrencePrefix {
  std::vector<double> a;
  std::vector<double> b;
};

// Orthonormalization of monomials against w via the three-term construction
// (each new polynomial is orthogonalized against its predecessors under the
// supplied rule); recovers a_n = k_n/k_{n+1} and b_n = r_n - r_{n+1}.
RecurrencePrefix stieltjes_reconstruction(const std::function<double(double)>& w,
                                          long n_out, const QuadratureRule& rule);
RecurrencePrefix stieltjes_reconstruction(const CoefficientModel& model, long n_out,
                                          int base_panels = 48, int gl_order = 16);

}  // namespace jacobi_scatter
