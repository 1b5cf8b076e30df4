#pragma once

#include <vector>

#include "jacobi_scatter/coefficients.hpp"
#include "jacobi_scatter/numerics.hpp"

namespace jacobi_scatter {

// Symmetric tridiagonal matrix: diag[i] on the diagonal, off[i] coupling
// (i, i+1).
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;  // size = diag.size() - 1
  long n() const { return long(diag.size()); }
};

Tridiagonal leading_block(const CoefficientModel& model, long n);
// V = H - H0 truncated to its leading block.
Tridiagonal perturbation_block(const CoefficientModel& model, long n);

// Number of eigenvalues strictly below x (Sturm sequence / LDL^T pivots).
long sturm_count_below(const Tridiagonal& t, double x);

// Gershgorin enclosure of the spectrum.
void gershgorin_bounds(const Tridiagonal& t, double* lo, double* hi);

// k-th smallest eigenvalue (k = 0-based) by bisection.
double eigenvalue_by_index(const Tridiagonal& t, long k, double tol = 1e-12);

// All eigenvalues, ascending.
std::vector<double> all_eigenvalues(const Tridiagonal& t, double tol = 1e-12);

// Eigenvalues outside [-1-margin, 1+margin], ascending.
std::vector<double> eigenvalues_outside_band(const Tridiagonal& t, double margin,
                                             double tol = 1e-12);

// Trace norm of a symmetric tridiagonal (sum of |eigenvalues|).
double trace_norm(const Tridiagonal& t, double tol = 1e-12);

// Solves (T - z) x = e_k for a complex shift (Thomas algorithm).
std::vector<Complex> shifted_solve_unit(const Tridiagonal& t, Complex z, long k);

}  // namespace jacobi_scatter
