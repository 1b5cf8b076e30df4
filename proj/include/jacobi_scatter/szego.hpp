#pragma once

#include <vector>

#include "jacobi_scatter/scattering.hpp"

namespace jacobi_scatter {

// Integral of F(lambda) against (1-lambda^2)^(-1/2), evaluated as an integral
// of F(cos theta) over (0,pi) on a mesh graded into both endpoints (the
// Chebyshev substitution absorbs the algebraic singularity; grading absorbs
// logarithmic factors of the Szego-class integrands).
double chebweight_integral(const std::function<double(double)>& F_of_lambda,
                           int base_panels = 64, int gl_order = 16,
                           double min_theta = 1e-8);
double chebweight_integral_theta(const std::function<double(double)>& F_of_theta,
                                 double lo = 0.0, double hi = kPi,
                                 int base_panels = 64, int gl_order = 16,
                                 double min_width = 1e-8);

// Szego function D(zeta) from the Jensen-Poisson integral of
// ln(w(cos theta)|sin theta|).  The integrand is sampled once on a graded
// theta mesh; each D evaluation is then a weighted sum, so grids are cheap.
class SzegoEvaluator {
 public:
  explicit SzegoEvaluator(const CoefficientModel& model, int base_panels = 64,
                          int gl_order = 16, double tol = 1e-10);

  Complex D(Complex zeta) const;  // |zeta| <= 0.999
  std::size_t node_count() const { return rule_.nodes.size(); }
  // change of the plain log-integral under node doubling (Szego-condition
  // stability indicator used by the constructor)
  double refinement_drift() const { return drift_; }

 private:
  QuadratureRule rule_;    // theta nodes/weights
  std::vector<double> u_;  // ln(w |sin|) at the nodes
  double drift_ = 0.0;
};

Complex szego_function(const CoefficientModel& model, Complex zeta,
                       int base_panels = 64, double tol = 1e-10);

// Blaschke product over the disc images of the eigenvalues.
Complex blaschke(const std::vector<double>& mu, Complex zeta);

// max over the grid of |Delta~ - A B (1-zeta^2) / (sqrt(2 pi) D)|
double factorization_residual(const CoefficientModel& model,
                              const std::vector<Complex>& zeta_grid,
                              double tol = 1e-10);

struct SzegoEvaluation {
  Complex D;
  Complex B;
  Complex delta;  // determinant route
  double factorization_residual;
};
SzegoEvaluation evaluate_szego(const CoefficientModel& model, Complex zeta,
                               double tol = 1e-10);

// ---- Case sum rules -----------------------------------------------------------

struct SumRuleResult {
  int order = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double eigenvalue_term = 0.0;  // rhs part from the discrete spectrum
  double integral_term = 0.0;    // rhs part from the weight
};
// order 0:  sum ln(2 a_k) + sum ln|mu_k| = (2 pi)^-1 int ln(w/w0) dl/sqrt(1-l^2)
// order n:  Tr(T_n(H) - T_n(H0)) = -1/2 sum (mu_k^n - mu_k^-n)
//           + (n/2 pi) int ln(w/w0) T_n dl/sqrt(1-l^2)
SumRuleResult case_sum_rule(const CoefficientModel& model, int order,
                            double tol = 1e-8);

// ---- Szego-condition probe ------------------------------------------------------

struct SzegoProbe {
  bool converges = false;
  // d(partial integral)/d ln(1/eps) per endpoint, fitted over the ladder
  double growth_plus = 0.0;
  double growth_minus = 0.0;
  std::vector<double> eps;
  std::vector<double> partial;       // two-sided partial Szego integrals
  std::vector<double> partial_plus;  // upper-end partials
  bool weak_converges = false;       // integral against (1-l^2)^{+1/2}
  double weak_value = 0.0;
};
SzegoProbe szego_condition_probe(const CoefficientModel& model,
                                 std::vector<double> eps_ladder = {});

}  // namespace jacobi_scatter
