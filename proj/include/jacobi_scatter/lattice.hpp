#pragma once

#include <vector>

#include "jacobi_scatter/coefficients.hpp"
#include "jacobi_scatter/numerics.hpp"

namespace jacobi_scatter {

enum class Side { interior, boundary_plus, boundary_minus };

// A point of the zeta-disc encoding z in C \ [-1,1] or a boundary value
// lambda +- i0.  zeta(z) = z - sqrt(z^2-1) with the branch fixed by
// sqrt(z^2-1) > 0 for z > 1; then |zeta| < 1 and 2z = zeta + 1/zeta.
// On the cut, zeta(lambda +- i0) = exp(-+ i theta), theta = arccos lambda.
class SpectralParameter {
 public:
  static SpectralParameter interior_z(Complex z);
  static SpectralParameter boundary(double lambda, Side side);
  static SpectralParameter from_zeta(Complex zeta);  // |zeta| <= 1 enforced

  Complex zeta() const { return zeta_; }
  Complex z() const { return 0.5 * (zeta_ + 1.0 / zeta_); }
  // Branch-consistent sqrt(z^2-1) = (1/zeta - zeta)/2.
  Complex sqrt_z2m1() const { return 0.5 * (1.0 / zeta_ - zeta_); }
  Side side() const { return side_; }
  double theta() const;           // boundary points only
  double lambda() const;          // boundary points only
  bool on_boundary() const { return side_ != Side::interior; }
  SpectralParameter conjugate() const;

 private:
  SpectralParameter(Complex zeta, Side side) : zeta_(zeta), side_(side) {}
  Complex zeta_;
  Side side_;
};

SpectralParameter zeta_of(Complex z);
SpectralParameter zeta_of(double lambda, Side side);

// Distance guard around zeta = +-1 below which disc-variable operations
// refuse instead of dividing by a vanishing zeta - 1/zeta.
constexpr double kEdgeGuard = 1e-6;
void require_off_edges(const SpectralParameter& sp, const char* who);

enum class SequenceKind { regular_P, jost_f, growing_g, chebyshev_U, chebyshev_T };

// A solution of the three-term recurrence sampled on indices [-1, N].
class PolySequence {
 public:
  PolySequence(std::vector<Complex> values_from_minus1, SpectralParameter sp,
               SequenceKind kind);

  Complex operator[](long n) const { return v_[std::size_t(n + 1)]; }
  long max_index() const { return long(v_.size()) - 2; }
  const SpectralParameter& parameter() const { return sp_; }
  SequenceKind kind() const { return kind_; }

 private:
  std::vector<Complex> v_;
  SpectralParameter sp_;
  SequenceKind kind_;
};

// Orthonormal-polynomial solution: P_{-1} = 0, P_0 = 1, forward recurrence
// a_{n-1} u_{n-1} + b_n u_n + a_n u_{n+1} = z u_n.
PolySequence regular_polynomials(const CoefficientModel& model,
                                 const SpectralParameter& sp, long n_max);

// Real-axis fast path: P_n(lambda) for n in [0, n_max] with extended-precision
// accumulation (the boundary recurrence is neutrally stable).
std::vector<double> regular_poly_values(const CoefficientModel& model, double lambda,
                                        long n_max);

// Chebyshev closed forms.
Complex chebyshev_U(long n, const SpectralParameter& sp);  // second kind, normalized
double chebyshev_T(long n, double lambda);                 // first kind, on [-1,1]

// Wronskian a_n (u_n v_{n+1} - u_{n+1} v_n); constant in n for two solutions
// of the same recurrence.  a_{-1} = 1/2.
Complex wronskian(const PolySequence& u, const PolySequence& v,
                  const CoefficientModel& model, long n);

// (H u)_n and (V u)_n with the convention u_{-1} = 0 handled by the caller
// passing sequences indexed from -1.
Complex apply_H(const CoefficientModel& model, const PolySequence& u, long n);
Complex apply_V(const CoefficientModel& model, const PolySequence& u, long n);
double apply_H(const CoefficientModel& model, const std::vector<double>& u_from0,
               long n);

// Largest relative residual of the recurrence over interior indices.
double recurrence_residual(const CoefficientModel& model, const PolySequence& u);

// Exponentially growing companion solution g_n = f_n * Theta_n,
// Theta_n = sum_{m=n0}^n (a_{m-1} f_{m-1} f_m)^{-1}; satisfies {f,g} = 1 and
// zeta^n g_n -> 1/sqrt(z^2-1).
PolySequence growing_solution(const CoefficientModel& model, const PolySequence& jost_f,
                              long n0, long n_max);

}  // namespace jacobi_scatter
