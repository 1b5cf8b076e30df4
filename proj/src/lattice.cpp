#include "jacobi_scatter/lattice.hpp"

#include <cmath>

#include "jacobi_scatter/errors.hpp"

namespace jacobi_scatter {

namespace {
using LComplex = std::complex<long double>;
}

SpectralParameter SpectralParameter::interior_z(Complex z) {
  if (z.imag() == 0.0 && z.real() >= -1.0 && z.real() <= 1.0)
    throw InvalidParameter(
        "z on the cut [-1,1] needs a side annotation; use zeta_of(lambda, side)");
  // Roots of q^2 - 2 z q + 1 multiply to 1; the disc root is the reciprocal
  // of the larger one, which is computed without cancellation.
  const Complex s = std::sqrt(z * z - 1.0);
  const Complex r1 = z - s;
  const Complex r2 = z + s;
  const Complex big = std::abs(r1) >= std::abs(r2) ? r1 : r2;
  return SpectralParameter(1.0 / big, Side::interior);
}

SpectralParameter SpectralParameter::boundary(double lambda, Side side) {
  if (side == Side::interior)
    throw InvalidParameter("boundary() requires a +-i0 side");
  if (!(lambda > -1.0 && lambda < 1.0))
    throw InvalidParameter("boundary value must lie in (-1,1)");
  const double theta = std::acos(lambda);
  const Complex zeta = side == Side::boundary_plus
                           ? std::polar(1.0, -theta)
                           : std::polar(1.0, theta);
  return SpectralParameter(zeta, side);
}

SpectralParameter SpectralParameter::from_zeta(Complex zeta) {
  const double r = std::abs(zeta);
  if (!(r > 0.0)) throw InvalidParameter("zeta must be nonzero");
  if (r > 1.0 + 1e-14) throw InvalidParameter("zeta must lie in the closed unit disc");
  if (r >= 1.0 - 1e-14) {
    // on the circle: lower half encodes lambda+i0, upper half lambda-i0
    zeta /= r;
    return SpectralParameter(zeta, zeta.imag() <= 0.0 ? Side::boundary_plus
                                                      : Side::boundary_minus);
  }
  return SpectralParameter(zeta, Side::interior);
}

double SpectralParameter::theta() const {
  if (!on_boundary()) throw InvalidParameter("theta defined on the boundary only");
  return std::abs(std::arg(zeta_));
}

double SpectralParameter::lambda() const {
  if (!on_boundary()) throw InvalidParameter("lambda defined on the boundary only");
  return zeta_.real();
}

SpectralParameter SpectralParameter::conjugate() const {
  Side s = side_;
  if (s == Side::boundary_plus)
    s = Side::boundary_minus;
  else if (s == Side::boundary_minus)
    s = Side::boundary_plus;
  return SpectralParameter(std::conj(zeta_), s);
}

SpectralParameter zeta_of(Complex z) { return SpectralParameter::interior_z(z); }

SpectralParameter zeta_of(double lambda, Side side) {
  return SpectralParameter::boundary(lambda, side);
}

void require_off_edges(const SpectralParameter& sp, const char* who) {
  const Complex zeta = sp.zeta();
  if (std::abs(zeta - 1.0) < kEdgeGuard || std::abs(zeta + 1.0) < kEdgeGuard)
    throw EdgeProximity(std::string(who) +
                        ": zeta within 1e-6 of +-1; use the dedicated edge routines");
}

PolySequence::PolySequence(std::vector<Complex> values_from_minus1,
                           SpectralParameter sp, SequenceKind kind)
    : v_(std::move(values_from_minus1)), sp_(sp), kind_(kind) {
  if (v_.size() < 2) throw InvalidParameter("PolySequence needs indices -1 and 0");
}

PolySequence regular_polynomials(const CoefficientModel& model,
                                 const SpectralParameter& sp, long n_max) {
  if (n_max < 0) throw InvalidParameter("regular_polynomials: n_max must be >= 0");
  std::vector<Complex> v(std::size_t(n_max) + 2);
  const LComplex z{sp.z().real(), sp.z().imag()};
  LComplex pm1 = 0.0L, p0 = 1.0L;
  v[0] = Complex(0.0, 0.0);
  v[1] = Complex(1.0, 0.0);
  long double am1 = 0.5L;
  for (long n = 0; n < n_max; ++n) {
    const long double an = model.a(n);
    const LComplex p1 = ((z - LComplex(model.b(n))) * p0 - am1 * pm1) / an;
    v[std::size_t(n) + 2] = Complex(double(p1.real()), double(p1.imag()));
    pm1 = p0;
    p0 = p1;
    am1 = an;
  }
  return PolySequence(std::move(v), sp, SequenceKind::regular_P);
}

std::vector<double> regular_poly_values(const CoefficientModel& model, double lambda,
                                        long n_max) {
  std::vector<double> v(std::size_t(n_max) + 1);
  long double pm1 = 0.0L, p0 = 1.0L, am1 = 0.5L;
  const long double lam = static_cast<long double>(lambda);
  v[0] = 1.0;
  for (long n = 0; n < n_max; ++n) {
    const long double an = model.a(n);
    const long double p1 =
        ((lam - static_cast<long double>(model.b(n))) * p0 - am1 * pm1) / an;
    v[std::size_t(n) + 1] = double(p1);
    pm1 = p0;
    p0 = p1;
    am1 = an;
  }
  return v;
}

Complex chebyshev_U(long n, const SpectralParameter& sp) {
  if (n < -1) throw InvalidParameter("chebyshev_U: n >= -1");
  if (n == -1) return 0.0;
  if (sp.on_boundary()) {
    const double theta = sp.theta();
    return std::sin((double(n) + 1.0) * theta) / std::sin(theta);
  }
  require_off_edges(sp, "chebyshev_U");
  const Complex zeta = sp.zeta();
  return (std::pow(zeta, -double(n) - 1.0) - std::pow(zeta, double(n) + 1.0)) /
         (2.0 * sp.sqrt_z2m1());
}

double chebyshev_T(long n, double lambda) {
  if (n < 0) throw InvalidParameter("chebyshev_T: n >= 0");
  if (lambda >= -1.0 && lambda <= 1.0)
    return std::cos(double(n) * std::acos(lambda));
  // Clenshaw-free exterior evaluation via the recurrence
  double tm1 = 1.0, t0 = lambda;
  if (n == 0) return 1.0;
  for (long k = 1; k < n; ++k) {
    const double t1 = 2.0 * lambda * t0 - tm1;
    tm1 = t0;
    t0 = t1;
  }
  return t0;
}

Complex wronskian(const PolySequence& u, const PolySequence& v,
                  const CoefficientModel& model, long n) {
  if (n < -1 || n + 1 > u.max_index() || n + 1 > v.max_index())
    throw InvalidParameter("wronskian: index out of range");
  const double an = n < 0 ? 0.5 : model.a(n);
  return an * (u[n] * v[n + 1] - u[n + 1] * v[n]);
}

Complex apply_H(const CoefficientModel& model, const PolySequence& u, long n) {
  if (n < 0 || n + 1 > u.max_index())
    throw InvalidParameter("apply_H: needs neighbours n-1, n, n+1");
  // operator convention u_{-1} = 0 (the u[-1] slot of a solution sequence is
  // a boundary value, not part of l^2(Z+))
  const Complex um1 = n == 0 ? Complex(0.0) : u[n - 1];
  const double am1 = n == 0 ? 0.5 : model.a(n - 1);
  return am1 * um1 + model.b(n) * u[n] + model.a(n) * u[n + 1];
}

Complex apply_V(const CoefficientModel& model, const PolySequence& u, long n) {
  if (n < 0 || n + 1 > u.max_index())
    throw InvalidParameter("apply_V: needs neighbours n-1, n, n+1");
  const Complex um1 = n == 0 ? Complex(0.0) : u[n - 1];  // V acts on l^2(Z+)
  const double am1 = n == 0 ? 0.0 : model.a(n - 1) - 0.5;
  return am1 * um1 + model.b(n) * u[n] + (model.a(n) - 0.5) * u[n + 1];
}

double apply_H(const CoefficientModel& model, const std::vector<double>& u, long n) {
  if (n < 0 || std::size_t(n + 1) >= u.size())
    throw InvalidParameter("apply_H: needs neighbours n-1, n, n+1");
  const double um1 = n == 0 ? 0.0 : u[std::size_t(n - 1)];
  const double am1 = n == 0 ? 0.5 : model.a(n - 1);
  return am1 * um1 + model.b(n) * u[std::size_t(n)] +
         model.a(n) * u[std::size_t(n + 1)];
}

double recurrence_residual(const CoefficientModel& model, const PolySequence& u) {
  const Complex z = u.parameter().z();
  double worst = 0.0;
  for (long n = 0; n + 1 <= u.max_index(); ++n) {
    const Complex um1 = u[n - 1];
    const double am1 = n == 0 ? 0.5 : model.a(n - 1);
    const Complex lhs = am1 * um1 + model.b(n) * u[n] + model.a(n) * u[n + 1];
    const Complex rhs = z * u[n];
    const double scale = std::abs(lhs) + std::abs(rhs) + std::abs(um1) +
                         std::abs(u[n + 1]) + 1e-300;
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

PolySequence growing_solution(const CoefficientModel& model, const PolySequence& f,
                              long n0, long n_max) {
  if (f.kind() != SequenceKind::jost_f)
    throw InvalidParameter("growing_solution expects a Jost sequence");
  if (n_max + 1 > f.max_index() || n0 < 0 || n0 > n_max)
    throw InvalidParameter("growing_solution: index range invalid");
  // need f_m != 0 on [n0-1, n_max]; advance n0 past any zero, judged against
  // the natural scale |zeta|^m
  const double r = std::abs(f.parameter().zeta());
  long start = n0;
  for (long m = std::max<long>(n0 - 1, -1); m <= n_max; ++m) {
    const double scale = std::pow(r, double(m)) + std::abs(f[m]);
    if (std::abs(f[m]) < 1e-8 * scale) start = m + 2;
  }
  if (start >= n_max)
    throw ConvergenceError("growing_solution: Jost values vanish through the range");
  std::vector<Complex> g(std::size_t(n_max) + 2, Complex(0.0));
  Complex theta = 0.0;
  for (long n = start; n <= n_max; ++n) {
    const double am1 = n == 0 ? 0.5 : model.a(n - 1);
    theta += 1.0 / (am1 * f[n - 1] * f[n]);
    g[std::size_t(n) + 1] = f[n] * theta;
  }
  // extend below start by running the recurrence backwards so the sequence
  // solves the equation on the full range
  const Complex z = f.parameter().z();
  for (long n = start - 1; n >= -1; --n) {
    const double an = n < 0 ? 0.5 : model.a(n);
    const double an1 = model.a(n + 1);
    const double bn1 = model.b(n + 1);
    // a_n g_n = (z - b_{n+1}) g_{n+1} - a_{n+1} g_{n+2}
    g[std::size_t(n) + 1] =
        ((z - bn1) * g[std::size_t(n) + 2] - an1 * g[std::size_t(n) + 3]) / an;
  }
  return PolySequence(std::move(g), f.parameter(), SequenceKind::growing_g);
}

}  // namespace jacobi_scatter
