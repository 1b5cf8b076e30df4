#include "jacobi_scatter/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "jacobi_scatter/errors.hpp"

namespace jacobi_scatter {

namespace {

void require_summable(const CoefficientModel& model, const char* who) {
  if (model.decay_class() == DecayClass::unclassified)
    throw DecayClassError(std::string(who) + ": " + model.name() +
                          " has unclassified decay");
}

bool edge_ready(const CoefficientModel& model) {
  return model.decay_class() == DecayClass::finite_support ||
         model.decay_class() == DecayClass::first_moment;
}

}  // namespace

Complex perturbation_determinant(const CoefficientModel& model,
                                 const SpectralParameter& sp, double tol) {
  require_summable(model, "perturbation_determinant");
  return normalization_A(model) * jost_function(model, sp, tol);
}

Complex determinant_finite_rank(const CoefficientModel& model,
                                const SpectralParameter& sp) {
  if (!model.support())
    throw InvalidParameter("determinant_finite_rank needs a finite-support model");
  const long K = std::max<long>(*model.support() + 2, 1);
  // det(I + V R0) = det(I + R0 V) = det over the K x K active block
  std::vector<Complex> m(std::size_t(K * K), Complex(0.0));
  auto V = [&](long i, long j) -> double {
    if (i == j) return model.b(i);
    if (std::labs(i - j) == 1) return model.a(std::min(i, j)) - 0.5;
    return 0.0;
  };
  for (long i = 0; i < K; ++i)
    for (long j = 0; j < K; ++j) {
      Complex s = i == j ? 1.0 : 0.0;
      for (long k = std::max<long>(j - 1, 0); k <= std::min<long>(j + 1, K - 1); ++k)
        s += free_resolvent_element(sp, i, k) * V(k, j);
      m[std::size_t(i * K + j)] = s;
    }
  // LU with partial pivoting
  Complex det = 1.0;
  for (long c = 0; c < K; ++c) {
    long piv = c;
    for (long r = c + 1; r < K; ++r)
      if (std::abs(m[std::size_t(r * K + c)]) > std::abs(m[std::size_t(piv * K + c)]))
        piv = r;
    if (piv != c) {
      for (long j = 0; j < K; ++j)
        std::swap(m[std::size_t(c * K + j)], m[std::size_t(piv * K + j)]);
      det = -det;
    }
    const Complex p = m[std::size_t(c * K + c)];
    if (std::abs(p) == 0.0) return 0.0;
    det *= p;
    for (long r = c + 1; r < K; ++r) {
      const Complex f = m[std::size_t(r * K + c)] / p;
      for (long j = c; j < K; ++j) m[std::size_t(r * K + j)] -= f * m[std::size_t(c * K + j)];
    }
  }
  return det;
}

TraceResolventResult trace_resolvent_difference(const CoefficientModel& model,
                                                const SpectralParameter& sp, long N,
                                                double tol) {
  require_summable(model, "trace_resolvent_difference");
  require_off_edges(sp, "trace_resolvent_difference");
  if (sp.on_boundary())
    throw InvalidParameter("trace_resolvent_difference needs an interior parameter");
  TraceResolventResult out;
  // route (i): -dOmega/dz / Omega.  Omega evaluations carry a rough noise
  // floor near 1e-11 (truncation-ladder roundoff) that a 1/h difference
  // amplifies, so the derivative uses a fourth-order stencil at a step large
  // enough to keep the amplification below the agreement target.
  const Complex zeta = sp.zeta();
  const double dist_edges =
      std::min({std::abs(zeta - 1.0), std::abs(zeta + 1.0), 1.0 - std::abs(zeta)});
  const double h = std::min(1e-3 * std::max(1.0, std::abs(zeta)), 0.2 * dist_edges);
  const double dtol = std::min(tol, 1e-12);
  auto omega_at = [&](double k) {
    return jost_function(model, SpectralParameter::from_zeta(zeta + k * h), dtol);
  };
  const Complex om = jost_function(model, sp, dtol);
  if (std::abs(om) < 1e-12)
    throw EigenvalueProximity("trace_resolvent_difference: Omega ~ 0 (eigenvalue)");
  const Complex dOmega_dzeta =
      (omega_at(-2.0) - 8.0 * omega_at(-1.0) + 8.0 * omega_at(1.0) - omega_at(2.0)) /
      (12.0 * h);
  const Complex dz_dzeta = 0.5 * (1.0 - 1.0 / (zeta * zeta));
  out.log_derivative_route = -dOmega_dzeta / dz_dzeta / om;

  // route (ii): sum of diagonal resolvent differences in scaled variables;
  // partial sums at doubling marks are extrapolated (slow power tails leave a
  // c/N term in the bare sum)
  const JostSolution js = jost_backward(model, sp, tol);
  const Complex sq = sp.sqrt_z2m1();
  const long nmax = std::min<long>(std::max<long>(N, 64), js.m_keep - 1);
  const std::vector<Complex> p = scaled_regular_values(model, sp, nmax + 1);
  const Complex omega = js.omega();
  std::vector<Complex> marks;
  long next_mark = std::max<long>(nmax / 8, 16);
  Complex sum = 0.0;
  const Complex z2 = zeta * zeta;
  Complex zpow = z2;  // zeta^{2n+2}
  for (long n = 0; n <= nmax; ++n) {
    const Complex diag = p[std::size_t(n)] * js.h_at(n) / omega;
    const Complex diag0 = (zpow - 1.0) / sq;
    sum += diag - diag0;
    zpow *= z2;
    if (n + 1 == next_mark) {
      marks.push_back(sum);
      next_mark *= 2;
    }
  }
  double tail_est = 0.0;
  out.diagonal_sum_route =
      marks.size() >= 3 ? extrapolate_doubling(marks, &tail_est) : sum;
  out.disagreement = std::abs(out.log_derivative_route - out.diagonal_sum_route);
  const double allowed = std::max(1e-6, 10.0 * tail_est);
  if (out.disagreement > allowed)
    throw OracleMismatch("trace_resolvent_difference: routes differ by " +
                         std::to_string(out.disagreement));
  return out;
}

// ---- phase --------------------------------------------------------------------

namespace {

double principal_arg_near(Complex v, double guess) {
  double a = std::arg(v);
  while (a - guess > kPi) a -= 2.0 * kPi;
  while (a - guess < -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

double unwrapped_arg_Omega(const CoefficientModel& model, double theta, double tol) {
  require_summable(model, "unwrapped_arg_Omega");
  if (!(theta > 1e-6 && theta < kPi - 1e-6))
    throw EdgeProximity("unwrapped_arg_Omega: theta too close to 0 or pi");
  const Complex dir = std::polar(1.0, -theta);
  // coarse continuation along r*exp(-i theta); arg(Omega) starts near 0
  const double coarse_tol = 1e-3;
  double r = 1e-3;
  Complex om = jost_function(model, SpectralParameter::from_zeta(r * dir), coarse_tol);
  double arg = principal_arg_near(om, 0.0);
  if (std::abs(arg) > 0.3)
    throw ConvergenceError("phase anchor: arg Omega(0) not near 0");
  double step = 0.05;
  while (r < 1.0) {
    const double rn = std::min(1.0, r + step);
    const Complex omn =
        jost_function(model, SpectralParameter::from_zeta(rn * dir), coarse_tol);
    if (std::abs(omn) < 1e-8)
      throw ConvergenceError("radial path passes within 1e-8 of a zero of Delta");
    const double argn = principal_arg_near(omn, arg);
    const double delta = std::abs(argn - arg);
    if (delta > kPi / 4.0 && rn - r > 1e-6) {
      step *= 0.5;
      continue;
    }
    arg = argn;
    r = rn;
    if (delta < kPi / 16.0) step = std::min(step * 1.5, 0.05);
  }
  // precise boundary value, branch fixed by the coarse continuation
  const Complex om_b =
      jost_function(model, zeta_of(std::cos(theta), Side::boundary_plus), tol);
  return principal_arg_near(om_b, arg);
}

ScatteringProfile phase_profile(const CoefficientModel& model,
                                const std::vector<double>& theta_grid, double tol) {
  require_summable(model, "phase_profile");
  for (double th : theta_grid)
    if (!(th >= 1e-3 && th <= kPi - 1e-3))
      throw InvalidParameter("phase_profile: grid must stay 1e-3 away from 0 and pi");
  const double A = normalization_A(model);
  ScatteringProfile prof;
  const std::size_t n = theta_grid.size();
  prof.theta = theta_grid;
  prof.lambda.resize(n);
  prof.kappa.resize(n);
  prof.eta.resize(n);
  prof.xi.resize(n);
  prof.w.resize(n);
  prof.S.resize(n);
  prof.delta_plus.resize(n);
  parallel_for(n, [&](std::size_t i) {
    const double th = theta_grid[i];
    const double lam = std::cos(th);
    const Complex om = jost_function(model, zeta_of(lam, Side::boundary_plus), tol);
    const double eta = unwrapped_arg_Omega(model, th, tol);
    prof.lambda[i] = lam;
    prof.kappa[i] = std::abs(om);
    prof.eta[i] = eta;
    prof.xi[i] = eta / kPi;
    prof.w[i] = 2.0 / kPi * std::sin(th) / std::norm(om);
    prof.S[i] = std::conj(om) / om;
    prof.delta_plus[i] = A * om;
  });
  return prof;
}

Complex scattering_matrix(const CoefficientModel& model, double lambda, double tol) {
  require_summable(model, "scattering_matrix");
  if (!(std::abs(lambda) <= 1.0 - kEdgeGuard))
    throw EdgeProximity("scattering_matrix: |lambda| too close to 1");
  const Complex om = jost_function(model, zeta_of(lambda, Side::boundary_plus), tol);
  // Omega(lambda-i0) = conj(Omega(lambda+i0)) for real coefficients
  return std::conj(om) / om;
}

// ---- wave operators -----------------------------------------------------------

WaveOperatorBlock wave_operator_block(const CoefficientModel& model, long n_rows,
                                      long m_cols, int sign, int base_panels,
                                      int gl_order, double tol) {
  require_summable(model, "wave_operator_block");
  if (sign != 1 && sign != -1) throw InvalidParameter("wave operator sign must be +-1");
  WaveOperatorBlock blk;
  blk.n_rows = n_rows;
  blk.m_cols = m_cols;
  blk.entries.assign(std::size_t(n_rows * m_cols), Complex(0.0));
  // every node takes a boundary Jost solve, so the mesh stops at the edge
  // guard; the integrand vanishes at least linearly at the endpoints
  const PanelMesh mesh = graded_mesh(2e-6, kPi - 2e-6, true, true, base_panels, 1e-7);
  const QuadratureRule rule = panel_rule(mesh, gl_order);
  const std::size_t nodes = rule.nodes.size();
  std::vector<std::vector<Complex>> contrib(nodes);
  parallel_for(nodes, [&](std::size_t q) {
    const double th = rule.nodes[q];
    const double lam = std::cos(th);
    const double sth = std::sin(th);
    const Complex om = jost_function(model, zeta_of(lam, Side::boundary_plus), tol);
    const Complex sigma = sign > 0 ? om / std::abs(om) : std::conj(om) / std::abs(om);
    const double w = 2.0 / kPi * sth / std::norm(om);
    const double w0 = 2.0 / kPi * sth;
    const std::vector<double> P = regular_poly_values(model, lam, n_rows);
    std::vector<Complex> local(std::size_t(n_rows * m_cols));
    // psi^0_m = sqrt(w0) sin((m+1) th)/sin th
    for (long mcol = 0; mcol < m_cols; ++mcol) {
      const double u = std::sin((double(mcol) + 1.0) * th) / sth;
      const Complex col = rule.weights[q] * std::sqrt(w * w0) * sigma * u * sth;
      for (long nrow = 0; nrow < n_rows; ++nrow)
        local[std::size_t(nrow * m_cols + mcol)] = P[std::size_t(nrow)] * col;
    }
    contrib[q] = std::move(local);
  });
  for (const auto& local : contrib)
    for (std::size_t k = 0; k < blk.entries.size(); ++k) blk.entries[k] += local[k];
  return blk;
}

Complex wave_operator_element(const CoefficientModel& model, long n, long m, int sign,
                              int base_panels, int gl_order, double tol) {
  const WaveOperatorBlock blk =
      wave_operator_block(model, n + 1, m + 1, sign, base_panels, gl_order, tol);
  return blk.at(n, m);
}

// ---- trace identities -----------------------------------------------------------

double truncated_trace_power(const CoefficientModel& model, int p, long N) {
  if (p < 1) throw InvalidParameter("trace power order must be >= 1");
  // (H^p)_{jj} via p applications of the band row action on e_j; the window
  // [j-p, j+p] captures everything
  auto diag_power = [&](bool perturbed, long j) {
    const long lo = std::max<long>(j - p, 0), hi = j + p;
    const long len = hi - lo + 1;
    const std::size_t ulen = static_cast<std::size_t>(len);
    std::vector<double> v(ulen, 0.0);
    std::vector<double> nv(ulen);
    v[std::size_t(j - lo)] = 1.0;
    for (int it = 0; it < p; ++it) {
      for (long i = lo; i <= hi; ++i) {
        const double a_im1 = perturbed ? (i > 0 ? model.a(i - 1) : 0.0) : 0.5;
        const double a_i = perturbed ? model.a(i) : 0.5;
        const double b_i = perturbed ? model.b(i) : 0.0;
        double s = b_i * v[std::size_t(i - lo)];
        if (i > lo) s += (i > 0 ? a_im1 : 0.0) * v[std::size_t(i - lo) - 1];
        if (i < hi) s += a_i * v[std::size_t(i - lo) + 1];
        nv[std::size_t(i - lo)] = s;
      }
      v.swap(nv);
    }
    return v[std::size_t(j - lo)];
  };
  double s = 0.0, c = 0.0;
  for (long j = 0; j < N; ++j) {
    const double y = diag_power(true, j) - diag_power(false, j) - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double truncated_trace_chebyshev(const CoefficientModel& model, int p, long N) {
  if (p < 0) throw InvalidParameter("chebyshev trace order must be >= 0");
  if (p == 0) return 0.0;
  // T_p(H) has bandwidth p; track the column windows of T_{k}(H)e_j
  auto diag_cheb = [&](bool perturbed, long j) {
    const long lo = std::max<long>(j - p - 2, 0), hi = j + p + 2;
    const long len = hi - lo + 1;
    const std::size_t ulen = static_cast<std::size_t>(len);
    std::vector<double> tm1(ulen, 0.0);
    std::vector<double> t0(ulen, 0.0);
    std::vector<double> t1(ulen);
    tm1[std::size_t(j - lo)] = 1.0;  // T_0 e_j
    auto applyH = [&](const std::vector<double>& v, std::vector<double>& out) {
      for (long i = lo; i <= hi; ++i) {
        const double a_im1 = perturbed ? (i > 0 ? model.a(i - 1) : 0.0) : 0.5;
        const double a_i = perturbed ? model.a(i) : 0.5;
        const double b_i = perturbed ? model.b(i) : 0.0;
        double s = b_i * v[std::size_t(i - lo)];
        if (i > lo) s += (i > 0 ? a_im1 : 0.0) * v[std::size_t(i - lo) - 1];
        if (i < hi) s += a_i * v[std::size_t(i - lo) + 1];
        out[std::size_t(i - lo)] = s;
      }
    };
    applyH(tm1, t0);  // T_1 e_j = H e_j
    if (p == 1) return t0[std::size_t(j - lo)];
    for (int k = 2; k <= p; ++k) {
      applyH(t0, t1);
      for (std::size_t i = 0; i < t1.size(); ++i) t1[i] = 2.0 * t1[i] - tm1[i];
      tm1.swap(t0);
      t0.swap(t1);
    }
    return t0[std::size_t(j - lo)];
  };
  double s = 0.0, c = 0.0;
  for (long j = 0; j < N; ++j) {
    const double y = diag_cheb(true, j) - diag_cheb(false, j) - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double perturbation_trace_norm(const CoefficientModel& model, long N) {
  return trace_norm(perturbation_block(model, N));
}

namespace {

// n int_{-1}^{1} xi(l) l^{n-1} dl on a graded theta mesh
double xi_moment(const CoefficientModel& model, int n_power, double tol) {
  const PanelMesh mesh = graded_mesh(1e-5, kPi - 1e-5, true, true, 24, 2e-6);
  const double integral = integrate_panels(mesh, 12, [&](double th) {
    const double xi = unwrapped_arg_Omega(model, th, tol) / kPi;
    return xi * std::pow(std::cos(th), double(n_power - 1)) * std::sin(th);
  });
  return double(n_power) * integral;
}

}  // namespace

TraceIdentityResult trace_power_identity(const CoefficientModel& model, int n_power,
                                         double tol) {
  require_summable(model, "trace_power_identity");
  TraceIdentityResult out;

  // lhs: truncated diagonal sums, grown geometrically until stable; slow
  // power tails leave a c/N term that the doubling scheme extrapolates away
  long N = model.support() ? *model.support() + n_power + 2 : 512;
  double lhs = truncated_trace_power(model, n_power, N);
  if (!model.support()) {
    std::vector<double> ladder{lhs};
    for (int it = 0; it < 8; ++it) {
      N *= 2;
      ladder.push_back(truncated_trace_power(model, n_power, N));
      double err = 0.0;
      const double ex = extrapolate_doubling(ladder, &err);
      if (ladder.size() >= 3 && err < 0.25 * tol) {
        lhs = ex;
        break;
      }
      lhs = ex;
    }
  }
  out.lhs = lhs;

  // rhs: spectral shift moment plus the eigenvalue ladder sums
  out.xi_integral = xi_moment(model, n_power, tol);
  const DiscreteSpectrum ds = eigenvalues(model, 1e-12);
  std::vector<double> above, below;
  for (double lam : ds.lambdas) (lam > 1.0 ? above : below).push_back(lam);
  std::sort(above.begin(), above.end(), std::greater<double>());
  std::sort(below.begin(), below.end());
  auto ladder = [&](const std::vector<double>& lams, double edge) {
    double s = 0.0;
    for (std::size_t k = 0; k < lams.size(); ++k) {
      const double next = k + 1 < lams.size() ? lams[k + 1] : edge;
      s += double(k + 1) *
           (std::pow(lams[k], double(n_power)) - std::pow(next, double(n_power)));
    }
    return s;
  };
  out.ladder_sum = ladder(above, 1.0) + ladder(below, -1.0);
  out.rhs = out.xi_integral + out.ladder_sum;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

LevinsonResult levinson_check(const CoefficientModel& model, double tol) {
  if (!edge_ready(model))
    throw DecayClassError(
        "levinson_check requires summable first moments (finite discrete spectrum)");
  LevinsonResult out;
  auto xi_limit = [&](bool upper) {
    std::vector<double> ladder;
    for (int j = 0; j < 5; ++j) {
      const double th0 = 2e-2 * std::pow(2.0, -j);
      const double th = upper ? th0 : kPi - th0;
      ladder.push_back(unwrapped_arg_Omega(model, th, tol) / kPi);
    }
    return extrapolate_doubling(ladder);
  };
  out.xi_jump = xi_limit(true) - xi_limit(false);
  const DiscreteSpectrum ds = eigenvalues(model, 1e-12);
  out.n_eigenvalues = long(ds.lambdas.size());
  double kap = 0.0;
  if (ds.resonance_plus.value_or(false)) kap += 0.5;
  if (ds.resonance_minus.value_or(false)) kap += 0.5;
  out.kappa_resonance = kap;
  out.residual = std::abs(out.xi_jump - (double(out.n_eigenvalues) + kap));
  return out;
}

}  // namespace jacobi_scatter
