#include "jacobi_scatter/jost.hpp"

#include <algorithm>
#include <cmath>

#include "jacobi_scatter/errors.hpp"

namespace jacobi_scatter {

namespace {

constexpr long kDirectCap = 1 << 16;
constexpr long kKeepCap = 1 << 14;
constexpr int kMaxLadder = 6;

// One backward pass for the model truncated at M (a_n free for n >= M, b_n
// free for n > M), in the reduced variable h_n = f_n zeta^-n:
//   a_{n-1} h_{n-1} = ((1+zeta^2)/2 - b_n zeta) h_n - a_n zeta^2 h_{n+1}.
// Returns h on [-1, M+1].
std::vector<Complex> backward_pass_h(const CoefficientModel& model, Complex zeta,
                                     long M) {
  std::vector<double> a, b;
  fill_coefficients(model, M, a, b);
  std::vector<Complex> h(std::size_t(M) + 3);
  const Complex z2 = zeta * zeta;
  const Complex half1pz2 = 0.5 * (1.0 + z2);
  h[std::size_t(M) + 2] = 1.0;
  h[std::size_t(M) + 1] = 1.0;
  for (long n = M; n >= 0; --n) {
    const double am1 = n == 0 ? 0.5 : a[std::size_t(n) - 1];
    const double an = n == M ? 0.5 : a[std::size_t(n)];
    h[std::size_t(n)] = ((half1pz2 - b[std::size_t(n)] * zeta) * h[std::size_t(n) + 1] -
                         an * z2 * h[std::size_t(n) + 2]) /
                        am1;
  }
  return h;
}

// One Volterra pass on the same truncated model, also in the reduced
// variable; returns h on [-1, M+1] and appends iterate sup norms.
std::vector<Complex> volterra_pass_h(const CoefficientModel& model, Complex zeta,
                                     long M, double term_tol,
                                     std::vector<double>* iterate_sup) {
  std::vector<double> a, b;
  fill_coefficients(model, M, a, b);
  auto a_of = [&](long n) { return n < 0 ? 0.5 : (n >= M ? 0.5 : a[std::size_t(n)]); };
  auto b_of = [&](long n) { return n > M ? 0.0 : b[std::size_t(n)]; };
  const Complex sq = 0.5 * (1.0 / zeta - zeta);  // sqrt(z^2-1)
  const Complex z2 = zeta * zeta;

  // G_{n,m} = zeta^{2(m-n)} d_m - e_m for m in [n+1, M], zero beyond
  const std::size_t len = std::size_t(M) + 2;  // unknowns g_n, n in [-1, M]
  std::vector<Complex> d(len), e(len);
  for (long m = 0; m <= M; ++m) {
    const double da1 = a_of(m - 1) - 0.5;
    const double da2 = a_of(m) - 0.5;
    const Complex den = 2.0 * a_of(m) * sq;
    d[std::size_t(m) + 1] = (b_of(m) + da1 / zeta + da2 * zeta) / den;
    e[std::size_t(m) + 1] = (b_of(m) + da1 * zeta + da2 / zeta) / den;
  }

  std::vector<Complex> g(len, 1.0), gk(len, 1.0), gnext(len);
  for (int k = 0; k < 200; ++k) {
    // suffix recurrences: T_n = zeta^2 (d_{n+1} g_{n+1} + T_{n+1}), U plain
    Complex T = 0.0, U = 0.0;
    for (long n = M - 1; n >= -1; --n) {
      const std::size_t i = std::size_t(n) + 1;
      T = z2 * (d[i + 1] * gk[i + 1] + T);
      U += e[i + 1] * gk[i + 1];
      gnext[i] = T - U;
    }
    gnext[len - 1] = 0.0;  // g_M stays 1: no kernel mass beyond M
    double sup = 0.0;
    for (const Complex& v : gnext) sup = std::max(sup, std::abs(v));
    if (iterate_sup) iterate_sup->push_back(sup);
    for (std::size_t i = 0; i < len; ++i) g[i] += gnext[i];
    gk.swap(gnext);
    if (sup < term_tol) {
      // h_n = g_n / (2 a_n); slot for n = M+1 is the free tail
      std::vector<Complex> h(std::size_t(M) + 3);
      for (long n = -1; n <= M; ++n)
        h[std::size_t(n) + 1] = g[std::size_t(n) + 1] / (2.0 * a_of(n));
      h[std::size_t(M) + 2] = 1.0;
      return h;
    }
  }
  throw ConvergenceError(
      "volterra iteration did not reach the stopping norm in 200 steps "
      "(declared tail decay is likely wrong)");
}

struct LadderResult {
  std::vector<Complex> h;  // [-1, keep]
  long keep;
  double err_est;
};

LadderResult run_schedule(const CoefficientModel& model, const SpectralParameter& sp,
                          const JostSchedule& sched, double tol, bool volterra,
                          std::vector<double>* iterate_sup) {
  const Complex zeta = sp.zeta();
  LadderResult out;
  if (!sched.extrapolate) {
    const long M = sched.passes.front();
    if (iterate_sup) iterate_sup->clear();
    out.h = volterra ? volterra_pass_h(model, zeta, M, tol * 1e-2, iterate_sup)
                     : backward_pass_h(model, zeta, M);
    out.keep = M + 1;
    out.err_est = 0.0;
    return out;
  }
  // entries near the first pass's seed index are first-pass-biased; keep
  // only the half that every pass resolves so the error indicator settles
  const long keep = std::max<long>(std::min<long>(sched.passes.front(), kKeepCap) / 2, 64);
  std::vector<std::vector<Complex>> ladders;
  double err = 0.0;
  std::vector<Complex> ex;
  for (std::size_t j = 0; j < sched.passes.size(); ++j) {
    const long M = sched.passes[j];
    if (iterate_sup) iterate_sup->clear();
    std::vector<Complex> h =
        volterra ? volterra_pass_h(model, zeta, M, tol * 1e-2, iterate_sup)
                 : backward_pass_h(model, zeta, M);
    h.resize(std::size_t(keep) + 2);
    ladders.push_back(std::move(h));
    if (ladders.size() >= 3) {
      ex = extrapolate_doubling_vectors(ladders, &err);
      if (err < 0.1 * tol) break;
    }
  }
  if (ex.empty()) ex = extrapolate_doubling_vectors(ladders, &err);
  out.h = std::move(ex);
  out.keep = keep;
  out.err_est = err;
  return out;
}

JostSolution assemble(const CoefficientModel& model, const SpectralParameter& sp,
                      LadderResult&& lr, double pass_rho,
                      std::vector<double>&& iterate_sup, const TailBound& tb) {
  JostSolution js{sp, {}, {}, 0, 0.0, 0.0, {}};
  js.m_keep = lr.keep;
  js.h = std::move(lr.h);
  js.f.resize(js.h.size());
  const Complex zeta = sp.zeta();
  Complex zp = 1.0 / zeta;  // zeta^n, running
  for (long n = -1; n <= js.m_keep; ++n) {
    js.f[std::size_t(n + 1)] = zp * js.h[std::size_t(n + 1)];
    zp *= zeta;
  }
  js.tail_error = std::max(lr.err_est, pass_rho);
  js.volterra_iterate_sup = std::move(iterate_sup);
  (void)model;
  // fitted decay constant: 2 max over the last decade of |h_n - 1| / rho_n
  double c = 0.0;
  for (long n = std::max<long>(js.m_keep / 10, 1); n <= js.m_keep; ++n) {
    const double r = tb.rho(n);
    if (r > 1e-300)
      c = std::max(c, std::abs(js.h[std::size_t(n + 1)] - 1.0) / r);
  }
  js.decay_constant = 2.0 * c;
  return js;
}

void check_preconditions(const CoefficientModel& model, const SpectralParameter& sp,
                         const char* who) {
  if (model.decay_class() == DecayClass::unclassified)
    throw DecayClassError(std::string(who) + ": " + model.name() +
                          " has unclassified decay");
  require_off_edges(sp, who);
}

}  // namespace

namespace {
JostSchedule jost_schedule_from(const TailBound& tb, const CoefficientModel& model,
                                double tol) {
  JostSchedule s;
  const long direct = tb.truncation_index(tol);
  if (model.support() || direct <= kDirectCap) {
    s.passes = {std::max<long>(direct, 64)};
    s.extrapolate = false;
    return s;
  }
  const long base = std::clamp<long>(tb.truncation_index(1e-3), 2048, kKeepCap);
  long m = base;
  for (int j = 0; j <= kMaxLadder; ++j, m *= 2) s.passes.push_back(m);
  s.extrapolate = true;
  return s;
}
}  // namespace

JostSchedule jost_schedule(const CoefficientModel& model, double tol) {
  const TailBound tb(model, 1 << 12);
  return jost_schedule_from(tb, model, tol);
}

PolySequence JostSolution::sequence() const {
  return PolySequence(f, sp, SequenceKind::jost_f);
}

JostSolution jost_backward(const CoefficientModel& model, const SpectralParameter& sp,
                           double tol) {
  check_preconditions(model, sp, "jost_backward");
  const TailBound tb(model, 1 << 12);
  const JostSchedule sched = jost_schedule_from(tb, model, tol);
  const double pass_rho = sched.extrapolate ? 0.0 : tb.rho(sched.passes.front());
  LadderResult lr = run_schedule(model, sp, sched, tol, false, nullptr);
  return assemble(model, sp, std::move(lr), pass_rho, {}, tb);
}

JostSolution jost_volterra(const CoefficientModel& model, const SpectralParameter& sp,
                           double tol) {
  check_preconditions(model, sp, "jost_volterra");
  const TailBound tb(model, 1 << 12);
  const JostSchedule sched = jost_schedule_from(tb, model, tol);
  const double pass_rho = sched.extrapolate ? 0.0 : tb.rho(sched.passes.front());
  std::vector<double> iterate_sup;
  LadderResult lr = run_schedule(model, sp, sched, tol, true, &iterate_sup);
  return assemble(model, sp, std::move(lr), pass_rho, std::move(iterate_sup), tb);
}

Complex volterra_kernel(const CoefficientModel& model, const SpectralParameter& sp,
                        long n, long m) {
  if (m <= n) return 0.0;
  const Complex zeta = sp.zeta();
  const Complex sq = sp.sqrt_z2m1();
  const double da1 = (m == 0 ? 0.5 : model.a(m - 1)) - 0.5;
  const double da2 = model.a(m) - 0.5;
  const Complex zpow = std::pow(zeta, 2.0 * double(m - n));
  return ((zpow - 1.0) * model.b(m) + (zpow / zeta - zeta) * da1 +
          (zpow * zeta - 1.0 / zeta) * da2) /
         (2.0 * model.a(m) * sq);
}

Complex jost_function(const CoefficientModel& model, const SpectralParameter& sp,
                      double tol) {
  const JostSolution js = jost_backward(model, sp, tol);
  const Complex om = js.Omega();
  if (sp.on_boundary() && std::abs(om) < 1e-12)
    throw EigenvalueProximity(
        "Jost function vanishes on the boundary; spectral data inconsistent");
  return om;
}

std::vector<Complex> scaled_regular_values(const CoefficientModel& model,
                                           const SpectralParameter& sp, long n_max) {
  // p_n = zeta^n P_n: a_n p_{n+1} = zeta (z - b_n) p_n - zeta^2 a_{n-1} p_{n-1}
  const Complex zeta = sp.zeta();
  const Complex z = sp.z();
  std::vector<Complex> p(std::size_t(n_max) + 1);
  Complex pm1 = 0.0, p0 = 1.0;
  double am1 = 0.5;
  p[0] = 1.0;
  for (long n = 0; n < n_max; ++n) {
    const double an = model.a(n);
    const Complex p1 =
        (zeta * (z - model.b(n)) * p0 - zeta * zeta * am1 * pm1) / an;
    p[std::size_t(n) + 1] = p1;
    pm1 = p0;
    p0 = p1;
    am1 = an;
  }
  return p;
}

Complex jost_via_polynomials(const CoefficientModel& model, const SpectralParameter& sp,
                             long n_base) {
  check_preconditions(model, sp, "jost_via_polynomials");
  const Complex zeta = sp.zeta();
  auto partial = [&](long N) {
    const std::vector<Complex> p = scaled_regular_values(model, sp, N + 2);
    // zeta^{n+1}(VP)_n = zeta^2 (a_{n-1}-1/2) p_{n-1} + zeta b_n p_n
    //                    + (a_n-1/2) p_{n+1}
    Complex s = 0.0;
    for (long n = 0; n <= N; ++n) {
      const double da1 = (n == 0 ? 0.5 : model.a(n - 1)) - 0.5;
      const double da2 = model.a(n) - 0.5;
      const Complex pm1 = n == 0 ? Complex(0.0) : p[std::size_t(n) - 1];
      s += zeta * zeta * da1 * pm1 + zeta * model.b(n) * p[std::size_t(n)] +
           da2 * p[std::size_t(n) + 1];
    }
    return Complex(1.0) - 2.0 * s;
  };
  if (model.support()) return partial(std::max(*model.support() + 2, n_base));
  TailBound tb(model, 1 << 14);
  if (tb.rho(n_base) < 1e-12) return partial(n_base);
  // slow tail: extrapolate partial sums over a doubling ladder
  std::vector<Complex> ladder;
  long N = std::max<long>(n_base, 1024);
  Complex best = 0.0;
  for (int j = 0; j <= kMaxLadder; ++j, N *= 2) {
    ladder.push_back(partial(N));
    double err = 0.0;
    best = extrapolate_doubling(ladder, &err);
    if (ladder.size() >= 3 && err < 1e-11) break;
  }
  return best;
}

// ---- edges -------------------------------------------------------------------

namespace {

// smallest M with sum_{m>=M} m alpha_m < tol
long first_moment_truncation(const CoefficientModel& model, double tol) {
  if (model.support()) return std::max<long>(*model.support() + 1, 32);
  const long cap = 1 << 21;
  std::vector<double> term;
  term.reserve(1 << 12);
  // scan outward in blocks until the weighted tail is resolvable
  long hi = 1 << 12;
  for (;;) {
    term.resize(std::size_t(hi));
    for (long m = 0; m < hi; ++m)
      if (term[std::size_t(m)] == 0.0)
        term[std::size_t(m)] =
            double(m) * (std::abs(model.a(m) - 0.5) + std::abs(model.b(m)));
    // tail beyond hi from a local power fit (m alpha_m ~ c m^{1-p})
    const double t1 = double(hi) * (std::abs(model.a(hi) - 0.5) + std::abs(model.b(hi)));
    const double t2 = 2.0 * double(hi) *
                      (std::abs(model.a(2 * hi) - 0.5) + std::abs(model.b(2 * hi)));
    double p = t1 > 0 && t2 > 0 ? std::log(t1 / t2) / std::log(2.0) : 2.0;
    if (p < 1.05) {
      if (hi >= cap)
        throw DecayClassError(model.name() +
                              ": first-moment sums do not converge numerically");
      hi *= 2;
      continue;
    }
    const double beyond = power_tail_sum(t1 * std::pow(double(hi), p), p, double(hi));
    double acc = beyond;
    for (long m = hi - 1; m >= 0; --m) {
      acc += term[std::size_t(m)];
      if (acc >= tol && m + 1 < hi) return m + 1;
    }
    if (beyond < tol) return hi;
    if (hi >= cap)
      throw DecayClassError(model.name() + ": first-moment tail will not reach " +
                            std::to_string(tol));
    hi *= 2;
  }
}

bool edge_capable(const CoefficientModel& model) {
  return model.decay_class() == DecayClass::finite_support ||
         model.decay_class() == DecayClass::first_moment;
}

}  // namespace

EdgeSolution edge_jost(const CoefficientModel& model, int sign, double tol) {
  if (sign != 1 && sign != -1) throw InvalidParameter("edge_jost: sign must be +-1");
  if (!edge_capable(model))
    throw DecayClassError("edge_jost requires summable first moments (" +
                          model.name() + " is " + to_string(model.decay_class()) + ")");
  const long M = first_moment_truncation(model, tol);
  std::vector<double> a, b;
  fill_coefficients(model, M, a, b);
  EdgeSolution es;
  es.sign = sign;
  es.m_keep = M;
  es.f.resize(std::size_t(M) + 3);
  const double s = double(sign);
  // reduced variable q_n = (+-1)^n f_n: a_{n-1} q_{n-1} = (1 -+ b_n) q_n - a_n q_{n+1}
  std::vector<long double> q(std::size_t(M) + 3);
  q[std::size_t(M) + 2] = 1.0L;
  q[std::size_t(M) + 1] = 1.0L;
  for (long n = M; n >= 0; --n) {
    const long double am1 = n == 0 ? 0.5L : (long double)a[std::size_t(n) - 1];
    const long double an = n == M ? 0.5L : (long double)a[std::size_t(n)];
    q[std::size_t(n)] =
        ((1.0L - s * (long double)b[std::size_t(n)]) * q[std::size_t(n) + 1] -
         an * q[std::size_t(n) + 2]) /
        am1;
  }
  for (long n = -1; n <= M + 1; ++n) {
    const double v = double(q[std::size_t(n + 1)]);
    es.f[std::size_t(n + 1)] = (sign > 0 || ((n % 2) + 2) % 2 == 0) ? v : -v;
  }
  return es;
}

ResonanceReport resonance_analysis(const CoefficientModel& model, int sign,
                                   double tol) {
  ResonanceReport rep;
  const EdgeSolution es = edge_jost(model, sign, std::min(tol, 1e-10));
  rep.omega_edge = es.Omega();
  rep.threshold = 1e-6 * (1.0 + 1.0 / normalization_A(model));
  rep.is_resonance = std::abs(rep.omega_edge) < rep.threshold;
  if (!rep.is_resonance) return rep;

  const double s = double(sign);
  // gamma by the series 1 + 2 sum_m (+-1)^{m-1} m (VP)_m
  const long M = std::max<long>(es.m_keep, 64);
  std::vector<double> P = regular_poly_values(model, s, M + 2);
  double series = 1.0, comp = 0.0;
  for (long m = 1; m <= M; ++m) {
    const double da1 = model.a(m - 1) - 0.5;
    const double da2 = model.a(m) - 0.5;
    const double vp = da1 * P[std::size_t(m) - 1] + model.b(m) * P[std::size_t(m)] +
                      da2 * P[std::size_t(m) + 1];
    const double sgn = sign > 0 ? 1.0 : (m % 2 == 1 ? 1.0 : -1.0);  // (+-1)^{m-1}
    const double y = 2.0 * sgn * double(m) * vp - comp;
    const double t = series + y;
    comp = (t - series) - y;
    series = t;
  }
  rep.gamma_series = series;

  // gamma as the limit of (+-1)^n P_n(+-1) over a doubling ladder
  std::vector<double> ladder;
  for (long n = std::max<long>(M / 16, 4); n <= M + 1; n *= 2) {
    const double v = P[std::size_t(n)];
    ladder.push_back((sign > 0 || n % 2 == 0) ? v : -v);
  }
  double lerr = 0.0;
  rep.gamma_limit = extrapolate_doubling(ladder, &lerr);
  rep.gamma_consistent = std::abs(rep.gamma_series - rep.gamma_limit) <=
                         tol * (1.0 + std::abs(rep.gamma_limit));

  // Omega(z) ~ +- gamma sqrt(z^2-1) along a shrinking approach; the ratios
  // carry an error series in sqrt(z^2-1) ~ 2^-k, so the doubling scheme
  // extrapolates them as well
  std::vector<Complex> ratios;
  for (int k = 2; k <= 7; ++k) {
    const double dz = std::pow(4.0, -k);
    const SpectralParameter sp = zeta_of(Complex(s * (1.0 + dz), 0.0));
    const Complex om = jost_function(model, sp, 1e-12);
    ratios.push_back(om / (s * sp.sqrt_z2m1()));
  }
  rep.edge_law_residual = std::abs(extrapolate_doubling(ratios) - rep.gamma_limit);
  return rep;
}

}  // namespace jacobi_scatter
