#include "jacobi_scatter/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "jacobi_scatter/errors.hpp"

namespace jacobi_scatter {

namespace {

struct BoundaryData {
  double kappa;
  double eta;  // principal branch; the sine is insensitive to the 2 pi k
  double w;
  double theta;
};

BoundaryData boundary_data(const CoefficientModel& model, double lambda, double tol) {
  const Complex om = jost_function(model, zeta_of(lambda, Side::boundary_plus), tol);
  BoundaryData d;
  d.theta = std::acos(lambda);
  d.kappa = std::abs(om);
  d.eta = std::arg(om);
  d.w = 2.0 / kPi * std::sin(d.theta) / std::norm(om);
  return d;
}

}  // namespace

double bernstein_szego_prediction(const CoefficientModel& model, double lambda, long n,
                                  double tol) {
  if (!(std::abs(lambda) <= 1.0 - kEdgeGuard))
    throw EdgeProximity("bernstein_szego_prediction: lambda too close to +-1");
  const BoundaryData d = boundary_data(model, lambda, tol);
  const double amp_phase = d.kappa / std::sin(d.theta);
  const double amp_weight = std::sqrt(2.0 / kPi) / std::sqrt(d.w) /
                            std::pow(1.0 - lambda * lambda, 0.25);
  if (std::abs(amp_phase - amp_weight) > 1e-10 * (1.0 + amp_phase))
    throw OracleMismatch("amplitude forms disagree: " + std::to_string(amp_phase) +
                         " vs " + std::to_string(amp_weight));
  // (n+1) theta overflows double ulps near n = 1e5; reduce in long double
  const long double phase =
      (static_cast<long double>(n) + 1.0L) * std::acos(static_cast<long double>(lambda)) +
      static_cast<long double>(d.eta);
  return amp_phase * static_cast<double>(std::sin(phase));
}

AsymptoticReport oscillation_report(const CoefficientModel& model, double lambda,
                                    long n_max, const ReportConfig& cfg) {
  AsymptoticReport rep;
  rep.branch = "oscillation";
  const BoundaryData d = boundary_data(model, lambda, 1e-12);
  const std::vector<double> P = regular_poly_values(model, lambda, n_max);
  TailBound tb(model, n_max + 2);
  const double amp = d.kappa / std::sin(d.theta);

  const bool zero_tail = !(tb.rho(0) > 0.0);
  const long double thL = std::acos(static_cast<long double>(lambda));
  const long double etaL = static_cast<long double>(d.eta);
  auto predict = [&](long n) {
    return amp * static_cast<double>(
                     std::sin((static_cast<long double>(n) + 1.0L) * thL + etaL));
  };
  double c_early = 0.0, c_mid = 0.0, c_late = 0.0, e_max = 0.0;
  for (long n = 1; n <= n_max; ++n) {
    const double pred = predict(n);
    const double e = std::abs(P[std::size_t(n)] - pred);
    e_max = std::max(e_max, e);
    if (!zero_tail) {
      const double c = e / tb.rho(n);
      if (n > n_max / 10)
        c_late = std::max(c_late, c);
      else if (n > n_max / 100)
        c_mid = std::max(c_mid, c);
      else
        c_early = std::max(c_early, c);
    }
  }
  // log-spaced samples for the record
  for (long n = 1; n <= n_max; n = std::max(n + 1, n + n / 8)) {
    const double pred = predict(n);
    rep.ns.push_back(double(n));
    rep.observed.push_back(P[std::size_t(n)]);
    rep.predicted.push_back(pred);
    rep.errors.push_back(std::abs(P[std::size_t(n)] - pred));
  }
  if (zero_tail) {
    rep.fitted_constant = 0.0;
    rep.verdict = e_max < 1e-12 * (1.0 + amp);
  } else {
    rep.fitted_constant = std::max(c_mid, c_late);
    // stable fitted constant over the last two decades
    rep.verdict = c_late < cfg.constancy_slack * std::max(c_mid, 1e-12) ||
                  c_late <= c_early;
  }
  return rep;
}

AsymptoticReport exterior_limit_report(const CoefficientModel& model,
                                       const SpectralParameter& sp, long n_max,
                                       const ReportConfig& cfg) {
  require_off_edges(sp, "exterior_limit_report");
  if (sp.on_boundary())
    throw InvalidParameter("exterior_limit_report needs an interior parameter");
  AsymptoticReport rep;
  const Complex zeta = sp.zeta();
  const Complex omega = jost_function(model, sp, 1e-12);
  const double a_inv = 1.0 / normalization_A(model);
  const bool eigen_branch = std::abs(omega) < 1e-8 * (1.0 + a_inv);

  if (!eigen_branch) {
    rep.branch = "generic";
    const Complex target = omega / (1.0 - zeta * zeta);
    const std::vector<Complex> p = scaled_regular_values(model, sp, n_max);
    std::vector<Complex> ladder;
    for (long n = std::max<long>(n_max / 32, 8); n <= n_max; n *= 2) {
      const Complex v = p[std::size_t(n)];
      rep.ns.push_back(double(n));
      rep.observed.push_back(std::abs(v));
      rep.predicted.push_back(std::abs(target));
      rep.errors.push_back(std::abs(v - target));
      ladder.push_back(v);
    }
    Complex accel = ladder.back();
    if (ladder.size() >= 3)
      accel = aitken(ladder[ladder.size() - 3], ladder[ladder.size() - 2],
                     ladder.back());
    rep.limit = std::abs(accel);
    rep.target = std::abs(target);
    rep.fitted_constant = rep.errors.back() / (1.0 + std::abs(target));
    rep.verdict = rep.fitted_constant < cfg.slow_tail_rel;
    return rep;
  }

  rep.branch = "eigenvalue";
  // q_n = zeta^-n P_n stays bounded at an eigenvalue and tends to {P, g}
  const long keep = std::min<long>(n_max, 400);
  std::vector<Complex> q(std::size_t(keep) + 1);
  {
    Complex qm1 = 0.0, q0 = 1.0;
    double am1 = 0.5;
    q[0] = 1.0;
    const Complex z = sp.z();
    for (long n = 0; n < keep; ++n) {
      const Complex q1 = ((z - model.b(n)) * q0 - am1 / zeta * qm1) / (model.a(n) * zeta);
      q[std::size_t(n) + 1] = q1;
      qm1 = q0;
      q0 = q1;
      am1 = model.a(n);
    }
  }
  // Wronskian {P, g} from the growing companion of the Jost solution
  const JostSolution js = jost_backward(model, sp, 1e-12);
  const long g_max = std::min<long>(js.m_keep - 1, 60);
  const PolySequence g = growing_solution(model, js.sequence(), 0, g_max);
  const PolySequence P = regular_polynomials(model, sp, g_max);
  const Complex wron = wronskian(P, g, model, g_max / 2);
  for (long n = std::max<long>(keep / 16, 4); n <= keep; n *= 2) {
    rep.ns.push_back(double(n));
    rep.observed.push_back(std::abs(q[std::size_t(n)]));
    rep.predicted.push_back(std::abs(wron));
    rep.errors.push_back(std::abs(q[std::size_t(n)] - wron));
  }
  rep.limit = std::abs(q[std::size_t(keep)]);
  rep.target = std::abs(wron);
  rep.fitted_constant = rep.errors.back() / (1.0 + std::abs(wron));
  rep.verdict = std::abs(wron) > 1e-10 && rep.fitted_constant < cfg.slow_tail_rel;
  return rep;
}

AsymptoticReport edge_report(const CoefficientModel& model, int sign,
                             const ReportConfig& cfg) {
  if (sign != 1 && sign != -1) throw InvalidParameter("edge_report: sign is +-1");
  AsymptoticReport rep;
  const double s = double(sign);

  const bool dichotomy = model.decay_class() == DecayClass::finite_support ||
                         model.decay_class() == DecayClass::first_moment;
  if (dichotomy) {
    const ResonanceReport rr = resonance_analysis(model, sign);
    const long n_top = 1 << 14;
    const std::vector<double> P = regular_poly_values(model, s, n_top + 1);
    std::vector<double> ladder;
    for (long n = 64; n <= n_top; n *= 2) {
      const double sgn = (sign > 0 || n % 2 == 0) ? 1.0 : -1.0;
      const double obs = rr.is_resonance
                             ? sgn * P[std::size_t(n)]
                             : P[std::size_t(n)] / (sgn * double(n));
      rep.ns.push_back(double(n));
      rep.observed.push_back(obs);
      ladder.push_back(obs);
    }
    rep.limit = extrapolate_doubling(ladder);
    if (rr.is_resonance) {
      rep.branch = "resonance";
      rep.target = rr.gamma_series;
    } else {
      rep.branch = "regular";
      rep.target = rr.omega_edge;
    }
    for (double obs : rep.observed) {
      rep.predicted.push_back(rep.target);
      rep.errors.push_back(std::abs(obs - rep.target));
    }
    rep.fitted_constant = std::abs(rep.limit - rep.target) / (1.0 + std::abs(rep.target));
    rep.verdict = rep.fitted_constant < cfg.slow_tail_rel;
    return rep;
  }

  if (model.jacobi_parameters()) {
    // P_n(+-1) ~ kappa^{-1/2} Gamma(p+1)^{-1} 2^{-(alpha+beta)/2} n^{p+1/2},
    // p the exponent at the chosen endpoint
    const auto [alpha, beta] = *model.jacobi_parameters();
    const double p = sign > 0 ? alpha : beta;
    const double log_kappa = std::lgamma(alpha + beta + 2.0) -
                             (alpha + beta + 1.0) * std::log(2.0) -
                             std::lgamma(alpha + 1.0) - std::lgamma(beta + 1.0);
    rep.branch = "power-law";
    rep.target = std::exp(-0.5 * log_kappa - std::lgamma(p + 1.0) -
                          0.5 * (alpha + beta) * std::log(2.0));
    const long n_top = 100000;
    const std::vector<double> P = regular_poly_values(model, s, n_top + 1);
    for (long n = 1000; n <= n_top; n *= 2) {
      const double sgn = (sign > 0 || n % 2 == 0) ? 1.0 : -1.0;
      const double obs = sgn * P[std::size_t(n)] * std::pow(double(n), -p - 0.5);
      rep.ns.push_back(double(n));
      rep.observed.push_back(obs);
      rep.predicted.push_back(rep.target);
      rep.errors.push_back(std::abs(obs - rep.target));
    }
    // include the top of the grid exactly
    {
      const double sgn = (sign > 0 || n_top % 2 == 0) ? 1.0 : -1.0;
      rep.limit = sgn * P[std::size_t(n_top)] * std::pow(double(n_top), -p - 0.5);
    }
    rep.fitted_constant = std::abs(rep.limit - rep.target) / (1.0 + std::abs(rep.target));
    rep.verdict = rep.fitted_constant < 1e-3;
    return rep;
  }

  // bound-only branch: |P_n(+-1)| <= C (n+1)
  rep.branch = "growth-bound";
  const long n_top = 100000;
  const std::vector<double> P = regular_poly_values(model, s, n_top + 1);
  double c_early = 0.0, c_late = 0.0;
  for (long n = 1; n <= n_top; ++n) {
    const double c = std::abs(P[std::size_t(n)]) / (double(n) + 1.0);
    if (n <= n_top / 10)
      c_early = std::max(c_early, c);
    else
      c_late = std::max(c_late, c);
  }
  for (long n = 16; n <= n_top; n *= 4) {
    rep.ns.push_back(double(n));
    rep.observed.push_back(std::abs(P[std::size_t(n)]) / (double(n) + 1.0));
    rep.predicted.push_back(c_early);
    rep.errors.push_back(0.0);
  }
  rep.fitted_constant = std::max(c_early, c_late);
  rep.verdict = c_late <= cfg.constancy_slack * std::max(c_early, 1e-12);
  return rep;
}

}  // namespace jacobi_scatter
