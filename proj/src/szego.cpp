#include "jacobi_scatter/szego.hpp"

#include <algorithm>
#include <cmath>

#include "jacobi_scatter/errors.hpp"

namespace jacobi_scatter {

namespace {

// ln(w) as a function of theta: the closed form when available (stable down
// to the endpoints), else the Jost route (which must honour the edge guard,
// so its mesh is cropped at kJostThetaFloor).
constexpr double kJostThetaFloor = 2e-6;

struct ThetaLogWeight {
  std::function<double(double)> log_w;  // of theta
  double lo, hi;                        // admissible mesh interval
  double min_width;
};

ThetaLogWeight theta_log_weight(const CoefficientModel& model, double tol) {
  ThetaLogWeight t;
  t.lo = 0.0;
  t.hi = kPi;
  t.min_width = 1e-7;
  if (model.has_closed_form_weight()) {
    t.log_w = [model](double th) { return model.log_weight_theta(th); };
    t.min_width = 1e-9;
    return t;
  }
  // Jost route: ln w = ln(2/pi) + ln sin th - 2 ln|Omega(e^{-i th})|.  Below
  // the edge guard |Omega| is frozen at its anchor value (it is continuous up
  // to the edge for the models whose Szego data we evaluate this way), while
  // the ln sin th part is kept exact.
  auto omega_mag = [model, tol](double th) {
    const Complex om = jost_function(
        model, SpectralParameter::from_zeta(std::polar(1.0, -th)), tol);
    return std::abs(om);
  };
  const double anchor_plus = omega_mag(kJostThetaFloor);
  const double anchor_minus = omega_mag(kPi - kJostThetaFloor);
  t.log_w = [model, tol, omega_mag, anchor_plus, anchor_minus](double th) {
    double mag;
    if (th < kJostThetaFloor)
      mag = anchor_plus;
    else if (th > kPi - kJostThetaFloor)
      mag = anchor_minus;
    else
      mag = omega_mag(th);
    return std::log(2.0 / kPi) + std::log(std::sin(th)) - 2.0 * std::log(mag);
  };
  return t;
}

double log_w0_theta(double th) {
  return std::log(2.0 / kPi) + std::log(std::sin(th));
}

}  // namespace

double chebweight_integral(const std::function<double(double)>& F, int base_panels,
                           int gl_order, double min_theta) {
  const PanelMesh mesh = graded_mesh(0.0, kPi, true, true, base_panels, min_theta);
  return integrate_panels(mesh, gl_order,
                          [&](double th) { return F(std::cos(th)); });
}

double chebweight_integral_theta(const std::function<double(double)>& F_of_theta,
                                 double lo, double hi, int base_panels, int gl_order,
                                 double min_width) {
  const PanelMesh mesh = graded_mesh(lo, hi, true, true, base_panels, min_width);
  return integrate_panels(mesh, gl_order, F_of_theta);
}

SzegoEvaluator::SzegoEvaluator(const CoefficientModel& model, int base_panels,
                               int gl_order, double tol) {
  const ThetaLogWeight lw = theta_log_weight(model, tol);
  auto build = [&](double width) {
    const PanelMesh mesh = graded_mesh(lw.lo, lw.hi, true, true, base_panels, width);
    return panel_rule(mesh, gl_order);
  };
  rule_ = build(lw.min_width);
  u_.resize(rule_.nodes.size());
  std::vector<double>& u = u_;
  const QuadratureRule& rule = rule_;
  parallel_for(rule_.nodes.size(), [&](std::size_t i) {
    const double th = rule.nodes[i];
    u[i] = lw.log_w(th) + std::log(std::sin(th));
  });
  // Szego condition: deepening the endpoint grading must not move the plain
  // log-integral (a 1/theta divergence gains ~ln 2 per extra level)
  double i_base = 0.0;
  for (std::size_t i = 0; i < rule_.nodes.size(); ++i) i_base += rule_.weights[i] * u_[i];
  if (model.has_closed_form_weight()) {
    const QuadratureRule fine = build(lw.min_width / 64.0);
    double i_fine = 0.0;
    for (std::size_t i = 0; i < fine.nodes.size(); ++i)
      i_fine += fine.weights[i] *
                (lw.log_w(fine.nodes[i]) + std::log(std::sin(fine.nodes[i])));
    drift_ = std::abs(i_fine - i_base);
    if (drift_ > 1e-3 * (1.0 + std::abs(i_fine)))
      throw ConvergenceError(
          "Szego condition fails: log-weight integral drifts by " +
          std::to_string(drift_) + " under endpoint-grading refinement");
  }
}

Complex SzegoEvaluator::D(Complex zeta) const {
  if (std::abs(zeta) > 0.999)
    throw EdgeProximity("SzegoEvaluator: |zeta| must be <= 0.999");
  // (1/4pi) int_{-pi}^{pi} (e^{it}+zeta)/(e^{it}-zeta) u(|t|) dt
  //   = (1-zeta^2)/(2pi) int_0^pi u(t) / (1 - 2 zeta cos t + zeta^2) dt
  Complex acc = 0.0;
  for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
    const double ct = std::cos(rule_.nodes[i]);
    acc += rule_.weights[i] * u_[i] / (1.0 - 2.0 * zeta * ct + zeta * zeta);
  }
  return std::exp((1.0 - zeta * zeta) / (2.0 * kPi) * acc);
}

Complex szego_function(const CoefficientModel& model, Complex zeta, int base_panels,
                       double tol) {
  return SzegoEvaluator(model, base_panels, 16, tol).D(zeta);
}

Complex blaschke(const std::vector<double>& mu, Complex zeta) {
  Complex prod = 1.0;
  for (double m : mu) {
    if (m == 0.0) throw InvalidParameter("blaschke: mu = 0 is impossible for bounded H");
    if (!(std::abs(m) < 1.0)) throw InvalidParameter("blaschke: |mu| must be < 1");
    prod *= (m / std::abs(m)) * (m - zeta) / (1.0 - m * zeta);
  }
  return prod;
}

double factorization_residual(const CoefficientModel& model,
                              const std::vector<Complex>& zeta_grid, double tol) {
  const double A = normalization_A(model);
  const SzegoEvaluator ev(model, 64, 16, tol);
  const DiscreteSpectrum ds = eigenvalues(model, 1e-12);
  double worst = 0.0;
  std::vector<double> res(zeta_grid.size());
  parallel_for(zeta_grid.size(), [&](std::size_t i) {
    const Complex zeta = zeta_grid[i];
    const Complex delta =
        perturbation_determinant(model, SpectralParameter::from_zeta(zeta), tol);
    const Complex rhs = A * blaschke(ds.mus, zeta) * (1.0 - zeta * zeta) /
                        (std::sqrt(2.0 * kPi) * ev.D(zeta));
    res[i] = std::abs(delta - rhs);
  });
  for (double r : res) worst = std::max(worst, r);
  return worst;
}

SzegoEvaluation evaluate_szego(const CoefficientModel& model, Complex zeta,
                               double tol) {
  SzegoEvaluation out;
  const SzegoEvaluator ev(model, 64, 16, tol);
  const DiscreteSpectrum ds = eigenvalues(model, 1e-12);
  out.D = ev.D(zeta);
  out.B = blaschke(ds.mus, zeta);
  out.delta = perturbation_determinant(model, SpectralParameter::from_zeta(zeta), tol);
  const Complex rhs = normalization_A(model) * out.B * (1.0 - zeta * zeta) /
                      (std::sqrt(2.0 * kPi) * out.D);
  out.factorization_residual = std::abs(out.delta - rhs);
  return out;
}

// ---- Case sum rules -----------------------------------------------------------

SumRuleResult case_sum_rule(const CoefficientModel& model, int order, double tol) {
  if (order < 0) throw InvalidParameter("case_sum_rule: order >= 0");
  if (model.decay_class() == DecayClass::unclassified)
    throw DecayClassError("case_sum_rule: trace-class coefficients required");
  SumRuleResult out;
  out.order = order;

  const ThetaLogWeight lw = theta_log_weight(model, tol);
  auto log_ratio = [&](double th) { return lw.log_w(th) - log_w0_theta(th); };
  const DiscreteSpectrum ds = eigenvalues(model, 1e-12);

  if (order == 0) {
    double lhs = std::log(normalization_A(model));
    for (double mu : ds.mus) lhs += std::log(std::abs(mu));
    out.lhs = lhs;
    out.integral_term = chebweight_integral_theta(log_ratio, lw.lo, lw.hi, 64, 16,
                                                  lw.min_width) /
                        (2.0 * kPi);
    out.eigenvalue_term = 0.0;
    out.rhs = out.integral_term;
  } else {
    long N = model.support() ? *model.support() + order + 2 : 512;
    double lhs = truncated_trace_chebyshev(model, order, N);
    if (!model.support()) {
      std::vector<double> ladder{lhs};
      for (int it = 0; it < 6; ++it) {
        N *= 2;
        ladder.push_back(truncated_trace_chebyshev(model, order, N));
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
    double eig = 0.0;
    for (double mu : ds.mus)
      eig += std::pow(mu, double(order)) - std::pow(mu, -double(order));
    out.eigenvalue_term = -0.5 * eig;
    out.integral_term =
        double(order) / (2.0 * kPi) *
        chebweight_integral_theta(
            [&](double th) { return log_ratio(th) * std::cos(double(order) * th); },
            lw.lo, lw.hi, 64, 16, lw.min_width);
    out.rhs = out.eigenvalue_term + out.integral_term;
  }
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

// ---- Szego-condition probe -------------------------------------------------------

SzegoProbe szego_condition_probe(const CoefficientModel& model,
                                 std::vector<double> eps_ladder) {
  if (eps_ladder.empty()) eps_ladder = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::sort(eps_ladder.begin(), eps_ladder.end(), std::greater<double>());
  const ThetaLogWeight lw = theta_log_weight(model, 1e-8);

  SzegoProbe probe;
  probe.eps = eps_ladder;
  std::vector<double> lg, ip, im;
  for (double eps : eps_ladder) {
    const double th_cut = std::acos(1.0 - eps);  // distance from theta = 0
    // I+ over lambda in [0, 1-eps]; I- over [-1+eps, 0]
    const PanelMesh mp = graded_mesh(th_cut, kPi / 2.0, true, false, 24, 1e-8);
    const double iplus = integrate_panels(mp, 16, lw.log_w);
    const PanelMesh mm = graded_mesh(kPi / 2.0, kPi - th_cut, false, true, 24, 1e-8);
    const double iminus = integrate_panels(mm, 16, lw.log_w);
    probe.partial.push_back(iplus + iminus);
    probe.partial_plus.push_back(iplus);
    lg.push_back(std::log(1.0 / eps));
    ip.push_back(iplus);
    im.push_back(iminus);
  }
  probe.growth_plus = -fit_line(lg, ip).slope;
  probe.growth_minus = -fit_line(lg, im).slope;
  // last-rung slopes separate convergent (o(1)) from divergent (~pi(a+b))
  const auto last_slope = [&](const std::vector<double>& v) {
    const std::size_t k = v.size();
    return k >= 2 ? (v[k - 1] - v[k - 2]) / (lg[k - 1] - lg[k - 2]) : 0.0;
  };
  probe.converges =
      std::abs(last_slope(ip)) + std::abs(last_slope(im)) < 0.1;

  // weaker integral against (1-l^2)^{1/2}: int ln w sin^2 th dth
  auto weak = [&](double cut) {
    const double lo = std::max(cut, lw.lo), hi = std::min(kPi - cut, lw.hi);
    const PanelMesh mesh = graded_mesh(lo, hi, true, true, 48, 1e-9);
    return integrate_panels(mesh, 16, [&](double th) {
      const double s = std::sin(th);
      return lw.log_w(th) * s * s;
    });
  };
  const double w1 = weak(1e-5), w2 = weak(1e-7);
  probe.weak_value = w2;
  probe.weak_converges = std::abs(w1 - w2) < 1e-3 * (1.0 + std::abs(w2));
  return probe;
}

}  // namespace jacobi_scatter
