#include "jacobi_scatter/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "jacobi_scatter/errors.hpp"

namespace jacobi_scatter {

namespace {
void require_inside(double lambda, const char* who) {
  if (!(std::abs(lambda) <= 1.0 - kEdgeGuard))
    throw EdgeProximity(std::string(who) + ": |lambda| > 1 - 1e-6");
}
}  // namespace

double weight(const CoefficientModel& model, double lambda, double tol) {
  require_inside(lambda, "weight");
  if (model.decay_class() == DecayClass::unclassified)
    throw DecayClassError("weight: " + model.name() + " has unclassified decay");
  const Complex om = jost_function(model, zeta_of(lambda, Side::boundary_plus), tol);
  return 2.0 / kPi * std::sqrt(1.0 - lambda * lambda) / std::norm(om);
}

double log_weight(const CoefficientModel& model, double lambda, double tol) {
  if (model.has_closed_form_weight()) return model.log_weight(lambda);
  return std::log(weight(model, lambda, tol));
}

Complex free_resolvent_element(const SpectralParameter& sp, long n, long m) {
  const Complex zeta = sp.zeta();
  return (std::pow(zeta, double(n + m + 2)) - std::pow(zeta, double(std::labs(n - m)))) /
         sp.sqrt_z2m1();
}

Complex resolvent_element(const CoefficientModel& model, const SpectralParameter& sp,
                          long n, long m, double tol) {
  if (n < 0 || m < 0) throw InvalidParameter("resolvent_element: indices >= 0");
  const long lo = std::min(n, m), hi = std::max(n, m);
  const JostSolution js = jost_backward(model, sp, tol);
  const Complex om = js.omega();
  if (std::abs(om) < 1e-12)
    throw EigenvalueProximity("resolvent_element: omega below 1e-12");
  const PolySequence P = regular_polynomials(model, sp, lo + 1);
  return P[lo] * js.f_at(hi) / om;
}

double spectral_density_element(const CoefficientModel& model, double lambda, long n,
                                long m, double tol) {
  require_inside(lambda, "spectral_density_element");
  const Complex om = jost_function(model, zeta_of(lambda, Side::boundary_plus), tol);
  const std::vector<double> P = regular_poly_values(model, lambda, std::max(n, m));
  return 2.0 / kPi * std::sqrt(1.0 - lambda * lambda) / std::norm(om) *
         P[std::size_t(n)] * P[std::size_t(m)];
}

Complex resolvent_oracle(const CoefficientModel& model, Complex z, long n, long m,
                         long N) {
  if (n >= N || m >= N) throw InvalidParameter("resolvent_oracle: index beyond block");
  const Tridiagonal t = leading_block(model, N);
  const std::vector<Complex> x = shifted_solve_unit(t, z, n);
  return x[std::size_t(m)];
}

// ---- discrete spectrum ------------------------------------------------------

std::vector<double> truncated_eigenvalues_oracle(const CoefficientModel& model, long N) {
  return all_eigenvalues(leading_block(model, N));
}

double truncated_largest_eigenvalue(const CoefficientModel& model, long N) {
  const Tridiagonal t = leading_block(model, N);
  return eigenvalue_by_index(t, N - 1);
}

namespace {

double gershgorin_window(const CoefficientModel& model) {
  long range = 4096;
  if (model.support()) range = std::max<long>(*model.support() + 2, 4);
  double lam = 1.0;
  for (long n = 0; n < range; ++n) {
    const double am1 = n == 0 ? 0.0 : model.a(n - 1);
    lam = std::max(lam, std::abs(model.b(n)) + model.a(n) + am1);
  }
  return lam;
}

// real Omega on (1, Lambda] or [-Lambda, -1); sign-scan plus bisection.
// The grid pass runs at a loose tolerance; brackets are refined tightly.
void scan_side(const CoefficientModel& model, double lam_window, int side, double tol,
               std::vector<double>* roots) {
  const int grid = 2000;
  const double lo = 1.0 + 1e-7, hi = std::max(lam_window, 1.0 + 1e-6) + 0.1;
  auto omega_at = [&](double t, double jtol) {
    const double z = side > 0 ? t : -t;
    return jost_function(model, zeta_of(Complex(z, 0.0)), jtol).real();
  };
  const double fine = std::min(tol, 1e-10);
  double prev_t = lo, prev_v = omega_at(lo, 1e-4);
  for (int i = 1; i <= grid; ++i) {
    const double t = lo + (hi - lo) * double(i) / grid;
    const double v = omega_at(t, 1e-4);
    if (prev_v == 0.0) roots->push_back(side > 0 ? prev_t : -prev_t);
    if (v * prev_v < 0.0) {
      double a = prev_t, b = t, fa = omega_at(a, fine);
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        const double fm = omega_at(mid, fine);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (fa * fm < 0.0)
          b = mid;
        else {
          a = mid;
          fa = fm;
        }
      }
      roots->push_back(side > 0 ? 0.5 * (a + b) : -0.5 * (a + b));
    }
    prev_t = t;
    prev_v = v;
  }
}

}  // namespace

DiscreteSpectrum eigenvalues(const CoefficientModel& model, double tol, long oracle_n) {
  if (model.decay_class() == DecayClass::unclassified)
    throw DecayClassError("eigenvalues: unclassified decay");
  DiscreteSpectrum ds;
  ds.window = gershgorin_window(model);
  std::vector<double> roots;
  scan_side(model, ds.window, +1, tol, &roots);
  scan_side(model, ds.window, -1, tol, &roots);
  std::sort(roots.begin(), roots.end(),
            [](double x, double y) { return std::abs(x) > std::abs(y); });
  ds.lambdas = roots;
  for (double lam : roots) {
    const double mu = lam - (lam > 0 ? 1.0 : -1.0) * std::sqrt(lam * lam - 1.0);
    ds.mus.push_back(mu);
  }

  // truncated-matrix confirmation.  Roots inside the cluster band around the
  // edges (eigenvalues may accumulate at +-1) are reported but not
  // cross-confirmed: neither the scan grid nor the N x N oracle resolves them.
  const double cluster = 2e-3;
  const Tridiagonal block = leading_block(model, oracle_n);
  const std::vector<double> oracle = eigenvalues_outside_band(block, 1e-3, 1e-12);
  double worst = 0.0;
  for (double lam : ds.lambdas) {
    if (std::abs(lam) < 1.0 + cluster) continue;
    double best = std::numeric_limits<double>::infinity();
    for (double o : oracle) best = std::min(best, std::abs(o - lam));
    worst = std::max(worst, best);
  }
  ds.oracle_deviation = worst;
  if (worst > 1e-5)
    throw OracleMismatch("eigenvalues: Jost roots and Sturm roots differ by " +
                         std::to_string(worst));
  // zeros of even multiplicity cannot occur (simple spectrum) but a missed
  // pair would surface as an unmatched oracle root
  for (double o : oracle) {
    if (std::abs(o) < 1.0 + cluster + 10.0 * tol) continue;
    double best = std::numeric_limits<double>::infinity();
    for (double lam : ds.lambdas) best = std::min(best, std::abs(o - lam));
    if (best > 1e-4)
      throw OracleMismatch("eigenvalues: scan missed a root near " + std::to_string(o));
  }

  if (model.decay_class() == DecayClass::finite_support ||
      model.decay_class() == DecayClass::first_moment) {
    ds.resonance_plus = resonance_analysis(model, +1).is_resonance;
    ds.resonance_minus = resonance_analysis(model, -1).is_resonance;
  }
  return ds;
}

// ---- integrals and reconstruction --------------------------------------------

namespace {

// weight as a function of theta, plus the admissible mesh interval: closed
// forms are stable down to the endpoints; the Jost route stops at the edge
// guard (the integrand it serves vanishes at least linearly there).
struct ThetaWeight {
  std::function<double(double)> w;  // of theta
  double lo, hi;
  double min_width;
};

ThetaWeight theta_weight(const CoefficientModel& model, double tol) {
  ThetaWeight t;
  if (model.has_closed_form_weight()) {
    t.w = [model](double th) { return std::exp(model.log_weight_theta(th)); };
    t.lo = 0.0;
    t.hi = kPi;
    t.min_width = 1e-8;
  } else {
    // direct Omega route (the integrands served here vanish at the edges, so
    // cropping at the zeta guard costs O(guard^2))
    t.w = [model, tol](double th) {
      const Complex om = jost_function(
          model, SpectralParameter::from_zeta(std::polar(1.0, -th)), tol);
      return 2.0 / kPi * std::sin(th) / std::norm(om);
    };
    t.lo = 2e-6;
    t.hi = kPi - 2e-6;
    t.min_width = 1e-7;
  }
  return t;
}

}  // namespace

double integrate_against_weight(const CoefficientModel& model,
                                const std::function<double(double)>& F,
                                int base_panels, int gl_order, double tol) {
  // integral of F w dlambda = integral of F(cos th) w(cos th) sin th dth
  const ThetaWeight tw = theta_weight(model, tol);
  const PanelMesh mesh = graded_mesh(tw.lo, tw.hi, true, true, base_panels,
                                     tw.min_width);
  return integrate_panels(mesh, gl_order, [&](double th) {
    return F(std::cos(th)) * tw.w(th) * std::sin(th);
  });
}

double weight_mass(const CoefficientModel& model, double tol) {
  return integrate_against_weight(
      model, [](double) { return 1.0; }, 48, 16, tol);
}

RecurrencePrefix stieltjes_reconstruction(const std::function<double(double)>& w,
                                          long n_out, const QuadratureRule& rule) {
  const std::size_t m = rule.nodes.size();
  std::vector<double> wts(m);
  for (std::size_t i = 0; i < m; ++i) wts[i] = rule.weights[i] * w(rule.nodes[i]);
  std::vector<double> p_prev(m, 0.0), p_cur(m, 1.0), p_next(m);
  auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0, c = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double y = wts[i] * u[i] * v[i] - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    return s;
  };
  RecurrencePrefix out;
  double norm_cur = dot(p_cur, p_cur);  // mu_0
  if (!(norm_cur > 0.0))
    throw ConvergenceError("reconstruction: measure has nonpositive mass");
  double beta_prev = 0.0;
  for (long k = 0; k < n_out; ++k) {
    std::vector<double> xp(m);
    for (std::size_t i = 0; i < m; ++i) xp[i] = rule.nodes[i] * p_cur[i];
    const double alpha = dot(xp, p_cur) / norm_cur;
    for (std::size_t i = 0; i < m; ++i)
      p_next[i] = (rule.nodes[i] - alpha) * p_cur[i] - beta_prev * p_prev[i];
    const double norm_next = dot(p_next, p_next);
    const double beta = norm_next / norm_cur;
    if (!(beta > 0.0))
      throw ConvergenceError(
          "reconstruction: loss of positivity at degree " + std::to_string(k + 1) +
          " (Gram process ill-conditioned in double precision)");
    out.b.push_back(alpha);
    out.a.push_back(std::sqrt(beta));
    p_prev.swap(p_cur);
    p_cur.swap(p_next);
    norm_cur = norm_next;
    beta_prev = beta;
  }
  return out;
}

RecurrencePrefix stieltjes_reconstruction(const CoefficientModel& model, long n_out,
                                          int base_panels, int gl_order) {
  // theta-variable rule with the Jacobian and the weight folded into the
  // quadrature weights
  const ThetaWeight tw = theta_weight(model, 1e-10);
  const PanelMesh mesh = graded_mesh(tw.lo, tw.hi, true, true, base_panels,
                                     tw.min_width);
  const QuadratureRule theta_rule = panel_rule(mesh, gl_order);
  QuadratureRule lam_rule;
  lam_rule.nodes.resize(theta_rule.nodes.size());
  lam_rule.weights.resize(theta_rule.nodes.size());
  for (std::size_t i = 0; i < theta_rule.nodes.size(); ++i) {
    const double th = theta_rule.nodes[i];
    lam_rule.nodes[i] = std::cos(th);
    lam_rule.weights[i] = theta_rule.weights[i] * std::sin(th) * tw.w(th);
  }
  return stieltjes_reconstruction([](double) { return 1.0; }, n_out, lam_rule);
}

}  // namespace jacobi_scatter
