#pragma once

#include <string>
#include <vector>

#include "jacobi_scatter/scattering.hpp"

namespace jacobi_scatter {

// Verdict thresholds are configuration, not hidden constants.
struct ReportConfig {
  double slow_tail_rel = 1e-2;   // acceptable top-of-ladder error for O(1/N) tails
  double geometric_rel = 1e-6;   // for geometrically converging ladders
  double constancy_slack = 2.0;  // allowed growth of the fitted constant per decade
};

struct AsymptoticReport {
  std::string branch;
  std::vector<double> ns;         // sample indices
  std::vector<double> observed;
  std::vector<double> predicted;
  std::vector<double> errors;
  double fitted_constant = 0.0;   // meaning depends on the branch
  double limit = 0.0;             // extrapolated limit where applicable
  double target = 0.0;            // analytic value the limit is compared to
  bool verdict = false;
};

// Oscillatory interior prediction
//   kappa(th)/sin th * sin((n+1) th + eta(th))
// also evaluated in the weight form sqrt(2/pi) w^{-1/2} (1-l^2)^{-1/4}
// sin((n+1) arccos l + pi xi); the two amplitudes must agree to 1e-10.
double bernstein_szego_prediction(const CoefficientModel& model, double lambda, long n,
                                  double tol = 1e-10);

// e_n = |P_n - prediction| against C rho_n on n <= n_max.
AsymptoticReport oscillation_report(const CoefficientModel& model, double lambda,
                                    long n_max, const ReportConfig& cfg = {});

// zeta^N P_N -> Omega/(1-zeta^2); at an eigenvalue zeta^-N P_N -> {P,g} != 0.
AsymptoticReport exterior_limit_report(const CoefficientModel& model,
                                       const SpectralParameter& sp, long n_max,
                                       const ReportConfig& cfg = {});

// Edge behaviour at z = +-1: regular branch P_n/((+-1)^n n) -> Omega(+-1),
// resonance branch (+-1)^n P_n -> gamma; for the weight family the
// n^(alpha+1/2) law applies; otherwise only the growth bound is checked.
AsymptoticReport edge_report(const CoefficientModel& model, int sign,
                             const ReportConfig& cfg = {});

}  // namespace jacobi_scatter
