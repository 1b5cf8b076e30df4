#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jacobi_scatter/numerics.hpp"

namespace jacobi_scatter {

enum class DecayClass { finite_support, trace_class, first_moment, unclassified };

std::string to_string(DecayClass c);
DecayClass decay_class_from_string(const std::string& s);

// Closed-form description of coefficients beyond the stored prefix:
// free tail (a_n = 1/2, b_n = 0) or a power law
//   a_n - 1/2 = a_coef * n^-exponent,   b_n = b_coef * n^-exponent.
struct TailRule {
  enum class Kind { free, power };
  Kind kind = Kind::free;
  double a_coef = 0.0;
  double b_coef = 0.0;
  double exponent = 0.0;
};

namespace detail {
// Backing store for a coefficient model; implementations are immutable.
struct ModelBackend {
  virtual ~ModelBackend() = default;
  virtual double a(long n) const = 0;
  virtual double b(long n) const = 0;
  // Natural log of the closed-form weight, when the family has one.  The
  // theta form must stay accurate for theta near 0 and pi, where cos(theta)
  // collapses onto +-1 in double precision.
  virtual bool has_log_weight() const { return false; }
  virtual double log_weight(double) const { return 0.0; }
  virtual double log_weight_theta(double theta) const {
    return log_weight(std::cos(theta));
  }
};
}  // namespace detail

// The sequences a_n > 0, b_n (the Jacobi operator H), with a declared decay
// class.  Immutable after construction; cheap to copy and safe to share
// across threads.
class CoefficientModel {
 public:
  CoefficientModel(std::shared_ptr<const detail::ModelBackend> backend,
                   DecayClass decay, std::optional<long> support,
                   std::optional<TailRule> tail_rule, std::string name);

  double a(long n) const;  // n >= 0
  double b(long n) const;  // n >= 0

  DecayClass decay_class() const { return decay_; }
  std::optional<long> support() const { return support_; }  // finite_support N
  const std::optional<TailRule>& tail_rule() const { return tail_rule_; }
  const std::string& name() const { return name_; }

  bool has_closed_form_weight() const;
  double log_weight(double lambda) const;        // ln w(lambda), lambda in (-1,1)
  double log_weight_theta(double theta) const;   // ln w(cos theta), theta in (0,pi)

  bool is_free() const;

  // set for the weight family kappa (1-x)^alpha (1+x)^beta
  const std::optional<std::pair<double, double>>& jacobi_parameters() const {
    return jacobi_params_;
  }

 private:
  friend CoefficientModel jacobi_family(double, double);
  std::shared_ptr<const detail::ModelBackend> backend_;
  DecayClass decay_;
  std::optional<long> support_;
  std::optional<TailRule> tail_rule_;
  std::string name_;
  std::optional<std::pair<double, double>> jacobi_params_;
};

// ---- built-in families ------------------------------------------------------

CoefficientModel free_model();

// Coefficients of the operator whose weight is kappa*(1-x)^alpha*(1+x)^beta.
// Degenerate n=0 cases: for alpha+beta = -1 the trailing factor of a_0^2 is 1;
// for alpha+beta = 0, b_0 = (beta-alpha)/2.
CoefficientModel jacobi_family(double alpha, double beta);

// a_n = (n+1)/sqrt((2n+2a+1)(2n+2a+3)), b_n = -2b/(2n+2a+1); requires a > |b|.
// The perturbation is not summable (a_n-1/2 ~ -a/2n), so the model is
// unclassified.
CoefficientModel pollaczek_family(double alpha, double beta);

// a_n = 1/2 and b_n chosen so that psi_n = (+-1)^n (n+1)^-l solves H psi = +-psi;
// the operator has the eigenvalue +-1 with eigenvector psi.  Requires l > 1/2.
CoefficientModel edge_example(double l, int sign);

// Explicit prefix + declared tail rule.
CoefficientModel explicit_model(std::vector<double> a_prefix,
                                std::vector<double> b_prefix, TailRule tail,
                                std::optional<DecayClass> declared = std::nullopt,
                                std::string name = "explicit");

// Finite-support convenience: entries beyond the prefixes are free.
CoefficientModel finite_support_model(std::vector<double> a_prefix,
                                      std::vector<double> b_prefix,
                                      std::string name = "finite");

// JSON file schema:
//   { "a": [...], "b": [...],
//     "tail": "free" | {"kind":"power","a_coef":c1,"b_coef":c2,"exponent":p},
//     "decay_class": "finite_support"|"trace_class"|"first_moment"|"unclassified" }
// decay_class may be omitted only for a free tail (finite support is implied).
CoefficientModel load_model(const std::string& path);
void save_model(const CoefficientModel& model, const std::string& path,
                long prefix_len);

// eigenvector of edge_example: psi_n = (+-1)^n (n+1)^-l, psi_{-1} = 0.
double edge_example_eigenvector(double l, int sign, long n);

// ---- tail diagnostics -------------------------------------------------------

// rho_n = sum_{m>=n} (|a_m-1/2| + |b_m|), precomputed on [0, n_max] with an
// estimated remainder beyond; alpha_m = |a_{m-1}-1/2|+|a_m-1/2|+|b_m|.
class TailBound {
 public:
  TailBound(const CoefficientModel& model, long n_max = 1 << 16);

  double rho(long n) const;
  double alpha(long n) const;  // n >= 0, alpha_0 uses a_{-1} = 1/2
  // Smallest M with rho(M) < tol (may exceed the precomputed range for slow
  // tails, in which case the power-law extension is inverted).
  long truncation_index(double tol) const;
  long n_max() const { return n_max_; }

 private:
  CoefficientModel model_;
  long n_max_;
  std::vector<double> rho_;   // rho_[n], n in [0, n_max]
  double tail_beyond_ = 0.0;  // estimate of rho(n_max+1)
  double tail_c_ = 0.0, tail_p_ = 0.0;
};

double tail_rho(const CoefficientModel& model, long n);

// A = prod_k (2 a_k), via exp of the log sum; partial sums over a doubling
// ladder are extrapolated when the tail decays slowly.
double normalization_A(const CoefficientModel& model, double tol = 1e-12);

// Fills a[0..m], b[0..m] (inclusive) for hot loops.
void fill_coefficients(const CoefficientModel& model, long m,
                       std::vector<double>& a, std::vector<double>& b);

}  // namespace jacobi_scatter
