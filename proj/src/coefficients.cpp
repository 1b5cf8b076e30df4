#include "jacobi_scatter/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jacobi_scatter/errors.hpp"

namespace jacobi_scatter {

using nlohmann::json;

std::string to_string(DecayClass c) {
  switch (c) {
    case DecayClass::finite_support: return "finite_support";
    case DecayClass::trace_class: return "trace_class";
    case DecayClass::first_moment: return "first_moment";
    case DecayClass::unclassified: return "unclassified";
  }
  return "unclassified";
}

DecayClass decay_class_from_string(const std::string& s) {
  if (s == "finite_support") return DecayClass::finite_support;
  if (s == "trace_class") return DecayClass::trace_class;
  if (s == "first_moment") return DecayClass::first_moment;
  if (s == "unclassified") return DecayClass::unclassified;
  throw InvalidParameter("unknown decay class '" + s + "'");
}

CoefficientModel::CoefficientModel(std::shared_ptr<const detail::ModelBackend> backend,
                                   DecayClass decay, std::optional<long> support,
                                   std::optional<TailRule> tail_rule, std::string name)
    : backend_(std::move(backend)),
      decay_(decay),
      support_(support),
      tail_rule_(std::move(tail_rule)),
      name_(std::move(name)) {}

double CoefficientModel::a(long n) const {
  if (n < 0) throw InvalidParameter("coefficient index must be >= 0");
  const double v = backend_->a(n);
  if (!(v > 0.0))
    throw InvalidParameter(name_ + ": a(" + std::to_string(n) + ") = " +
                           std::to_string(v) + " is not positive");
  return v;
}

double CoefficientModel::b(long n) const {
  if (n < 0) throw InvalidParameter("coefficient index must be >= 0");
  return backend_->b(n);
}

bool CoefficientModel::has_closed_form_weight() const {
  return backend_->has_log_weight();
}

double CoefficientModel::log_weight(double lambda) const {
  if (!backend_->has_log_weight())
    throw InvalidParameter(name_ + " has no closed-form weight");
  if (!(lambda > -1.0 && lambda < 1.0))
    throw EdgeProximity("closed-form weight requested outside (-1,1)");
  return backend_->log_weight(lambda);
}

double CoefficientModel::log_weight_theta(double theta) const {
  if (!backend_->has_log_weight())
    throw InvalidParameter(name_ + " has no closed-form weight");
  if (!(theta > 0.0 && theta < kPi))
    throw EdgeProximity("closed-form weight requested outside theta in (0,pi)");
  return backend_->log_weight_theta(theta);
}

bool CoefficientModel::is_free() const {
  return support_ && *support_ < 0;
}

// ---- backends ---------------------------------------------------------------

namespace {

struct FreeBackend final : detail::ModelBackend {
  double a(long) const override { return 0.5; }
  double b(long) const override { return 0.0; }
  bool has_log_weight() const override { return true; }
  double log_weight(double x) const override {
    return std::log(2.0 / kPi) + 0.5 * std::log1p(-x * x);
  }
  double log_weight_theta(double th) const override {
    return std::log(2.0 / kPi) + std::log(std::sin(th));
  }
};

struct JacobiBackend final : detail::ModelBackend {
  double alpha, beta, log_kappa;
  JacobiBackend(double al, double be) : alpha(al), beta(be) {
    log_kappa = std::lgamma(alpha + beta + 2.0) - (alpha + beta + 1.0) * std::log(2.0) -
                std::lgamma(alpha + 1.0) - std::lgamma(beta + 1.0);
  }
  double a(long n) const override {
    const double s = alpha + beta;
    const double nn = double(n);
    double a2 = 4.0 * (nn + 1.0) * (nn + alpha + 1.0) * (nn + beta + 1.0) /
                ((2.0 * nn + s + 3.0) * (2.0 * nn + s + 2.0) * (2.0 * nn + s + 2.0));
    // trailing factor (n+s+1)/(2n+s+1), replaced by 1 when n=0, s=-1
    if (n == 0 && s == -1.0) {
      // keep a2
    } else {
      a2 *= (nn + s + 1.0) / (2.0 * nn + s + 1.0);
    }
    return std::sqrt(a2);
  }
  double b(long n) const override {
    const double s = alpha + beta;
    if (n == 0) {
      if (s == 0.0) return (beta - alpha) / 2.0;
      return (alpha - beta) * (0.0 - 1.0 / (2.0 + s));
    }
    const double nn = double(n);
    return (alpha - beta) * (nn / (2.0 * nn + s) - (nn + 1.0) / (2.0 * nn + 2.0 + s));
  }
  bool has_log_weight() const override { return true; }
  double log_weight(double x) const override {
    return log_kappa + alpha * std::log1p(-x) + beta * std::log1p(x);
  }
  double log_weight_theta(double th) const override {
    // 1 - cos th = 2 sin^2(th/2), 1 + cos th = 2 cos^2(th/2)
    const double ls = std::log(2.0) + 2.0 * std::log(std::abs(std::sin(0.5 * th)));
    const double lc = std::log(2.0) + 2.0 * std::log(std::abs(std::cos(0.5 * th)));
    return log_kappa + alpha * ls + beta * lc;
  }
};

struct PollaczekBackend final : detail::ModelBackend {
  double alpha, beta;
  PollaczekBackend(double al, double be) : alpha(al), beta(be) {}
  double a(long n) const override {
    const double nn = double(n);
    return (nn + 1.0) /
           std::sqrt((2.0 * nn + 2.0 * alpha + 1.0) * (2.0 * nn + 2.0 * alpha + 3.0));
  }
  double b(long n) const override {
    return -2.0 * beta / (2.0 * double(n) + 2.0 * alpha + 1.0);
  }
  bool has_log_weight() const override { return true; }
  double log_weight(double x) const override { return log_weight_theta(std::acos(x)); }
  double log_weight_theta(double th) const override {
    const double h = (alpha * std::cos(th) + beta) / std::sin(th);
    const double ph = kPi * h;
    // log cosh without overflow
    const double logcosh = std::abs(ph) + std::log1p(std::exp(-2.0 * std::abs(ph))) -
                           std::log(2.0);
    return std::log(alpha + 0.5) + (2.0 * th - kPi) * h - logcosh;
  }
};

struct EdgeBackend final : detail::ModelBackend {
  double l;
  int sign;
  EdgeBackend(double l_, int sign_) : l(l_), sign(sign_) {}
  double psi(long n) const {
    if (n < 0) return 0.0;
    const double v = std::pow(double(n) + 1.0, -l);
    return (sign > 0 || n % 2 == 0) ? v : -v;
  }
  double a(long) const override { return 0.5; }
  double b(long n) const override {
    return double(sign) - (psi(n - 1) + psi(n + 1)) / (2.0 * psi(n));
  }
};

struct ExplicitBackend final : detail::ModelBackend {
  std::vector<double> av, bv;
  TailRule tail;
  // the power law is an asymptotic rule; index 0 is evaluated at n = 1
  double a(long n) const override {
    if (n < long(av.size())) return av[n];
    if (tail.kind == TailRule::Kind::free) return 0.5;
    return 0.5 + tail.a_coef * std::pow(double(std::max<long>(n, 1)), -tail.exponent);
  }
  double b(long n) const override {
    if (n < long(bv.size())) return bv[n];
    if (tail.kind == TailRule::Kind::free) return 0.0;
    return tail.b_coef * std::pow(double(std::max<long>(n, 1)), -tail.exponent);
  }
};

}  // namespace

CoefficientModel free_model() {
  // support = -1 marks the empty perturbation
  return CoefficientModel(std::make_shared<FreeBackend>(), DecayClass::finite_support,
                          -1, TailRule{}, "free");
}

CoefficientModel jacobi_family(double alpha, double beta) {
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw InvalidParameter("jacobi_family requires alpha, beta > -1");
  std::ostringstream name;
  name << "jacobi:" << alpha << "," << beta;
  const bool half = std::abs(std::abs(alpha) - 0.5) == 0.0 &&
                    std::abs(std::abs(beta) - 0.5) == 0.0;
  // |alpha|=|beta|=1/2 degenerates to a finite-rank perturbation
  std::optional<long> support;
  DecayClass decay = DecayClass::trace_class;
  std::optional<TailRule> rule;
  if (half) {
    decay = DecayClass::finite_support;
    support = 1;
    rule = TailRule{};
  } else {
    TailRule r;
    r.kind = TailRule::Kind::power;
    r.exponent = 2.0;
    r.a_coef = (1.0 - 2.0 * alpha * alpha - 2.0 * beta * beta) / 16.0;
    r.b_coef = (beta * beta - alpha * alpha) / 4.0;
    rule = r;
  }
  CoefficientModel m(std::make_shared<JacobiBackend>(alpha, beta), decay, support,
                     rule, name.str());
  m.jacobi_params_ = std::make_pair(alpha, beta);
  return m;
}

CoefficientModel pollaczek_family(double alpha, double beta) {
  if (!(alpha > std::abs(beta)))
    throw InvalidParameter("pollaczek_family requires alpha > |beta|");
  std::ostringstream name;
  name << "pollaczek:" << alpha << "," << beta;
  return CoefficientModel(std::make_shared<PollaczekBackend>(alpha, beta),
                          DecayClass::unclassified, std::nullopt, std::nullopt,
                          name.str());
}

CoefficientModel edge_example(double l, int sign) {
  if (!(l > 0.5))
    throw InvalidParameter("edge_example requires l > 1/2 (square-summable eigenvector)");
  if (sign != 1 && sign != -1) throw InvalidParameter("edge_example sign must be +-1");
  std::ostringstream name;
  name << "edge:" << l << "," << (sign > 0 ? "+" : "-");
  TailRule r;
  r.kind = TailRule::Kind::power;
  r.exponent = 2.0;
  r.a_coef = 0.0;
  // expanding b_n = +-1 - (psi_{n-1}+psi_{n+1})/(2 psi_n) in 1/n gives the
  // leading coefficient -+ l(l+1)/2
  r.b_coef = (sign > 0 ? -0.5 : 0.5) * l * (l + 1.0);
  return CoefficientModel(std::make_shared<EdgeBackend>(l, sign),
                          DecayClass::trace_class, std::nullopt, r, name.str());
}

double edge_example_eigenvector(double l, int sign, long n) {
  if (n < 0) return 0.0;
  const double v = std::pow(double(n) + 1.0, -l);
  return (sign > 0 || n % 2 == 0) ? v : -v;
}

CoefficientModel explicit_model(std::vector<double> a_prefix,
                                std::vector<double> b_prefix, TailRule tail,
                                std::optional<DecayClass> declared, std::string name) {
  for (std::size_t i = 0; i < a_prefix.size(); ++i)
    if (!(a_prefix[i] > 0.0))
      throw InvalidParameter("a(" + std::to_string(i) + ") = " +
                             std::to_string(a_prefix[i]) + " must be positive");
  DecayClass decay;
  std::optional<long> support;
  if (declared) {
    decay = *declared;
  } else if (tail.kind == TailRule::Kind::free) {
    decay = DecayClass::finite_support;
  } else {
    throw InvalidParameter("explicit model with a power tail needs a declared decay class");
  }
  if (decay == DecayClass::finite_support) {
    if (tail.kind != TailRule::Kind::free)
      throw InvalidParameter("finite_support requires a free tail");
    support = long(std::max(a_prefix.size(), b_prefix.size())) - 1;
  }
  auto be = std::make_shared<ExplicitBackend>();
  be->av = std::move(a_prefix);
  be->bv = std::move(b_prefix);
  be->tail = tail;
  return CoefficientModel(be, decay, support, tail, std::move(name));
}

CoefficientModel finite_support_model(std::vector<double> a_prefix,
                                      std::vector<double> b_prefix, std::string name) {
  return explicit_model(std::move(a_prefix), std::move(b_prefix), TailRule{},
                        DecayClass::finite_support, std::move(name));
}

CoefficientModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IoError("malformed JSON in '" + path + "': " + e.what());
  }
  if (!j.is_object() || !j.contains("a") || !j.contains("b"))
    throw IoError("model file must contain arrays 'a' and 'b'");
  std::vector<double> a, b;
  try {
    a = j.at("a").get<std::vector<double>>();
    b = j.at("b").get<std::vector<double>>();
  } catch (const std::exception& e) {
    throw IoError(std::string("bad coefficient arrays: ") + e.what());
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] > 0.0))
      throw IoError("a(" + std::to_string(i) + ") = " + std::to_string(a[i]) +
                    " must be positive");
  if (!j.contains("tail")) throw IoError("model file is missing the tail rule");
  TailRule tail;
  const auto& tj = j.at("tail");
  if (tj.is_string() && tj.get<std::string>() == "free") {
    tail.kind = TailRule::Kind::free;
  } else if (tj.is_object() && tj.value("kind", "") == "power") {
    tail.kind = TailRule::Kind::power;
    tail.a_coef = tj.value("a_coef", 0.0);
    tail.b_coef = tj.value("b_coef", 0.0);
    tail.exponent = tj.value("exponent", 0.0);
    if (!(tail.exponent > 1.0))
      throw IoError("power tail exponent must exceed 1");
  } else {
    throw IoError("tail must be \"free\" or {kind:\"power\",...}");
  }
  std::optional<DecayClass> decay;
  if (j.contains("decay_class"))
    decay = decay_class_from_string(j.at("decay_class").get<std::string>());
  else if (tail.kind != TailRule::Kind::free)
    throw IoError("decay_class must be declared for a power tail");
  return explicit_model(std::move(a), std::move(b), tail, decay, "file:" + path);
}

void save_model(const CoefficientModel& model, const std::string& path,
                long prefix_len) {
  json j;
  std::vector<double> a, b;
  for (long n = 0; n < prefix_len; ++n) {
    a.push_back(model.a(n));
    b.push_back(model.b(n));
  }
  j["a"] = a;
  j["b"] = b;
  if (model.tail_rule() && model.tail_rule()->kind == TailRule::Kind::power) {
    j["tail"] = {{"kind", "power"},
                 {"a_coef", model.tail_rule()->a_coef},
                 {"b_coef", model.tail_rule()->b_coef},
                 {"exponent", model.tail_rule()->exponent}};
  } else {
    j["tail"] = "free";
  }
  j["decay_class"] = to_string(model.decay_class());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file '" + path + "'");
  out << j.dump(2) << "\n";
}

// ---- tail diagnostics -------------------------------------------------------

TailBound::TailBound(const CoefficientModel& model, long n_max)
    : model_(model), n_max_(n_max) {
  if (model.decay_class() == DecayClass::unclassified)
    throw DecayClassError(model.name() + ": tail sums undefined for unclassified decay");
  if (model.support()) {
    n_max_ = std::max<long>(*model.support() + 2, 4);
  }
  rho_.assign(std::size_t(n_max_) + 1, 0.0);
  // suffix sums of |a_m - 1/2| + |b_m|
  double beyond = 0.0;
  if (!model.support()) {
    // estimate the remainder past n_max from the declared/observed power law
    const double t1 = std::abs(model.a(n_max_) - 0.5) + std::abs(model.b(n_max_));
    const double t2 =
        std::abs(model.a(2 * n_max_) - 0.5) + std::abs(model.b(2 * n_max_));
    double p = 2.0;
    if (model.tail_rule() && model.tail_rule()->kind == TailRule::Kind::power)
      p = model.tail_rule()->exponent;
    else if (t1 > 0.0 && t2 > 0.0)
      p = std::log(t1 / t2) / std::log(2.0);
    if (p < 1.05) p = 1.05;
    tail_p_ = p;
    tail_c_ = t1 * std::pow(double(n_max_), p);
    beyond = power_tail_sum(tail_c_, p, double(n_max_) + 1.0);
  }
  tail_beyond_ = beyond;
  double acc = beyond;
  for (long n = n_max_; n >= 0; --n) {
    acc += std::abs(model.a(n) - 0.5) + std::abs(model.b(n));
    rho_[std::size_t(n)] = acc;
  }
}

double TailBound::rho(long n) const {
  if (n < 0) n = 0;
  if (n <= n_max_) return rho_[std::size_t(n)];
  if (model_.support()) return 0.0;
  return power_tail_sum(tail_c_, tail_p_, double(n));
}

double TailBound::alpha(long n) const {
  const double am1 = n == 0 ? 0.5 : model_.a(n - 1);
  return std::abs(am1 - 0.5) + std::abs(model_.a(n) - 0.5) + std::abs(model_.b(n));
}

long TailBound::truncation_index(double tol) const {
  if (!(tol > 0.0)) throw InvalidParameter("truncation_index: tol must be positive");
  if (rho_[0] < tol) return 0;
  if (rho_.back() < tol) {
    // first index with rho < tol (rho_ is nonincreasing)
    long lo = 0, hi = n_max_;
    while (lo < hi) {
      const long mid = (lo + hi) / 2;
      if (rho_[std::size_t(mid)] < tol)
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }
  if (model_.support()) return *model_.support() + 1;
  // invert the power-law extension: c/(p-1) n^(1-p) = tol
  const double n = std::pow(tail_c_ / ((tail_p_ - 1.0) * tol), 1.0 / (tail_p_ - 1.0));
  return long(std::ceil(n));
}

double tail_rho(const CoefficientModel& model, long n) {
  return TailBound(model, std::max<long>(2 * n + 16, 1 << 12)).rho(n);
}

double normalization_A(const CoefficientModel& model, double tol) {
  if (model.decay_class() == DecayClass::unclassified)
    throw DecayClassError(model.name() + ": normalization product diverges");
  auto log_partial = [&](long m) {
    double s = 0.0, c = 0.0;
    for (long k = 0; k < m; ++k) {
      const double y = std::log(2.0 * model.a(k)) - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    return s;
  };
  if (model.support()) return std::exp(log_partial(*model.support() + 1));
  TailBound tb(model, 1 << 14);
  const long direct = tb.truncation_index(tol);
  if (direct <= (1 << 16)) return std::exp(log_partial(direct + 1));
  // slow tail: extrapolate partial sums over a doubling ladder
  std::vector<double> ladder;
  long m = 1 << 12;
  double prev = 0.0;
  for (int j = 0; j < 7; ++j, m *= 2) {
    ladder.push_back(log_partial(m));
    double err = 0.0;
    const double ex = extrapolate_doubling(ladder, &err);
    if (j >= 2 && err < tol && std::abs(ex - prev) < tol) return std::exp(ex);
    prev = ex;
  }
  return std::exp(prev);
}

void fill_coefficients(const CoefficientModel& model, long m, std::vector<double>& a,
                       std::vector<double>& b) {
  a.resize(std::size_t(m) + 1);
  b.resize(std::size_t(m) + 1);
  for (long n = 0; n <= m; ++n) {
    a[std::size_t(n)] = model.a(n);
    b[std::size_t(n)] = model.b(n);
  }
}

}  // namespace jacobi_scatter
