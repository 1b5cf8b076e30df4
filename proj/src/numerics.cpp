#include "jacobi_scatter/numerics.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace jacobi_scatter {

namespace {

template <typename T>
T extrapolate_doubling_impl(const std::vector<T>& s, double* err_est) {
  if (s.empty()) {
    if (err_est) *err_est = 0.0;
    return T{};
  }
  std::vector<T> row = s;
  T best = row.back();
  double last_corr = 0.0;
  // Column k removes the 1/M^(k+1) term; values at M*2^j, ratio 2.
  for (std::size_t k = 0; row.size() > 1; ++k) {
    const double w = std::pow(2.0, double(k + 1));
    std::vector<T> next(row.size() - 1);
    for (std::size_t j = 0; j + 1 < row.size(); ++j)
      next[j] = (w * row[j + 1] - row[j]) / (w - 1.0);
    last_corr = std::abs(next.back() - row.back());
    row = std::move(next);
    best = row.back();
  }
  if (err_est) *err_est = s.size() > 1 ? last_corr : std::abs(best);
  return best;
}

}  // namespace

Complex extrapolate_doubling(const std::vector<Complex>& s, double* err_est) {
  return extrapolate_doubling_impl(s, err_est);
}

double extrapolate_doubling(const std::vector<double>& s, double* err_est) {
  return extrapolate_doubling_impl(s, err_est);
}

std::vector<Complex> extrapolate_doubling_vectors(
    const std::vector<std::vector<Complex>>& ladders, double* err_est) {
  if (ladders.empty()) return {};
  std::size_t len = ladders.front().size();
  for (const auto& l : ladders)
    if (l.size() < len) len = l.size();
  std::vector<Complex> out(len);
  double worst = 0.0;
  std::vector<Complex> column(ladders.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t j = 0; j < ladders.size(); ++j) column[j] = ladders[j][i];
    double e = 0.0;
    out[i] = extrapolate_doubling(column, &e);
    worst = std::max(worst, e);
  }
  if (err_est) *err_est = worst;
  return out;
}

Complex aitken(Complex s0, Complex s1, Complex s2) {
  const Complex d1 = s1 - s0, d2 = s2 - s1;
  const Complex den = d2 - d1;
  if (std::abs(den) < 1e-300) return s2;
  return s2 - d2 * d2 / den;
}

double aitken(double s0, double s1, double s2) {
  const double d1 = s1 - s0, d2 = s2 - s1;
  const double den = d2 - d1;
  if (std::abs(den) < 1e-300) return s2;
  return s2 - d2 * d2 / den;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  const std::size_t n = std::min(x.size(), y.size());
  if (n == 0) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) {
    f.intercept = sy / double(n);
    return f;
  }
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / double(n);
  return f;
}

double power_tail_sum(double c, double p, double from) {
  if (p <= 1.0 || from <= 0.0) return 0.0;
  const double n = from;
  // Euler-Maclaurin: integral + half endpoint + first derivative correction.
  return c * (std::pow(n, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(n, -p) +
              p / 12.0 * std::pow(n, -p - 1.0));
}

std::size_t worker_count() {
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("JACOBI_SCATTER_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && std::size_t(cap) < hw) hw = std::size_t(cap);
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace jacobi_scatter
