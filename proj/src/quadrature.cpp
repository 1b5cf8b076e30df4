#include "jacobi_scatter/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "jacobi_scatter/errors.hpp"

namespace jacobi_scatter {

namespace {

QuadratureRule compute_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-like initial guess for the i-th root, then Newton.
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = -p1 / pp;
      z += dz;
      if (std::abs(dz) < std::numeric_limits<double>::epsilon()) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return rule;
}

const QuadratureRule& cached_gauss_legendre(int n) {
  static std::mutex mtx;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw InvalidParameter("gauss_legendre: n must be >= 1");
  return cached_gauss_legendre(n);
}

QuadratureRule gauss_chebyshev(int n) {
  if (n < 1) throw InvalidParameter("gauss_chebyshev: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, kPi / n);
  for (int j = 1; j <= n; ++j)
    rule.nodes[j - 1] = std::cos((2.0 * j - 1.0) * kPi / (2.0 * n));
  return rule;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = rule.weights[i] * f(rule.nodes[i]) - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

PanelMesh graded_mesh(double a, double b, bool grade_left, bool grade_right,
                      int base_panels, double min_width) {
  if (!(b > a)) throw InvalidParameter("graded_mesh: empty interval");
  if (base_panels < 1) base_panels = 1;
  const double len = b - a;
  std::vector<double> pts;
  pts.push_back(a);
  // Geometric refinement toward an endpoint: widths len/4, len/8, ...
  std::vector<double> left_offsets, right_offsets;
  if (grade_left) {
    for (double w = len / 4.0; w > min_width; w /= 2.0) left_offsets.push_back(w);
  }
  if (grade_right) {
    for (double w = len / 4.0; w > min_width; w /= 2.0) right_offsets.push_back(w);
  }
  // left_offsets holds distances from a (descending as built), so reverse.
  for (auto it = left_offsets.rbegin(); it != left_offsets.rend(); ++it)
    pts.push_back(a + *it);
  const double mid_lo = grade_left ? a + len / 4.0 : a;
  const double mid_hi = grade_right ? b - len / 4.0 : b;
  if (mid_hi > mid_lo) {
    const int nb = base_panels;
    for (int i = 1; i < nb; ++i)
      pts.push_back(mid_lo + (mid_hi - mid_lo) * double(i) / nb);
    pts.push_back(mid_hi);
  }
  for (double w : right_offsets) pts.push_back(b - w);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double x, double y) { return !(y > x); }),
            pts.end());
  PanelMesh mesh;
  mesh.breakpoints = std::move(pts);
  return mesh;
}

QuadratureRule panel_rule(const PanelMesh& mesh, int gl_order) {
  const QuadratureRule& base = cached_gauss_legendre(gl_order);
  QuadratureRule out;
  const auto& bp = mesh.breakpoints;
  out.nodes.reserve((bp.size() - 1) * base.nodes.size());
  out.weights.reserve(out.nodes.capacity());
  for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
    const double h = 0.5 * (bp[p + 1] - bp[p]);
    const double c = 0.5 * (bp[p + 1] + bp[p]);
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      out.nodes.push_back(c + h * base.nodes[i]);
      out.weights.push_back(h * base.weights[i]);
    }
  }
  return out;
}

double integrate_panels(const PanelMesh& mesh, int gl_order,
                        const std::function<double(double)>& f) {
  return integrate(panel_rule(mesh, gl_order), f);
}

Complex integrate_panels_complex(const PanelMesh& mesh, int gl_order,
                                 const std::function<Complex(double)>& f) {
  const QuadratureRule rule = panel_rule(mesh, gl_order);
  Complex s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * f(rule.nodes[i]);
  return s;
}

}  // namespace jacobi_scatter
