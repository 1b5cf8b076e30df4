#pragma once

#include <functional>
#include <vector>

#include "jacobi_scatter/numerics.hpp"

namespace jacobi_scatter {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1,1].
QuadratureRule gauss_legendre(int n);

// Gauss-Chebyshev rule for integrals against (1-x^2)^(-1/2):
// nodes cos((2j-1)pi/2n), uniform weight pi/n.
QuadratureRule gauss_chebyshev(int n);

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);

// ---- graded panel integration ---------------------------------------------
//
// Composite Gauss-Legendre over a panel mesh that refines geometrically
// (ratio 1/2) into flagged endpoints, down to panel width min_width.
// Integrable endpoint singularities (log or algebraic) then converge at the
// order of the panel rule.

struct PanelMesh {
  std::vector<double> breakpoints;  // sorted, breakpoints.front()=a, back()=b
};

PanelMesh graded_mesh(double a, double b, bool grade_left, bool grade_right,
                      int base_panels = 16, double min_width = 1e-8);

double integrate_panels(const PanelMesh& mesh, int gl_order,
                        const std::function<double(double)>& f);
Complex integrate_panels_complex(const PanelMesh& mesh, int gl_order,
                                 const std::function<Complex(double)>& f);

// Flattened node/weight list of a panel mesh (for caching integrand values).
QuadratureRule panel_rule(const PanelMesh& mesh, int gl_order);

}  // namespace jacobi_scatter
