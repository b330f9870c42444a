#include "finsler/calculus.hpp"

#include <cmath>
#include <stdexcept>

namespace finsler {

namespace {

// one axis of the differential at node mi
double axis_derivative(const std::vector<double>& v, const GridDomain& g,
                       const MultiIndex& mi, int axis) {
  const double h = g.h(axis);
  MultiIndex a = mi, b = mi;
  const int i = mi[axis];
  const int last = g.res[axis] - 1;
  if (i > 0 && i < last) {
    a[axis] = i + 1;
    b[axis] = i - 1;
    return (v[g.index(a)] - v[g.index(b)]) / (2.0 * h);
  }
  if (i == 0) {
    a[axis] = 1;
    b[axis] = 2;
    return (-3.0 * v[g.index(mi)] + 4.0 * v[g.index(a)] - v[g.index(b)]) /
           (2.0 * h);
  }
  a[axis] = last - 1;
  b[axis] = last - 2;
  return (3.0 * v[g.index(mi)] - 4.0 * v[g.index(a)] + v[g.index(b)]) /
         (2.0 * h);
}

void require_min_resolution(const GridDomain& g) {
  for (int a = 0; a < g.dim; ++a)
    if (g.res[a] < 3)
      throw std::invalid_argument("differentiation needs >= 3 nodes per axis");
}

// C^2 quintic falling from 1 at s=0 to 0 at s=1 with flat ends.
double fall(double s) {
  if (s <= 0) return 1.0;
  if (s >= 1) return 0.0;
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}
double fall_deriv(double s) {
  if (s <= 0 || s >= 1) return 0.0;
  return -30.0 * s * s * (1.0 - s) * (1.0 - s);
}

}  // namespace

CovectorField differential(const ScalarField& u) {
  require_min_resolution(u.grid);
  const GridDomain& g = u.grid;
  CovectorField du(g);
  for_each_node(g, [&](size_t idx, const MultiIndex& mi) {
    for (int a = 0; a < g.dim; ++a)
      du.comp(idx, a) = axis_derivative(u.v, g, mi, a);
  });
  return du;
}

VectorField gradient_from_differential(const FinslerStructure& s,
                                       const CovectorField& du,
                                       GradientStats* stats) {
  const GridDomain& g = du.grid;
  VectorField grad(g);
  long long flagged = 0;
  const bool constant = s.spatially_constant();
  MinkowskiData d0;
  if (constant) d0 = s.local(g.pos(size_t{0}));
  for_each_node(g, [&](size_t idx, const MultiIndex&) {
    MinkowskiData d = constant ? d0 : s.local(g.pos(idx));
    Vec y = mk_legendre(d, du.vec_at(idx));
    if (!finite(y)) {
      y = Vec::zero(g.dim);
      ++flagged;
    }
    grad.set_vec(idx, y);
  });
  if (stats) stats->flagged_nodes = flagged;
  return grad;
}

VectorField finsler_gradient(const FinslerStructure& s, const ScalarField& u,
                             GradientStats* stats) {
  return gradient_from_differential(s, differential(u), stats);
}

ScalarField divergence(const VectorField& v,
                       const VolumeDensityField& density) {
  if (!(v.grid == density.grid))
    throw std::invalid_argument("vector field and density grids do not match");
  require_min_resolution(v.grid);
  const GridDomain& g = v.grid;
  ScalarField out(g);
  std::vector<double> weighted(g.size());
  for (int a = 0; a < g.dim; ++a) {
    for (size_t i = 0; i < g.size(); ++i)
      weighted[i] = density.sigma[i] * v.comp(i, a);
    for_each_node(g, [&](size_t idx, const MultiIndex& mi) {
      out.v[idx] += axis_derivative(weighted, g, mi, a);
    });
  }
  for (size_t i = 0; i < g.size(); ++i) out.v[i] /= density.sigma[i];
  return out;
}

ScalarField finsler_laplacian(const FinslerStructure& s, const ScalarField& u,
                              const VolumeDensityField& density,
                              GradientStats* stats) {
  return divergence(finsler_gradient(s, u, stats), density);
}

double test_function_value(const TestFunctionSpec& spec,
                           const std::vector<Vec>& poles, const Vec& x) {
  double v = fall(dist(x, spec.center) / spec.support_radius);
  if (v == 0.0) return 0.0;
  for (const Vec& p : poles) {
    double t = dist(x, p);
    if (t <= spec.excision_radius) return 0.0;
    if (t < 2.0 * spec.excision_radius)
      v *= 1.0 - fall(t / spec.excision_radius - 1.0);
  }
  return v;
}

Vec test_function_differential(const TestFunctionSpec& spec,
                               const std::vector<Vec>& poles, const Vec& x) {
  const int n = x.n;
  // product rule over the support factor and every excision factor
  double r = dist(x, spec.center);
  double s = r / spec.support_radius;
  double f0 = fall(s);
  Vec df0 = Vec::zero(n);
  if (f0 > 0.0 && r > 1e-14) {
    df0 = (x - spec.center) * (fall_deriv(s) / (spec.support_radius * r));
  }
  std::vector<double> e(poles.size(), 1.0);
  std::vector<Vec> de(poles.size(), Vec::zero(n));
  for (size_t i = 0; i < poles.size(); ++i) {
    double t = dist(x, poles[i]);
    if (t <= spec.excision_radius) {
      e[i] = 0.0;
    } else if (t < 2.0 * spec.excision_radius) {
      double q = t / spec.excision_radius - 1.0;
      e[i] = 1.0 - fall(q);
      de[i] = (x - poles[i]) * (-fall_deriv(q) / (spec.excision_radius * t));
    }
  }
  double prod_all = f0;
  for (double ei : e) prod_all *= ei;
  Vec grad = Vec::zero(n);
  if (f0 > 0.0) {
    double rest = 1.0;
    for (double ei : e) rest *= ei;
    grad += df0 * rest;
    for (size_t i = 0; i < poles.size(); ++i) {
      if (e[i] == 0.0) {
        // a vanished factor kills every term except its own derivative term,
        // and that one is zero inside the excision plateau
        return Vec::zero(n);
      }
      grad += de[i] * (prod_all / e[i]);
    }
  }
  return grad;
}

ScalarField make_test_function(const GridDomain& grid,
                               const TestFunctionSpec& spec,
                               const std::vector<Vec>& poles) {
  const double h = grid.spacing();
  if (!poles.empty() && spec.excision_radius <= 2.0 * h)
    throw std::invalid_argument(
        "excision radius must exceed two grid spacings");
  for (int a = 0; a < grid.dim; ++a) {
    if (spec.center.c[a] - spec.support_radius < grid.lo.c[a] - 1e-12 ||
        spec.center.c[a] + spec.support_radius > grid.hi.c[a] + 1e-12)
      throw std::invalid_argument("test function support leaves the grid");
  }
  ScalarField u(grid);
  double umax = 0.0;
  for_each_node(grid, [&](size_t idx, const MultiIndex& mi) {
    u.v[idx] = test_function_value(spec, poles, grid.pos(mi));
    umax = std::max(umax, u.v[idx]);
  });
  if (umax == 0.0)
    throw std::invalid_argument(
        "pole excision wiped out the test function support");
  return u;
}

}  // namespace finsler
