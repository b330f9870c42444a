#pragma once

// Discrete differential operators on grid fields: differential Du, the
// (generally nonlinear) gradient J*(x, Du), weighted divergence, and the
// induced Laplacian, plus compactly supported C^2 test functions with
// excision balls around poles.
//
// Stencils are central differences inside and second-order one-sided at the
// boundary, so affine and quadratic fields differentiate exactly.

#include <vector>

#include "finsler/grid.hpp"
#include "finsler/measure.hpp"
#include "finsler/minkowski.hpp"

namespace finsler {

CovectorField differential(const ScalarField& u);

struct GradientStats {
  long long flagged_nodes = 0;  // non-finite Legendre output, zeroed
};

// Nodewise Legendre transform of Du (or a supplied differential).
VectorField finsler_gradient(const FinslerStructure& s, const ScalarField& u,
                             GradientStats* stats = nullptr);
VectorField gradient_from_differential(const FinslerStructure& s,
                                       const CovectorField& du,
                                       GradientStats* stats = nullptr);

// Weighted divergence (1/sigma) sum_i d_i(sigma V^i); the discrete adjoint
// of -Du against the same volume form.
ScalarField divergence(const VectorField& v, const VolumeDensityField& density);

ScalarField finsler_laplacian(const FinslerStructure& s, const ScalarField& u,
                              const VolumeDensityField& density,
                              GradientStats* stats = nullptr);

// Compactly supported C^2 bump: quintic radial profile equal to 1 at the
// center, 0 outside the support ball, and 0 inside a ball of radius
// excision_radius around every pole (C^2 rise completed by twice the
// radius).
struct TestFunctionSpec {
  Vec center;
  double support_radius = 0.8;
  double excision_radius = 0.0;
};

double test_function_value(const TestFunctionSpec& spec,
                           const std::vector<Vec>& poles, const Vec& x);
Vec test_function_differential(const TestFunctionSpec& spec,
                               const std::vector<Vec>& poles, const Vec& x);

// Samples the bump onto the grid. Throws when the excision radius is not
// above 2h, the support leaves the grid, or excision wipes the bump out.
ScalarField make_test_function(const GridDomain& grid,
                               const TestFunctionSpec& spec,
                               const std::vector<Vec>& poles);

}  // namespace finsler
