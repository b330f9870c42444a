#pragma once

// Volume density sigma(x) = omega_n / Vol{ y : F(x,y) < 1 } and grid
// integration against it. Quadratic families use the closed form
// sigma = sqrt(det A(x)); drift families estimate the unit-ball volume by
// Monte Carlo rejection over a per-point bounding box.

#include <cstdint>

#include "finsler/grid.hpp"
#include "finsler/minkowski.hpp"

namespace finsler {

// Euclidean volume of the unit ball in dimension n.
double unit_ball_volume(int n);

struct DensityPointEstimate {
  double sigma = 1.0;
  double stderr_ = 0.0;   // standard error of sigma (0 for closed forms)
  long long mc_samples = 0;
};

struct VolumeDensityField {
  GridDomain grid;
  std::vector<double> sigma;
  std::vector<double> stderr_;
  long long mc_samples = 0;

  VolumeDensityField() = default;
  explicit VolumeDensityField(const GridDomain& g)
      : grid(g), sigma(g.size(), 1.0), stderr_(g.size(), 0.0) {}
};

DensityPointEstimate volume_density(const FinslerStructure& s, const Vec& x,
                                    long long mc_samples, uint64_t seed);

// Per-node density over a grid. Spatially constant structures are evaluated
// once and broadcast.
VolumeDensityField volume_density_field(const FinslerStructure& s,
                                        const GridDomain& grid,
                                        long long mc_samples, uint64_t seed,
                                        int threads = 0);

// Integral of the field against the volume form: sum of value * sigma * cell.
double integrate(const ScalarField& field, const VolumeDensityField& density);

}  // namespace finsler
