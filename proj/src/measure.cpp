#include "finsler/measure.hpp"

#include <cmath>
#include <stdexcept>

#include "finsler/parallel.hpp"
#include "finsler/rng.hpp"

namespace finsler {

double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

DensityPointEstimate volume_density(const FinslerStructure& s, const Vec& x,
                                    long long mc_samples, uint64_t seed) {
  s.require_in_domain(x);
  const int n = s.dimension();
  DensityPointEstimate out;
  if (s.quadratic()) {
    out.sigma = s.local(x).sqrt_det_a;
    return out;
  }
  if (mc_samples < 1000)
    throw std::invalid_argument("volume density needs >= 1000 MC samples");

  MinkowskiData d = s.local(x);
  // Bounding radius: the unit ball reaches 1/F(e) along direction e, so a
  // box of half-width sup_e 1/F(e) = 1/min_e F(e) covers it. The drift makes
  // the ball off-center, hence the symmetric bound must use the minimum over
  // directions; a 5% cushion absorbs the direction scan's resolution.
  double fmin = mk_min_unit_norm(d);
  if (!(fmin > 0))
    throw std::runtime_error("degenerate metric: unit ball is unbounded");
  double radius = 1.05 / fmin;

  SplitMix64 g = stream_rng(seed, fnv1a64(x.c.data(), sizeof(double) * n));
  long long hits = 0;
  Vec y(n);
  for (long long k = 0; k < mc_samples; ++k) {
    for (int i = 0; i < n; ++i) y.c[i] = g.uniform(-radius, radius);
    if (mk_norm(d, y) < 1.0) ++hits;
  }
  if (hits == 0)
    throw std::runtime_error("degenerate metric: unit ball has zero volume");

  double box_vol = std::pow(2.0 * radius, n);
  double p = static_cast<double>(hits) / static_cast<double>(mc_samples);
  double vol = p * box_vol;
  double omega = unit_ball_volume(n);
  out.sigma = omega / vol;
  // delta method: sigma = omega / (p * box), d sigma = sigma * dp / p
  double p_err = std::sqrt(p * (1.0 - p) / static_cast<double>(mc_samples));
  out.stderr_ = out.sigma * p_err / p;
  out.mc_samples = mc_samples;
  return out;
}

VolumeDensityField volume_density_field(const FinslerStructure& s,
                                        const GridDomain& grid,
                                        long long mc_samples, uint64_t seed,
                                        int threads) {
  VolumeDensityField f(grid);
  f.mc_samples = mc_samples;
  if (s.spatially_constant()) {
    DensityPointEstimate e = volume_density(s, grid.pos(size_t{0}), mc_samples, seed);
    for (size_t i = 0; i < f.sigma.size(); ++i) {
      f.sigma[i] = e.sigma;
      f.stderr_[i] = e.stderr_;
    }
    return f;
  }
  if (s.quadratic()) {
    // varying coefficients with closed-form density
    parallel_for(grid.size(), threads, [&](size_t lo, size_t hi) {
      for (size_t i = lo; i < hi; ++i)
        f.sigma[i] = s.local(grid.pos(i)).sqrt_det_a;
    });
    return f;
  }
  parallel_for(grid.size(), threads, [&](size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) {
      DensityPointEstimate e =
          volume_density(s, grid.pos(i), mc_samples, seed + i);
      f.sigma[i] = e.sigma;
      f.stderr_[i] = e.stderr_;
    }
  });
  return f;
}

double integrate(const ScalarField& field, const VolumeDensityField& density) {
  if (!(field.grid == density.grid))
    throw std::invalid_argument("field and density grids do not match");
  const GridDomain& g = field.grid;
  double sum = 0.0;
  const size_t count = g.size();
  for (size_t i = 0; i < count; ++i) {
    sum += field.v[i] * density.sigma[i] * g.cell_weight(g.multi(i));
  }
  return sum;
}

}  // namespace finsler
