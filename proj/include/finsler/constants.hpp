#pragma once

// Sampled estimates of the reversibility constant r = sup F(x,y)/F(x,-y)
// and the uniformity constant l = inf over (x, y, v, w) of the fundamental
// tensor ratio g_{(x,v)}(y,y) / g_{(x,w)}(y,y). Quasi-random sampling plus
// derivative-free refinement from the best witnesses.
//
// The sampled sup approaches r from below and the sampled inf approaches l
// from above, so downstream inequality checks apply a bracketing haircut
// (smaller l, larger r stay on the valid side).

#include <cstdint>

#include "finsler/minkowski.hpp"

namespace finsler {

struct ReversibilityWitness {
  Vec x, y;
  double ratio = 1.0;
};

struct UniformityWitness {
  Vec x, v, w, y;
  double ratio = 1.0;
};

struct ConstantsEstimate {
  double r = 1.0;  // >= 1
  double l = 1.0;  // in [0,1]
  bool r_exact = false;
  bool l_exact = false;
  bool r_unbounded = false;  // estimate exceeded the unbounded threshold
  long long sample_count = 0;
  int refinement_iterations = 0;
  uint64_t seed = 0;
  ReversibilityWitness r_witness;
  UniformityWitness l_witness;
};

// Conservative bracket for inequality checks: l lowered, r raised.
struct ConstantsBracket {
  double l = 1.0;
  double r = 1.0;
  bool exact = false;
};

struct ConstantsOptions {
  int base_points = 4096;       // quasi-random positions
  int direction_tuples = 256;   // direction samples per position
  int refine_from_best = 8;
  int refine_max_iterations = 400;
  uint64_t seed = 2024;
  int threads = 0;
  double unbounded_threshold = 1e6;
};

ConstantsEstimate estimate_reversibility(const FinslerStructure& s,
                                         const ConstantsOptions& opts = {});
ConstantsEstimate estimate_uniformity(const FinslerStructure& s,
                                      const ConstantsOptions& opts = {});
// Both constants in one record.
ConstantsEstimate estimate_constants(const FinslerStructure& s,
                                     const ConstantsOptions& opts = {});

ConstantsBracket bracket(const ConstantsEstimate& e, double l_factor = 0.95,
                         double r_factor = 1.05);

// Margin of the two-point convexity bound of the squared dual norm:
//   t F*^2(a) + (1-t) F*^2(b) - l t(1-t) F*^2(b-a) - F*^2(t a + (1-t) b),
// nonnegative whenever l is a valid lower bound for the uniformity constant.
double check_convexity_inequality(const FinslerStructure& s, const Vec& x,
                                  const Vec& alpha, const Vec& beta, double t,
                                  double l_value);

}  // namespace finsler
