#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/constants.hpp"
#include "finsler/rng.hpp"

using namespace finsler;

namespace {

Box unit_box(int dim) { return Box::cube(dim, 1.0); }

FinslerStructure make_randers(double b) {
  return FinslerStructure::randers(Mat::identity(3), Vec{b, 0, 0}, unit_box(3));
}

// Brute-force uniformity oracle: raw ratio sampling over random quadruples,
// independent of the pencil-eigenvalue path used by the estimator.
double uniformity_brute_force(const FinslerStructure& s, long long quads,
                              uint64_t seed) {
  SplitMix64 g = stream_rng(seed, 0xb7);
  int n = s.dimension();
  double best = 2.0;
  for (long long k = 0; k < quads; ++k) {
    Vec x = sample_domain_point(s, static_cast<uint64_t>(k % 8192), seed);
    MinkowskiData d = s.local(x);
    Vec v = g.unit_vector(n);
    Vec w = g.unit_vector(n);
    Vec y = g.unit_vector(n);
    double num = mk_fundamental_tensor(d, v).quad(y);
    double den = mk_fundamental_tensor(d, w).quad(y);
    if (den > 0) best = std::min(best, num / den);
  }
  return best;
}

}  // namespace

TEST_CASE("reversibility: exact short-circuits") {
  auto euc = FinslerStructure::euclidean(3, unit_box(3));
  auto est = estimate_reversibility(euc);
  CHECK(est.r == 1.0);
  CHECK(est.r_exact);

  auto riem = FinslerStructure::riemannian(Mat::diag(Vec{1, 4, 9}), unit_box(3));
  auto est2 = estimate_reversibility(riem);
  CHECK(est2.r == 1.0);
  CHECK(est2.r_exact);

  auto est3 = estimate_uniformity(riem);
  CHECK(est3.l == 1.0);
  CHECK(est3.l_exact);
}

TEST_CASE("reversibility of constant drift: (1+|b|)/(1-|b|)") {
  auto ran = make_randers(0.5);
  ConstantsOptions opts;
  opts.base_points = 512;
  opts.direction_tuples = 128;
  auto est = estimate_reversibility(ran, opts);
  CHECK(est.r == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(est.r > 1.0);
  CHECK_FALSE(est.r_exact);
  // witness attains the reported ratio
  double f1 = ran.eval(est.r_witness.x, est.r_witness.y);
  double f2 = ran.eval(est.r_witness.x, -est.r_witness.y);
  CHECK(f1 / f2 == doctest::Approx(est.r).epsilon(1e-12));

  auto ran3 = make_randers(0.3);
  auto est3 = estimate_reversibility(ran3, opts);
  CHECK(est3.r == doctest::Approx(1.3 / 0.7).epsilon(1e-3));
}

TEST_CASE("estimates monotone under prefix extension of samples") {
  auto ran = make_randers(0.4);
  ConstantsOptions small, large;
  small.base_points = 128;
  small.direction_tuples = 32;
  small.refine_from_best = 0;  // raw sampled extremes
  large = small;
  large.base_points = 512;
  auto r_small = estimate_reversibility(ran, small);
  auto r_large = estimate_reversibility(ran, large);
  CHECK(r_large.r >= r_small.r);
  auto l_small = estimate_uniformity(ran, small);
  auto l_large = estimate_uniformity(ran, large);
  CHECK(l_large.l <= l_small.l);
}

TEST_CASE("uniformity of Randers drift vs brute force") {
  auto ran = make_randers(0.5);
  ConstantsOptions opts;
  opts.base_points = 256;
  opts.direction_tuples = 128;
  auto est = estimate_uniformity(ran, opts);
  CHECK(est.l > 0.0);
  CHECK(est.l < 1.0);
  double brute = uniformity_brute_force(ran, 1000000, 1234);
  // estimator digs at least as deep as raw quadruple sampling, and the
  // two agree to the stated relative tolerance
  CHECK(est.l <= brute + 1e-12);
  CHECK(std::abs(est.l - brute) <= 1e-2 * brute);
}

TEST_CASE("implication: positive uniformity forces finite reversibility") {
  FinslerStructure structs[] = {
      FinslerStructure::euclidean(3, unit_box(3)),
      FinslerStructure::riemannian(Mat::diag(Vec{1, 1.21, 1.44}), unit_box(3)),
      make_randers(0.3), make_randers(0.5), FinslerStructure::funk(3, 0.5)};
  ConstantsOptions opts;
  opts.base_points = 256;
  opts.direction_tuples = 64;
  for (const auto& s : structs) {
    auto est = estimate_constants(s, opts);
    if (est.l > 0.01) {
      CHECK_FALSE(est.r_unbounded);
      CHECK(est.r < 1e6);
    }
  }
}

TEST_CASE("ball metric degenerates toward the boundary") {
  ConstantsOptions opts;
  opts.base_points = 1024;
  opts.direction_tuples = 64;
  double prev_l = 1.1;
  for (double rho : {0.5, 0.9, 0.99}) {
    auto s = FinslerStructure::funk(3, 1.0 - rho);
    auto est = estimate_uniformity(s, opts);
    CHECK(est.l < prev_l);
    prev_l = est.l;
  }
  CHECK(prev_l < 0.05);  // trending to zero

  auto tight = FinslerStructure::funk(3, 1.0 - 0.999);
  auto est_r = estimate_reversibility(tight, opts);
  CHECK(est_r.r > 100.0);
}

TEST_CASE("convexity margin of the squared dual norm") {
  auto euc = FinslerStructure::euclidean(3, unit_box(3));
  Vec x{0, 0, 0};
  // endpoints collapse exactly
  CHECK(check_convexity_inequality(euc, x, Vec{1, 2, 0}, Vec{0, 1, 1}, 0.0,
                                   1.0) == 0.0);
  CHECK(check_convexity_inequality(euc, x, Vec{1, 2, 0}, Vec{0, 1, 1}, 1.0,
                                   1.0) == 0.0);
  // parallelogram identity: equality at t = 1/2 with l = 1
  CHECK(check_convexity_inequality(euc, x, Vec{1, 0, 0}, Vec{0, 1, 0}, 0.5,
                                   1.0) == doctest::Approx(0.0).epsilon(1e-14));

  auto ran = make_randers(0.5);
  ConstantsOptions opts;
  opts.base_points = 256;
  opts.direction_tuples = 64;
  auto est = estimate_uniformity(ran, opts);
  SplitMix64 rng(77);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    Vec a = rng.box_vector(3);
    Vec b = rng.box_vector(3);
    double t = rng.u01();
    Vec xx = sample_domain_point(ran, k % 128, 3);
    worst = std::min(worst,
                     check_convexity_inequality(ran, xx, a, b, t, est.l));
  }
  CHECK(worst >= -1e-8);
}
