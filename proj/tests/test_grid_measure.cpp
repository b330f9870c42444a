#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/measure.hpp"
#include "finsler/rng.hpp"

using namespace finsler;

namespace {

Box unit_box(int dim) { return Box::cube(dim, 1.0); }

// 1-D composite Simpson reference for separable integrands.
double simpson(const std::function<double(double)>& f, double a, double b,
               int intervals) {
  if (intervals % 2) ++intervals;
  double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("grid indexing round trip and geometry") {
  GridDomain g = GridDomain::uniform(unit_box(3), 9);
  CHECK(g.size() == 9 * 9 * 9);
  CHECK(g.spacing() == doctest::Approx(0.25));
  for (size_t idx = 0; idx < g.size(); idx += 13) {
    CHECK(g.index(g.multi(idx)) == idx);
  }
  MultiIndex mi{4, 4, 4};
  Vec c = g.pos(mi);
  CHECK(norm(c) == 0.0);
  CHECK(g.cells_to_boundary(mi) == 4);
  CHECK(g.cells_to_boundary(MultiIndex{0, 4, 4}) == 0);
  // cell weights sum to the box volume
  double total = 0;
  for_each_node(g, [&](size_t, const MultiIndex& m) { total += g.cell_weight(m); });
  CHECK(total == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("pole snapping and validation") {
  GridDomain g = GridDomain::uniform(unit_box(3), 17);
  auto ps = PoleSet::snapped_to(g, {Vec{0.35, 0, 0}, Vec{-0.35, 0, 0}});
  CHECK(ps.count() == 2);
  // snapped onto nodes
  CHECK(ps.poles[0].c[0] == doctest::Approx(0.375));
  CHECK(ps.min_separation == doctest::Approx(0.75));
  CHECK_THROWS_WITH_AS(
      PoleSet::snapped_to(g, {Vec{0.35, 0, 0}, Vec{0.36, 0, 0}}),
      "poles must be pairwise distinct", std::invalid_argument);
  CHECK_THROWS_AS(PoleSet::snapped_to(g, {Vec{0.99, 0, 0}, Vec{0, 0, 0}}),
                  std::invalid_argument);
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0));
}

TEST_CASE("volume density closed forms") {
  auto euc = FinslerStructure::euclidean(3, unit_box(3));
  auto e = volume_density(euc, Vec{0.2, 0, 0}, 1000, 1);
  CHECK(e.sigma == 1.0);
  CHECK(e.stderr_ == 0.0);

  auto riem = FinslerStructure::riemannian(Mat::diag(Vec{1, 4, 9}), unit_box(3));
  auto er = volume_density(riem, Vec{0, 0, 0}, 1000, 1);
  CHECK(er.sigma == doctest::Approx(6.0));
}

TEST_CASE("volume density of constant drift vs analytic value") {
  // A = I, |b| = 0.5, n = 3: sigma = (1 - |b|^2)^((n+1)/2) = 0.75^2
  auto ran = FinslerStructure::randers(Mat::identity(3), Vec{0.5, 0, 0},
                                       unit_box(3));
  auto e = volume_density(ran, Vec{0, 0, 0}, 200000, 42);
  CHECK(e.stderr_ > 0.0);
  CHECK(std::abs(e.sigma - 0.5625) <= 3.0 * e.stderr_);

  // Euclidean-by-Monte-Carlo sanity through the drift path: tiny drift
  auto tiny = FinslerStructure::randers(Mat::identity(3), Vec{1e-9, 0, 0},
                                        unit_box(3));
  auto e2 = volume_density(tiny, Vec{0, 0, 0}, 200000, 7);
  CHECK(std::abs(e2.sigma - 1.0) <= 3.0 * e2.stderr_);

  CHECK_THROWS_AS(volume_density(ran, Vec{0, 0, 0}, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("projective ball metric has unit density") {
  auto funk = FinslerStructure::funk(3);
  for (double r : {0.0, 0.4, 0.8}) {
    Vec x{r, 0, 0};
    auto e = volume_density(funk, x, 200000, 11);
    CHECK(std::abs(e.sigma - 1.0) <= 3.0 * e.stderr_);
  }
}

TEST_CASE("reported standard error scales like 1/sqrt(samples)") {
  auto ran = FinslerStructure::randers(Mat::identity(3), Vec{0.5, 0, 0},
                                       unit_box(3));
  long long sizes[3] = {4000, 16000, 64000};
  double se[3];
  for (int i = 0; i < 3; ++i)
    se[i] = volume_density(ran, Vec{0, 0, 0}, sizes[i], 5).stderr_;
  double slope = std::log(se[2] / se[0]) /
                 std::log(static_cast<double>(sizes[2]) / sizes[0]);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("Monte Carlo density agrees with closed form under refinement") {
  // Run the rejection sampler on a quadratic metric disguised as drift-free
  // Randers data via a zero drift: estimates must straddle sqrt(det A).
  auto riem = FinslerStructure::riemannian(Mat::diag(Vec{1, 4, 9}), unit_box(3));
  GridDomain g = GridDomain::uniform(unit_box(3), 5);
  auto f = volume_density_field(riem, g, 2000, 3);
  for (size_t i = 0; i < f.sigma.size(); ++i) {
    CHECK(f.sigma[i] == doctest::Approx(6.0));
  }
}

TEST_CASE("integration: constants are exact") {
  GridDomain g = GridDomain::uniform(Box::cube(3, 0.5), 17);  // unit cube
  auto euc = FinslerStructure::euclidean(3, unit_box(3));
  auto density = volume_density_field(euc, g, 1000, 1);
  ScalarField one(g);
  for (auto& v : one.v) v = 1.0;
  CHECK(integrate(one, density) == doctest::Approx(1.0).epsilon(1e-13));

  auto riem = FinslerStructure::riemannian(Mat::diag(Vec{1, 4, 9}), unit_box(3));
  auto density_r = volume_density_field(riem, g, 1000, 1);
  CHECK(integrate(one, density_r) == doctest::Approx(6.0).epsilon(1e-13));
}

TEST_CASE("integration: separable bump matches 1-D quadrature product") {
  int res = 65;  // h = 1/32 on [-1,1]
  GridDomain g = GridDomain::uniform(unit_box(3), res);
  auto euc = FinslerStructure::euclidean(3, unit_box(3));
  auto density = volume_density_field(euc, g, 1000, 1);
  auto gauss = [](double t) { return std::exp(-4.0 * t * t); };
  ScalarField f(g);
  for_each_node(g, [&](size_t idx, const MultiIndex& mi) {
    Vec x = g.pos(mi);
    f.v[idx] = gauss(x.c[0]) * gauss(x.c[1]) * gauss(x.c[2]);
  });
  double one_d = simpson(gauss, -1.0, 1.0, 4096);
  double expected = one_d * one_d * one_d;
  CHECK(integrate(f, density) == doctest::Approx(expected).epsilon(1e-4));

  ScalarField wrong(GridDomain::uniform(unit_box(3), 9));
  CHECK_THROWS_AS(integrate(wrong, density), std::invalid_argument);
}
