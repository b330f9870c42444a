#pragma once

// Finsler structures on a chart and their pointwise norm algebra:
// evaluation, fundamental tensor, dual (polar) norm and Legendre map.
//
// Every built-in family is of Randers type at each point,
//     F(x,y) = sqrt(y' A(x) y) + b(x) . y,     b' A^-1 b < 1,
// with b == 0 for the quadratic (Euclidean/Riemannian) families. The
// projective metric on the unit ball also fits this mold with
//     A(x) = ((1-|x|^2) I + x x') / (1-|x|^2)^2,   b(x) = x / (1-|x|^2),
// which is how it is evaluated here. Closed forms for the dual norm and
// Legendre map follow from that normal form; a derivative-free sphere
// maximizer and finite-difference fallbacks are provided alongside them as
// independent routes.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "finsler/smallvec.hpp"

namespace finsler {

enum class Family { kEuclidean, kRiemannian, kRanders, kFunk };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

struct Box {
  Vec lo, hi;

  int dim() const { return lo.n; }
  bool contains(const Vec& x, double tol = 0.0) const {
    if (x.n != lo.n) return false;
    for (int i = 0; i < x.n; ++i)
      if (x.c[i] < lo.c[i] - tol || x.c[i] > hi.c[i] + tol) return false;
    return true;
  }
  Vec clamp(Vec x) const {
    for (int i = 0; i < x.n; ++i)
      x.c[i] = std::min(hi.c[i], std::max(lo.c[i], x.c[i]));
    return x;
  }
  static Box cube(int dim, double half_width) {
    Box b;
    b.lo = Vec(dim);
    b.hi = Vec(dim);
    for (int i = 0; i < dim; ++i) {
      b.lo.c[i] = -half_width;
      b.hi.c[i] = half_width;
    }
    return b;
  }
};

// Norm data frozen at one point.
struct MinkowskiData {
  int n = 0;
  Mat a;            // coefficient matrix, SPD
  Mat a_inv;        // its inverse
  Vec b;            // drift one-form (zero for quadratic families)
  double lambda = 1.0;      // 1 - b' A^-1 b, in (0,1]
  double sqrt_det_a = 1.0;  // sqrt(det A)
};

double mk_norm(const MinkowskiData& d, const Vec& y);
Vec mk_norm_gradient(const MinkowskiData& d, const Vec& y);   // y != 0
Mat mk_norm_hessian(const MinkowskiData& d, const Vec& y);    // y != 0
Mat mk_fundamental_tensor(const MinkowskiData& d, const Vec& y);  // y != 0

double mk_dual_norm(const MinkowskiData& d, const Vec& alpha);
Vec mk_legendre(const MinkowskiData& d, const Vec& alpha);

// min over unit Euclidean directions of F(e); used for bounding boxes of
// unit balls. Deterministic: quasi-uniform scan plus local polish.
double mk_min_unit_norm(const MinkowskiData& d, int scan_dirs = 512);

struct PolarSearchResult {
  double value = 0;
  Vec argmax;
  bool converged = false;
  int starts = 0;
  int iterations = 0;
};

struct LegendreNumericResult {
  Vec y;
  double norm_gap = 0;     // |F(y) - F*(alpha)|
  double pairing_gap = 0;  // |alpha(y) - F*(alpha) F(y)|
  bool converged = false;
};

struct PolarSearchOptions {
  int starts = 32;
  int max_iterations = 200;
  double step_tol = 1e-10;
};

class FinslerStructure {
 public:
  static FinslerStructure euclidean(int dim, Box domain);
  static FinslerStructure riemannian(const Mat& a, Box domain);
  // Diagonal coefficients varying over the chart:
  //   a_i(x) = base_i * (1 + amp * sin(freq * x_{(i+1) mod n}))^2
  static FinslerStructure riemannian_varying_diag(const Vec& diag_base,
                                                  double amp, double freq,
                                                  Box domain);
  static FinslerStructure randers(const Mat& a, const Vec& drift, Box domain);
  // Projective metric on the open unit ball; evaluations require
  // |x| <= 1 - boundary_margin.
  static FinslerStructure funk(int dim, double boundary_margin = 1e-3);

  Family family() const { return family_; }
  int dimension() const { return dim_; }
  const Box& domain() const { return domain_; }
  double funk_margin() const { return funk_margin_; }
  bool drift_reversed() const { return reversed_; }

  // True when F(x,-y) = F(x,y): quadratic families only.
  bool reversible() const { return family_ == Family::kEuclidean ||
                                   family_ == Family::kRiemannian; }
  // True when the norm is quadratic in y (fundamental tensor independent
  // of the reference direction).
  bool quadratic() const { return reversible(); }
  // True when the local data does not depend on the base point.
  bool spatially_constant() const;

  bool in_domain(const Vec& x, double tol = 0.0) const;
  void require_in_domain(const Vec& x) const;

  // Local norm data at x; cheap for constant families.
  MinkowskiData local(const Vec& x) const;

  // F(x,y)
  double eval(const Vec& x, const Vec& y) const;
  // F*(x,alpha) = sup_y alpha(y)/F(x,y), by closed form.
  double polar(const Vec& x, const Vec& alpha) const;
  // J*(x,alpha): maximizer of alpha(y) - F^2(x,y)/2; J*(x,0) = 0.
  Vec legendre(const Vec& x, const Vec& alpha) const;
  // Hessian of F^2(x,.)/2 at y != 0, by closed form.
  Mat fundamental_tensor(const Vec& x, const Vec& y) const;

  // Structure with reversed fibers: Fbar(x,y) = F(x,-y).
  FinslerStructure reversed() const;

  // Derivative-free dual-norm evaluation: multistart projected ascent of
  // alpha(y)/F(x,y) over the Euclidean unit sphere.
  PolarSearchResult polar_multistart(const Vec& x, const Vec& alpha,
                                     const PolarSearchOptions& opts = {}) const;
  // Legendre map through central differences of F*^2/2 in the covector.
  LegendreNumericResult legendre_numeric(const Vec& x, const Vec& alpha,
                                         double step = 1e-6) const;
  // Fundamental tensor by central second differences of F^2/2 with
  // step h = h_rel * max(|y|, 1).
  Mat fundamental_tensor_fd(const Vec& x, const Vec& y,
                            double h_rel = 1e-4) const;

  // For Randers-family structures: the ratio (1+|b|)/(1-|b|) in the
  // A-dual norm, attained along the drift; exact 1 for quadratic families.
  double constant_drift_reversibility() const;

 private:
  FinslerStructure() = default;

  Family family_ = Family::kEuclidean;
  int dim_ = 0;
  Box domain_;
  bool reversed_ = false;

  // constant-coefficient data (Euclidean/Riemannian/Randers)
  MinkowskiData data_;

  // varying diagonal Riemannian
  bool varying_ = false;
  Vec diag_base_;
  double var_amp_ = 0;
  double var_freq_ = 0;

  double funk_margin_ = 1e-3;
};

// Point of the structure's domain addressed by a deterministic counter.
// For box domains this is a rotated Halton point; for the ball domain the
// point is resampled inside the ball.
Vec sample_domain_point(const FinslerStructure& s, uint64_t index,
                        uint64_t seed);

}  // namespace finsler
