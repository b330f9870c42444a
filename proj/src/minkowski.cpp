#include "finsler/minkowski.hpp"

#include <algorithm>
#include <cmath>

#include "finsler/rng.hpp"

namespace finsler {

const char* family_name(Family f) {
  switch (f) {
    case Family::kEuclidean:
      return "euclidean";
    case Family::kRiemannian:
      return "riemannian";
    case Family::kRanders:
      return "randers";
    case Family::kFunk:
      return "funk";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "euclidean") return Family::kEuclidean;
  if (name == "riemannian") return Family::kRiemannian;
  if (name == "randers") return Family::kRanders;
  if (name == "funk") return Family::kFunk;
  throw std::invalid_argument("unknown metric family: " + name);
}

// ---------------------------------------------------------------------------
// Pointwise Minkowski algebra
// ---------------------------------------------------------------------------

double mk_norm(const MinkowskiData& d, const Vec& y) {
  double q = std::max(0.0, d.a.quad(y));
  return std::sqrt(q) + dot(d.b, y);
}

Vec mk_norm_gradient(const MinkowskiData& d, const Vec& y) {
  Vec ay = d.a.apply(y);
  double alpha = std::sqrt(std::max(0.0, dot(y, ay)));
  assert(alpha > 0);
  return ay * (1.0 / alpha) + d.b;
}

Mat mk_norm_hessian(const MinkowskiData& d, const Vec& y) {
  Vec ay = d.a.apply(y);
  double alpha = std::sqrt(std::max(0.0, dot(y, ay)));
  assert(alpha > 0);
  Mat h = d.a;
  h -= Mat::outer(ay, ay) * (1.0 / (alpha * alpha));
  h *= 1.0 / alpha;
  return h;
}

Mat mk_fundamental_tensor(const MinkowskiData& d, const Vec& y) {
  Vec ay = d.a.apply(y);
  double alpha = std::sqrt(std::max(0.0, dot(y, ay)));
  assert(alpha > 0);
  double f = alpha + dot(d.b, y);
  Vec ell = ay * (1.0 / alpha);
  Mat g = d.a - Mat::outer(ell, ell);
  g *= f / alpha;
  Vec lb = ell + d.b;
  g += Mat::outer(lb, lb);
  return g;
}

double mk_dual_norm(const MinkowskiData& d, const Vec& alpha) {
  Vec ia = d.a_inv.apply(alpha);
  double q = std::max(0.0, dot(alpha, ia));
  if (q == 0.0) return 0.0;
  double beta = dot(d.b, ia);
  double w = std::sqrt(beta * beta + d.lambda * q);
  return (w - beta) / d.lambda;
}

Vec mk_legendre(const MinkowskiData& d, const Vec& alpha) {
  Vec ia = d.a_inv.apply(alpha);
  double q = std::max(0.0, dot(alpha, ia));
  if (q == 0.0) return Vec::zero(d.n);
  double beta = dot(d.b, ia);
  double w = std::sqrt(beta * beta + d.lambda * q);
  double fstar = (w - beta) / d.lambda;
  Vec ib = d.a_inv.apply(d.b);
  // gradient of F* in the covector
  Vec grad = (ia * d.lambda + ib * beta) * (1.0 / w) - ib;
  grad *= 1.0 / d.lambda;
  return grad * fstar;
}

double mk_min_unit_norm(const MinkowskiData& d, int scan_dirs) {
  double best = std::numeric_limits<double>::infinity();
  Vec best_dir(d.n);
  for (int i = 0; i < scan_dirs; ++i) {
    Vec e = quasi_uniform_direction(i, scan_dirs, d.n);
    double f = mk_norm(d, e);
    if (f < best) {
      best = f;
      best_dir = e;
    }
  }
  // local polish: projected descent on the sphere
  Vec y = best_dir;
  double step = 0.25;
  for (int it = 0; it < 200 && step > 1e-12; ++it) {
    Vec g = mk_norm_gradient(d, y);
    Vec t = g - y * dot(g, y);
    double tn = norm(t);
    if (tn < 1e-14) break;
    Vec ytry = normalized(y - t * (step / tn));
    double f = mk_norm(d, ytry);
    if (f < best) {
      best = f;
      y = ytry;
      step *= 1.4;
    } else {
      step *= 0.5;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// FinslerStructure
// ---------------------------------------------------------------------------

namespace {

MinkowskiData make_quadratic_data(const Mat& a) {
  MinkowskiData d;
  d.n = a.n;
  d.a = a;
  Mat l;
  if (!cholesky(a, &l)) {
    throw std::invalid_argument("metric coefficient matrix is not positive definite");
  }
  d.a_inv = inverse(a);
  d.b = Vec::zero(a.n);
  d.lambda = 1.0;
  double dd = det(a);
  d.sqrt_det_a = std::sqrt(dd);
  return d;
}

}  // namespace

FinslerStructure FinslerStructure::euclidean(int dim, Box domain) {
  if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("dimension must be 2 or 3");
  FinslerStructure s;
  s.family_ = Family::kEuclidean;
  s.dim_ = dim;
  s.domain_ = domain;
  s.data_ = make_quadratic_data(Mat::identity(dim));
  return s;
}

FinslerStructure FinslerStructure::riemannian(const Mat& a, Box domain) {
  if (a.n < 2 || a.n > kMaxDim) throw std::invalid_argument("dimension must be 2 or 3");
  FinslerStructure s;
  s.family_ = Family::kRiemannian;
  s.dim_ = a.n;
  s.domain_ = domain;
  s.data_ = make_quadratic_data(a);
  return s;
}

FinslerStructure FinslerStructure::riemannian_varying_diag(const Vec& diag_base,
                                                           double amp,
                                                           double freq,
                                                           Box domain) {
  if (diag_base.n < 2 || diag_base.n > kMaxDim)
    throw std::invalid_argument("dimension must be 2 or 3");
  for (int i = 0; i < diag_base.n; ++i)
    if (diag_base.c[i] <= 0)
      throw std::invalid_argument("diagonal coefficients must be positive");
  if (amp < 0 || amp >= 0.9)
    throw std::invalid_argument("variation amplitude must lie in [0, 0.9)");
  FinslerStructure s;
  s.family_ = Family::kRiemannian;
  s.dim_ = diag_base.n;
  s.domain_ = domain;
  s.data_ = make_quadratic_data(Mat::diag(diag_base));
  s.varying_ = amp > 0;
  s.diag_base_ = diag_base;
  s.var_amp_ = amp;
  s.var_freq_ = freq;
  return s;
}

FinslerStructure FinslerStructure::randers(const Mat& a, const Vec& drift,
                                           Box domain) {
  if (a.n < 2 || a.n > kMaxDim) throw std::invalid_argument("dimension must be 2 or 3");
  if (drift.n != a.n) throw std::invalid_argument("drift dimension mismatch");
  FinslerStructure s;
  s.family_ = Family::kRanders;
  s.dim_ = a.n;
  s.domain_ = domain;
  s.data_ = make_quadratic_data(a);
  s.data_.b = drift;
  double bb = dot(drift, s.data_.a_inv.apply(drift));
  s.data_.lambda = 1.0 - bb;
  if (s.data_.lambda <= 1e-12) {
    throw std::invalid_argument(
        "drift one-form violates admissibility: dual norm must be below 1");
  }
  return s;
}

FinslerStructure FinslerStructure::funk(int dim, double boundary_margin) {
  if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("dimension must be 2 or 3");
  if (boundary_margin <= 0 || boundary_margin >= 1)
    throw std::invalid_argument("boundary margin must lie in (0,1)");
  FinslerStructure s;
  s.family_ = Family::kFunk;
  s.dim_ = dim;
  s.funk_margin_ = boundary_margin;
  s.domain_ = Box::cube(dim, 1.0 - boundary_margin);
  s.data_ = make_quadratic_data(Mat::identity(dim));  // data at the center
  return s;
}

bool FinslerStructure::spatially_constant() const {
  return family_ != Family::kFunk && !varying_;
}

bool FinslerStructure::in_domain(const Vec& x, double tol) const {
  if (x.n != dim_) return false;
  if (family_ == Family::kFunk) return norm(x) <= 1.0 - funk_margin_ + tol;
  return domain_.contains(x, tol);
}

void FinslerStructure::require_in_domain(const Vec& x) const {
  if (!in_domain(x, 1e-12)) {
    throw std::domain_error("point " + to_string(x) +
                            " lies outside the structure's domain");
  }
}

MinkowskiData FinslerStructure::local(const Vec& x) const {
  assert(x.n == dim_);
  MinkowskiData d;
  if (family_ == Family::kFunk) {
    double s2 = norm2(x);
    double den = 1.0 - s2;
    assert(den > 0);
    d.n = dim_;
    d.a = Mat::identity(dim_) * den + Mat::outer(x, x);
    d.a *= 1.0 / (den * den);
    d.a_inv = (Mat::identity(dim_) - Mat::outer(x, x)) * den;
    d.b = x * (1.0 / den);
    d.lambda = den;
    d.sqrt_det_a = std::pow(den, -0.5 * (dim_ + 1));
  } else if (varying_) {
    d.n = dim_;
    d.a = Mat(dim_);
    double sd = 1.0;
    for (int i = 0; i < dim_; ++i) {
      double phi = 1.0 + var_amp_ * std::sin(var_freq_ * x.c[(i + 1) % dim_]);
      double ai = diag_base_.c[i] * phi * phi;
      d.a.at(i, i) = ai;
      sd *= std::sqrt(diag_base_.c[i]) * phi;
    }
    d.a_inv = Mat(dim_);
    for (int i = 0; i < dim_; ++i) d.a_inv.at(i, i) = 1.0 / d.a.at(i, i);
    d.b = Vec::zero(dim_);
    d.lambda = 1.0;
    d.sqrt_det_a = sd;
  } else {
    d = data_;
  }
  if (reversed_) d.b = -d.b;
  return d;
}

double FinslerStructure::eval(const Vec& x, const Vec& y) const {
  require_in_domain(x);
  if (!finite(y)) throw std::invalid_argument("tangent vector is not finite");
  return mk_norm(local(x), y);
}

double FinslerStructure::polar(const Vec& x, const Vec& alpha) const {
  require_in_domain(x);
  if (!finite(alpha)) throw std::invalid_argument("covector is not finite");
  return mk_dual_norm(local(x), alpha);
}

Vec FinslerStructure::legendre(const Vec& x, const Vec& alpha) const {
  require_in_domain(x);
  if (!finite(alpha)) throw std::invalid_argument("covector is not finite");
  return mk_legendre(local(x), alpha);
}

Mat FinslerStructure::fundamental_tensor(const Vec& x, const Vec& y) const {
  require_in_domain(x);
  if (norm2(y) == 0.0)
    throw std::invalid_argument("fundamental tensor is undefined at y = 0");
  Mat g = mk_fundamental_tensor(local(x), y);
  if (!cholesky(g)) {
    throw std::runtime_error(
        "fundamental tensor failed positive definiteness at x=" + to_string(x) +
        ", y=" + to_string(y));
  }
  return g;
}

FinslerStructure FinslerStructure::reversed() const {
  FinslerStructure s = *this;
  s.reversed_ = !s.reversed_;
  return s;
}

double FinslerStructure::constant_drift_reversibility() const {
  if (quadratic()) return 1.0;
  if (family_ == Family::kRanders) {
    double bn = std::sqrt(1.0 - data_.lambda);
    return (1.0 + bn) / (1.0 - bn);
  }
  throw std::logic_error("closed-form reversibility needs constant drift");
}

PolarSearchResult FinslerStructure::polar_multistart(
    const Vec& x, const Vec& alpha, const PolarSearchOptions& opts) const {
  require_in_domain(x);
  PolarSearchResult res;
  res.argmax = Vec::zero(dim_);
  if (norm2(alpha) == 0.0) {
    res.converged = true;
    return res;
  }
  MinkowskiData d = local(x);
  auto objective = [&](const Vec& y) { return dot(alpha, y) / mk_norm(d, y); };

  res.starts = opts.starts;
  for (int s = 0; s < opts.starts; ++s) {
    Vec y;
    if (s == 0) {
      y = normalized(alpha);
    } else if (s == 1) {
      y = normalized(d.a_inv.apply(alpha));
    } else {
      y = quasi_uniform_direction(s - 2, std::max(1, opts.starts - 2), dim_);
    }
    double f = objective(y);
    double step = 0.5;
    bool settled = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
      ++res.iterations;
      double fy = mk_norm(d, y);
      Vec gf = mk_norm_gradient(d, y);
      // gradient of alpha(y)/F(y)
      Vec g = alpha * (1.0 / fy) - gf * (f / fy);
      Vec t = g - y * dot(g, y);
      double tn = norm(t);
      if (tn < 1e-14) {
        settled = true;
        break;
      }
      bool advanced = false;
      while (step >= opts.step_tol) {
        Vec ytry = normalized(y + t * (step / tn));
        double ftry = objective(ytry);
        if (ftry > f) {
          y = ytry;
          f = ftry;
          step = std::min(0.5, step * 1.6);
          advanced = true;
          break;
        }
        step *= 0.5;
      }
      if (!advanced) {
        settled = true;
        break;
      }
    }
    if (f > res.value) {
      res.value = f;
      res.argmax = y;
      res.converged = settled;
    }
  }
  return res;
}

LegendreNumericResult FinslerStructure::legendre_numeric(const Vec& x,
                                                         const Vec& alpha,
                                                         double step) const {
  require_in_domain(x);
  LegendreNumericResult r;
  r.y = Vec::zero(dim_);
  if (norm2(alpha) == 0.0) {
    r.converged = true;
    return r;
  }
  MinkowskiData d = local(x);
  auto half_dual_sq = [&](const Vec& a) {
    double f = mk_dual_norm(d, a);
    return 0.5 * f * f;
  };
  double h = step * std::max(1.0, norm(alpha));
  for (int i = 0; i < dim_; ++i) {
    Vec ap = alpha, am = alpha;
    ap.c[i] += h;
    am.c[i] -= h;
    r.y.c[i] = (half_dual_sq(ap) - half_dual_sq(am)) / (2.0 * h);
  }
  double fstar = mk_dual_norm(d, alpha);
  double fy = mk_norm(d, r.y);
  r.norm_gap = std::abs(fy - fstar);
  r.pairing_gap = std::abs(dot(alpha, r.y) - fstar * fy);
  double scale = std::max(1.0, fstar * fstar);
  r.converged = r.norm_gap <= 1e-6 * scale && r.pairing_gap <= 1e-6 * scale;
  return r;
}

Mat FinslerStructure::fundamental_tensor_fd(const Vec& x, const Vec& y,
                                            double h_rel) const {
  require_in_domain(x);
  if (norm2(y) == 0.0)
    throw std::invalid_argument("fundamental tensor is undefined at y = 0");
  MinkowskiData d = local(x);
  auto half_sq = [&](const Vec& v) {
    double f = mk_norm(d, v);
    return 0.5 * f * f;
  };
  double h = h_rel * std::max(1.0, norm(y));
  Mat g(dim_);
  double f0 = half_sq(y);
  for (int i = 0; i < dim_; ++i) {
    Vec yp = y, ym = y;
    yp.c[i] += h;
    ym.c[i] -= h;
    g.at(i, i) = (half_sq(yp) - 2.0 * f0 + half_sq(ym)) / (h * h);
    for (int j = i + 1; j < dim_; ++j) {
      Vec ypp = y, ypm = y, ymp = y, ymm = y;
      ypp.c[i] += h;
      ypp.c[j] += h;
      ypm.c[i] += h;
      ypm.c[j] -= h;
      ymp.c[i] -= h;
      ymp.c[j] += h;
      ymm.c[i] -= h;
      ymm.c[j] -= h;
      double v =
          (half_sq(ypp) - half_sq(ypm) - half_sq(ymp) + half_sq(ymm)) /
          (4.0 * h * h);
      g.at(i, j) = v;
      g.at(j, i) = v;
    }
  }
  return g;
}

Vec sample_domain_point(const FinslerStructure& s, uint64_t index,
                        uint64_t seed) {
  int n = s.dimension();
  if (s.family() == Family::kFunk) {
    // rejection into the admissible ball, counter-stable per index
    SplitMix64 g = stream_rng(seed, 0x66756e6bULL ^ index);
    double r = 1.0 - s.funk_margin();
    for (int tries = 0; tries < 256; ++tries) {
      Vec x(n);
      for (int i = 0; i < n; ++i) x.c[i] = g.uniform(-r, r);
      if (norm(x) <= r) return x;
    }
    return Vec::zero(n);
  }
  const Box& box = s.domain();
  Vec u = halton_point(index, n, seed);
  Vec x(n);
  for (int i = 0; i < n; ++i)
    x.c[i] = box.lo.c[i] + (box.hi.c[i] - box.lo.c[i]) * u.c[i];
  return x;
}

}  // namespace finsler
