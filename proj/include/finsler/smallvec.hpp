#pragma once

// Fixed-capacity vectors and symmetric matrices for dimensions 2 and 3.
// The active dimension travels with each value so mixed-dimension
// arithmetic trips an assert instead of silently reading garbage.

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>

namespace finsler {

inline constexpr int kMaxDim = 3;

struct Vec {
  int n = 0;
  std::array<double, kMaxDim> c{};

  Vec() = default;
  explicit Vec(int dim) : n(dim) { assert(dim >= 1 && dim <= kMaxDim); }
  Vec(std::initializer_list<double> xs) {
    assert(static_cast<int>(xs.size()) <= kMaxDim && xs.size() >= 1);
    n = static_cast<int>(xs.size());
    int i = 0;
    for (double x : xs) c[i++] = x;
  }

  static Vec zero(int dim) { return Vec(dim); }

  double& operator[](int i) {
    assert(i >= 0 && i < n);
    return c[i];
  }
  double operator[](int i) const {
    assert(i >= 0 && i < n);
    return c[i];
  }

  Vec& operator+=(const Vec& o) {
    assert(n == o.n);
    for (int i = 0; i < n; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    assert(n == o.n);
    for (int i = 0; i < n; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n; ++i) c[i] *= s;
    return *this;
  }
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator*(Vec a, double s) { return a *= s; }
inline Vec operator-(Vec a) {
  for (int i = 0; i < a.n; ++i) a.c[i] = -a.c[i];
  return a;
}

inline double dot(const Vec& a, const Vec& b) {
  assert(a.n == b.n);
  double s = 0;
  for (int i = 0; i < a.n; ++i) s += a.c[i] * b.c[i];
  return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec normalized(const Vec& a) {
  double m = norm(a);
  assert(m > 0);
  Vec r = a;
  r *= 1.0 / m;
  return r;
}

inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

inline bool finite(const Vec& a) {
  for (int i = 0; i < a.n; ++i)
    if (!std::isfinite(a.c[i])) return false;
  return true;
}

inline std::string to_string(const Vec& a) {
  std::string s = "(";
  for (int i = 0; i < a.n; ++i) {
    if (i) s += ", ";
    s += std::to_string(a.c[i]);
  }
  return s + ")";
}

// Row-major square matrix, n x n with n <= 3. Used for metric coefficient
// matrices and fundamental tensors; most instances are symmetric.
struct Mat {
  int n = 0;
  std::array<double, kMaxDim * kMaxDim> m{};

  Mat() = default;
  explicit Mat(int dim) : n(dim) { assert(dim >= 1 && dim <= kMaxDim); }

  static Mat identity(int dim) {
    Mat r(dim);
    for (int i = 0; i < dim; ++i) r.at(i, i) = 1.0;
    return r;
  }
  static Mat diag(const Vec& d) {
    Mat r(d.n);
    for (int i = 0; i < d.n; ++i) r.at(i, i) = d.c[i];
    return r;
  }
  static Mat outer(const Vec& a, const Vec& b) {
    assert(a.n == b.n);
    Mat r(a.n);
    for (int i = 0; i < a.n; ++i)
      for (int j = 0; j < a.n; ++j) r.at(i, j) = a.c[i] * b.c[j];
    return r;
  }

  double& at(int i, int j) {
    assert(i >= 0 && i < n && j >= 0 && j < n);
    return m[i * kMaxDim + j];
  }
  double at(int i, int j) const {
    assert(i >= 0 && i < n && j >= 0 && j < n);
    return m[i * kMaxDim + j];
  }

  Vec apply(const Vec& x) const {
    assert(x.n == n);
    Vec r(n);
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int j = 0; j < n; ++j) s += at(i, j) * x.c[j];
      r.c[i] = s;
    }
    return r;
  }

  // x' M x
  double quad(const Vec& x) const { return dot(x, apply(x)); }

  Mat& operator+=(const Mat& o) {
    assert(n == o.n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) at(i, j) += o.at(i, j);
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    assert(n == o.n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) at(i, j) -= o.at(i, j);
    return *this;
  }
  Mat& operator*=(double s) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) at(i, j) *= s;
    return *this;
  }
};

inline Mat operator+(Mat a, const Mat& b) { return a += b; }
inline Mat operator-(Mat a, const Mat& b) { return a -= b; }
inline Mat operator*(double s, Mat a) { return a *= s; }
inline Mat operator*(Mat a, double s) { return a *= s; }

inline double det(const Mat& a) {
  switch (a.n) {
    case 1:
      return a.at(0, 0);
    case 2:
      return a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
    case 3:
      return a.at(0, 0) * (a.at(1, 1) * a.at(2, 2) - a.at(1, 2) * a.at(2, 1)) -
             a.at(0, 1) * (a.at(1, 0) * a.at(2, 2) - a.at(1, 2) * a.at(2, 0)) +
             a.at(0, 2) * (a.at(1, 0) * a.at(2, 1) - a.at(1, 1) * a.at(2, 0));
    default:
      assert(false);
      return 0;
  }
}

// Inverse by adjugate; caller guarantees nonsingularity (det well away from 0).
inline Mat inverse(const Mat& a) {
  double d = det(a);
  assert(std::abs(d) > 0);
  double inv = 1.0 / d;
  Mat r(a.n);
  if (a.n == 1) {
    r.at(0, 0) = inv;
  } else if (a.n == 2) {
    r.at(0, 0) = a.at(1, 1) * inv;
    r.at(0, 1) = -a.at(0, 1) * inv;
    r.at(1, 0) = -a.at(1, 0) * inv;
    r.at(1, 1) = a.at(0, 0) * inv;
  } else {
    r.at(0, 0) = (a.at(1, 1) * a.at(2, 2) - a.at(1, 2) * a.at(2, 1)) * inv;
    r.at(0, 1) = (a.at(0, 2) * a.at(2, 1) - a.at(0, 1) * a.at(2, 2)) * inv;
    r.at(0, 2) = (a.at(0, 1) * a.at(1, 2) - a.at(0, 2) * a.at(1, 1)) * inv;
    r.at(1, 0) = (a.at(1, 2) * a.at(2, 0) - a.at(1, 0) * a.at(2, 2)) * inv;
    r.at(1, 1) = (a.at(0, 0) * a.at(2, 2) - a.at(0, 2) * a.at(2, 0)) * inv;
    r.at(1, 2) = (a.at(0, 2) * a.at(1, 0) - a.at(0, 0) * a.at(1, 2)) * inv;
    r.at(2, 0) = (a.at(1, 0) * a.at(2, 1) - a.at(1, 1) * a.at(2, 0)) * inv;
    r.at(2, 1) = (a.at(0, 1) * a.at(2, 0) - a.at(0, 0) * a.at(2, 1)) * inv;
    r.at(2, 2) = (a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0)) * inv;
  }
  return r;
}

// Cholesky factorization A = L L'. Returns false when A is not positive
// definite (within roundoff). L may be null when only the PD test is wanted.
inline bool cholesky(const Mat& a, Mat* l_out = nullptr) {
  Mat l(a.n);
  for (int i = 0; i < a.n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a.at(i, j);
      for (int k = 0; k < j; ++k) s -= l.at(i, k) * l.at(j, k);
      if (i == j) {
        if (s <= 0 || !std::isfinite(s)) return false;
        l.at(i, i) = std::sqrt(s);
      } else {
        l.at(i, j) = s / l.at(j, j);
      }
    }
  }
  if (l_out) *l_out = l;
  return true;
}

inline Vec solve_lower(const Mat& l, const Vec& b) {
  assert(l.n == b.n);
  Vec x(b.n);
  for (int i = 0; i < b.n; ++i) {
    double s = b.c[i];
    for (int k = 0; k < i; ++k) s -= l.at(i, k) * x.c[k];
    x.c[i] = s / l.at(i, i);
  }
  return x;
}

inline Vec solve_lower_transposed(const Mat& l, const Vec& b) {
  assert(l.n == b.n);
  Vec x(b.n);
  for (int i = b.n - 1; i >= 0; --i) {
    double s = b.c[i];
    for (int k = i + 1; k < b.n; ++k) s -= l.at(k, i) * x.c[k];
    x.c[i] = s / l.at(i, i);
  }
  return x;
}

// Eigenvalues of a symmetric matrix, ascending. 2x2 via the quadratic
// formula, 3x3 via the trigonometric form of the characteristic cubic.
inline void sym_eigenvalues(const Mat& a, double out[kMaxDim]) {
  if (a.n == 1) {
    out[0] = a.at(0, 0);
    return;
  }
  if (a.n == 2) {
    double tr = a.at(0, 0) + a.at(1, 1);
    double dt = det(a);
    double disc = std::sqrt(std::max(0.0, tr * tr / 4 - dt));
    out[0] = tr / 2 - disc;
    out[1] = tr / 2 + disc;
    return;
  }
  double p1 = a.at(0, 1) * a.at(0, 1) + a.at(0, 2) * a.at(0, 2) +
              a.at(1, 2) * a.at(1, 2);
  double q = (a.at(0, 0) + a.at(1, 1) + a.at(2, 2)) / 3.0;
  if (p1 == 0.0) {
    out[0] = a.at(0, 0);
    out[1] = a.at(1, 1);
    out[2] = a.at(2, 2);
    if (out[0] > out[1]) std::swap(out[0], out[1]);
    if (out[1] > out[2]) std::swap(out[1], out[2]);
    if (out[0] > out[1]) std::swap(out[0], out[1]);
    return;
  }
  double p2 = 0;
  for (int i = 0; i < 3; ++i) {
    double d = a.at(i, i) - q;
    p2 += d * d;
  }
  p2 += 2.0 * p1;
  double p = std::sqrt(p2 / 6.0);
  Mat b = a;
  for (int i = 0; i < 3; ++i) b.at(i, i) -= q;
  b *= 1.0 / p;
  double r = det(b) / 2.0;
  r = std::min(1.0, std::max(-1.0, r));
  double phi = std::acos(r) / 3.0;
  double e_hi = q + 2 * p * std::cos(phi);
  double e_lo = q + 2 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  out[0] = e_lo;
  out[2] = e_hi;
  out[1] = 3 * q - e_lo - e_hi;
}

inline double sym_smallest_eigenvalue(const Mat& a) {
  double ev[kMaxDim];
  sym_eigenvalues(a, ev);
  return ev[0];
}

// Eigenvector for a given eigenvalue via cross products of the rows of
// (A - lambda I); degenerate cases fall back to a coordinate axis.
inline Vec sym_eigenvector(const Mat& a, double lambda) {
  Mat b = a;
  for (int i = 0; i < a.n; ++i) b.at(i, i) -= lambda;
  if (a.n == 2) {
    Vec r0{b.at(0, 0), b.at(0, 1)};
    Vec r1{b.at(1, 0), b.at(1, 1)};
    Vec cand = norm2(r0) > norm2(r1) ? Vec{-r0.c[1], r0.c[0]}
                                     : Vec{-r1.c[1], r1.c[0]};
    if (norm2(cand) < 1e-300) cand = Vec{1, 0};
    return normalized(cand);
  }
  auto row = [&](int i) { return Vec{b.at(i, 0), b.at(i, 1), b.at(i, 2)}; };
  auto cross = [](const Vec& u, const Vec& v) {
    return Vec{u.c[1] * v.c[2] - u.c[2] * v.c[1],
               u.c[2] * v.c[0] - u.c[0] * v.c[2],
               u.c[0] * v.c[1] - u.c[1] * v.c[0]};
  };
  Vec best(3);
  double best_n = -1;
  for (int i = 0; i < 3; ++i) {
    Vec c = cross(row(i), row((i + 1) % 3));
    double cn = norm2(c);
    if (cn > best_n) {
      best_n = cn;
      best = c;
    }
  }
  if (best_n < 1e-300) return Vec{1, 0, 0};
  return normalized(best);
}

// Smallest generalized eigenvalue of the pencil (A, B) with B positive
// definite: min over y of (y'Ay)/(y'By). Also reports the largest one and
// the minimizing direction. Returns false if B fails Cholesky.
inline bool pencil_extremes(const Mat& a, const Mat& b, double* lam_min,
                            double* lam_max, Vec* y_min = nullptr) {
  Mat l;
  if (!cholesky(b, &l)) return false;
  // M = L^-1 A L^-T, assembled column by column.
  Mat msym(a.n);
  for (int j = 0; j < a.n; ++j) {
    Vec ej = Vec::zero(a.n);
    ej.c[j] = 1.0;
    Vec col = solve_lower_transposed(l, ej);  // L^-T e_j
    col = a.apply(col);
    col = solve_lower(l, col);
    for (int i = 0; i < a.n; ++i) msym.at(i, j) = col.c[i];
  }
  // Symmetrize against roundoff.
  for (int i = 0; i < a.n; ++i)
    for (int j = i + 1; j < a.n; ++j) {
      double s = 0.5 * (msym.at(i, j) + msym.at(j, i));
      msym.at(i, j) = s;
      msym.at(j, i) = s;
    }
  double ev[kMaxDim];
  sym_eigenvalues(msym, ev);
  *lam_min = ev[0];
  *lam_max = ev[a.n - 1];
  if (y_min) {
    Vec u = sym_eigenvector(msym, ev[0]);
    *y_min = normalized(solve_lower_transposed(l, u));
  }
  return true;
}

}  // namespace finsler
