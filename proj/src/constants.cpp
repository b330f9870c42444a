#include "finsler/constants.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "finsler/parallel.hpp"
#include "finsler/rng.hpp"

namespace finsler {

namespace {

// --------------------------------------------------------------------------
// Nelder-Mead on a flat coordinate vector with per-coordinate scales and a
// projection hook. Deterministic.
// --------------------------------------------------------------------------

struct NelderMead {
  int max_iterations = 400;
  double tol = 1e-11;

  template <class Obj, class Proj>
  double minimize(std::vector<double>& p, const std::vector<double>& scales,
                  Obj&& obj, Proj&& proj, int* iterations_out) const {
    const int n = static_cast<int>(p.size());
    std::vector<std::vector<double>> simplex(n + 1, p);
    for (int i = 0; i < n; ++i) {
      simplex[i + 1][i] += scales[i];
      proj(simplex[i + 1]);
    }
    proj(simplex[0]);
    std::vector<double> fv(n + 1);
    for (int i = 0; i <= n; ++i) fv[i] = obj(simplex[i]);

    auto order = [&] {
      for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
          if (fv[j] < fv[i]) {
            std::swap(fv[i], fv[j]);
            std::swap(simplex[i], simplex[j]);
          }
    };
    order();

    int it = 0;
    for (; it < max_iterations; ++it) {
      double spread = std::abs(fv[n] - fv[0]);
      if (spread <= tol * (1.0 + std::abs(fv[0]))) break;

      std::vector<double> centroid(n, 0.0);
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) centroid[k] += simplex[i][k] / n;

      auto blend = [&](double c) {
        std::vector<double> q(n);
        for (int k = 0; k < n; ++k)
          q[k] = centroid[k] + c * (simplex[n][k] - centroid[k]);
        proj(q);
        return q;
      };

      std::vector<double> refl = blend(-1.0);
      double f_refl = obj(refl);
      if (f_refl < fv[0]) {
        std::vector<double> expa = blend(-2.0);
        double f_expa = obj(expa);
        if (f_expa < f_refl) {
          simplex[n] = expa;
          fv[n] = f_expa;
        } else {
          simplex[n] = refl;
          fv[n] = f_refl;
        }
      } else if (f_refl < fv[n - 1]) {
        simplex[n] = refl;
        fv[n] = f_refl;
      } else {
        std::vector<double> ctr = blend(0.5);
        double f_ctr = obj(ctr);
        if (f_ctr < fv[n]) {
          simplex[n] = ctr;
          fv[n] = f_ctr;
        } else {
          for (int i = 1; i <= n; ++i) {
            for (int k = 0; k < n; ++k)
              simplex[i][k] = 0.5 * (simplex[i][k] + simplex[0][k]);
            proj(simplex[i]);
            fv[i] = obj(simplex[i]);
          }
        }
      }
      order();
    }
    if (iterations_out) *iterations_out += it;
    p = simplex[0];
    return fv[0];
  }
};

Vec read_vec(const std::vector<double>& p, int offset, int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v.c[i] = p[offset + i];
  return v;
}

void write_vec(std::vector<double>& p, int offset, const Vec& v) {
  for (int i = 0; i < v.n; ++i) p[offset + i] = v.c[i];
}

// Clamp a position into the structure's admissible region.
Vec project_position(const FinslerStructure& s, Vec x) {
  if (s.family() == Family::kFunk) {
    double r = norm(x);
    double cap = 1.0 - s.funk_margin() - 1e-9;
    if (r > cap) x *= cap / r;
    return x;
  }
  return s.domain().clamp(x);
}

// Keep direction coordinates well scaled (objectives are 0-homogeneous).
void renormalize_block(std::vector<double>& p, int offset, int n) {
  Vec v = read_vec(p, offset, n);
  double m = norm(v);
  if (m < 1e-8) {
    v = Vec::zero(n);
    v.c[0] = 1.0;
    m = 1.0;
  }
  write_vec(p, offset, v * (1.0 / m));
}

struct SampleBest {
  double value = 0;
  uint64_t tie_break = 0;
};

}  // namespace

ConstantsEstimate estimate_reversibility(const FinslerStructure& s,
                                         const ConstantsOptions& opts) {
  ConstantsEstimate est;
  est.seed = opts.seed;
  if (opts.base_points < 1 || opts.direction_tuples < 1)
    throw std::invalid_argument("sample counts must be >= 1");
  if (s.reversible()) {
    est.r = 1.0;
    est.r_exact = true;
    est.r_witness = {Vec::zero(s.dimension()), Vec::zero(s.dimension()), 1.0};
    return est;
  }
  const int n = s.dimension();
  const int kb = opts.base_points;
  const int kd = opts.direction_tuples;
  est.sample_count = static_cast<long long>(kb) * kd;

  std::vector<double> best_ratio(kb, 0.0);
  std::vector<Vec> best_x(kb), best_y(kb);
  parallel_for(static_cast<size_t>(kb), opts.threads, [&](size_t lo, size_t hi) {
    for (size_t k = lo; k < hi; ++k) {
      Vec x = sample_domain_point(s, k, opts.seed);
      MinkowskiData d = s.local(x);
      SplitMix64 g = stream_rng(opts.seed, 0x7265765fULL ^ k);
      double best = 0;
      Vec by(n);
      for (int j = 0; j < kd; ++j) {
        Vec y = g.unit_vector(n);
        double fp = mk_norm(d, y);
        double fm = mk_norm(d, -y);
        double ratio = std::max(fp / fm, fm / fp);
        if (ratio > best) {
          best = ratio;
          by = (fp / fm >= fm / fp) ? y : -y;
        }
      }
      best_ratio[k] = best;
      best_x[k] = x;
      best_y[k] = by;
    }
  });

  // deterministic global best + top witnesses
  std::vector<int> order(kb);
  for (int k = 0; k < kb; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (best_ratio[a] != best_ratio[b]) return best_ratio[a] > best_ratio[b];
    return a < b;
  });

  int gbest = order[0];
  est.r = best_ratio[gbest];
  est.r_witness = {best_x[gbest], best_y[gbest], best_ratio[gbest]};

  auto objective = [&](const std::vector<double>& p) {
    Vec x = project_position(s, read_vec(p, 0, n));
    Vec y = read_vec(p, n, n);
    if (norm(y) < 1e-10) return 0.0;
    MinkowskiData d = s.local(x);
    double fm = mk_norm(d, -y);
    if (fm <= 0) return 0.0;
    return -mk_norm(d, y) / fm;  // minimized
  };
  auto projection = [&](std::vector<double>& p) {
    Vec x = project_position(s, read_vec(p, 0, n));
    write_vec(p, 0, x);
    renormalize_block(p, n, n);
  };

  NelderMead nm;
  nm.max_iterations = opts.refine_max_iterations;
  double pos_scale = 0.05 * (s.domain().hi.c[0] - s.domain().lo.c[0]);
  int refine = std::min(opts.refine_from_best, kb);
  for (int t = 0; t < refine; ++t) {
    int k = order[t];
    std::vector<double> p(2 * n);
    write_vec(p, 0, best_x[k]);
    write_vec(p, n, best_y[k]);
    std::vector<double> scales(2 * n, 0.1);
    for (int i = 0; i < n; ++i) scales[i] = pos_scale;
    double val = -nm.minimize(p, scales, objective, projection,
                              &est.refinement_iterations);
    if (val > est.r) {
      est.r = val;
      est.r_witness = {project_position(s, read_vec(p, 0, n)),
                       read_vec(p, n, n), val};
    }
  }
  est.r_unbounded = est.r > opts.unbounded_threshold;
  return est;
}

ConstantsEstimate estimate_uniformity(const FinslerStructure& s,
                                      const ConstantsOptions& opts) {
  ConstantsEstimate est;
  est.seed = opts.seed;
  if (opts.base_points < 1 || opts.direction_tuples < 1)
    throw std::invalid_argument("sample counts must be >= 1");
  if (s.quadratic()) {
    est.l = 1.0;
    est.l_exact = true;
    return est;
  }
  const int n = s.dimension();
  const int kb = opts.base_points;
  const int kd = opts.direction_tuples;
  est.sample_count = static_cast<long long>(kb) * kd;

  std::vector<double> best_ratio(kb, 2.0);
  std::vector<UniformityWitness> best_wit(kb);
  parallel_for(static_cast<size_t>(kb), opts.threads, [&](size_t lo, size_t hi) {
    for (size_t k = lo; k < hi; ++k) {
      Vec x = sample_domain_point(s, k, opts.seed + 1);
      MinkowskiData d = s.local(x);
      SplitMix64 g = stream_rng(opts.seed, 0x756e69ULL ^ (k * 2654435761ULL));
      double best = 2.0;
      UniformityWitness wit;
      for (int j = 0; j < kd; ++j) {
        Vec v = g.unit_vector(n);
        Vec w = g.unit_vector(n);
        Mat gv = mk_fundamental_tensor(d, v);
        Mat gw = mk_fundamental_tensor(d, w);
        double lam_min, lam_max;
        Vec y_min;
        if (!pencil_extremes(gv, gw, &lam_min, &lam_max, &y_min)) continue;
        if (lam_min < best) {
          best = lam_min;
          wit = {x, v, w, y_min, lam_min};
        }
        // the swapped tuple realizes 1/lam_max
        if (1.0 / lam_max < best) {
          double lmin2, lmax2;
          Vec y2;
          if (pencil_extremes(gw, gv, &lmin2, &lmax2, &y2) && lmin2 < best) {
            best = lmin2;
            wit = {x, w, v, y2, lmin2};
          }
        }
      }
      best_ratio[k] = best;
      best_wit[k] = wit;
    }
  });

  std::vector<int> order(kb);
  for (int k = 0; k < kb; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (best_ratio[a] != best_ratio[b]) return best_ratio[a] < best_ratio[b];
    return a < b;
  });

  int gbest = order[0];
  est.l = best_ratio[gbest];
  est.l_witness = best_wit[gbest];

  // refine over (x, v, w) with the minimizing y solved exactly inside
  auto objective = [&](const std::vector<double>& p) {
    Vec x = project_position(s, read_vec(p, 0, n));
    Vec v = read_vec(p, n, n);
    Vec w = read_vec(p, 2 * n, n);
    if (norm(v) < 1e-10 || norm(w) < 1e-10) return 2.0;
    MinkowskiData d = s.local(x);
    Mat gv = mk_fundamental_tensor(d, v);
    Mat gw = mk_fundamental_tensor(d, w);
    double lam_min, lam_max;
    if (!pencil_extremes(gv, gw, &lam_min, &lam_max)) return 2.0;
    return lam_min;
  };
  auto projection = [&](std::vector<double>& p) {
    Vec x = project_position(s, read_vec(p, 0, n));
    write_vec(p, 0, x);
    renormalize_block(p, n, n);
    renormalize_block(p, 2 * n, n);
  };

  NelderMead nm;
  nm.max_iterations = opts.refine_max_iterations;
  double pos_scale = 0.05 * (s.domain().hi.c[0] - s.domain().lo.c[0]);
  int refine = std::min(opts.refine_from_best, kb);
  for (int t = 0; t < refine; ++t) {
    const UniformityWitness& w0 = best_wit[order[t]];
    if (w0.y.n == 0) continue;
    std::vector<double> p(3 * n);
    write_vec(p, 0, w0.x);
    write_vec(p, n, w0.v);
    write_vec(p, 2 * n, w0.w);
    std::vector<double> scales(3 * n, 0.1);
    for (int i = 0; i < n; ++i) scales[i] = pos_scale;
    double val = nm.minimize(p, scales, objective, projection,
                             &est.refinement_iterations);
    if (val < est.l) {
      Vec x = project_position(s, read_vec(p, 0, n));
      Vec v = read_vec(p, n, n);
      Vec w = read_vec(p, 2 * n, n);
      MinkowskiData d = s.local(x);
      double lam_min, lam_max;
      Vec y;
      pencil_extremes(mk_fundamental_tensor(d, v), mk_fundamental_tensor(d, w),
                      &lam_min, &lam_max, &y);
      est.l = val;
      est.l_witness = {x, v, w, y, val};
    }
  }
  est.l = std::min(1.0, std::max(0.0, est.l));
  return est;
}

ConstantsEstimate estimate_constants(const FinslerStructure& s,
                                     const ConstantsOptions& opts) {
  ConstantsEstimate r = estimate_reversibility(s, opts);
  ConstantsEstimate l = estimate_uniformity(s, opts);
  r.l = l.l;
  r.l_exact = l.l_exact;
  r.l_witness = l.l_witness;
  r.refinement_iterations += l.refinement_iterations;
  r.sample_count = std::max(r.sample_count, l.sample_count);
  return r;
}

ConstantsBracket bracket(const ConstantsEstimate& e, double l_factor,
                         double r_factor) {
  ConstantsBracket b;
  b.exact = e.r_exact && e.l_exact;
  if (b.exact) {
    b.l = e.l;
    b.r = e.r;
  } else {
    b.l = e.l_exact ? e.l : e.l * l_factor;
    b.r = e.r_exact ? e.r : e.r * r_factor;
  }
  return b;
}

double check_convexity_inequality(const FinslerStructure& s, const Vec& x,
                                  const Vec& alpha, const Vec& beta, double t,
                                  double l_value) {
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("t must lie in [0,1]");
  MinkowskiData d = s.local(x);
  auto sq = [&](const Vec& a) {
    double f = mk_dual_norm(d, a);
    return f * f;
  };
  return t * sq(alpha) + (1.0 - t) * sq(beta) -
         l_value * t * (1.0 - t) * sq(beta - alpha) -
         sq(t * alpha + (1.0 - t) * beta);
}

}  // namespace finsler
