#pragma once

// Uniform vertex-centered grids over an axis-aligned box, plus sampled
// scalar / covector / vector fields. Linearization is row-major with axis 0
// slowest, which is also the on-disk payload order.

#include <array>
#include <functional>
#include <vector>

#include "finsler/minkowski.hpp"
#include "finsler/smallvec.hpp"

namespace finsler {

using MultiIndex = std::array<int, kMaxDim>;

struct GridDomain {
  int dim = 0;
  MultiIndex res{1, 1, 1};  // nodes per axis; unused axes stay 1
  Vec lo, hi;

  static GridDomain uniform(const Box& box, int nodes_per_axis);

  double h(int axis) const {
    assert(res[axis] >= 2);
    return (hi.c[axis] - lo.c[axis]) / (res[axis] - 1);
  }
  // common spacing; asserts axes agree to roundoff
  double spacing() const;

  size_t size() const {
    size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<size_t>(res[a]);
    return s;
  }

  size_t index(const MultiIndex& mi) const {
    size_t idx = 0;
    for (int a = 0; a < dim; ++a) idx = idx * res[a] + mi[a];
    return idx;
  }
  MultiIndex multi(size_t idx) const {
    MultiIndex mi{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
      mi[a] = static_cast<int>(idx % res[a]);
      idx /= res[a];
    }
    return mi;
  }

  Vec pos(const MultiIndex& mi) const {
    Vec x(dim);
    for (int a = 0; a < dim; ++a) x.c[a] = lo.c[a] + mi[a] * h(a);
    return x;
  }
  Vec pos(size_t idx) const { return pos(multi(idx)); }

  bool in_bounds(const MultiIndex& mi) const {
    for (int a = 0; a < dim; ++a)
      if (mi[a] < 0 || mi[a] >= res[a]) return false;
    return true;
  }

  MultiIndex nearest(const Vec& x) const {
    MultiIndex mi{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      int i = static_cast<int>(std::lround((x.c[a] - lo.c[a]) / h(a)));
      mi[a] = std::min(res[a] - 1, std::max(0, i));
    }
    return mi;
  }

  // chessboard distance in cells to the closest grid face
  int cells_to_boundary(const MultiIndex& mi) const {
    int d = res[0];
    for (int a = 0; a < dim; ++a)
      d = std::min(d, std::min(mi[a], res[a] - 1 - mi[a]));
    return d;
  }

  // Integration weight of the node's cell: product of h per axis with half
  // cells at the boundary, so constants integrate exactly.
  double cell_weight(const MultiIndex& mi) const {
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      double ha = h(a);
      w *= (mi[a] == 0 || mi[a] == res[a] - 1) ? 0.5 * ha : ha;
    }
    return w;
  }

  bool operator==(const GridDomain& o) const {
    if (dim != o.dim) return false;
    for (int a = 0; a < dim; ++a)
      if (res[a] != o.res[a] || lo.c[a] != o.lo.c[a] || hi.c[a] != o.hi.c[a])
        return false;
    return true;
  }
};

template <class Fn>
void for_each_node(const GridDomain& g, Fn&& fn) {
  const size_t count = g.size();
  for (size_t idx = 0; idx < count; ++idx) fn(idx, g.multi(idx));
}

struct ScalarField {
  GridDomain grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const GridDomain& g) : grid(g), v(g.size(), 0.0) {}

  double& at(size_t idx) { return v[idx]; }
  double at(size_t idx) const { return v[idx]; }
};

namespace detail {
struct ComponentField {
  GridDomain grid;
  int ncomp = 0;
  std::vector<double> v;

  ComponentField() = default;
  ComponentField(const GridDomain& g, int nc)
      : grid(g), ncomp(nc), v(g.size() * nc, 0.0) {}

  double& comp(size_t idx, int k) { return v[idx * ncomp + k]; }
  double comp(size_t idx, int k) const { return v[idx * ncomp + k]; }
  Vec vec_at(size_t idx) const {
    Vec r(ncomp);
    for (int k = 0; k < ncomp; ++k) r.c[k] = v[idx * ncomp + k];
    return r;
  }
  void set_vec(size_t idx, const Vec& val) {
    assert(val.n == ncomp);
    for (int k = 0; k < ncomp; ++k) v[idx * ncomp + k] = val.c[k];
  }
};
}  // namespace detail

// Covariant components (differentials live here).
struct CovectorField : detail::ComponentField {
  CovectorField() = default;
  explicit CovectorField(const GridDomain& g)
      : detail::ComponentField(g, g.dim) {}
};

// Contravariant components (gradients, fluxes).
struct VectorField : detail::ComponentField {
  VectorField() = default;
  explicit VectorField(const GridDomain& g)
      : detail::ComponentField(g, g.dim) {}
};

ScalarField map_field(const ScalarField& a,
                      const std::function<double(double)>& f);
ScalarField multiply(const ScalarField& a, const ScalarField& b);

// Poles for distance fields: pairwise distinct, interior, node-aligned.
struct PoleSet {
  std::vector<Vec> poles;
  double min_separation = 0;

  int count() const { return static_cast<int>(poles.size()); }

  // Snaps raw positions to the nearest grid node and validates the set.
  // Throws std::invalid_argument with a diagnostic on violation.
  static PoleSet snapped_to(const GridDomain& g, const std::vector<Vec>& raw,
                            int min_interior_cells = 2);
};

}  // namespace finsler
