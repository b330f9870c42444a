#include "finsler/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace finsler {

GridDomain GridDomain::uniform(const Box& box, int nodes_per_axis) {
  if (nodes_per_axis < 2) throw std::invalid_argument("grid needs >= 2 nodes per axis");
  GridDomain g;
  g.dim = box.dim();
  g.lo = box.lo;
  g.hi = box.hi;
  for (int a = 0; a < g.dim; ++a) g.res[a] = nodes_per_axis;
  return g;
}

double GridDomain::spacing() const {
  double h0 = h(0);
  for (int a = 1; a < dim; ++a) {
    assert(std::abs(h(a) - h0) <= 1e-12 * std::max(1.0, std::abs(h0)));
  }
  return h0;
}

ScalarField map_field(const ScalarField& a,
                      const std::function<double(double)>& f) {
  ScalarField r(a.grid);
  for (size_t i = 0; i < a.v.size(); ++i) r.v[i] = f(a.v[i]);
  return r;
}

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("field grid mismatch");
  ScalarField r(a.grid);
  for (size_t i = 0; i < a.v.size(); ++i) r.v[i] = a.v[i] * b.v[i];
  return r;
}

PoleSet PoleSet::snapped_to(const GridDomain& g, const std::vector<Vec>& raw,
                            int min_interior_cells) {
  if (raw.size() < 1) throw std::invalid_argument("pole set is empty");
  PoleSet ps;
  for (const Vec& p : raw) {
    if (p.n != g.dim) throw std::invalid_argument("pole dimension mismatch");
    MultiIndex mi = g.nearest(p);
    if (g.cells_to_boundary(mi) < min_interior_cells) {
      throw std::invalid_argument("pole " + to_string(p) +
                                  " is too close to the grid boundary");
    }
    ps.poles.push_back(g.pos(mi));
  }
  double min_sep = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < ps.poles.size(); ++i) {
    for (size_t j = i + 1; j < ps.poles.size(); ++j) {
      double d = dist(ps.poles[i], ps.poles[j]);
      if (d < 0.5 * g.spacing()) {
        throw std::invalid_argument("poles must be pairwise distinct");
      }
      min_sep = std::min(min_sep, d);
    }
  }
  ps.min_separation = ps.poles.size() > 1 ? min_sep : 0.0;
  return ps;
}

}  // namespace finsler
