#include "fraclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

#include "fraclab/errors.hpp"

namespace fraclab {

Grid::Grid(double x_min, double x_max, int n_cells)
    : x_min_(x_min), x_max_(x_max), n_cells_(n_cells) {
  if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    std::ostringstream msg;
    msg << "grid: need x_min < x_max (got " << x_min << ", " << x_max << ")";
    throw GeometryError(msg.str());
  }
  if (n_cells < 2) {
    throw GeometryError("grid: n_cells must be at least 2");
  }
  h_ = (x_max - x_min) / n_cells;
}

double Grid::node(int i) const {
  // The last node is pinned to x_max to avoid round-off drift.
  if (i == n_cells_) return x_max_;
  return x_min_ + i * h_;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(n_cells_) + 1);
  for (int i = 0; i <= n_cells_; ++i) out[static_cast<std::size_t>(i)] = node(i);
  return out;
}

NodeSet Grid::all_interior() const {
  NodeSet out(static_cast<std::size_t>(interior_count()));
  for (int p = 0; p < interior_count(); ++p) out[static_cast<std::size_t>(p)] = p;
  return out;
}

Grid build_grid(double x_min, double x_max, int n_cells) { return Grid(x_min, x_max, n_cells); }

NodeMask nodes_in_set(const Grid& grid, std::span<const Interval> intervals) {
  NodeMask mask;
  mask.intervals.assign(intervals.begin(), intervals.end());
  std::sort(mask.intervals.begin(), mask.intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });

  // Membership test tolerance, relative to h, absorbs round-off in node coordinates.
  const double tol = 1e-9 * grid.h();
  for (std::size_t k = 0; k < mask.intervals.size(); ++k) {
    const Interval& iv = mask.intervals[k];
    if (!(iv.lo <= iv.hi)) {
      throw GeometryError("nodes_in_set: interval with lo > hi");
    }
    if (!(iv.lo > grid.x_min()) || !(iv.hi < grid.x_max())) {
      std::ostringstream msg;
      msg << "nodes_in_set: interval [" << iv.lo << ", " << iv.hi
          << "] must lie strictly inside (" << grid.x_min() << ", " << grid.x_max() << ")";
      throw GeometryError(msg.str());
    }
    if (k > 0 && !(mask.intervals[k - 1].hi < iv.lo)) {
      throw GeometryError("nodes_in_set: intervals must be disjoint");
    }
    const int first = std::max(1, static_cast<int>(std::ceil((iv.lo - grid.x_min() - tol) / grid.h())));
    const int last = std::min(grid.n_cells() - 1,
                              static_cast<int>(std::floor((iv.hi - grid.x_min() + tol) / grid.h())));
    if (first > last) {
      std::ostringstream msg;
      msg << "nodes_in_set: interval [" << iv.lo << ", " << iv.hi
          << "] contains no grid node (h = " << grid.h() << ")";
      throw ResolutionError(msg.str());
    }
    for (int i = first; i <= last; ++i) mask.indices.push_back(i - 1);
  }
  return mask;
}

NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<Interval> scaled(std::span<const Interval> intervals, double eps) {
  std::vector<Interval> out;
  out.reserve(intervals.size());
  for (const Interval& iv : intervals) out.push_back({eps * iv.lo, eps * iv.hi});
  return out;
}

}  // namespace fraclab
