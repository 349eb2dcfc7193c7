#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fraclab {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Sorted interior-node indices. Interior index p refers to grid node p + 1.
using NodeSet = std::vector<int>;

/// Uniform grid x_i = x_min + i*h, i = 0..n_cells, on the open interval (x_min, x_max).
/// Boundary nodes carry the zero exterior condition; unknowns live on interior nodes.
class Grid {
 public:
  Grid(double x_min, double x_max, int n_cells);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int n_cells() const { return n_cells_; }
  double h() const { return h_; }

  /// Coordinate of grid node i (0..n_cells).
  double node(int i) const;
  /// Coordinate of interior node p (0..interior_count()-1).
  double interior_node(int p) const { return node(p + 1); }
  int interior_count() const { return n_cells_ - 1; }
  std::vector<double> nodes() const;
  /// Every interior index, 0..interior_count()-1.
  NodeSet all_interior() const;

 private:
  double x_min_;
  double x_max_;
  int n_cells_;
  double h_;
};

Grid build_grid(double x_min, double x_max, int n_cells);

/// Discrete carrier of a compact set K: its source intervals and the interior nodes they cover.
struct NodeMask {
  std::vector<Interval> intervals;
  NodeSet indices;

  bool empty() const { return indices.empty(); }
};

/// Interior nodes lying in the union of `intervals`. Intervals must be disjoint,
/// lie strictly inside the domain, and each cover at least one node.
NodeMask nodes_in_set(const Grid& grid, std::span<const Interval> intervals);

/// Sorted difference a \ b of two sorted node sets.
NodeSet set_difference(const NodeSet& a, const NodeSet& b);

/// Scales every interval by eps about the origin.
std::vector<Interval> scaled(std::span<const Interval> intervals, double eps);

}  // namespace fraclab
