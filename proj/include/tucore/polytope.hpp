#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tucore/approx.hpp"

namespace tucore {

// The chart used for every volume: drop the last coordinate of a point on the
// efficiency hyperplane.
inline constexpr std::string_view kChartName = "drop-last-coordinate";

using Point = Eigen::VectorXd;

/// Projects efficient allocations to R^{n-1}. Every point must satisfy
/// sum(x) = grand_value within 1e-6, else ContractViolation.
std::vector<Point> project(std::span<const Allocation> points, double grand_value);
std::vector<Point> project(const VertexSet& set, double grand_value);
// Inverse chart: appends x_n = grand_value - sum(y).
Allocation unproject(const Point& y, double grand_value);

// Half-space normal . y <= offset, unit outward normal.
struct Facet {
  Eigen::VectorXd normal;
  double offset = 0.0;
};

struct Polytope {
  int dim = 0;                 // dimension of the space the points live in
  std::vector<Point> vertices; // hull vertices only (redundant inputs dropped)
  std::vector<Facet> facets;   // merged: one entry per geometric facet
  // Simplicial boundary pieces (indices into `vertices`); each, joined with
  // `apex`, is one simplex of the volume triangulation.
  std::vector<std::vector<int>> boundary;
  Point apex;
  int affine_dim = -1;  // -1 for the empty polytope
  bool degenerate = false;
  std::string chart = std::string(kChartName);

  bool empty() const { return vertices.empty(); }
};

/// Convex hull by incremental insertion (beneath-beyond) with facet
/// adjacency. Points are inserted farthest-from-mean first; facets that are
/// coplanar with an outside point (within 1e-10 of the coordinate scale) are
/// replaced together with the visible ones. Lower-dimensional input yields
/// `degenerate` with no facets.
Polytope convex_hull(std::span<const Point> points);

struct VolumeResult {
  double value = 0.0;
  bool degenerate = false;  // lower-dimensional or empty: value is 0 and meaningless
};

/// Sum over the triangulation of |det(edge matrix)| / d!.
VolumeResult volume(const Polytope& poly);

// Signed volume of each triangulation simplex (for invariant checks).
std::vector<double> simplex_volumes(const Polytope& poly);

/// Arithmetic mean of the points (original coordinates). Throws on empty.
Allocation centroid(const VertexSet& set);
Allocation centroid(std::span<const Allocation> points);

/// x is a convex combination of `points` (auxiliary LP, combination error
/// <= 1e-8 max(1, |x|)). Works for lower-dimensional sets.
bool contains(std::span<const Point> points, const Eigen::VectorXd& x);
bool contains(const VertexSet& set, const Allocation& x);

// JSON export: projected vertices, facets, volume, affine_dim, chart.
std::string polytope_to_json(const Polytope& poly);

}  // namespace tucore
