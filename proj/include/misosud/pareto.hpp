#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace misosud {

using RatePoint = std::vector<double>;

// Indices (ascending) of the points not dominated by any other point. Of a
// group of identical points only the first survives. `rates` holds n points
// of `dim` coordinates each, back to back.
std::vector<std::size_t> pareto_indices(std::span<const double> rates, std::size_t dim);
std::vector<std::size_t> pareto_indices(std::span<const RatePoint> points);

enum class HullMode { pareto, hull };

// pareto: the maximal points, in input order.
// hull (2-D): counter-clockwise vertices of the convex hull of the points,
// their projections onto both axes and the origin, starting at the origin.
// Hull mode in 3 or more dimensions falls back to the Pareto set.
std::vector<RatePoint> pareto_hull(std::span<const RatePoint> points, HullMode mode);

// Counter-clockwise hull vertices of 2-D points; collinear points dropped.
std::vector<RatePoint> convex_hull_2d(std::vector<RatePoint> pts);

// Largest distance between consecutive points of a 2-D front after sorting
// by the first coordinate.
double max_front_gap(std::span<const RatePoint> front);

// Symmetric Hausdorff distance between two finite point sets.
double hausdorff(std::span<const RatePoint> a, std::span<const RatePoint> b);

}  // namespace misosud
