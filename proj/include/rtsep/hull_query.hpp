#pragma once

#include "rtsep/geometry.hpp"
#include "rtsep/rtree.hpp"

namespace rtsep::hullq {

// Convex hull of the stored point set via the level-by-level quadrant-hull
// discard loop; exact, equals convex_hull_points over all stored points.
geom::ConvexPolygon rtree_convex_hull(const rtree::RTree& tree,
                                      rtree::CounterContext* ctx = nullptr);

}  // namespace rtsep::hullq
