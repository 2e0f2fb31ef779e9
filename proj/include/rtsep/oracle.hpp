#pragma once

#include <optional>
#include <span>

#include "rtsep/geometry.hpp"

namespace rtsep::oracle {

// Gift wrapping; deliberately shares no code with the monotone chain.
geom::ConvexPolygon hull_bruteforce(std::span<const geom::Point> pts);

struct SeparabilityAnswer {
  bool separable = false;
  std::optional<geom::Line> line;
};

// Classical criterion: disjointness of the two convex hulls, closed sets.
SeparabilityAnswer separable_bruteforce(std::span<const geom::Point> red,
                                        std::span<const geom::Point> blue);

// Exact convex/convex clip used as the area oracle for hull intersection:
// collects contained vertices and pairwise edge crossings and gift-wraps them.
geom::ConvexPolygon clip_bruteforce(const geom::ConvexPolygon& a,
                                    const geom::ConvexPolygon& b);

}  // namespace rtsep::oracle
