#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rtsep/geometry.hpp"
#include "rtsep/rtree.hpp"

namespace rtsep::sep {

enum class IntersectionClass { Disjoint, Corner, Side, Containment, Piercing };

enum class Color { Red, Blue };

struct Classified {
  IntersectionClass cls = IntersectionClass::Disjoint;
  Color inner = Color::Blue;  // meaningful only for Containment
};

Classified classify_intersection(const geom::Rect& red_mbr,
                                 const geom::Rect& blue_mbr);

// Coordinate map onto the canonical configuration: transpose first, then axis
// flips (pure negations, exact); swap_colors exchanges which tree plays red.
struct Transform {
  bool transpose = false;
  bool flip_x = false;
  bool flip_y = false;
  bool swap_colors = false;

  geom::Point apply(const geom::Point& p) const;
  geom::Point invert(const geom::Point& p) const;
  geom::Rect apply(const geom::Rect& r) const;
  geom::Line invert_line(const geom::Line& ln) const;
  bool is_identity() const {
    return !transpose && !flip_x && !flip_y && !swap_colors;
  }
};

// Corner: red upper-left / blue lower-right. Side: red is the container on
// the left, blue sticks out to the right.
Transform canonicalize(const geom::Rect& red_mbr, const geom::Rect& blue_mbr,
                       IntersectionClass cls);

bool canonical_ok(const geom::Rect& red_mbr, const geom::Rect& blue_mbr,
                  IntersectionClass cls);

struct Anchors {
  std::vector<geom::Point> red;   // V_R
  std::vector<geom::Point> blue;  // V_B
};
Anchors anchor_vertices(const geom::Rect& mbr_red, const geom::Rect& mbr_blue,
                        IntersectionClass cls);

struct WorkingSet {
  bool points = false;
  std::vector<geom::Rect> rects;      // canonical frame
  std::vector<uint64_t> child_pages;  // parallel to rects; 0 = synthetic
  std::vector<geom::Point> pts;
  int level = 0;
  size_t size() const { return points ? pts.size() : rects.size(); }
};

// Flush-side extreme corners of a rectangle working set, scanned against the
// fixed canonical MBR (blue orientation).
struct ExtremeCorners {
  std::optional<geom::Point> t1, t2, b1, b2, l1, l1p, l2, l2p;
};
ExtremeCorners scan_extremes(std::span<const geom::Rect> rects,
                             const geom::Rect& mbr);

geom::ConvexPolygon optimistic_hull(const WorkingSet& ws,
                                    const Anchors& anchors,
                                    const geom::Rect& mbr,
                                    IntersectionClass cls, Color color);
geom::ConvexPolygon pessimistic_hull(const WorkingSet& ws,
                                     const Anchors& anchors,
                                     const geom::Rect& mbr,
                                     IntersectionClass cls, Color color);

// Drops rectangles whose two trailing corners (left for blue, right for red)
// lie in the pessimistic hull.
WorkingSet filter_rectangles(const WorkingSet& ws,
                             const geom::ConvexPolygon& pess, Color color);

struct RunStats {
  uint64_t nodes_read_red = 0;
  uint64_t nodes_read_blue = 0;
  uint64_t distinct_pages_red = 0;
  uint64_t distinct_pages_blue = 0;
  uint64_t total_nodes_red = 0;
  uint64_t total_nodes_blue = 0;
  uint32_t levels_descended_red = 0;
  uint32_t levels_descended_blue = 0;
  uint64_t peak_working_set_bytes = 0;
  double wall_ms = 0.0;
};

struct Decision {
  bool separable = false;
  std::optional<geom::Line> line;
  RunStats stats;
};

// Instrumentation hooks for the invariant test suite. All geometry is in the
// canonical frame of the reported transform.
struct IterationSnapshot {
  IntersectionClass cls;
  Transform transform;
  const WorkingSet* red;
  const WorkingSet* blue;
  const Anchors* anchors;
  std::optional<geom::Point> extra;  // containment extension vertex
  Color extra_color = Color::Blue;
  const geom::ConvexPolygon* opt_red;
  const geom::ConvexPolygon* opt_blue;
  const geom::ConvexPolygon* pess_red;    // null before pess is computed
  const geom::ConvexPolygon* pess_blue;
};
struct FilterEvent {
  Color color;
  const std::vector<geom::Rect>* removed;
  const geom::ConvexPolygon* pess;
};
struct DecideHooks {
  std::function<void(const IterationSnapshot&)> on_iteration;
  std::function<void(const FilterEvent&)> on_filter;
  std::function<void(const geom::ConvexPolygon&, const geom::ConvexPolygon&,
                     bool)>
      on_disjoint_test;
  bool paranoid = false;  // cross-check structured tests against the naive one
};

Decision decide_separability(const rtree::RTree& red_tree,
                             const rtree::RTree& blue_tree,
                             const DecideHooks* hooks = nullptr);

bool verify_separating_line(const geom::Line& ln,
                            std::span<const geom::Point> red,
                            std::span<const geom::Point> blue);

}  // namespace rtsep::sep
