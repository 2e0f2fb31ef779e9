#include "rtsep/hull_query.hpp"

#include <algorithm>
#include <vector>

#include "rtsep/separability.hpp"

namespace rtsep::hullq {

using geom::ConvexPolygon;
using geom::Point;
using geom::Rect;

namespace {

struct Flip {
  bool on = false;
  Point map(const Point& p) const { return on ? Point{-p.x, p.y} : p; }
  Rect map(const Rect& r) const {
    if (!on) return r;
    return {{-r.hi.x, r.lo.y}, {-r.lo.x, r.hi.y}};
  }
  ConvexPolygon map_poly(const ConvexPolygon& c) const {
    if (!on) return c;
    std::vector<Point> v;
    v.reserve(c.size());
    for (const Point& p : c.vertices()) v.push_back(map(p));
    std::reverse(v.begin(), v.end());
    return ConvexPolygon::from_ccw(std::move(v));
  }
};

bool in_tri(const std::optional<Point>& a, const std::optional<Point>& b,
            const Point& apex, const Point& p) {
  if (!a || !b) return true;
  return geom::point_in_triangle({apex, *a, *b}, p);
}

// conv(SE quadrants + {BL, BR, TR}); only the top-left chain is free.
ConvexPolygon se_hull(std::span<const Rect> rects, const Rect& mbr) {
  sep::ExtremeCorners ex = sep::scan_extremes(rects, mbr);
  std::vector<Point> cand;
  for (const Rect& r : rects) {
    if (in_tri(ex.l2, ex.t1, mbr.tl(), r.bl())) cand.push_back(r.bl());
    if (in_tri(ex.l2, ex.t1, mbr.tl(), r.tr())) cand.push_back(r.tr());
  }
  cand.push_back(mbr.bl());
  cand.push_back(mbr.br());
  cand.push_back(mbr.tr());
  return ConvexPolygon::hull_of(cand);
}

// conv(NE quadrants + {TL, BR, TR}); only the bottom-left chain is free.
ConvexPolygon ne_hull(std::span<const Rect> rects, const Rect& mbr) {
  sep::ExtremeCorners ex = sep::scan_extremes(rects, mbr);
  std::vector<Point> cand;
  for (const Rect& r : rects) {
    if (in_tri(ex.l1, ex.b1, mbr.bl(), r.tl())) cand.push_back(r.tl());
    if (in_tri(ex.l1, ex.b1, mbr.bl(), r.br())) cand.push_back(r.br());
  }
  cand.push_back(mbr.tl());
  cand.push_back(mbr.br());
  cand.push_back(mbr.tr());
  return ConvexPolygon::hull_of(cand);
}

}  // namespace

ConvexPolygon rtree_convex_hull(const rtree::RTree& tree,
                                rtree::CounterContext* ctx) {
  rtree::NodeView root = tree.read_node(tree.root_page(), ctx);
  if (root.leaf) return geom::convex_hull_points(root.points);

  Rect mbr = root.entries.front().rect;
  for (const auto& e : root.entries) mbr.expand(e.rect);

  std::vector<Rect> rects;
  std::vector<uint64_t> pages;
  for (const auto& e : root.entries) {
    rects.push_back(e.rect);
    pages.push_back(e.child);
  }

  Flip fx{true};
  std::vector<Point> pts;
  while (true) {
    ConvexPolygon c1 = se_hull(rects, mbr);
    ConvexPolygon c2 = ne_hull(rects, mbr);
    std::vector<Rect> flipped;
    flipped.reserve(rects.size());
    for (const Rect& r : rects) flipped.push_back(fx.map(r));
    Rect fmbr = fx.map(mbr);
    ConvexPolygon c3 = fx.map_poly(ne_hull(flipped, fmbr));
    ConvexPolygon c4 = fx.map_poly(se_hull(flipped, fmbr));

    std::vector<Rect> kept_rects;
    std::vector<uint64_t> kept_pages;
    for (size_t i = 0; i < rects.size(); ++i) {
      const Rect& r = rects[i];
      bool drop = c1.locate(r.tl()) != geom::ContainmentClass::Outside &&
                  c2.locate(r.bl()) != geom::ContainmentClass::Outside &&
                  c3.locate(r.br()) != geom::ContainmentClass::Outside &&
                  c4.locate(r.tr()) != geom::ContainmentClass::Outside;
      if (!drop) {
        kept_rects.push_back(r);
        kept_pages.push_back(pages[i]);
      }
    }
    if (kept_rects.empty()) {
      // Cannot happen for exact MBR trees; keep everything rather than lose
      // hull vertices.
      kept_rects = rects;
      kept_pages = pages;
    }

    std::vector<Rect> next_rects;
    std::vector<uint64_t> next_pages;
    bool saw_points = false;
    for (uint64_t page : kept_pages) {
      rtree::NodeView node = tree.read_node(page, ctx);
      if (node.leaf) {
        saw_points = true;
        pts.insert(pts.end(), node.points.begin(), node.points.end());
      } else {
        for (const auto& e : node.entries) {
          next_rects.push_back(e.rect);
          next_pages.push_back(e.child);
        }
      }
    }
    if (saw_points) break;
    rects = std::move(next_rects);
    pages = std::move(next_pages);
  }
  return geom::convex_hull_points(pts);
}

}  // namespace rtsep::hullq
