#include "rtsep/separability.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>

#include "rtsep/exact.hpp"
#include "rtsep/oracle.hpp"

namespace rtsep::sep {

using geom::ConvexPolygon;
using geom::ContainmentClass;
using geom::Line;
using geom::Point;
using geom::Rect;
using geom::Triangle;

namespace {

int corners_shared(const Rect& a, const Rect& b) {
  const Point ca[4] = {a.bl(), a.br(), a.tl(), a.tr()};
  const Point cb[4] = {b.bl(), b.br(), b.tl(), b.tr()};
  int n = 0;
  for (const Point& p : cb)
    for (const Point& q : ca)
      if (p == q) {
        ++n;
        break;
      }
  return n;
}

int count_in(const Rect& container, const Rect& r, bool strict) {
  const Point cs[4] = {r.bl(), r.br(), r.tl(), r.tr()};
  int n = 0;
  for (const Point& p : cs)
    n += strict ? container.strictly_contains(p) : container.contains(p);
  return n;
}

}  // namespace

Classified classify_intersection(const Rect& a, const Rect& b) {
  if (!a.valid() || !b.valid())
    throw geom::InvalidGeometry("classify_intersection: invalid rect");
  if (!a.overlaps(b)) return {IntersectionClass::Disjoint, Color::Blue};
  if (a == b) return {IntersectionClass::Piercing, Color::Blue};
  if (a.contains_rect(b)) {
    if (corners_shared(a, b) == 1) return {IntersectionClass::Corner, {}};
    return {IntersectionClass::Containment, Color::Blue};
  }
  if (b.contains_rect(a)) {
    if (corners_shared(a, b) == 1) return {IntersectionClass::Corner, {}};
    return {IntersectionClass::Containment, Color::Red};
  }

  bool interiors = a.lo.x < b.hi.x && b.lo.x < a.hi.x && a.lo.y < b.hi.y &&
                   b.lo.y < a.hi.y;
  if (!interiors) {
    // Touching along a point or a segment.
    int cb = count_in(a, b, false);
    int ca = count_in(b, a, false);
    if (cb == 1 && ca == 1) return {IntersectionClass::Corner, {}};
    return {IntersectionClass::Side, {}};
  }

  int sb = count_in(a, b, true);
  int sa = count_in(b, a, true);
  if (sb == 1 && sa == 1) return {IntersectionClass::Corner, {}};
  if ((sb == 2 && sa == 0) || (sa == 2 && sb == 0))
    return {IntersectionClass::Side, {}};
  if (sb == 0 && sa == 0) return {IntersectionClass::Piercing, {}};
  // One corner strictly inside, flush on the other axis: still a corner.
  if ((sb == 1 && sa == 0) || (sa == 1 && sb == 0))
    return {IntersectionClass::Corner, {}};
  return {IntersectionClass::Piercing, {}};
}

Point Transform::apply(const Point& p) const {
  Point q = p;
  if (transpose) std::swap(q.x, q.y);
  if (flip_x) q.x = -q.x;
  if (flip_y) q.y = -q.y;
  return q;
}

Point Transform::invert(const Point& p) const {
  Point q = p;
  if (flip_x) q.x = -q.x;
  if (flip_y) q.y = -q.y;
  if (transpose) std::swap(q.x, q.y);
  return q;
}

Rect Transform::apply(const Rect& r) const {
  Point a = apply(r.lo);
  Point b = apply(r.hi);
  return {{std::min(a.x, b.x), std::min(a.y, b.y)},
          {std::max(a.x, b.x), std::max(a.y, b.y)}};
}

Line Transform::invert_line(const Line& ln) const {
  double a = ln.a, b = ln.b, c = ln.c;
  if (flip_x) a = -a;
  if (flip_y) b = -b;
  if (transpose) std::swap(a, b);
  if (swap_colors) {
    a = -a;
    b = -b;
    c = -c;
  }
  return {a, b, c};
}

bool canonical_ok(const Rect& r, const Rect& b, IntersectionClass cls) {
  if (cls == IntersectionClass::Corner) {
    return r.overlaps(b) && !(r == b) && b.lo.x >= r.lo.x &&
           b.hi.x >= r.hi.x && b.lo.y <= r.lo.y && b.hi.y <= r.hi.y &&
           r.contains(b.tl()) && b.contains(r.br());
  }
  if (cls == IntersectionClass::Side) {
    return r.lo.x <= b.lo.x && b.lo.x <= r.hi.x && r.hi.x < b.hi.x &&
           r.lo.y <= b.lo.y && b.hi.y <= r.hi.y;
  }
  return false;
}

Transform canonicalize(const Rect& red_mbr, const Rect& blue_mbr,
                       IntersectionClass cls) {
  if (cls != IntersectionClass::Corner && cls != IntersectionClass::Side)
    throw geom::ContractViolation("canonicalize: class is not corner or side");
  for (int swap = 0; swap < 2; ++swap)
    for (int tr = 0; tr < 2; ++tr)
      for (int fx = 0; fx < 2; ++fx)
        for (int fy = 0; fy < 2; ++fy) {
          Transform t{tr != 0, fx != 0, fy != 0, swap != 0};
          Rect cr = t.apply(swap ? blue_mbr : red_mbr);
          Rect cb = t.apply(swap ? red_mbr : blue_mbr);
          if (canonical_ok(cr, cb, cls)) return t;
        }
  throw geom::ContractViolation("canonicalize: no canonical orientation");
}

Anchors anchor_vertices(const Rect& mbr_red, const Rect& mbr_blue,
                        IntersectionClass cls) {
  Anchors a;
  if (cls == IntersectionClass::Corner) {
    a.red = {mbr_red.tr(), mbr_red.tl(), mbr_red.bl()};
    a.blue = {mbr_blue.tr(), mbr_blue.bl(), mbr_blue.br()};
  } else if (cls == IntersectionClass::Side) {
    a.red = {mbr_red.tl(), mbr_red.bl()};
    a.blue = {mbr_blue.tr(), mbr_blue.br()};
  } else {
    throw geom::ContractViolation("anchor_vertices: class has no anchors");
  }
  return a;
}

ExtremeCorners scan_extremes(std::span<const Rect> rects, const Rect& mbr) {
  ExtremeCorners ex;
  auto keep = [](std::optional<Point>& slot, const Point& p, auto better) {
    if (!slot || better(p, *slot)) slot = p;
  };
  auto leftmost = [](const Point& p, const Point& q) { return p.x < q.x; };
  auto bottommost = [](const Point& p, const Point& q) { return p.y < q.y; };
  auto topmost = [](const Point& p, const Point& q) { return p.y > q.y; };
  for (const Rect& r : rects) {
    if (r.hi.y == mbr.hi.y) {
      keep(ex.t1, r.tr(), leftmost);
      keep(ex.t2, r.tl(), leftmost);
    }
    if (r.lo.y == mbr.lo.y) {
      keep(ex.b1, r.br(), leftmost);
      keep(ex.b2, r.bl(), leftmost);
    }
    if (r.lo.x == mbr.lo.x) {
      keep(ex.l1, r.tl(), bottommost);
      keep(ex.l1p, r.bl(), bottommost);
      keep(ex.l2, r.bl(), topmost);
      keep(ex.l2p, r.tl(), topmost);
    }
  }
  return ex;
}

namespace {

// Both red cases reduce to the blue construction through an exact axis
// reflection: 180 degree rotation for corner, x-mirror for side.
struct Frame {
  bool fx = false, fy = false;

  Point map(const Point& p) const {
    return {fx ? -p.x : p.x, fy ? -p.y : p.y};
  }
  Rect map(const Rect& r) const {
    Point a = map(r.lo), b = map(r.hi);
    return {{std::min(a.x, b.x), std::min(a.y, b.y)},
            {std::max(a.x, b.x), std::max(a.y, b.y)}};
  }
  ConvexPolygon map_poly(const ConvexPolygon& c) const {
    std::vector<Point> v;
    v.reserve(c.size());
    for (const Point& p : c.vertices()) v.push_back(map(p));
    if (fx != fy) std::reverse(v.begin(), v.end());
    return ConvexPolygon::from_ccw(std::move(v));
  }
};

Frame frame_for(Color color, IntersectionClass cls) {
  if (color == Color::Blue) return {};
  return cls == IntersectionClass::Corner ? Frame{true, true}
                                          : Frame{true, false};
}

bool in_opt_triangle(const std::optional<Point>& a,
                     const std::optional<Point>& b, const Point& apex,
                     const Point& p) {
  if (!a || !b) return true;  // no flush rect: keep every candidate
  return geom::point_in_triangle({apex, *a, *b}, p);
}

struct BlueInputs {
  std::vector<Rect> rects;
  std::vector<Point> pts;
  Rect mbr;
  std::vector<Point> anchors;
  ExtremeCorners ex;
};

BlueInputs to_blue_frame(const WorkingSet& ws, const Anchors& anchors,
                         const Rect& mbr, IntersectionClass cls, Color color) {
  Frame f = frame_for(color, cls);
  BlueInputs in;
  in.mbr = f.map(mbr);
  const auto& v = color == Color::Red ? anchors.red : anchors.blue;
  for (const Point& p : v) in.anchors.push_back(f.map(p));
  if (ws.points) {
    in.pts.reserve(ws.pts.size());
    for (const Point& p : ws.pts) in.pts.push_back(f.map(p));
  } else {
    in.rects.reserve(ws.rects.size());
    for (const Rect& r : ws.rects) in.rects.push_back(f.map(r));
    in.ex = scan_extremes(in.rects, in.mbr);
  }
  return in;
}

}  // namespace

ConvexPolygon optimistic_hull(const WorkingSet& ws, const Anchors& anchors,
                              const Rect& mbr, IntersectionClass cls,
                              Color color) {
  if (ws.size() == 0) throw geom::EmptyInput("optimistic_hull: empty set");
  Frame f = frame_for(color, cls);
  BlueInputs in = to_blue_frame(ws, anchors, mbr, cls, color);
  std::vector<Point> cand;
  if (ws.points) {
    cand = in.pts;
  } else {
    for (const Rect& r : in.rects) {
      if (in_opt_triangle(in.ex.l2p, in.ex.t2, in.mbr.tl(), r.tl()))
        cand.push_back(r.tl());
      if (cls == IntersectionClass::Side &&
          in_opt_triangle(in.ex.l1p, in.ex.b2, in.mbr.bl(), r.bl()))
        cand.push_back(r.bl());
    }
  }
  cand.insert(cand.end(), in.anchors.begin(), in.anchors.end());
  return f.map_poly(ConvexPolygon::hull_of(cand));
}

ConvexPolygon pessimistic_hull(const WorkingSet& ws, const Anchors& anchors,
                               const Rect& mbr, IntersectionClass cls,
                               Color color) {
  if (ws.size() == 0) throw geom::EmptyInput("pessimistic_hull: empty set");
  if (ws.points) return optimistic_hull(ws, anchors, mbr, cls, color);
  Frame f = frame_for(color, cls);
  BlueInputs in = to_blue_frame(ws, anchors, mbr, cls, color);

  if (cls == IntersectionClass::Corner) {
    std::vector<Point> cand;
    for (const Rect& r : in.rects) {
      if (in_opt_triangle(in.ex.l2, in.ex.t1, in.mbr.tl(), r.bl()))
        cand.push_back(r.bl());
      if (in_opt_triangle(in.ex.l2, in.ex.t1, in.mbr.tl(), r.tr()))
        cand.push_back(r.tr());
    }
    cand.insert(cand.end(), in.anchors.begin(), in.anchors.end());
    return f.map_poly(ConvexPolygon::hull_of(cand));
  }

  // Side case: intersection of the SE-quadrant hull (anchored at v1 = BL)
  // and the NE-quadrant hull (anchored at v2 = TL).
  std::vector<Point> c1_pts, c2_pts;
  for (const Rect& r : in.rects) {
    if (in_opt_triangle(in.ex.l2, in.ex.t1, in.mbr.tl(), r.bl()))
      c1_pts.push_back(r.bl());
    if (in_opt_triangle(in.ex.l2, in.ex.t1, in.mbr.tl(), r.tr()))
      c1_pts.push_back(r.tr());
    if (in_opt_triangle(in.ex.l1, in.ex.b1, in.mbr.bl(), r.tl()))
      c2_pts.push_back(r.tl());
    if (in_opt_triangle(in.ex.l1, in.ex.b1, in.mbr.bl(), r.br()))
      c2_pts.push_back(r.br());
  }
  c1_pts.insert(c1_pts.end(), in.anchors.begin(), in.anchors.end());
  c1_pts.push_back(in.mbr.bl());  // v1
  c2_pts.insert(c2_pts.end(), in.anchors.begin(), in.anchors.end());
  c2_pts.push_back(in.mbr.tl());  // v2
  ConvexPolygon c1 = ConvexPolygon::hull_of(c1_pts);
  ConvexPolygon c2 = ConvexPolygon::hull_of(c2_pts);

  ConvexPolygon pess;
  if (in.ex.b1 && in.ex.l1 && in.ex.l2 && in.ex.t1 &&
      c1.find_vertex(*in.ex.t1) && c1.find_vertex(*in.ex.l2) &&
      c2.find_vertex(*in.ex.b1) && c2.find_vertex(*in.ex.l1)) {
    pess = geom::intersect_monotone_hulls(
        c1, c2, {*in.ex.b1, *in.ex.l1, *in.ex.l2, *in.ex.t1});
  } else {
    pess = geom::conservative_intersection(c1, c2);
  }
  return f.map_poly(pess);
}

WorkingSet filter_rectangles(const WorkingSet& ws, const ConvexPolygon& pess,
                             Color color) {
  WorkingSet out;
  out.level = ws.level;
  if (ws.points)
    throw geom::ContractViolation("filter_rectangles: point working set");
  for (size_t i = 0; i < ws.rects.size(); ++i) {
    const Rect& r = ws.rects[i];
    Point a = color == Color::Blue ? r.tl() : r.tr();
    Point b = color == Color::Blue ? r.bl() : r.br();
    bool removable = pess.locate(a) != ContainmentClass::Outside &&
                     pess.locate(b) != ContainmentClass::Outside;
    if (!removable) {
      out.rects.push_back(r);
      out.child_pages.push_back(ws.child_pages[i]);
    }
  }
  return out;
}

namespace {

WorkingSet filter_with_removed(const WorkingSet& ws, const ConvexPolygon& pess,
                               Color color, std::vector<Rect>* removed) {
  WorkingSet out = filter_rectangles(ws, pess, color);
  if (removed) {
    removed->clear();
    size_t j = 0;
    for (size_t i = 0; i < ws.rects.size(); ++i) {
      if (j < out.rects.size() && ws.child_pages[i] == out.child_pages[j] &&
          ws.rects[i] == out.rects[j]) {
        ++j;
      } else {
        removed->push_back(ws.rects[i]);
      }
    }
  }
  return out;
}

}  // namespace

WorkingSet expand_level(const rtree::RTree& tree, rtree::CounterContext* ctx,
                        const WorkingSet& ws, const Transform& t) {
  if (ws.points)
    throw geom::ContractViolation("expand_level: point working set");
  WorkingSet out;
  out.level = ws.level + 1;
  std::vector<Rect> synthetic;
  bool saw_points = false, saw_rects = false;
  for (size_t i = 0; i < ws.rects.size(); ++i) {
    if (ws.child_pages[i] == 0) {
      synthetic.push_back(ws.rects[i]);
      continue;
    }
    rtree::NodeView node = tree.read_node(ws.child_pages[i], ctx);
    if (node.leaf) {
      saw_points = true;
      for (const Point& p : node.points) out.pts.push_back(t.apply(p));
    } else {
      saw_rects = true;
      for (const rtree::InternalEntry& e : node.entries) {
        out.rects.push_back(t.apply(e.rect));
        out.child_pages.push_back(e.child);
      }
    }
  }
  if (saw_points && saw_rects)
    throw rtree::PageError("expand_level: mixed child levels");
  out.points = saw_points || (!saw_rects && ws.rects.empty());
  if (out.points) {
    for (const Rect& r : synthetic) out.pts.push_back(r.lo);
  } else if (saw_rects) {
    for (const Rect& r : synthetic) {
      out.rects.push_back(r);
      out.child_pages.push_back(0);
    }
  } else {
    // Only synthetic members survived; nothing left to descend into.
    out.points = true;
    for (const Rect& r : synthetic) out.pts.push_back(r.lo);
  }
  return out;
}

bool verify_separating_line(const Line& ln, std::span<const Point> red,
                            std::span<const Point> blue) {
  if (ln.a == 0.0 && ln.b == 0.0) return false;
  bool red_on = false, blue_on = false;
  for (const Point& p : red) {
    int s = exact::line_eval(ln.a, ln.b, ln.c, p.x, p.y);
    if (s > 0) return false;
    if (s == 0) red_on = true;
  }
  for (const Point& p : blue) {
    int s = exact::line_eval(ln.a, ln.b, ln.c, p.x, p.y);
    if (s < 0) return false;
    if (s == 0) blue_on = true;
  }
  return !(red_on && blue_on);
}

namespace {

struct SideState {
  const rtree::RTree* tree = nullptr;
  rtree::CounterContext* ctx = nullptr;
  Color color = Color::Red;
  WorkingSet ws;
  ConvexPolygon opt;
  uint32_t descents = 0;
};

struct CsResult {
  bool separable = false;
  std::optional<Line> line;
  uint32_t descents_canonical_red = 0;
  uint32_t descents_canonical_blue = 0;
};

ConvexPolygon anchors_only_hull(const Anchors& anchors, Color color) {
  const auto& v = color == Color::Red ? anchors.red : anchors.blue;
  return ConvexPolygon::hull_of(v);
}

geom::DisjointResult run_disjoint(const ConvexPolygon& red,
                                  const ConvexPolygon& blue,
                                  const geom::StructuredCfg& cfg,
                                  const DecideHooks* hooks) {
  geom::DisjointResult d = geom::hulls_disjoint_structured(red, blue, cfg);
  if (hooks && hooks->paranoid) {
    geom::DisjointResult n = geom::hulls_disjoint_naive(red, blue);
    if (n.disjoint != d.disjoint)
      throw geom::ContractViolation(
          "structured/naive disjointness disagreement");
  }
  if (hooks && hooks->on_disjoint_test)
    hooks->on_disjoint_test(red, blue, d.disjoint);
  return d;
}

struct CsCall {
  const rtree::RTree* red_tree;
  const rtree::RTree* blue_tree;
  rtree::CounterContext* red_ctx;
  rtree::CounterContext* blue_ctx;
  const rtree::NodeView* red_root;
  const rtree::NodeView* blue_root;
  Rect red_mbr_eff;   // original frame, possibly extended
  Rect blue_mbr_eff;  // original frame, possibly extended
  IntersectionClass cls = IntersectionClass::Corner;
  Transform t;
  std::optional<Point> extra;  // original frame
  Color extra_color = Color::Blue;
  const DecideHooks* hooks = nullptr;
  uint64_t* peak_bytes = nullptr;
};

WorkingSet ws_from_root(const rtree::NodeView& root, const Transform& t) {
  WorkingSet ws;
  ws.level = 0;
  if (root.leaf) {
    ws.points = true;
    for (const Point& p : root.points) ws.pts.push_back(t.apply(p));
  } else {
    for (const rtree::InternalEntry& e : root.entries) {
      ws.rects.push_back(t.apply(e.rect));
      ws.child_pages.push_back(e.child);
    }
  }
  return ws;
}

CsResult decide_cs(const CsCall& in) {
  const bool swap = in.t.swap_colors;
  Rect cmbr_red = in.t.apply(swap ? in.blue_mbr_eff : in.red_mbr_eff);
  Rect cmbr_blue = in.t.apply(swap ? in.red_mbr_eff : in.blue_mbr_eff);
  Anchors anchors = anchor_vertices(cmbr_red, cmbr_blue, in.cls);

  SideState red, blue;
  red.color = Color::Red;
  blue.color = Color::Blue;
  red.tree = swap ? in.blue_tree : in.red_tree;
  blue.tree = swap ? in.red_tree : in.blue_tree;
  red.ctx = swap ? in.blue_ctx : in.red_ctx;
  blue.ctx = swap ? in.red_ctx : in.blue_ctx;
  red.ws = ws_from_root(swap ? *in.blue_root : *in.red_root, in.t);
  blue.ws = ws_from_root(swap ? *in.red_root : *in.blue_root, in.t);

  if (in.extra) {
    Color canonical_color = in.extra_color;
    if (swap)
      canonical_color =
          canonical_color == Color::Red ? Color::Blue : Color::Red;
    Point v = in.t.apply(*in.extra);
    SideState& side = canonical_color == Color::Red ? red : blue;
    if (side.ws.points) {
      side.ws.pts.push_back(v);
    } else {
      side.ws.rects.push_back(Rect::of_point(v));
      side.ws.child_pages.push_back(0);
    }
  }

  auto cmbr_of = [&](Color c) -> const Rect& {
    return c == Color::Red ? cmbr_red : cmbr_blue;
  };
  auto build_opt = [&](SideState& s) {
    s.opt = s.ws.size() == 0
                ? anchors_only_hull(anchors, s.color)
                : optimistic_hull(s.ws, anchors, cmbr_of(s.color), in.cls,
                                  s.color);
  };
  build_opt(red);
  build_opt(blue);

  geom::StructuredCfg cfg{in.cls == IntersectionClass::Side, cmbr_blue};

  auto account = [&](const ConvexPolygon* pr, const ConvexPolygon* pb) {
    if (!in.peak_bytes) return;
    uint64_t bytes = 32 * (red.ws.rects.size() + blue.ws.rects.size()) +
                     16 * (red.ws.pts.size() + blue.ws.pts.size()) +
                     16 * (red.opt.size() + blue.opt.size() +
                           (pr ? pr->size() : 0) + (pb ? pb->size() : 0));
    *in.peak_bytes = std::max(*in.peak_bytes, bytes);
  };
  auto snapshot = [&](const ConvexPolygon* pr, const ConvexPolygon* pb) {
    if (!in.hooks || !in.hooks->on_iteration) return;
    IterationSnapshot s{};
    s.cls = in.cls;
    s.transform = in.t;
    s.red = &red.ws;
    s.blue = &blue.ws;
    s.anchors = &anchors;
    if (in.extra) {
      s.extra = in.t.apply(*in.extra);
      s.extra_color = in.extra_color;
      if (swap)
        s.extra_color =
            s.extra_color == Color::Red ? Color::Blue : Color::Red;
    }
    s.opt_red = &red.opt;
    s.opt_blue = &blue.opt;
    s.pess_red = pr;
    s.pess_blue = pb;
    in.hooks->on_iteration(s);
  };

  CsResult out;
  while (true) {
    account(nullptr, nullptr);
    snapshot(nullptr, nullptr);
    geom::DisjointResult d = run_disjoint(red.opt, blue.opt, cfg, in.hooks);
    if (d.disjoint) {
      out.separable = true;
      out.line = in.t.invert_line(d.line);
      break;
    }
    if (red.ws.points && blue.ws.points) break;

    ConvexPolygon pess_red =
        red.ws.points || red.ws.size() == 0
            ? red.opt
            : pessimistic_hull(red.ws, anchors, cmbr_red, in.cls, Color::Red);
    ConvexPolygon pess_blue =
        blue.ws.points || blue.ws.size() == 0
            ? blue.opt
            : pessimistic_hull(blue.ws, anchors, cmbr_blue, in.cls,
                               Color::Blue);
    account(&pess_red, &pess_blue);
    snapshot(&pess_red, &pess_blue);
    geom::DisjointResult d2 = run_disjoint(pess_red, pess_blue, cfg, in.hooks);
    if (!d2.disjoint) break;

    for (SideState* s : {&red, &blue}) {
      if (s->ws.points) continue;
      const ConvexPolygon& pess =
          s->color == Color::Red ? pess_red : pess_blue;
      std::vector<Rect> removed;
      WorkingSet kept = filter_with_removed(
          s->ws, pess, s->color,
          in.hooks && in.hooks->on_filter ? &removed : nullptr);
      if (in.hooks && in.hooks->on_filter) {
        FilterEvent ev{s->color, &removed, &pess};
        in.hooks->on_filter(ev);
      }
      s->ws = expand_level(*s->tree, s->ctx, kept, in.t);
      s->descents++;
      build_opt(*s);
    }
  }
  out.descents_canonical_red = red.descents;
  out.descents_canonical_blue = blue.descents;
  return out;
}

Line disjoint_mbr_line(const Rect& r, const Rect& b) {
  if (r.hi.x < b.lo.x) return {1.0, 0.0, r.hi.x};
  if (b.hi.x < r.lo.x) return {-1.0, 0.0, -r.lo.x};
  if (r.hi.y < b.lo.y) return {0.0, 1.0, r.hi.y};
  return {0.0, -1.0, -r.lo.y};
}

Rect view_mbr(const rtree::NodeView& v) {
  if (v.leaf) return Rect::bounding(v.points);
  Rect r = v.entries.front().rect;
  for (const rtree::InternalEntry& e : v.entries) r.expand(e.rect);
  return r;
}

}  // namespace

Decision decide_separability(const rtree::RTree& red_tree,
                             const rtree::RTree& blue_tree,
                             const DecideHooks* hooks) {
  auto t0 = std::chrono::steady_clock::now();
  Decision out;
  out.stats.total_nodes_red = red_tree.node_count();
  out.stats.total_nodes_blue = blue_tree.node_count();

  rtree::CounterContext red_ctx, blue_ctx;
  rtree::NodeView red_root = red_tree.read_node(red_tree.root_page(), &red_ctx);
  rtree::NodeView blue_root =
      blue_tree.read_node(blue_tree.root_page(), &blue_ctx);
  Rect red_mbr = view_mbr(red_root);
  Rect blue_mbr = view_mbr(blue_root);

  Classified cl = classify_intersection(red_mbr, blue_mbr);
  switch (cl.cls) {
    case IntersectionClass::Disjoint:
      out.separable = true;
      out.line = disjoint_mbr_line(red_mbr, blue_mbr);
      break;
    case IntersectionClass::Piercing:
      out.separable = false;
      break;
    case IntersectionClass::Corner:
    case IntersectionClass::Side: {
      CsCall call;
      call.red_tree = &red_tree;
      call.blue_tree = &blue_tree;
      call.red_ctx = &red_ctx;
      call.blue_ctx = &blue_ctx;
      call.red_root = &red_root;
      call.blue_root = &blue_root;
      call.red_mbr_eff = red_mbr;
      call.blue_mbr_eff = blue_mbr;
      call.cls = cl.cls;
      call.t = canonicalize(red_mbr, blue_mbr, cl.cls);
      call.hooks = hooks;
      call.peak_bytes = &out.stats.peak_working_set_bytes;
      CsResult r = decide_cs(call);
      out.separable = r.separable;
      out.line = r.line;
      bool swap = call.t.swap_colors;
      out.stats.levels_descended_red =
          swap ? r.descents_canonical_blue : r.descents_canonical_red;
      out.stats.levels_descended_blue =
          swap ? r.descents_canonical_red : r.descents_canonical_blue;
      break;
    }
    case IntersectionClass::Containment: {
      const Rect outer = cl.inner == Color::Blue ? red_mbr : blue_mbr;
      const Rect inner = cl.inner == Color::Blue ? blue_mbr : red_mbr;
      bool first_call = true;
      const Point corners[4] = {outer.bl(), outer.br(), outer.tl(),
                                outer.tr()};
      out.separable = false;
      for (const Point& v : corners) {
        Rect ext = inner;
        ext.expand(v);
        Rect eff_red = cl.inner == Color::Blue ? red_mbr : ext;
        Rect eff_blue = cl.inner == Color::Blue ? ext : blue_mbr;
        if (classify_intersection(eff_red, eff_blue).cls !=
            IntersectionClass::Corner)
          continue;  // degenerate extension cannot certify separability
        if (!first_call) {
          red_tree.read_node(red_tree.root_page(), &red_ctx);
          blue_tree.read_node(blue_tree.root_page(), &blue_ctx);
        }
        first_call = false;

        CsCall call;
        call.red_tree = &red_tree;
        call.blue_tree = &blue_tree;
        call.red_ctx = &red_ctx;
        call.blue_ctx = &blue_ctx;
        call.red_root = &red_root;
        call.blue_root = &blue_root;
        call.red_mbr_eff = eff_red;
        call.blue_mbr_eff = eff_blue;
        call.cls = IntersectionClass::Corner;
        call.t = canonicalize(eff_red, eff_blue, IntersectionClass::Corner);
        call.extra = v;
        call.extra_color = cl.inner;
        call.hooks = hooks;
        call.peak_bytes = &out.stats.peak_working_set_bytes;
        CsResult r = decide_cs(call);
        bool swap = call.t.swap_colors;
        out.stats.levels_descended_red = std::max(
            out.stats.levels_descended_red,
            swap ? r.descents_canonical_blue : r.descents_canonical_red);
        out.stats.levels_descended_blue = std::max(
            out.stats.levels_descended_blue,
            swap ? r.descents_canonical_red : r.descents_canonical_blue);
        if (r.separable) {
          out.separable = true;
          out.line = r.line;
          break;
        }
      }
      break;
    }
  }

  out.stats.nodes_read_red = red_ctx.reads;
  out.stats.nodes_read_blue = blue_ctx.reads;
  out.stats.distinct_pages_red = red_ctx.distinct.size();
  out.stats.distinct_pages_blue = blue_ctx.distinct.size();
  out.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return out;
}

}  // namespace rtsep::sep
