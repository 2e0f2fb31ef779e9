#include "rtsep/geometry.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <limits>
#include <utility>

#include "rtsep/exact.hpp"

namespace rtsep::geom {
namespace {

bool finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

int orient_sign(const Point& p, const Point& q, const Point& r) {
  return exact::orient2d(p.x, p.y, q.x, q.y, r.x, r.y);
}

// sign of d . (a - b) for direction d given as two doubles
int dir_cmp(double dx, double dy, const Point& a, const Point& b) {
  return exact::dir_cmp(dx, dy, a.x, a.y, b.x, b.y);
}

double round_directed(long double v, bool up) {
  double d = static_cast<double>(v);
  if (up && static_cast<long double>(d) < v)
    d = std::nextafter(d, std::numeric_limits<double>::infinity());
  if (!up && static_cast<long double>(d) > v)
    d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  return d;
}

// Line through the directed edge u->v. red_on_left: the red side (a*x+b*y<=c)
// is the left side of u->v. round_up: directed rounding of c so the hull that
// owns the edge stays on its closed side despite the inexact product.
Line make_edge_line(const Point& u, const Point& v, bool red_on_left,
                    bool round_up) {
  Line ln;
  if (red_on_left) {
    ln.a = v.y - u.y;
    ln.b = u.x - v.x;
  } else {
    ln.a = u.y - v.y;
    ln.b = v.x - u.x;
  }
  long double c = static_cast<long double>(ln.a) * u.x +
                  static_cast<long double>(ln.b) * u.y;
  ln.c = round_directed(c, round_up);
  return ln;
}

}  // namespace

void Rect::expand(const Point& p) {
  lo.x = std::min(lo.x, p.x);
  lo.y = std::min(lo.y, p.y);
  hi.x = std::max(hi.x, p.x);
  hi.y = std::max(hi.y, p.y);
}

void Rect::expand(const Rect& r) {
  expand(r.lo);
  expand(r.hi);
}

Rect Rect::bounding(std::span<const Point> pts) {
  if (pts.empty()) throw EmptyInput("bounding rect of empty point set");
  Rect r{pts[0], pts[0]};
  for (const Point& p : pts) r.expand(p);
  return r;
}

Sign orientation(const Point& p, const Point& q, const Point& r) {
  if (!finite(p) || !finite(q) || !finite(r))
    throw InvalidGeometry("orientation: non-finite coordinate");
  return static_cast<Sign>(orient_sign(p, q, r));
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  if (orient_sign(a, b, p) != 0) return false;
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1,
                        const Point& q2) {
  int d1 = orient_sign(q1, q2, p1);
  int d2 = orient_sign(q1, q2, p2);
  int d3 = orient_sign(p1, p2, q1);
  int d4 = orient_sign(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

bool point_in_triangle(const Triangle& t, const Point& p) {
  int d1 = orient_sign(t.a, t.b, p);
  int d2 = orient_sign(t.b, t.c, p);
  int d3 = orient_sign(t.c, t.a, p);
  if (d1 == 0 && d2 == 0 && d3 == 0) {
    // Collinear corners: the region is the segment spanned by the two
    // extreme corners.
    if (on_segment(t.a, t.b, t.c)) return on_segment(t.a, t.b, p);
    if (on_segment(t.a, t.c, t.b)) return on_segment(t.a, t.c, p);
    return on_segment(t.b, t.c, p);
  }
  bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
  bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
  return !(has_pos && has_neg);
}

Triangle quadrant_region(const Rect& n, Quadrant which) {
  switch (which) {
    case Quadrant::NW:
      return {n.tl(), n.tr(), n.bl()};
    case Quadrant::NE:
      return {n.tl(), n.tr(), n.br()};
    case Quadrant::SE:
      return {n.tr(), n.br(), n.bl()};
    case Quadrant::SW:
      return {n.tl(), n.br(), n.bl()};
  }
  return {};
}

void ConvexPolygon::set_lex_max() {
  lex_max_ = 0;
  for (size_t i = 1; i < verts_.size(); ++i)
    if (lex_less(verts_[lex_max_], verts_[i])) lex_max_ = i;
}

ConvexPolygon ConvexPolygon::hull_of(std::span<const Point> pts) {
  if (pts.empty()) throw EmptyInput("convex hull of empty point set");
  for (const Point& p : pts)
    if (!finite(p)) throw InvalidGeometry("convex hull: non-finite coordinate");

  std::vector<Point> s(pts.begin(), pts.end());
  std::sort(s.begin(), s.end(), lex_less);
  s.erase(std::unique(s.begin(), s.end()), s.end());

  ConvexPolygon out;
  if (s.size() <= 2) {
    out.verts_ = std::move(s);
    out.set_lex_max();
    return out;
  }

  std::vector<Point> h(2 * s.size());
  size_t k = 0;
  for (const Point& p : s) {
    while (k >= 2 && orient_sign(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  size_t lower = k + 1;
  for (size_t i = s.size() - 1; i-- > 0;) {
    const Point& p = s[i];
    while (k >= lower && orient_sign(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  h.resize(k - 1);
  out.verts_ = std::move(h);
  out.set_lex_max();
  return out;
}

ConvexPolygon ConvexPolygon::from_ccw(std::vector<Point> cycle) {
  std::vector<Point> v;
  v.reserve(cycle.size());
  for (const Point& p : cycle)
    if (v.empty() || !(v.back() == p)) v.push_back(p);
  while (v.size() >= 2 && v.front() == v.back()) v.pop_back();

  if (v.size() > 2) {
    std::vector<Point> stripped;
    stripped.reserve(v.size());
    size_t n = v.size();
    for (size_t i = 0; i < n; ++i) {
      const Point& prev = v[(i + n - 1) % n];
      const Point& next = v[(i + 1) % n];
      if (orient_sign(prev, v[i], next) != 0) stripped.push_back(v[i]);
    }
    if (stripped.size() < 2) {
      auto [mn, mx] = std::minmax_element(v.begin(), v.end(), lex_less);
      stripped = (*mn == *mx) ? std::vector<Point>{*mn}
                              : std::vector<Point>{*mn, *mx};
    }
    v = std::move(stripped);
  }

  size_t min_i = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (lex_less(v[i], v[min_i])) min_i = i;
  std::rotate(v.begin(), v.begin() + static_cast<long>(min_i), v.end());

  ConvexPolygon out;
  out.verts_ = std::move(v);
  out.set_lex_max();
#ifndef NDEBUG
  size_t n = out.verts_.size();
  if (n >= 3)
    for (size_t i = 0; i < n; ++i)
      assert(orient_sign(out.verts_[i], out.verts_[(i + 1) % n],
                         out.verts_[(i + 2) % n]) > 0);
#endif
  return out;
}

ConvexPolygon convex_hull_points(std::span<const Point> pts) {
  return ConvexPolygon::hull_of(pts);
}

ContainmentClass ConvexPolygon::locate(const Point& p) const {
  size_t k = verts_.size();
  if (k == 0) return ContainmentClass::Outside;
  if (k == 1)
    return p == verts_[0] ? ContainmentClass::Boundary
                          : ContainmentClass::Outside;
  if (k == 2)
    return on_segment(verts_[0], verts_[1], p) ? ContainmentClass::Boundary
                                               : ContainmentClass::Outside;

  const Point& v0 = verts_[0];
  int s_first = orient_sign(v0, verts_[1], p);
  if (s_first < 0) return ContainmentClass::Outside;
  int s_last = orient_sign(v0, verts_[k - 1], p);
  if (s_last > 0) return ContainmentClass::Outside;
  if (s_first == 0)
    return on_segment(v0, verts_[1], p) ? ContainmentClass::Boundary
                                        : ContainmentClass::Outside;
  if (s_last == 0)
    return on_segment(v0, verts_[k - 1], p) ? ContainmentClass::Boundary
                                            : ContainmentClass::Outside;

  size_t lo = 1, hi = k - 1;
  while (hi - lo > 1) {
    size_t m = (lo + hi) / 2;
    int s = orient_sign(v0, verts_[m], p);
    if (s > 0) {
      lo = m;
    } else if (s < 0) {
      hi = m;
    } else {
      if (p == verts_[m]) return ContainmentClass::Boundary;
      return on_segment(v0, verts_[m], p) ? ContainmentClass::Interior
                                          : ContainmentClass::Outside;
    }
  }
  int s = orient_sign(verts_[lo], verts_[lo + 1], p);
  if (s > 0) return ContainmentClass::Interior;
  if (s == 0)
    return on_segment(verts_[lo], verts_[lo + 1], p)
               ? ContainmentClass::Boundary
               : ContainmentClass::Outside;
  return ContainmentClass::Outside;
}

ContainmentClass locate_point(const ConvexPolygon& c, const Point& p) {
  if (c.empty()) throw EmptyInput("locate_point on empty polygon");
  if (!finite(p)) throw InvalidGeometry("locate_point: non-finite coordinate");
  return c.locate(p);
}

size_t ConvexPolygon::extreme_index(double dx, double dy) const {
  size_t best = 0;
  for (size_t i = 1; i < verts_.size(); ++i)
    if (dir_cmp(dx, dy, verts_[i], verts_[best]) > 0) best = i;
  return best;
}

std::optional<size_t> ConvexPolygon::find_vertex(const Point& p) const {
  for (size_t i = 0; i < verts_.size(); ++i)
    if (verts_[i] == p) return i;
  return std::nullopt;
}

bool segment_intersects_convex(const ConvexPolygon& c, const Point& u,
                               const Point& v) {
  size_t k = c.size();
  if (k == 0) return false;
  if (k == 1) return on_segment(u, v, c[0]);
  if (c.locate(u) != ContainmentClass::Outside) return true;
  if (c.locate(v) != ContainmentClass::Outside) return true;
  size_t edges = (k == 2) ? 1 : k;
  for (size_t i = 0; i < edges; ++i)
    if (segments_intersect(u, v, c[i], c[(i + 1) % k])) return true;
  return false;
}

double polygon_area(const ConvexPolygon& c) {
  long double s = 0.0L;
  size_t n = c.size();
  for (size_t i = 0; i < n; ++i) {
    const Point& a = c[i];
    const Point& b = c[(i + 1) % n];
    s += static_cast<long double>(a.x) * b.y -
         static_cast<long double>(b.x) * a.y;
  }
  return static_cast<double>(s / 2.0L);
}

namespace {

// Strict edge separator scan, then a perpendicular-gap fallback for the
// collinear degenerate cases where no hull edge works.
std::optional<Line> edge_separator(const ConvexPolygon& red,
                                   const ConvexPolygon& blue) {
  auto try_hull = [](const ConvexPolygon& owner, const ConvexPolygon& other,
                     bool owner_is_red) -> std::optional<Line> {
    size_t k = owner.size();
    if (k < 2) return std::nullopt;
    size_t edges = (k == 2) ? 2 : k;  // a segment hull has two directed edges
    for (size_t i = 0; i < edges; ++i) {
      const Point& u = owner[i % k];
      const Point& v = owner[(i + 1) % k];
      if (u == v) continue;
      bool all_strict = true;
      for (const Point& w : other.vertices())
        if (orient_sign(u, v, w) >= 0) {
          all_strict = false;
          break;
        }
      if (all_strict)
        return make_edge_line(u, v, /*red_on_left=*/owner_is_red,
                              /*round_up=*/owner_is_red);
    }
    return std::nullopt;
  };
  if (auto ln = try_hull(blue, red, false)) return ln;
  if (auto ln = try_hull(red, blue, true)) return ln;
  return std::nullopt;
}

Point closest_point_on_segment(const Point& a, const Point& b, const Point& p) {
  double dx = b.x - a.x, dy = b.y - a.y;
  double den = dx * dx + dy * dy;
  if (den == 0.0) return a;
  double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / den;
  t = std::clamp(t, 0.0, 1.0);
  return {a.x + t * dx, a.y + t * dy};
}

Line perpendicular_gap_line(const ConvexPolygon& red,
                            const ConvexPolygon& blue) {
  double best = std::numeric_limits<double>::infinity();
  Point pr{}, pb{};
  auto consider = [&](const Point& r, const Point& b) {
    double dx = b.x - r.x, dy = b.y - r.y;
    double d2 = dx * dx + dy * dy;
    if (d2 < best) {
      best = d2;
      pr = r;
      pb = b;
    }
  };
  for (const Point& r : red.vertices())
    for (size_t i = 0; i < blue.size(); ++i)
      consider(r, blue.size() >= 2
                      ? closest_point_on_segment(
                            blue[i], blue[(i + 1) % blue.size()], r)
                      : blue[i]);
  for (const Point& b : blue.vertices())
    for (size_t i = 0; i < red.size(); ++i)
      consider(red.size() >= 2 ? closest_point_on_segment(
                                     red[i], red[(i + 1) % red.size()], b)
                               : red[i],
               b);
  Line ln;
  ln.a = pb.x - pr.x;
  ln.b = pb.y - pr.y;
  long double c = (static_cast<long double>(ln.a) * (pr.x + pb.x) +
                   static_cast<long double>(ln.b) * (pr.y + pb.y)) /
                  2.0L;
  ln.c = static_cast<double>(c);
  return ln;
}

Line extract_separator(const ConvexPolygon& red, const ConvexPolygon& blue) {
  if (auto ln = edge_separator(red, blue)) return *ln;
  return perpendicular_gap_line(red, blue);
}

}  // namespace

DisjointResult hulls_disjoint_naive(const ConvexPolygon& red,
                                    const ConvexPolygon& blue) {
  if (red.empty() || blue.empty())
    throw EmptyInput("hulls_disjoint_naive: empty hull");
  for (const Point& p : red.vertices())
    if (blue.locate(p) != ContainmentClass::Outside) return {false, {}};
  for (const Point& p : blue.vertices())
    if (red.locate(p) != ContainmentClass::Outside) return {false, {}};
  size_t kr = red.size(), kb = blue.size();
  if (kr >= 2 && kb >= 2) {
    size_t er = kr == 2 ? 1 : kr;
    size_t eb = kb == 2 ? 1 : kb;
    for (size_t i = 0; i < er; ++i)
      for (size_t j = 0; j < eb; ++j)
        if (segments_intersect(red[i], red[(i + 1) % kr], blue[j],
                               blue[(j + 1) % kb]))
          return {false, {}};
  }
  return {true, extract_separator(red, blue)};
}

namespace {

// Classification of a clockwise S-chain edge against the red hull:
// 1 = the forward ray from the edge hits the hull, 2 = the edge touches it,
// 3 = the hull is behind.
int classify_s_edge(const ConvexPolygon& red, const Point& u, const Point& v) {
  if (red.locate(u) != ContainmentClass::Outside) return 2;
  if (red.locate(v) != ContainmentClass::Outside) return 2;
  if (segment_intersects_convex(red, u, v)) return 2;

  size_t k = red.size();
  double dx = v.x - u.x, dy = v.y - u.y;
  std::vector<int> f(k);
  bool pos = false, neg = false;
  for (size_t i = 0; i < k; ++i) {
    f[i] = orient_sign(u, v, red[i]);
    pos |= f[i] > 0;
    neg |= f[i] < 0;
  }
  if (!pos || !neg) {
    if (pos || neg) return 3;  // the line misses the hull entirely
    // Hull collinear with the edge line; the chord is the hull itself.
    size_t w = red.extreme_index(dx, dy);
    return dir_cmp(dx, dy, red[w], v) > 0 ? 1 : 3;
  }
  // The line crosses the hull; decide whether the chord lies on the forward
  // ray. A touching vertex gives the answer directly.
  for (size_t i = 0; i < k; ++i)
    if (f[i] == 0) return dir_cmp(dx, dy, red[i], v) > 0 ? 1 : 3;
  for (size_t i = 0; i < k; ++i) {
    size_t j = (i + 1) % k;
    if ((f[i] > 0) == (f[j] > 0)) continue;
    const Point& p = red[i];
    const Point& q = red[j];
    // The crossing point x* sits at parameter t = A/(A-B) along the edge
    // line from v towards w = 2v-u; it is ahead of v iff t > 0, i.e. iff
    // sign(A) equals sign(A-B). A-B reduces to cross(q-p, u-v).
    int a = orient_sign(p, q, v);
    if (a == 0) return 3;
    int ab = exact::cross4(p.x, p.y, q.x, q.y, v.x, v.y, u.x, u.y);
    return a == ab ? 1 : 3;
  }
  return 3;
}

DisjointResult structured_small(const ConvexPolygon& red,
                                const ConvexPolygon& blue) {
  const ConvexPolygon* small = &red;
  const ConvexPolygon* big = &blue;
  if (blue.size() < small->size()) {
    small = &blue;
    big = &red;
  }
  bool meet;
  if (small->size() == 1) {
    meet = big->locate((*small)[0]) != ContainmentClass::Outside;
  } else {
    meet = segment_intersects_convex(*big, (*small)[0], (*small)[1]);
  }
  if (meet) return {false, {}};
  return {true, extract_separator(red, blue)};
}

}  // namespace

DisjointResult hulls_disjoint_structured(const ConvexPolygon& red,
                                         const ConvexPolygon& blue,
                                         const StructuredCfg& cfg) {
  if (red.empty() || blue.empty())
    throw EmptyInput("hulls_disjoint_structured: empty hull");
  if (red.size() <= 2 || blue.size() <= 2) return structured_small(red, blue);

  size_t k = blue.size();
  // S runs clockwise along the blue hull's facing chain: from BL (corner) or
  // BR (side) of mbr(B) up to TR. BL is the lexicographic minimum (index 0),
  // TR the lexicographic maximum.
  size_t start = cfg.side ? blue.extreme_index(1.0, -1.0) : 0;
  size_t end = blue.lex_max_index();
  size_t m = (start + k - end) % k;
  if (m == 0) return structured_small(red, blue);

  auto s_edge = [&](size_t j) {
    return std::pair<const Point&, const Point&>(blue[(start + k - j) % k],
                                                 blue[(start + k - j - 1) % k]);
  };
  auto cls = [&](size_t j) {
    auto [u, v] = s_edge(j);
    return classify_s_edge(red, u, v);
  };

  size_t first_non_ahead;
  if (cls(0) != 1) {
    first_non_ahead = 0;
  } else if (cls(m - 1) == 1) {
    // The chain never stops pointing at the red hull, so the canonical
    // precondition does not hold. Answer conservatively.
    return {false, {}};
  } else {
    size_t lo = 0, hi = m - 1;
    while (hi - lo > 1) {
      size_t mid = (lo + hi) / 2;
      (cls(mid) == 1 ? lo : hi) = mid;
    }
    first_non_ahead = hi;
  }
  if (cls(first_non_ahead) == 2) return {false, {}};

  // Disjoint. Prefer the line through the transition edge of the blue hull.
  auto [u, v] = s_edge(first_non_ahead);
  size_t w = red.extreme_index(v.y - u.y, u.x - v.x);  // least leftness
  if (orient_sign(u, v, red[w]) > 0)
    return {true,
            make_edge_line(u, v, /*red_on_left=*/true, /*round_up=*/false)};
  // Red touches that line; try the red edges adjacent to the touching vertex.
  size_t kr = red.size();
  for (size_t cand : {(w + kr - 1) % kr, w}) {
    const Point& p = red[cand];
    const Point& q = red[(cand + 1) % kr];
    if (p == q) continue;
    size_t z = blue.extreme_index(-(q.y - p.y), q.x - p.x);
    if (orient_sign(p, q, blue[z]) < 0)
      return {true,
              make_edge_line(p, q, /*red_on_left=*/true, /*round_up=*/true)};
  }
  return {true, extract_separator(red, blue)};
}

ConvexPolygon conservative_intersection(const ConvexPolygon& c1,
                                        const ConvexPolygon& c2) {
  std::vector<Point> pts;
  for (const Point& p : c1.vertices())
    if (c2.locate(p) != ContainmentClass::Outside) pts.push_back(p);
  for (const Point& p : c2.vertices())
    if (c1.locate(p) != ContainmentClass::Outside) pts.push_back(p);
  if (pts.empty()) return {};
  return ConvexPolygon::hull_of(pts);
}

namespace {

// Crossing point of two properly crossing segments, evaluated in extended
// precision and nudged onto a double that sits inside both hulls so the
// spliced polygon stays within the true intersection.
std::optional<Point> crossing_vertex(const Point& a, const Point& b,
                                     const Point& c, const Point& d,
                                     const ConvexPolygon& c1,
                                     const ConvexPolygon& c2) {
  long double d1x = b.x - a.x, d1y = b.y - a.y;
  long double d2x = d.x - c.x, d2y = d.y - c.y;
  long double den = d1x * d2y - d1y * d2x;
  if (den == 0.0L) return std::nullopt;
  long double t = ((c.x - a.x) * d2y - (c.y - a.y) * d2x) / den;
  Point p{static_cast<double>(a.x + t * d1x),
          static_cast<double>(a.y + t * d1y)};
  double sx = std::max({std::fabs(p.x), std::fabs(p.y), 1.0});
  for (double scale : {0.0, 0x1.0p-48, 0x1.0p-42, 0x1.0p-36}) {
    double delta = sx * scale;
    const std::array<std::pair<double, double>, 9> offsets{
        {{0.0, 0.0},
         {delta, 0.0},
         {-delta, 0.0},
         {0.0, delta},
         {0.0, -delta},
         {delta, delta},
         {delta, -delta},
         {-delta, delta},
         {-delta, -delta}}};
    for (auto [ox, oy] : offsets) {
      Point q{p.x + ox, p.y + oy};
      if (c1.locate(q) != ContainmentClass::Outside &&
          c2.locate(q) != ContainmentClass::Outside)
        return q;
    }
  }
  return std::nullopt;
}

}  // namespace

ConvexPolygon intersect_monotone_hulls(const ConvexPolygon& c1,
                                       const ConvexPolygon& c2,
                                       const SpliceMarkers& m) {
  auto it1 = c1.find_vertex(m.t1);
  auto il2 = c1.find_vertex(m.l2);
  auto ib1 = c2.find_vertex(m.b1);
  auto il1 = c2.find_vertex(m.l1);
  if (!it1 || !il2 || !ib1 || !il1)
    throw ContractViolation(
        "intersect_monotone_hulls: marker is not a hull vertex");
  if (c1.size() < 3 || c2.size() < 3) return conservative_intersection(c1, c2);

  size_t n1 = c1.size(), n2 = c2.size();

  auto append_ccw = [](const ConvexPolygon& c, size_t from, size_t to,
                       std::vector<Point>& dst) {
    size_t n = c.size();
    for (size_t i = from;; i = (i + 1) % n) {
      dst.push_back(c[i]);
      if (i == to) break;
    }
  };

  if (!(m.l1.y > m.l2.y)) {
    // No crossing: the boundary is the lower chain of c2 from l1 to b1, the
    // shared anchor corners up to TR, the upper chain of c1 from t1 to l2,
    // closed by the vertical l2 -> l1 bridge.
    std::vector<Point> assembled;
    append_ccw(c2, *il1, c2.lex_max_index(), assembled);  // l1 .. b1 .. TR
    append_ccw(c1, *it1, *il2, assembled);                // t1 .. l2
    return ConvexPolygon::from_ccw(std::move(assembled));
  }

  // l1 strictly above l2: the chains cross. Degenerate interleavings fall
  // back to the vertex hull, which is still inside the true intersection.
  if (c1.locate(m.l1) != ContainmentClass::Outside ||
      c2.locate(m.l2) != ContainmentClass::Outside)
    return conservative_intersection(c1, c2);

  // L: clockwise walk of c2 from b1 towards l1. Membership in c1 along L is
  // monotone (inside ... inside outside ... outside).
  size_t len_l = (*ib1 + n2 - *il1) % n2;
  auto l_vert = [&](size_t s) { return c2[(*ib1 + n2 - s % n2) % n2]; };
  if (c1.locate(l_vert(0)) == ContainmentClass::Outside)
    return conservative_intersection(c1, c2);
  size_t lo = 0, hi = len_l;
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    (c1.locate(l_vert(mid)) != ContainmentClass::Outside ? lo : hi) = mid;
  }
  size_t last_in_l = lo;

  // U: clockwise walk of c1 from l2 towards t1 (ccw indices decrease from
  // il2 to it1).
  size_t len_u = (*il2 + n1 - *it1) % n1;
  auto u_vert = [&](size_t s) { return c1[(*il2 + n1 - s % n1) % n1]; };
  if (c2.locate(u_vert(len_u)) == ContainmentClass::Outside)
    return conservative_intersection(c1, c2);
  size_t ulo = 0, uhi = len_u;
  while (uhi - ulo > 1) {
    size_t mid = (ulo + uhi) / 2;
    (c2.locate(u_vert(mid)) == ContainmentClass::Outside ? ulo : uhi) = mid;
  }
  size_t first_in_u = uhi;

  std::optional<Point> cross =
      crossing_vertex(l_vert(last_in_l), l_vert(last_in_l + 1),
                      u_vert(first_in_u - 1), u_vert(first_in_u), c1, c2);

  std::vector<Point> assembled;
  if (cross) assembled.push_back(*cross);
  for (size_t s = last_in_l + 1; s-- > 0;) assembled.push_back(l_vert(s));
  append_ccw(c2, (*ib1 + 1) % n2, c2.lex_max_index(), assembled);  // .. TR
  for (size_t s = len_u + 1; s-- > first_in_u;) assembled.push_back(u_vert(s));
  return ConvexPolygon::from_ccw(std::move(assembled));
}

}  // namespace rtsep::geom
