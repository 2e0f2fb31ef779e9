#include "rtsep/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rtsep/exact.hpp"

namespace rtsep::oracle {

using geom::ConvexPolygon;
using geom::Line;
using geom::Point;

namespace {

int orient(const Point& p, const Point& q, const Point& r) {
  return exact::orient2d(p.x, p.y, q.x, q.y, r.x, r.y);
}

double sqdist(const Point& a, const Point& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

ConvexPolygon hull_bruteforce(std::span<const geom::Point> pts) {
  if (pts.empty()) throw geom::EmptyInput("hull_bruteforce of empty set");
  std::vector<Point> s(pts.begin(), pts.end());
  std::sort(s.begin(), s.end(), geom::lex_less);
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.size() == 1) return ConvexPolygon::from_ccw({s[0]});
  if (s.size() == 2) return ConvexPolygon::from_ccw({s[0], s[1]});

  std::vector<Point> hull;
  Point start = s.front();  // lex-min is always a hull vertex
  Point cur = start;
  do {
    hull.push_back(cur);
    Point best = s[0] == cur ? s[1] : s[0];
    for (const Point& cand : s) {
      if (cand == cur) continue;
      int o = orient(cur, best, cand);
      if (o < 0 || (o == 0 && sqdist(cur, cand) > sqdist(cur, best)))
        best = cand;  // most clockwise, farthest on ties
    }
    cur = best;
    if (hull.size() > s.size()) break;  // collinear safety stop
  } while (!(cur == start));

  if (hull.size() <= 2) {
    // All points collinear: keep the extremes.
    return ConvexPolygon::from_ccw({s.front(), s.back()});
  }
  return ConvexPolygon::from_ccw(std::move(hull));
}

namespace {

bool line_valid(const Line& ln, std::span<const Point> red,
                std::span<const Point> blue) {
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

// Line through edge (u,v) with the red side on orientation sign `red_sign`.
Line edge_line(const Point& u, const Point& v, int red_sign) {
  Line ln;
  if (red_sign >= 0) {  // red on the left of u->v
    ln.a = v.y - u.y;
    ln.b = u.x - v.x;
  } else {
    ln.a = u.y - v.y;
    ln.b = v.x - u.x;
  }
  long double c = static_cast<long double>(ln.a) * u.x +
                  static_cast<long double>(ln.b) * u.y;
  ln.c = static_cast<double>(c);
  return ln;
}

}  // namespace

SeparabilityAnswer separable_bruteforce(std::span<const geom::Point> red,
                                        std::span<const geom::Point> blue) {
  if (red.empty() || blue.empty())
    throw geom::EmptyInput("separable_bruteforce: empty color class");
  ConvexPolygon hr = hull_bruteforce(red);
  ConvexPolygon hb = hull_bruteforce(blue);
  auto dis = geom::hulls_disjoint_naive(hr, hb);
  if (!dis.disjoint) return {false, std::nullopt};

  // Prefer a line through a hull edge; try both sides of every edge of both
  // hulls and keep the first that verifies against the full point sets.
  auto scan = [&](const ConvexPolygon& h) -> std::optional<Line> {
    size_t k = h.size();
    if (k < 2) return std::nullopt;
    size_t edges = k == 2 ? 1 : k;
    for (size_t i = 0; i < edges; ++i) {
      const Point& u = h[i];
      const Point& v = h[(i + 1) % k];
      for (int sgn : {1, -1}) {
        Line ln = edge_line(u, v, sgn);
        if (line_valid(ln, red, blue)) return ln;
      }
    }
    return std::nullopt;
  };
  if (auto ln = scan(hr)) return {true, ln};
  if (auto ln = scan(hb)) return {true, ln};

  // Both hulls are segments on a common line; separate across the gap.
  double best = std::numeric_limits<double>::infinity();
  Point pr{}, pb{};
  for (const Point& r : hr.vertices())
    for (const Point& b : hb.vertices())
      if (sqdist(r, b) < best) {
        best = sqdist(r, b);
        pr = r;
        pb = b;
      }
  Line ln;
  ln.a = pb.x - pr.x;
  ln.b = pb.y - pr.y;
  ln.c = static_cast<double>((static_cast<long double>(ln.a) * (pr.x + pb.x) +
                              static_cast<long double>(ln.b) * (pr.y + pb.y)) /
                             2.0L);
  if (line_valid(ln, red, blue)) return {true, ln};
  return {true, std::nullopt};
}

ConvexPolygon clip_bruteforce(const ConvexPolygon& a, const ConvexPolygon& b) {
  std::vector<Point> pts;
  for (const Point& p : a.vertices())
    if (b.locate(p) != geom::ContainmentClass::Outside) pts.push_back(p);
  for (const Point& p : b.vertices())
    if (a.locate(p) != geom::ContainmentClass::Outside) pts.push_back(p);
  size_t ka = a.size(), kb = b.size();
  if (ka >= 2 && kb >= 2) {
    size_t ea = ka == 2 ? 1 : ka;
    size_t eb = kb == 2 ? 1 : kb;
    for (size_t i = 0; i < ea; ++i) {
      Point p1 = a[i], p2 = a[(i + 1) % ka];
      for (size_t j = 0; j < eb; ++j) {
        Point q1 = b[j], q2 = b[(j + 1) % kb];
        if (!geom::segments_intersect(p1, p2, q1, q2)) continue;
        long double d1x = p2.x - p1.x, d1y = p2.y - p1.y;
        long double d2x = q2.x - q1.x, d2y = q2.y - q1.y;
        long double den = d1x * d2y - d1y * d2x;
        if (den == 0.0L) continue;  // collinear overlap: endpoints collected
        long double t = ((q1.x - p1.x) * d2y - (q1.y - p1.y) * d2x) / den;
        pts.push_back({static_cast<double>(p1.x + t * d1x),
                       static_cast<double>(p1.y + t * d1y)});
      }
    }
  }
  if (pts.empty()) return {};
  return hull_bruteforce(pts);
}

}  // namespace rtsep::oracle
