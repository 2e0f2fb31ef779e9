#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rtsep::geom {

struct InvalidGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Sign { Negative = -1, Zero = 0, Positive = 1 };

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Lexicographic (x, then y).
inline bool lex_less(const Point& a, const Point& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

struct Rect {
  Point lo;  // bottom-left
  Point hi;  // top-right

  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
  bool is_point() const { return lo.x == hi.x && lo.y == hi.y; }

  Point bl() const { return lo; }
  Point br() const { return {hi.x, lo.y}; }
  Point tl() const { return {lo.x, hi.y}; }
  Point tr() const { return hi; }

  bool contains(const Point& p) const {
    return lo.x <= p.x && p.x <= hi.x && lo.y <= p.y && p.y <= hi.y;
  }
  bool strictly_contains(const Point& p) const {
    return lo.x < p.x && p.x < hi.x && lo.y < p.y && p.y < hi.y;
  }
  bool contains_rect(const Rect& r) const {
    return lo.x <= r.lo.x && r.hi.x <= hi.x && lo.y <= r.lo.y && r.hi.y <= hi.y;
  }
  bool overlaps(const Rect& r) const {
    return lo.x <= r.hi.x && r.lo.x <= hi.x && lo.y <= r.hi.y && r.lo.y <= hi.y;
  }
  void expand(const Point& p);
  void expand(const Rect& r);

  static Rect of_point(const Point& p) { return {p, p}; }
  static Rect bounding(std::span<const Point> pts);

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Triangle {
  Point a, b, c;
};

enum class Quadrant { NE, NW, SE, SW };

enum class ContainmentClass { Interior, Boundary, Outside };

// a*x + b*y = c, with (a,b) != (0,0). The red side is a*x + b*y <= c.
struct Line {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

Sign orientation(const Point& p, const Point& q, const Point& r);

// Closed membership; degenerate (collinear) triangles act as segments/points.
bool point_in_triangle(const Triangle& t, const Point& p);

Triangle quadrant_region(const Rect& n, Quadrant which);

// Closed segments, exact.
bool on_segment(const Point& a, const Point& b, const Point& p);
bool segments_intersect(const Point& p1, const Point& p2, const Point& q1,
                        const Point& q2);

// Strictly convex CCW vertex cycle starting at the lexicographically least
// vertex. May have 1 or 2 vertices.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;

  static ConvexPolygon hull_of(std::span<const Point> pts);
  // Normalizes an already-convex CCW cycle (rotates to the lex-min vertex and
  // strips duplicates/collinear runs).
  static ConvexPolygon from_ccw(std::vector<Point> cycle);

  size_t size() const { return verts_.size(); }
  bool empty() const { return verts_.empty(); }
  const Point& operator[](size_t i) const { return verts_[i]; }
  const std::vector<Point>& vertices() const { return verts_; }
  size_t lex_max_index() const { return lex_max_; }

  // O(log k) fan search from vertex 0.
  ContainmentClass locate(const Point& p) const;

  // Index of a vertex maximizing d.x*x + d.y*y (any maximizer).
  size_t extreme_index(double dx, double dy) const;

  // Exact index lookup of a point known to be a vertex.
  std::optional<size_t> find_vertex(const Point& p) const;

  friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

 private:
  std::vector<Point> verts_;
  size_t lex_max_ = 0;

  void set_lex_max();
};

ConvexPolygon convex_hull_points(std::span<const Point> pts);

ContainmentClass locate_point(const ConvexPolygon& c, const Point& p);

// Does the closed segment uv meet the closed convex region?
bool segment_intersects_convex(const ConvexPolygon& c, const Point& u,
                               const Point& v);

struct DisjointResult {
  bool disjoint = false;
  Line line{};  // meaningful only when disjoint
};

// O(|C1|*|C2|) exact reference test, closed-set semantics.
DisjointResult hulls_disjoint_naive(const ConvexPolygon& red,
                                    const ConvexPolygon& blue);

struct StructuredCfg {
  bool side = false;  // false: corner configuration
  Rect mbr_blue{};    // canonical-frame MBR anchoring the blue hull
};

// Nested binary search over the facing chain of the blue hull. Only valid for
// hull pairs produced by the canonical corner/side constructions; violations
// of that precondition are not detected.
DisjointResult hulls_disjoint_structured(const ConvexPolygon& red,
                                         const ConvexPolygon& blue,
                                         const StructuredCfg& cfg);

struct SpliceMarkers {
  Point b1, l1, l2, t1;
};

// Intersection of the two side-case pessimistic constituents via the monotone
// chain splice. Markers must be vertices of their hulls (b1,l1 of c2; l2,t1 of
// c1).
ConvexPolygon intersect_monotone_hulls(const ConvexPolygon& c1,
                                       const ConvexPolygon& c2,
                                       const SpliceMarkers& m);

// Hull of the vertices of each polygon lying inside the other. Contained in
// the true intersection; used when splice markers are unavailable.
ConvexPolygon conservative_intersection(const ConvexPolygon& c1,
                                        const ConvexPolygon& c2);

double polygon_area(const ConvexPolygon& c);

}  // namespace rtsep::geom
