#include "rtsep/exact.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

namespace rtsep::exact {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;
const double kCcwBoundA = (3.0 + 16.0 * kEps) * kEps;

struct Two {
  double hi, lo;  // value = hi + lo, exactly
};

inline Two two_sum(double a, double b) {
  double s = a + b;
  double bv = s - a;
  double av = s - bv;
  return {s, (a - av) + (b - bv)};
}

inline Two two_diff(double a, double b) {
  double d = a - b;
  double bv = a - d;
  double av = d + bv;
  return {d, (a - av) - (b - bv)};
}

inline Two two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

// Nonoverlapping expansion, increasing magnitude order. Fixed capacity is
// enough for everything below (at most 16 input terms).
struct Expansion {
  double e[36];
  int n = 0;

  void grow(double b) {
    Two q{b, 0.0};
    int k = 0;
    double out[36];
    for (int i = 0; i < n; ++i) {
      Two s = two_sum(q.hi, e[i]);
      if (s.lo != 0.0) out[k++] = s.lo;
      q.hi = s.hi;
    }
    if (q.hi != 0.0 || k == 0) out[k++] = q.hi;
    for (int i = 0; i < k; ++i) e[i] = out[i];
    n = k;
  }

  int sign() const {
    double top = e[n - 1];
    if (top > 0.0) return 1;
    if (top < 0.0) return -1;
    return 0;
  }
};

// Adds the exact value of (a.hi+a.lo)*(b.hi+b.lo) into the expansion.
void add_prod(Expansion& x, Two a, Two b) {
  Two p;
  p = two_prod(a.hi, b.hi);
  x.grow(p.lo);
  x.grow(p.hi);
  p = two_prod(a.hi, b.lo);
  x.grow(p.lo);
  x.grow(p.hi);
  p = two_prod(a.lo, b.hi);
  x.grow(p.lo);
  x.grow(p.hi);
  p = two_prod(a.lo, b.lo);
  x.grow(p.lo);
  x.grow(p.hi);
}

void add_prod_neg(Expansion& x, Two a, Two b) {
  add_prod(x, Two{-a.hi, -a.lo}, b);
}

}  // namespace

int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
  double detl = (bx - ax) * (cy - ay);
  double detr = (by - ay) * (cx - ax);
  double det = detl - detr;
  double magnitude = std::fabs(detl) + std::fabs(detr);
  if (std::fabs(det) > kCcwBoundA * magnitude) return det > 0.0 ? 1 : -1;

  Expansion x;
  add_prod(x, two_diff(bx, ax), two_diff(cy, ay));
  add_prod_neg(x, two_diff(by, ay), two_diff(cx, ax));
  return x.sign();
}

int line_eval(double a, double b, double c, double x, double y) {
  double t1 = a * x;
  double t2 = b * y;
  double s = (t1 + t2) - c;
  double magnitude = std::fabs(t1) + std::fabs(t2) + std::fabs(c);
  if (std::fabs(s) > 8.0 * kEps * magnitude) return s > 0.0 ? 1 : -1;

  Expansion e;
  Two p = two_prod(a, x);
  e.grow(p.lo);
  e.grow(p.hi);
  p = two_prod(b, y);
  e.grow(p.lo);
  e.grow(p.hi);
  e.grow(-c);
  return e.sign();
}

int cross4(double ax, double ay, double bx, double by, double cx, double cy,
           double dx, double dy) {
  double t1 = (bx - ax) * (dy - cy);
  double t2 = (by - ay) * (dx - cx);
  double det = t1 - t2;
  double magnitude = std::fabs(t1) + std::fabs(t2);
  if (std::fabs(det) > kCcwBoundA * magnitude) return det > 0.0 ? 1 : -1;

  Expansion x;
  add_prod(x, two_diff(bx, ax), two_diff(dy, cy));
  add_prod_neg(x, two_diff(by, ay), two_diff(dx, cx));
  return x.sign();
}

int dir_cmp(double dx, double dy, double px, double py, double qx, double qy) {
  double t1 = dx * (px - qx);
  double t2 = dy * (py - qy);
  double s = t1 + t2;
  double magnitude = std::fabs(t1) + std::fabs(t2);
  if (std::fabs(s) > 8.0 * kEps * magnitude) return s > 0.0 ? 1 : -1;

  Expansion e;
  add_prod(e, Two{dx, 0.0}, two_diff(px, qx));
  add_prod(e, Two{dy, 0.0}, two_diff(py, qy));
  return e.sign();
}

}  // namespace rtsep::exact
