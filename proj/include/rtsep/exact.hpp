#pragma once

// Exact sign evaluation for the handful of small polynomial expressions the
// geometry layer relies on. Each function first tries a cheap floating-point
// filter and only falls back to expansion arithmetic when the result is too
// close to zero to trust.

namespace rtsep::exact {

// sign of (bx-ax)*(cy-ay) - (by-ay)*(cx-ax)
int orient2d(double ax, double ay, double bx, double by, double cx, double cy);

// sign of a*x + b*y - c
int line_eval(double a, double b, double c, double x, double y);

// sign of dx*(px-qx) + dy*(py-qy); dx,dy are arbitrary doubles
int dir_cmp(double dx, double dy, double px, double py, double qx, double qy);

// sign of (bx-ax)*(dy-cy) - (by-ay)*(dx-cx): cross of vectors b-a and d-c
int cross4(double ax, double ay, double bx, double by, double cx, double cy,
           double dx, double dy);

}  // namespace rtsep::exact
