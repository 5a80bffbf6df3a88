#pragma once

// Independent reference computations for the tests. None of these touch the
// library: they work on plain doubles with brute-force numerics.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace oracle {

/// Roots of f on [lo, hi]: scan with `step`, bisect every sign change.
inline std::vector<double> grid_scan_roots(const std::function<double(double)>& f, double lo, double hi,
                                           double step) {
  std::vector<double> roots;
  double x0 = lo;
  double f0 = f(x0);
  if (f0 == 0.0) roots.push_back(x0);
  for (double x1 = lo + step; x1 <= hi + step / 2; x1 += step) {
    const double f1 = f(x1);
    if (f1 == 0.0) {
      roots.push_back(x1);
    } else if (f0 != 0.0 && (f0 < 0) != (f1 < 0)) {
      double a = x0, b = x1, fa = f0;
      for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

/// Solution of [a11 a12; a21 a22] (x, y) = (b1, b2); empty when singular.
struct Solution2 {
  double x, y;
};
inline std::optional<Solution2> cramer(double a11, double a12, double a21, double a22, double b1, double b2) {
  const double det = a11 * a22 - a12 * a21;
  if (std::abs(det) < 1e-12) return std::nullopt;
  return Solution2{(b1 * a22 - a12 * b2) / det, (a11 * b2 - b1 * a21) / det};
}

struct Point {
  double x, y;
};

inline double distance(Point p, Point q) { return std::hypot(p.x - q.x, p.y - q.y); }

/// Chord cut from the circle (center, r) by the line through `foot`
/// perpendicular to the direction `dir` (unit vector). The half chord is
/// found by bisection on |foot + t*normal - center| = r.
inline double perpendicular_chord(Point center, double r, Point foot, Point dir) {
  const Point normal{-dir.y, dir.x};
  auto g = [&](double t) { return distance({foot.x + t * normal.x, foot.y + t * normal.y}, center) - r; };
  double a = 0.0, b = 2 * r + distance(foot, center);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (g(m) < 0 ? a : b) = m;
  }
  const double t = 0.5 * (a + b);
  const Point p1{foot.x + t * normal.x, foot.y + t * normal.y};
  const Point p2{foot.x - t * normal.x, foot.y - t * normal.y};
  return distance(p1, p2);
}

}  // namespace oracle
