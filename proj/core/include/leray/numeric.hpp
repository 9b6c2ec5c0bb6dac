#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace leray {

// Plane vector with the handful of operations the geometry kernels need.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double c) const { return {c * x, c * y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  // z-component of the 3D cross product.
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double squared_norm() const { return x * x + y * y; }
  Vec2 normalized() const {
    const double n = norm();
    return {x / n, y / n};
  }
  // Counterclockwise quarter turn.
  Vec2 rot90() const { return {-y, x}; }
};

inline Vec2 operator*(double c, const Vec2& v) { return {c * v.x, c * v.y}; }

// Plane matrix, entry d_ij = component i differentiated along direction j
// when used as a velocity gradient.
struct Mat2 {
  double d11 = 0.0;
  double d12 = 0.0;
  double d21 = 0.0;
  double d22 = 0.0;

  double trace() const { return d11 + d22; }
  Vec2 apply(const Vec2& v) const {
    return {d11 * v.x + d12 * v.y, d21 * v.x + d22 * v.y};
  }
  Mat2 operator+(const Mat2& o) const {
    return {d11 + o.d11, d12 + o.d12, d21 + o.d21, d22 + o.d22};
  }
  Mat2 operator*(double c) const {
    return {c * d11, c * d12, c * d21, c * d22};
  }
};

// Quintic smoothstep s(x) = x^3 (10 - 15 x + 6 x^2) on [0,1], clamped
// outside.  C^2 across the clamp points; max |s'| = 15/8, max |s''| = 10/sqrt(3).
double smoothstep5(double x);
double smoothstep5_d1(double x);
double smoothstep5_d2(double x);

// Gauss-Legendre rule on [-1, 1]; nodes ascending.  Cached per order.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

// Integrate f over [a, b] with a fixed Gauss-Legendre rule.
double gauss_integrate(const std::function<double(double)>& f, double a,
                       double b, int order);

// Adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 40);

// Cubic spline interpolant on strictly increasing knots.
// Boundary conditions: not-a-knot (default, exact on cubics) or natural.
class CubicSpline {
 public:
  enum class Boundary { kNotAKnot, kNatural };

  CubicSpline() = default;
  CubicSpline(std::vector<double> knots, std::vector<double> values,
              Boundary boundary = Boundary::kNotAKnot);

  // Piecewise-cubic evaluation; arguments outside the knot range use the
  // linear extension matching value and slope at the nearest end knot.
  double value(double x) const;
  double deriv(double x) const;
  double deriv2(double x) const;

  bool empty() const { return knots_.empty(); }
  double x_min() const { return knots_.front(); }
  double x_max() const { return knots_.back(); }

 private:
  std::size_t interval(double x) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> m_;  // second derivatives at knots
};

// Least-squares straight-line fit y ~ a + b x.  Returns {a, b, r_squared}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace leray
