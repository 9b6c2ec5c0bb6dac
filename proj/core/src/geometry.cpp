#include "leray/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "leray/errors.hpp"
#include "leray/log.hpp"

namespace leray {

namespace {

constexpr double kFlatKappaTol = 1e-12;
constexpr double kCurveSampleSpacing = 0.002;

Vec2 side_outward(const Vec2& tangent, WallSide side) {
  // rot90(tangent) points left of the travel direction; for a lower wall
  // (fluid above) outward is to the right.
  const Vec2 left = tangent.rot90();
  return side == WallSide::kLower ? -left : left;
}

}  // namespace

BoundaryCurve::BoundaryCurve(std::vector<double> s, std::vector<Vec2> points,
                             std::vector<Vec2> tangents,
                             std::vector<double> kappas, WallSide side)
    : s_(std::move(s)),
      points_(std::move(points)),
      tangents_(std::move(tangents)),
      kappas_(std::move(kappas)),
      side_(side) {
  const std::size_t n = s_.size();
  if (n < 2 || points_.size() != n || tangents_.size() != n ||
      kappas_.size() != n)
    throw GeometryError("BoundaryCurve: inconsistent sample arrays");
  ds_ = (s_.back() - s_.front()) / static_cast<double>(n - 1);
  if (!(ds_ > 0.0)) throw GeometryError("BoundaryCurve: arc length not increasing");
  for (std::size_t i = 0; i < n; ++i) {
    const double expected = s_.front() + static_cast<double>(i) * ds_;
    if (std::abs(s_[i] - expected) > 1e-9)
      throw GeometryError("BoundaryCurve: sample spacing not uniform");
    if (std::abs(tangents_[i].norm() - 1.0) > 1e-12)
      throw GeometryError("BoundaryCurve: tangent not unit length");
  }

  // Flat tails: the wall is straight wherever curvature vanishes from the
  // range ends inward.  (Beyond the sampled range the curve is always the
  // straight linear extension.)
  std::size_t first = n, last = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(kappas_[i]) > kFlatKappaTol) {
      if (first == n) first = i;
      last = i;
    }
  }
  if (first == n) {  // straight everywhere
    s_flat_left_ = s_.back();
    s_flat_right_ = s_.front();
  } else {
    s_flat_left_ = first == 0 ? s_.front() : s_[first - 1];
    s_flat_right_ = last + 1 >= n ? s_.back() : s_[last + 1];
  }

  std::vector<double> px(n), py(n), tx(n), ty(n);
  for (std::size_t i = 0; i < n; ++i) {
    px[i] = points_[i].x;
    py[i] = points_[i].y;
    tx[i] = tangents_[i].x;
    ty[i] = tangents_[i].y;
  }
  px_ = CubicSpline(s_, px);
  py_ = CubicSpline(s_, py);
  tx_ = CubicSpline(s_, tx);
  ty_ = CubicSpline(s_, ty);
  ck_ = CubicSpline(s_, kappas_);
}

Vec2 BoundaryCurve::point(double s) const {
  if (s < s_.front())
    return points_.front() + (s - s_.front()) * tangents_.front();
  if (s > s_.back())
    return points_.back() + (s - s_.back()) * tangents_.back();
  return {px_.value(s), py_.value(s)};
}

Vec2 BoundaryCurve::tangent(double s) const {
  if (s <= s_.front()) return tangents_.front();
  if (s >= s_.back()) return tangents_.back();
  return Vec2{tx_.value(s), ty_.value(s)}.normalized();
}

Vec2 BoundaryCurve::outward_normal(double s) const {
  return side_outward(tangent(s), side_);
}

double BoundaryCurve::kappa(double s) const {
  if (s <= s_.front() || s >= s_.back()) return 0.0;
  return ck_.value(s);
}

CurveSample BoundaryCurve::sample(std::size_t i) const {
  CurveSample out;
  out.s = s_[i];
  out.point = points_[i];
  out.tangent = tangents_[i];
  out.normal = side_outward(tangents_[i], side_);
  out.kappa = kappas_[i];
  return out;
}

double BoundaryCurve::nearest_sample_s(const Vec2& x) const {
  const std::size_t n = s_.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 64);
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < n; i += stride) {
    const double d = (points_[i] - x).squared_norm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  const std::size_t lo = best > stride ? best - stride : 0;
  const std::size_t hi = std::min(n - 1, best + stride);
  for (std::size_t i = lo; i <= hi; ++i) {
    const double d = (points_[i] - x).squared_norm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return s_[best];
}

namespace {

bool segments_properly_intersect(const Vec2& a, const Vec2& b, const Vec2& c,
                                 const Vec2& d) {
  auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
    return (q - p).cross(r - p);
  };
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

BoundaryCurve arclength_reparametrize(const std::vector<Vec2>& points,
                                      WallSide side, int resample_count) {
  const std::size_t n = points.size();
  if (n < 4)
    throw GeometryError("arclength_reparametrize: need at least 4 points");

  // Chord-length parameter; zero-length chords are degenerate input.
  std::vector<double> u(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double chord = (points[i] - points[i - 1]).norm();
    if (chord <= 0.0)
      throw GeometryError("arclength_reparametrize: repeated point in input");
    u[i] = u[i - 1] + chord;
  }

  // Self-intersection screen on the polyline (strided for large inputs).
  const std::size_t stride = std::max<std::size_t>(1, (n - 1) / 1500);
  for (std::size_t i = 0; i + 1 < n; i += stride) {
    for (std::size_t j = i + 2; j + 1 < n; j += stride) {
      if (i == 0 && j + 2 == n) continue;  // closed curves allowed to touch
      if (segments_properly_intersect(points[i], points[i + 1], points[j],
                                      points[j + 1]))
        throw GeometryError("arclength_reparametrize: self-intersecting input");
    }
  }

  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = points[i].x;
    ys[i] = points[i].y;
  }
  const CubicSpline X(u, xs), Y(u, ys);
  auto speed = [&](double t) {
    return std::hypot(X.deriv(t), Y.deriv(t));
  };

  // Cumulative arc length at the chord knots.
  std::vector<double> arc(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    arc[i] = arc[i - 1] + gauss_integrate(speed, u[i - 1], u[i], 10);
  const double total = arc.back();
  if (!(total > 0.0))
    throw GeometryError("arclength_reparametrize: degenerate curve");

  int count = resample_count;
  if (count <= 0)
    count = static_cast<int>(std::clamp<std::size_t>(
        std::max<std::size_t>(200, 4 * n), 8, 20000));
  const double ds = total / (count - 1);

  std::vector<double> s_out(count);
  std::vector<Vec2> p_out(count), t_out(count);
  std::vector<double> k_out(count);
  std::size_t seg = 0;
  for (int j = 0; j < count; ++j) {
    const double target = std::min(total, j * ds);
    while (seg + 2 < n && arc[seg + 1] < target) ++seg;
    // Newton for u with arc(u) = target inside [u[seg], u[seg+1]].
    const double frac = (target - arc[seg]) /
                        std::max(arc[seg + 1] - arc[seg], 1e-300);
    double uj = u[seg] + frac * (u[seg + 1] - u[seg]);
    for (int it = 0; it < 50; ++it) {
      const double f = arc[seg] + gauss_integrate(speed, u[seg], uj, 10) - target;
      const double step = f / std::max(speed(uj), 1e-300);
      uj -= step;
      uj = std::clamp(uj, u.front(), u.back());
      if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(uj))) break;
    }
    const Vec2 d1{X.deriv(uj), Y.deriv(uj)};
    const Vec2 d2{X.deriv2(uj), Y.deriv2(uj)};
    const double sp = d1.norm();
    s_out[j] = j * ds;
    p_out[j] = {X.value(uj), Y.value(uj)};
    t_out[j] = d1 * (1.0 / sp);
    k_out[j] = d1.cross(d2) / (sp * sp * sp);
  }
  return BoundaryCurve(std::move(s_out), std::move(p_out), std::move(t_out),
                       std::move(k_out), side);
}

SigmoidWall::SigmoidWall(double base, double amplitude, double steepness)
    : base_(base), amplitude_(amplitude) {
  if (!(steepness > 0.0))
    throw ParameterError("SigmoidWall: steepness must be positive");
  s0_ = 3.0 / steepness;
}

double SigmoidWall::f(double x) const {
  return base_ + amplitude_ * (smoothstep5((x + s0_) / (2.0 * s0_)) - 1.0);
}

double SigmoidWall::df(double x) const {
  return amplitude_ * smoothstep5_d1((x + s0_) / (2.0 * s0_)) / (2.0 * s0_);
}

double SigmoidWall::d2f(double x) const {
  return amplitude_ * smoothstep5_d2((x + s0_) / (2.0 * s0_)) /
         (4.0 * s0_ * s0_);
}

BumpWall::BumpWall(double base, double amplitude, double s0)
    : base_(base), amplitude_(amplitude), s0_(s0) {
  if (!(s0 > 0.0)) throw ParameterError("BumpWall: extent must be positive");
}

double BumpWall::f(double x) const {
  const double uu = (x + s0_) / (2.0 * s0_);
  const double tent = uu <= 0.5 ? smoothstep5(2.0 * uu)
                                : smoothstep5(2.0 - 2.0 * uu);
  return base_ + amplitude_ * tent;
}

double BumpWall::df(double x) const {
  const double uu = (x + s0_) / (2.0 * s0_);
  const double dtent = uu <= 0.5 ? 2.0 * smoothstep5_d1(2.0 * uu)
                                 : -2.0 * smoothstep5_d1(2.0 - 2.0 * uu);
  return amplitude_ * dtent / (2.0 * s0_);
}

double BumpWall::d2f(double x) const {
  const double uu = (x + s0_) / (2.0 * s0_);
  const double d2tent = uu <= 0.5 ? 4.0 * smoothstep5_d2(2.0 * uu)
                                  : 4.0 * smoothstep5_d2(2.0 - 2.0 * uu);
  return amplitude_ * d2tent / (4.0 * s0_ * s0_);
}

SplineWall::SplineWall(const std::vector<Vec2>& points) {
  if (points.size() < 4)
    throw GeometryError("SplineWall: need at least 4 samples");
  std::vector<double> xs(points.size()), ys(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && !(points[i].x > points[i - 1].x))
      throw GeometryError("SplineWall: x samples must be strictly increasing");
    xs[i] = points[i].x;
    ys[i] = points[i].y;
  }
  spline_ = CubicSpline(xs, ys);
}

double SplineWall::f(double x) const {
  if (x <= spline_.x_min()) return spline_.value(spline_.x_min());
  if (x >= spline_.x_max()) return spline_.value(spline_.x_max());
  return spline_.value(x);
}

double SplineWall::df(double x) const {
  if (x <= spline_.x_min() || x >= spline_.x_max()) return 0.0;
  return spline_.deriv(x);
}

double SplineWall::d2f(double x) const {
  if (x <= spline_.x_min() || x >= spline_.x_max()) return 0.0;
  return spline_.deriv2(x);
}

double SplineWall::x_flat_left() const { return spline_.x_min(); }
double SplineWall::x_flat_right() const { return spline_.x_max(); }

namespace {

double graph_speed(const WallProfile& wall, double x) {
  const double d = wall.df(x);
  return std::sqrt(1.0 + d * d);
}

// Cumulative arc length of a wall graph over [x_lo, x_hi], anchored so that
// s(0) = 0, resampled to a uniform-s BoundaryCurve.
BoundaryCurve build_wall_curve(const WallProfile& wall, double x_lo,
                               double x_hi, WallSide side) {
  const int grid_n = std::max(64, static_cast<int>(std::ceil((x_hi - x_lo) / 0.001)));
  std::vector<double> gx(grid_n + 1), cum(grid_n + 1, 0.0);
  const double hx = (x_hi - x_lo) / grid_n;
  for (int k = 0; k <= grid_n; ++k) gx[k] = x_lo + k * hx;
  auto speed = [&wall](double x) { return graph_speed(wall, x); };
  for (int k = 1; k <= grid_n; ++k)
    cum[k] = cum[k - 1] + gauss_integrate(speed, gx[k - 1], gx[k], 8);

  // Arc length at x = 0 (the anchor).
  const auto it0 = std::upper_bound(gx.begin(), gx.end(), 0.0);
  const int k0 = std::clamp<int>(static_cast<int>(it0 - gx.begin()) - 1, 0, grid_n - 1);
  const double s_at_zero = cum[k0] + gauss_integrate(speed, gx[k0], 0.0, 8);

  const double s_lo = -s_at_zero;
  const double s_hi = cum.back() - s_at_zero;
  const int count = std::max(9, static_cast<int>(std::ceil((s_hi - s_lo) / kCurveSampleSpacing)) + 1);

  std::vector<double> s_out(count), k_out(count);
  std::vector<Vec2> p_out(count), t_out(count);
  int seg = 0;
  for (int j = 0; j < count; ++j) {
    const double s = s_lo + (s_hi - s_lo) * j / (count - 1);
    const double target = s + s_at_zero;
    while (seg + 1 < grid_n && cum[seg + 1] < target) ++seg;
    double x = gx[seg] + (gx[seg + 1] - gx[seg]) *
                             (target - cum[seg]) /
                             std::max(cum[seg + 1] - cum[seg], 1e-300);
    for (int it = 0; it < 50; ++it) {
      const double fval = cum[seg] + gauss_integrate(speed, gx[seg], x, 8) - target;
      const double step = fval / speed(x);
      x -= step;
      if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(x))) break;
    }
    const double d = wall.df(x);
    const double g = std::sqrt(1.0 + d * d);
    s_out[j] = s;
    p_out[j] = {x, wall.f(x)};
    t_out[j] = Vec2{1.0, d} * (1.0 / g);
    k_out[j] = wall.d2f(x) / (g * g * g);
  }
  return BoundaryCurve(std::move(s_out), std::move(p_out), std::move(t_out),
                       std::move(k_out), side);
}

// Length of the normal ray from a wall point to the opposite wall graph.
double normal_clearance(const Vec2& origin, const Vec2& into,
                        const WallProfile& opposite, double reach) {
  auto gap = [&](double u) {
    const Vec2 p = origin + u * into;
    const double side = p.y - opposite.f(p.x);
    return side;
  };
  const double g0 = gap(0.0);
  const double sign = g0 < 0.0 ? 1.0 : -1.0;  // move toward the other wall
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (double u = 0.05; u <= reach; u += 0.05) {
    if (sign * gap(u) >= 0.0) {
      hi = u;
      lo = u - 0.05;
      bracketed = true;
      break;
    }
  }
  if (!bracketed) return reach;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sign * gap(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double StripGeometry::arclength_lower(double x) const {
  auto speed = [this](double u) { return graph_speed(*lower_profile, u); };
  const double sign = x >= 0.0 ? 1.0 : -1.0;
  return sign * adaptive_simpson(speed, std::min(0.0, x), std::max(0.0, x), 1e-12);
}

double StripGeometry::arclength_upper(double x) const {
  auto speed = [this](double u) { return graph_speed(*upper_profile, u); };
  const double sign = x >= 0.0 ? 1.0 : -1.0;
  return sign * adaptive_simpson(speed, std::min(0.0, x), std::max(0.0, x), 1e-12);
}

StripGeometry make_strip_from_profiles(
    std::shared_ptr<const WallProfile> lower,
    std::shared_ptr<const WallProfile> upper) {
  if (!lower || !upper)
    throw ParameterError("make_strip_from_profiles: null wall profile");

  StripGeometry geom;
  geom.lower_profile = lower;
  geom.upper_profile = upper;

  const double x_fl = std::min(lower->x_flat_left(), upper->x_flat_left());
  const double x_fr = std::max(lower->x_flat_right(), upper->x_flat_right());
  geom.s0 = std::max({-x_fl, x_fr, 0.0});

  const double x_lo = x_fl - 1.0;
  const double x_hi = x_fr + 1.0;

  // End-section invariants: right end is the unit strip, left end has
  // constant width c0.
  const double right_probe = x_hi + 0.5;
  const double left_probe = x_lo - 0.5;
  if (std::abs(lower->f(right_probe)) > 1e-9 ||
      std::abs(upper->f(right_probe) - 1.0) > 1e-9)
    throw GeometryError(
        "strip geometry: right end must be the unit strip (walls at 0 and 1)");
  geom.b_left_lower = lower->f(left_probe);
  geom.b_right_lower = 0.0;
  geom.c0 = upper->f(left_probe) - lower->f(left_probe);
  if (!(geom.c0 > 0.0))
    throw GeometryError("strip geometry: left-end width must be positive");

  geom.lower = build_wall_curve(*lower, x_lo, x_hi, WallSide::kLower);
  geom.upper = build_wall_curve(*upper, x_lo, x_hi, WallSide::kUpper);

  // Curvature and slope extrema over the distorted span.
  double kmax = 0.0, d2max = 0.0, slope_max = 0.0;
  const int scan_n = 2000;
  for (int k = 0; k <= scan_n; ++k) {
    const double x = x_lo + (x_hi - x_lo) * k / scan_n;
    for (const WallProfile* w : {lower.get(), upper.get()}) {
      const double d = w->df(x);
      const double g = std::sqrt(1.0 + d * d);
      kmax = std::max(kmax, std::abs(w->d2f(x)) / (g * g * g));
      d2max = std::max(d2max, std::abs(w->d2f(x)));
      if (w == lower.get()) slope_max = std::max(slope_max, std::abs(d));
    }
  }
  geom.kappa_max = kmax;
  geom.d2_max = d2max;
  geom.cos_slope_min = 1.0 / std::sqrt(1.0 + slope_max * slope_max);

  // Interior-sphere radius estimate: min over wall samples of the curvature
  // radius (when bending toward the fluid) and half the normal clearance.
  const double reach = 4.0 * std::max(1.0, geom.c0) + std::abs(geom.b_left_lower) + 2.0;
  double r_min = std::numeric_limits<double>::max();
  for (const BoundaryCurve* curve : {&geom.lower, &geom.upper}) {
    const WallProfile& opposite =
        curve == &geom.lower ? *upper : *lower;
    const std::size_t step = std::max<std::size_t>(
        1, static_cast<std::size_t>(0.01 / curve->sample_spacing()));
    for (std::size_t i = 0; i < curve->sample_count(); i += step) {
      const CurveSample cs = curve->sample(i);
      const double k_into =
          curve->side() == WallSide::kLower ? cs.kappa : -cs.kappa;
      double r = std::numeric_limits<double>::max();
      if (k_into > kFlatKappaTol) r = 1.0 / k_into;
      const double clear =
          normal_clearance(cs.point, -cs.normal, opposite, reach);
      r = std::min(r, 0.5 * clear);
      r_min = std::min(r_min, r);
    }
  }
  if (!(r_min > 0.0))
    throw GeometryError("strip geometry: interior-sphere estimate vanished");
  geom.r_min = r_min;
  geom.delta = 0.45 * r_min;

  // Wall separation must dominate the chart depth.
  double min_width = std::numeric_limits<double>::max();
  for (int k = 0; k <= scan_n; ++k) {
    const double x = x_lo + (x_hi - x_lo) * k / scan_n;
    min_width = std::min(min_width, upper->f(x) - lower->f(x));
  }
  if (!(min_width >= 2.0 * geom.delta))
    throw GeometryError("strip geometry: walls closer than twice the chart depth");

  log_debug("strip geometry: s0=", geom.s0, " c0=", geom.c0, " delta=",
            geom.delta, " r_min=", geom.r_min, " kappa_max=", geom.kappa_max);
  return geom;
}

StripGeometry make_straight_strip() {
  return make_strip_from_profiles(std::make_shared<FlatWall>(0.0),
                                  std::make_shared<FlatWall>(1.0));
}

StripGeometry make_s_bend_strip(double amplitude, double steepness) {
  if (std::abs(amplitude) >= 0.45)
    throw ParameterError("s_bend: |amplitude| must be below 0.45");
  return make_strip_from_profiles(
      std::make_shared<SigmoidWall>(0.0, amplitude, steepness),
      std::make_shared<SigmoidWall>(1.0, amplitude, steepness));
}

StripGeometry make_constriction_strip(double amplitude, double steepness) {
  if (!(steepness > 0.0))
    throw ParameterError("constriction: steepness must be positive");
  if (amplitude < 0.0 || amplitude >= 0.9)
    throw ParameterError("constriction: amplitude must be in [0, 0.9)");
  const double s0 = 3.0 / steepness;
  return make_strip_from_profiles(
      std::make_shared<BumpWall>(0.0, amplitude, s0),
      std::make_shared<FlatWall>(1.0));
}

std::vector<Vec2> read_wall_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("wall sample file: cannot open " + path);
  std::vector<Vec2> points;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double x, y;
    if (!(ls >> x)) continue;  // blank or comment-only line
    if (!(ls >> y))
      throw GeometryError("wall sample file: bad line " + std::to_string(lineno) +
                          " in " + path);
    std::string extra;
    if (ls >> extra)
      throw GeometryError("wall sample file: trailing data on line " +
                          std::to_string(lineno) + " in " + path);
    points.push_back({x, y});
  }
  return points;
}

StripGeometry make_strip_from_samples(const std::vector<Vec2>& lower_points,
                                      const std::vector<Vec2>& upper_points) {
  return make_strip_from_profiles(std::make_shared<SplineWall>(lower_points),
                                  std::make_shared<SplineWall>(upper_points));
}

CurvilinearChart::CurvilinearChart(const BoundaryCurve& curve, double delta)
    : curve_(&curve), delta_(delta) {
  if (curve.empty()) throw ParameterError("CurvilinearChart: empty curve");
  if (!(delta > 0.0)) throw ParameterError("CurvilinearChart: delta must be positive");
}

Vec2 CurvilinearChart::forward(double s, double t) const {
  if (t < 0.0 || t >= delta_)
    throw ChartDomainError("chart_forward: depth outside [0, delta)");
  return curve_->point(s) - t * curve_->outward_normal(s);
}

double CurvilinearChart::jacobian_det(double s, double t) const {
  if (t < 0.0 || t >= delta_)
    throw ChartDomainError("jacobian_det: depth outside [0, delta)");
  return 1.0 - t * curve_->kappa_into(s);
}

CurvilinearChart::ChartCoords CurvilinearChart::inverse(const Vec2& x) const {
  double s = curve_->nearest_sample_s(x);
  bool converged = false;
  for (int it = 0; it < 80; ++it) {
    const Vec2 b = curve_->point(s);
    const Vec2 tau = curve_->tangent(s);
    const Vec2 r = x - b;
    const double g = r.dot(tau);
    const double gp = -1.0 + curve_->kappa(s) * r.dot(tau.rot90());
    if (std::abs(gp) < 1e-14)
      throw NumericsError("chart_inverse: projection iteration degenerate");
    const double step = g / gp;
    s -= step;
    if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(s))) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericsError("chart_inverse: projection iteration stalled");
  const Vec2 b = curve_->point(s);
  const double t = (x - b).dot(curve_->into_domain(s));
  if (t < -1e-9)
    throw ChartDomainError("chart_inverse: point on the wrong side of the wall");
  const double t_clamped = std::max(t, 0.0);
  if (t_clamped >= delta_)
    throw ChartDomainError("chart_inverse: point outside the chart collar");
  return {s, t_clamped};
}

namespace {

double chart_partial(const std::function<double(double, double)>& analytic,
                     const std::function<double(double, double)>& f,
                     bool wrt_s, double s, double t) {
  if (analytic) return analytic(s, t);
  if (!f) throw ParameterError("curvilinear operator: missing field component");
  const double h = 1e-6 * std::max(1.0, std::abs(wrt_s ? s : t));
  if (wrt_s) return (f(s + h, t) - f(s - h, t)) / (2.0 * h);
  if (t - h >= 0.0) return (f(s, t + h) - f(s, t - h)) / (2.0 * h);
  // One-sided second-order difference at the wall.
  return (-3.0 * f(s, t) + 4.0 * f(s, t + h) - f(s, t + 2.0 * h)) / (2.0 * h);
}

}  // namespace

double curvilinear_div(const CurvilinearChart& chart, const ChartField& w,
                       double s, double t) {
  const double kappa = chart.curve().kappa_into(s);
  const double gamma = 1.0 / (1.0 - t * kappa);
  const double dws_ds = chart_partial(w.dws_ds, w.ws, true, s, t);
  const double dwt_dt = chart_partial(w.dwt_dt, w.wt, false, s, t);
  const double wt = w.wt ? w.wt(s, t) : 0.0;
  return gamma * dws_ds + dwt_dt - gamma * kappa * wt;
}

double curvilinear_curl(const CurvilinearChart& chart, const ChartField& w,
                        double s, double t) {
  const double kappa = chart.curve().kappa_into(s);
  const double gamma = 1.0 / (1.0 - t * kappa);
  const double dws_dt = chart_partial(w.dws_dt, w.ws, false, s, t);
  const double dwt_ds = chart_partial(w.dwt_ds, w.wt, true, s, t);
  const double ws = w.ws ? w.ws(s, t) : 0.0;
  return dws_dt - gamma * dwt_ds - gamma * kappa * ws;
}

}  // namespace leray
