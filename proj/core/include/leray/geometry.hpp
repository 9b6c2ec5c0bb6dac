#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "leray/numeric.hpp"

namespace leray {

// Which side of a wall curve the fluid occupies.  For kLower the fluid is
// above the curve and the outward normal points down; for kUpper the fluid
// is below and the outward normal points up.
enum class WallSide { kLower, kUpper };

struct CurveSample {
  double s = 0.0;   // arc length
  Vec2 point;
  Vec2 tangent;     // unit, left-to-right parametrization
  Vec2 normal;      // unit outward
  double kappa = 0.0;
};

// A smooth wall curve parametrized by arc length.  Samples are stored at
// uniform arc-length spacing; evaluation between samples uses not-a-knot
// cubic splines of position, tangent, and curvature.  Outside the sampled
// range the curve continues as the straight line matching the end sample.
//
// Curvature convention: kappa is the curvature of the left-to-right unit
// parametrization, d(tangent)/ds = kappa * rot90(tangent).  For a lower wall
// kappa > 0 bends toward the fluid; for an upper wall kappa < 0 does.
class BoundaryCurve {
 public:
  BoundaryCurve() = default;

  // Samples must be uniformly spaced in s (tolerance 1e-9); tangents unit
  // within 1e-12.  Outward normals are derived from the side.
  BoundaryCurve(std::vector<double> s, std::vector<Vec2> points,
                std::vector<Vec2> tangents, std::vector<double> kappas,
                WallSide side);

  Vec2 point(double s) const;
  Vec2 tangent(double s) const;
  Vec2 outward_normal(double s) const;
  Vec2 into_domain(double s) const { return -outward_normal(s); }
  double kappa(double s) const;
  // Curvature with the sign flipped so that positive means bending toward
  // the fluid, regardless of side.
  double kappa_into(double s) const {
    return side_ == WallSide::kLower ? kappa(s) : -kappa(s);
  }

  double s_min() const { return s_.front(); }
  double s_max() const { return s_.back(); }
  double sample_spacing() const { return ds_; }
  std::size_t sample_count() const { return s_.size(); }
  CurveSample sample(std::size_t i) const;
  WallSide side() const { return side_; }

  // The wall is exactly straight for s <= s_flat_left and s >= s_flat_right.
  double s_flat_left() const { return s_flat_left_; }
  double s_flat_right() const { return s_flat_right_; }

  // Arc-length parameter of the sample nearest to x (coarse search used to
  // seed chart inversion).
  double nearest_sample_s(const Vec2& x) const;

  bool empty() const { return s_.empty(); }

 private:
  std::vector<double> s_;
  std::vector<Vec2> points_;
  std::vector<Vec2> tangents_;
  std::vector<double> kappas_;
  WallSide side_ = WallSide::kLower;
  double ds_ = 0.0;
  double s_flat_left_ = 0.0;
  double s_flat_right_ = 0.0;
  CubicSpline px_, py_, tx_, ty_, ck_;
};

// Fit a unit-speed BoundaryCurve through ordered sample points (>= 4,
// injective).  Chord-length cubic splines are reparametrized to uniform arc
// length by quadrature and Newton inversion; curvature is computed from the
// spline derivatives.  resample_count = 0 picks a resolution automatically.
BoundaryCurve arclength_reparametrize(const std::vector<Vec2>& points,
                                      WallSide side = WallSide::kLower,
                                      int resample_count = 0);

// Analytic wall graph x2 = f(x1), exactly flat outside [x_flat_left(),
// x_flat_right()].
class WallProfile {
 public:
  virtual ~WallProfile() = default;
  virtual double f(double x) const = 0;
  virtual double df(double x) const = 0;
  virtual double d2f(double x) const = 0;
  virtual double x_flat_left() const = 0;
  virtual double x_flat_right() const = 0;
};

// Constant-height wall.
class FlatWall : public WallProfile {
 public:
  explicit FlatWall(double level) : level_(level) {}
  double f(double) const override { return level_; }
  double df(double) const override { return 0.0; }
  double d2f(double) const override { return 0.0; }
  double x_flat_left() const override { return 0.0; }
  double x_flat_right() const override { return 0.0; }

 private:
  double level_;
};

// Sigmoid offset wall: base + amplitude * (s5((x+s0)/(2 s0)) - 1), a
// tanh-like ramp that is exactly flat outside [-s0, s0] (s0 = 3/steepness).
// Height base - amplitude far left, base far right.
class SigmoidWall : public WallProfile {
 public:
  SigmoidWall(double base, double amplitude, double steepness);
  double f(double x) const override;
  double df(double x) const override;
  double d2f(double x) const override;
  double x_flat_left() const override { return -s0_; }
  double x_flat_right() const override { return s0_; }
  double s0() const { return s0_; }

 private:
  double base_, amplitude_, s0_;
};

// Smooth bump wall: base + amplitude * tent(x), where tent is a C^2
// smoothstep ramp up on [-s0, 0] and down on [0, s0].
class BumpWall : public WallProfile {
 public:
  BumpWall(double base, double amplitude, double s0);
  double f(double x) const override;
  double df(double x) const override;
  double d2f(double x) const override;
  double x_flat_left() const override { return -s0_; }
  double x_flat_right() const override { return s0_; }

 private:
  double base_, amplitude_, s0_;
};

// Spline-backed wall from "x y" samples (user geometry files).
class SplineWall : public WallProfile {
 public:
  // Points must have strictly increasing x.  The wall is flattened outside
  // the first/last sample.
  explicit SplineWall(const std::vector<Vec2>& points);
  double f(double x) const override;
  double df(double x) const override;
  double d2f(double x) const override;
  double x_flat_left() const override;
  double x_flat_right() const override;

 private:
  CubicSpline spline_;
};

// A distorted strip: two wall graphs, flat outside a compact region, with
// right-end cross-section (0,1) and left-end width c0.
struct StripGeometry {
  BoundaryCurve lower;
  BoundaryCurve upper;
  std::shared_ptr<const WallProfile> lower_profile;
  std::shared_ptr<const WallProfile> upper_profile;
  double c0 = 1.0;            // left-end width
  double s0 = 0.0;            // half-extent of the distorted region in x1
  double delta = 0.0;         // certified chart depth
  double r_min = 0.0;         // interior-sphere radius estimate
  double b_left_lower = 0.0;  // lower wall height on the left flat tail
  double b_right_lower = 0.0; // lower wall height on the right flat tail (0)
  double kappa_max = 0.0;     // max |kappa| over both walls
  double d2_max = 0.0;        // max |f''| over both wall graphs
  double cos_slope_min = 1.0; // 1/sqrt(1 + max slope^2) over the lower wall

  double f_low(double x) const { return lower_profile->f(x); }
  double f_up(double x) const { return upper_profile->f(x); }
  double width(double x) const { return f_up(x) - f_low(x); }
  // Arc length along a wall graph from x1 = 0 to x (negative left of 0).
  double arclength_lower(double x) const;
  double arclength_upper(double x) const;
};

// Built-in families.  All have c0 = 1.
StripGeometry make_straight_strip();
StripGeometry make_s_bend_strip(double amplitude, double steepness);
StripGeometry make_constriction_strip(double amplitude, double steepness);

// Generic assembler used by the families and by user geometries: samples the
// graphs at uniform arc length, validates flat tails and end widths, and
// computes the interior-sphere estimate and chart depth delta = 0.45 r_min.
StripGeometry make_strip_from_profiles(
    std::shared_ptr<const WallProfile> lower,
    std::shared_ptr<const WallProfile> upper);

// Wall sample file: one "x y" pair per line, '#' comments, blank lines ok.
std::vector<Vec2> read_wall_samples(const std::string& path);
StripGeometry make_strip_from_samples(const std::vector<Vec2>& lower_points,
                                      const std::vector<Vec2>& upper_points);

// Boundary-fitted tubular chart F(s,t) = b(s) - t n(s) over a wall curve
// (n outward, so the offset moves into the fluid).
class CurvilinearChart {
 public:
  CurvilinearChart(const BoundaryCurve& curve, double delta);

  struct ChartCoords {
    double s = 0.0;
    double t = 0.0;
  };

  Vec2 forward(double s, double t) const;
  ChartCoords inverse(const Vec2& x) const;
  double jacobian_det(double s, double t) const;

  double delta() const { return delta_; }
  const BoundaryCurve& curve() const { return *curve_; }

 private:
  const BoundaryCurve* curve_;
  double delta_;
};

// A field given in chart components w = w_s e_s + w_t e_t.  Partial
// derivatives may be supplied analytically; absent ones are centered
// finite differences of the component functions.
struct ChartField {
  std::function<double(double, double)> ws;
  std::function<double(double, double)> wt;
  std::function<double(double, double)> dws_ds;
  std::function<double(double, double)> dws_dt;
  std::function<double(double, double)> dwt_ds;
  std::function<double(double, double)> dwt_dt;
};

// div w = gamma d_s w_s + d_t w_t - gamma kappa w_t, with
// gamma = 1/(1 - t kappa) and kappa the into-domain wall curvature at s.
double curvilinear_div(const CurvilinearChart& chart, const ChartField& w,
                       double s, double t);
// curl w = d_t w_s - gamma d_s w_t - gamma kappa w_s (the d_2 w_1 - d_1 w_2
// convention; on a lower-wall chart this matches the Cartesian value).
double curvilinear_curl(const CurvilinearChart& chart, const ChartField& w,
                        double s, double t);

}  // namespace leray
