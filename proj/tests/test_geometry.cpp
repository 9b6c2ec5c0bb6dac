#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "leray/errors.hpp"
#include "leray/geometry.hpp"
#include "leray/mesh.hpp"

using namespace leray;

namespace {

// Independent graph-curvature oracle kappa = f''/(1+f'^2)^{3/2} for a wall
// parametrized left to right.
double graph_kappa(double d1, double d2) {
  const double g = std::sqrt(1.0 + d1 * d1);
  return d2 / (g * g * g);
}

std::vector<Vec2> circle_arc_points(double radius, double theta0,
                                    double theta1, int n, Vec2 center) {
  std::vector<Vec2> pts;
  for (int i = 0; i <= n; ++i) {
    const double th = theta0 + (theta1 - theta0) * i / n;
    pts.push_back(center + radius * Vec2{std::cos(th), std::sin(th)});
  }
  return pts;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("arclength_reparametrize: straight segment is flat with unit tangent") {
  std::vector<Vec2> pts;
  for (int i = 0; i <= 10; ++i) pts.push_back({0.5 * i, 0.0});
  BoundaryCurve curve = arclength_reparametrize(pts);
  CHECK(curve.s_max() - curve.s_min() == doctest::Approx(5.0).epsilon(1e-10));
  for (std::size_t i = 0; i < curve.sample_count(); i += 7) {
    CurveSample cs = curve.sample(i);
    CHECK(std::abs(cs.kappa) < 1e-10);
    CHECK(cs.tangent.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(cs.tangent.y) < 1e-12);
  }
}

TEST_CASE("arclength_reparametrize: circle arc recovers 1/R") {
  const double radius = 2.0;
  const auto pts = circle_arc_points(radius, 0.2, 0.2 + M_PI / 2, 2000,
                                     {0.4, -0.3});
  BoundaryCurve curve = arclength_reparametrize(pts);
  const double arc_oracle = radius * M_PI / 2;  // analytic arc length
  CHECK(curve.s_max() - curve.s_min() ==
        doctest::Approx(arc_oracle).epsilon(1e-7));
  // Skip a short margin at each end where the fit's end conditions dominate.
  const std::size_t margin = curve.sample_count() / 50;
  for (std::size_t i = margin; i + margin < curve.sample_count(); i += 11) {
    CurveSample cs = curve.sample(i);
    // CCW parametrization of a circle has curvature +1/R.
    CHECK(cs.kappa == doctest::Approx(1.0 / radius).epsilon(1e-6));
    CHECK(std::abs(cs.tangent.norm() - 1.0) < 1e-8);
    CHECK((cs.point - Vec2{0.4, -0.3}).norm() ==
          doctest::Approx(radius).epsilon(1e-7));
  }
}

TEST_CASE("arclength_reparametrize: tanh wall matches the symbolic curvature") {
  // Oracle: for x2 = tanh(x1), f' = sech^2 = 1 - tanh^2, f'' = -2 tanh sech^2.
  auto f = [](double x) { return std::tanh(x); };
  auto fp = [](double x) {
    const double t = std::tanh(x);
    return 1.0 - t * t;
  };
  auto fpp = [](double x) {
    const double t = std::tanh(x);
    return -2.0 * t * (1.0 - t * t);
  };

  std::vector<Vec2> pts;
  const double x_lo = -3.0, x_hi = 3.0;
  const int n = 4800;
  for (int i = 0; i <= n; ++i) {
    const double x = x_lo + (x_hi - x_lo) * i / n;
    pts.push_back({x, f(x)});
  }
  BoundaryCurve curve = arclength_reparametrize(pts);

  for (double x_probe : {0.0, 0.7, -1.1}) {
    // Arc length from the first point to x_probe, computed independently.
    const double s_oracle = adaptive_simpson(
        [&](double x) { return std::hypot(1.0, fp(x)); }, x_lo, x_probe, 1e-12);
    const double kappa_oracle = graph_kappa(fp(x_probe), fpp(x_probe));
    CHECK(curve.kappa(curve.s_min() + s_oracle) ==
          doctest::Approx(kappa_oracle).epsilon(1e-6));
    if (x_probe == 0.0) CHECK(std::abs(kappa_oracle) < 1e-15);
  }
}

TEST_CASE("arclength_reparametrize rejects bad input") {
  CHECK_THROWS_AS(arclength_reparametrize({{0, 0}, {1, 0}, {2, 0}}),
                  GeometryError);
  CHECK_THROWS_AS(
      arclength_reparametrize({{0, 0}, {1, 0}, {1, 0}, {2, 0}, {3, 0}}),
      GeometryError);
  // Self-intersecting bowtie.
  std::vector<Vec2> bowtie = {{0, 0},     {1, 0},    {1, 1},
                              {0.5, 1},   {0.5, -1}, {-0.2, -1},
                              {-0.2, 0.5}};
  CHECK_THROWS_AS(arclength_reparametrize(bowtie), GeometryError);
}

TEST_CASE("sampled curves satisfy the type invariants") {
  const auto pts = circle_arc_points(1.0, -0.4, 1.9, 400, {0, 0});
  BoundaryCurve curve = arclength_reparametrize(pts, WallSide::kUpper);
  const double ds = curve.sample_spacing();
  for (std::size_t i = 0; i < curve.sample_count(); ++i) {
    CurveSample cs = curve.sample(i);
    CHECK(std::abs(cs.tangent.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(cs.normal.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(cs.tangent.dot(cs.normal)) <= 1e-12);
    if (i > 0) CHECK(std::abs(cs.s - curve.sample(i - 1).s - ds) <= 1e-9);
  }
  // Unit speed of the fitted parametrization (finite differences).
  for (double s : {0.3, 0.9, 1.7}) {
    const double h = 1e-5;
    const double speed = (curve.point(s + h) - curve.point(s - h)).norm() / (2 * h);
    CHECK(speed == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("family walls differentiate consistently") {
  SigmoidWall sig(0.0, 0.06, 2.0);
  BumpWall bump(0.0, 0.3, 1.5);
  const double h = 1e-5;
  for (const WallProfile* w :
       std::initializer_list<const WallProfile*>{&sig, &bump}) {
    // Probe away from x = 0 and x = +-s0, where the third derivative of the
    // C^2 bump profile jumps and central differences lose an order.
    for (double x : {-1.3, -0.4, 0.21, 0.6, 1.2}) {
      const double fd1 = (w->f(x + h) - w->f(x - h)) / (2 * h);
      const double fd2 = (w->df(x + h) - w->df(x - h)) / (2 * h);
      CHECK(std::abs(fd1 - w->df(x)) < 1e-8);
      CHECK(std::abs(fd2 - w->d2f(x)) < 1e-7);
    }
    // Exactly flat beyond the declared transition.
    CHECK(w->df(w->x_flat_right() + 0.01) == 0.0);
    CHECK(w->df(w->x_flat_left() - 0.01) == 0.0);
  }
  CHECK(sig.f(-10.0) == doctest::Approx(-0.06).epsilon(1e-14));
  CHECK(sig.f(10.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(bump.f(0.0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(bump.f(5.0) == 0.0);
}

TEST_CASE("straight strip geometry") {
  StripGeometry g = make_straight_strip();
  CHECK(g.s0 == 0.0);
  CHECK(g.c0 == doctest::Approx(1.0).epsilon(1e-12));
  // Interior sphere radius is half the width; delta = 0.45 * 0.5.
  CHECK(g.r_min == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(g.delta == doctest::Approx(0.225).epsilon(1e-9));
  CHECK(g.kappa_max == 0.0);
  for (double s : {-0.7, 0.0, 0.9}) {
    CHECK(std::abs(g.lower.kappa(s)) < 1e-14);
    Vec2 p = g.lower.point(s);
    CHECK(p.x == doctest::Approx(s).epsilon(1e-12));
    CHECK(std::abs(p.y) < 1e-12);
    // Lower-wall outward normal points out of the fluid (downward).
    CHECK(g.lower.outward_normal(s).y == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(g.upper.outward_normal(s).y == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("s-bend strip geometry: compact distortion and flat tails") {
  StripGeometry g = make_s_bend_strip(0.06, 2.0);
  CHECK(g.s0 == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(g.c0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.b_left_lower == doctest::Approx(-0.06).epsilon(1e-12));
  CHECK(g.delta > 0.2);
  CHECK(g.delta < 0.25);

  // kappa vanishes outside the distorted span [-s0, s0] on both walls.
  for (const BoundaryCurve* c : {&g.lower, &g.upper}) {
    const double s_in = g.arclength_lower(g.s0);
    for (std::size_t i = 0; i < c->sample_count(); ++i) {
      CurveSample cs = c->sample(i);
      if (cs.s < -s_in - 0.05 || cs.s > s_in + 0.05)
        CHECK(std::abs(cs.kappa) < 1e-10);
    }
    CHECK(c->s_flat_left() >= -s_in - 0.05);
    CHECK(c->s_flat_right() <= s_in + 0.05);
  }

  // Wall curve matches the analytic graph.
  for (double x : {-2.0, -0.8, 0.3, 1.1, 2.5}) {
    const double s = g.arclength_lower(x);
    Vec2 p = g.lower.point(s);
    CHECK(p.x == doctest::Approx(x).epsilon(1e-8));
    CHECK(p.y == doctest::Approx(g.f_low(x)).epsilon(1e-8));
    const double kappa_oracle =
        graph_kappa(g.lower_profile->df(x), g.lower_profile->d2f(x));
    CHECK(g.lower.kappa(s) == doctest::Approx(kappa_oracle).epsilon(1e-8));
  }
}

TEST_CASE("sample-file strips go through the same validation") {
  // Lower wall: gentle bump described by samples; upper wall: flat at 1.
  std::vector<Vec2> lower_pts, upper_pts;
  BumpWall bump(0.0, 0.1, 1.0);
  for (int i = 0; i <= 400; ++i) {
    const double x = -2.0 + 4.0 * i / 400;
    lower_pts.push_back({x, bump.f(x)});
    upper_pts.push_back({x, 1.0});
  }
  StripGeometry g = make_strip_from_samples(lower_pts, upper_pts);
  CHECK(g.c0 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.f_low(0.0) == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(g.delta > 0.15);

  // A strip whose right end is not the unit section is rejected.
  std::vector<Vec2> bad_upper = upper_pts;
  for (auto& p : bad_upper) p.y = 1.2;
  CHECK_THROWS_AS(make_strip_from_samples(lower_pts, bad_upper),
                  GeometryError);
}

TEST_CASE("chart on the flat strip is the identity offset") {
  StripGeometry g = make_straight_strip();
  CurvilinearChart chart(g.lower, g.delta);
  Vec2 p = chart.forward(2.0, 0.1);
  CHECK(p.x == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(0.1).epsilon(1e-12));
  auto coords = chart.inverse({3.0, 0.05});
  CHECK(coords.s == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(coords.t == doctest::Approx(0.05).epsilon(1e-10));
  CHECK(chart.jacobian_det(1.0, 0.2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(chart.forward(0.0, g.delta), ChartDomainError);
  CHECK_THROWS_AS(chart.inverse({0.0, 0.5}), ChartDomainError);
}

TEST_CASE("chart on a circular arc matches the concentric oracle") {
  const double radius = 2.0;
  const Vec2 center{0.4, -0.3};
  const auto pts = circle_arc_points(radius, 0.1, 0.1 + 2.0, 800, center);
  // kLower: fluid on the left of travel, which for a CCW arc is the inside.
  BoundaryCurve curve = arclength_reparametrize(pts, WallSide::kLower);
  CurvilinearChart chart(curve, radius / 2.0);
  const double t = radius / 8.0;
  for (double s : {0.5, 1.5, 2.5}) {
    Vec2 p = chart.forward(s, t);
    CHECK((p - center).norm() == doctest::Approx(radius - t).epsilon(1e-7));
    // det JF = 1 - t/R for a wall bending toward the fluid.
    CHECK(chart.jacobian_det(s, t) ==
          doctest::Approx(1.0 - t / radius).epsilon(1e-6));
  }
}

TEST_CASE("chart round-trip on the s-bend collar") {
  StripGeometry g = make_s_bend_strip(0.06, 2.0);
  CurvilinearChart chart(g.lower, g.delta);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> us(-2.5, 2.5);
  std::uniform_real_distribution<double> ut(0.0, 0.999 * g.delta);
  double max_err = 0.0, max_s_err = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double s = us(rng);
    const double t = ut(rng);
    const Vec2 x = chart.forward(s, t);
    const auto back = chart.inverse(x);
    max_err = std::max(max_err, (chart.forward(back.s, back.t) - x).norm());
    max_s_err = std::max(max_s_err, std::abs(back.s - s));
  }
  CHECK(max_err <= 1e-9);
  CHECK(max_s_err <= 1e-8);
}

TEST_CASE("chart depth is a distance: brute-force projection oracle") {
  StripGeometry g = make_s_bend_strip(0.06, 2.0);
  CurvilinearChart chart(g.lower, g.delta);
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> ux(-2.2, 2.2);
  std::uniform_real_distribution<double> ut(0.01, 0.9 * g.delta);
  for (int k = 0; k < 50; ++k) {
    const double x1 = ux(rng);
    const Vec2 x{x1, g.f_low(x1) + ut(rng)};
    const auto coords = chart.inverse(x);
    // Brute force distance over a dense wall sampling, then a fine local
    // rescan around the coarse minimizer.
    double best = 1e300, best_xs = 0.0;
    for (int i = 0; i <= 40000; ++i) {
      const double xs = -4.0 + 8.0 * i / 40000;
      const double d = (x - Vec2{xs, g.f_low(xs)}).norm();
      if (d < best) {
        best = d;
        best_xs = xs;
      }
    }
    const double span = 8.0 / 40000;
    for (int i = 0; i <= 800; ++i) {
      const double xs = best_xs - span + 2.0 * span * i / 800;
      best = std::min(best, (x - Vec2{xs, g.f_low(xs)}).norm());
    }
    CHECK(coords.t == doctest::Approx(best).epsilon(1e-7));
  }
}

TEST_CASE("jacobian determinant stays above 1/2 on the collar grid") {
  StripGeometry g = make_s_bend_strip(0.06, 2.0);
  CurvilinearChart chart(g.lower, g.delta);
  double det_min = 1e300;
  for (int i = 0; i <= 200; ++i) {
    const double s = -3.0 + 6.0 * i / 200;
    for (int j = 0; j < 50; ++j) {
      const double t = g.delta * j / 50;
      det_min = std::min(det_min, chart.jacobian_det(s, t));
    }
  }
  CHECK(det_min > 0.5);
}

TEST_CASE("curvilinear div/curl: trivial flat-wall fields") {
  StripGeometry g = make_straight_strip();
  CurvilinearChart chart(g.lower, g.delta);
  ChartField w;
  w.ws = [](double, double) { return 0.0; };
  w.wt = [](double, double) { return 0.7; };
  CHECK(std::abs(curvilinear_div(chart, w, 0.5, 0.1)) < 1e-10);
  CHECK(std::abs(curvilinear_curl(chart, w, 0.5, 0.1)) < 1e-10);
}

namespace {

// Exact-frame circle curve: analytic samples, no fitting error.
BoundaryCurve exact_circle_curve(double radius, const Vec2& center,
                                 double theta0, double arc, int n) {
  std::vector<double> s(n + 1);
  std::vector<Vec2> p(n + 1), t(n + 1);
  std::vector<double> k(n + 1, 1.0 / radius);
  for (int i = 0; i <= n; ++i) {
    s[i] = arc * i / n;
    const double th = theta0 + s[i] / radius;
    p[i] = center + radius * Vec2{std::cos(th), std::sin(th)};
    t[i] = {-std::sin(th), std::cos(th)};
  }
  return BoundaryCurve(std::move(s), std::move(p), std::move(t), std::move(k),
                       WallSide::kLower);
}

// Shared driver: compare curvilinear div/curl of random cubic fields with
// the Cartesian chain-rule oracle at random collar points.
void check_chain_rule(const CurvilinearChart& chart, double s_lo, double s_hi,
                      int fields, double tol, unsigned seed) {
  const BoundaryCurve& curve = chart.curve();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uc(-1.0, 1.0);
  std::uniform_real_distribution<double> us(s_lo, s_hi);
  std::uniform_real_distribution<double> ut(0.01, 0.95 * chart.delta());

  for (int field = 0; field < fields; ++field) {
    // Random bivariate cubic components with analytic derivatives.
    double a[2][10];
    for (auto& row : a)
      for (double& coef : row) coef = uc(rng);
    auto poly = [&](int c, double x, double y) {
      return a[c][0] + a[c][1] * x + a[c][2] * y + a[c][3] * x * x +
             a[c][4] * x * y + a[c][5] * y * y + a[c][6] * x * x * x +
             a[c][7] * x * x * y + a[c][8] * x * y * y + a[c][9] * y * y * y;
    };
    auto poly_dx = [&](int c, double x, double y) {
      return a[c][1] + 2 * a[c][3] * x + a[c][4] * y + 3 * a[c][6] * x * x +
             2 * a[c][7] * x * y + a[c][8] * y * y;
    };
    auto poly_dy = [&](int c, double x, double y) {
      return a[c][2] + a[c][4] * x + 2 * a[c][5] * y + a[c][7] * x * x +
             2 * a[c][8] * x * y + 3 * a[c][9] * y * y;
    };

    ChartField w;
    w.ws = [&](double s, double t) {
      const Vec2 p = chart.forward(s, t);
      const Vec2 es = curve.tangent(s);
      return poly(0, p.x, p.y) * es.x + poly(1, p.x, p.y) * es.y;
    };
    w.wt = [&](double s, double t) {
      const Vec2 p = chart.forward(s, t);
      const Vec2 et = curve.into_domain(s);
      return poly(0, p.x, p.y) * et.x + poly(1, p.x, p.y) * et.y;
    };

    const double s = us(rng);
    const double t = ut(rng);
    const Vec2 p = chart.forward(s, t);
    const double div_oracle = poly_dx(0, p.x, p.y) + poly_dy(1, p.x, p.y);
    // Curl in the d2 w1 - d1 w2 convention used by the vorticity relation.
    const double curl_oracle = poly_dy(0, p.x, p.y) - poly_dx(1, p.x, p.y);
    CHECK(std::abs(curvilinear_div(chart, w, s, t) - div_oracle) <= tol);
    CHECK(std::abs(curvilinear_curl(chart, w, s, t) - curl_oracle) <= tol);
  }
}

}  // namespace

TEST_CASE("curvilinear div/curl match the Cartesian chain-rule oracle") {
  // Exact analytic frames: agreement to 1e-8.
  BoundaryCurve circle = exact_circle_curve(2.0, {0.3, -0.2}, 0.15, 4.0, 2000);
  CurvilinearChart circle_chart(circle, 2.0 / 3.0);
  check_chain_rule(circle_chart, 0.3, 3.7, 20, 1e-8, 424242);

  StripGeometry g = make_s_bend_strip(0.06, 2.0);
  CurvilinearChart bend_chart(g.lower, g.delta);
  check_chain_rule(bend_chart, -2.0, 2.0, 20, 1e-8, 31337);

  // A curve fitted from raw points carries its own 1e-6 curvature
  // contract; the operators agree at that level.
  const auto pts = circle_arc_points(2.0, 0.1, 2.4, 900, {0.0, 0.0});
  BoundaryCurve fitted = arclength_reparametrize(pts, WallSide::kLower);
  CurvilinearChart fitted_chart(fitted, 2.0 / 3.0);
  check_chain_rule(fitted_chart, 0.5, 3.0, 20, 2e-6, 5150);
}

TEST_CASE("fields of t alone along e_s are exactly divergence-free") {
  StripGeometry g = make_s_bend_strip(0.06, 2.0);
  CurvilinearChart chart(g.lower, g.delta);
  ChartField w;
  w.ws = [](double, double t) { return std::sin(3.0 * t) + t * t; };
  w.wt = [](double, double) { return 0.0; };
  w.dws_ds = [](double, double) { return 0.0; };
  w.dwt_dt = [](double, double) { return 0.0; };
  for (double s : {-1.0, 0.2, 1.4}) {
    for (double t : {0.02, 0.1, 0.2}) {
      CHECK(curvilinear_div(chart, w, s, t) == 0.0);
    }
  }
}

TEST_CASE("straight mesh has the documented structured size") {
  auto g = std::make_shared<StripGeometry>(make_straight_strip());
  Mesh mesh = build_mesh(g, 4.0, 0.25);
  CHECK(mesh.triangle_count() == 256);  // 2 * (8/0.25) * (1/0.25)
  for (std::size_t k = 0; k < mesh.triangle_count(); ++k)
    CHECK(mesh.triangle_area(k) > 0.0);
  // Total area equals the strip area.
  double area = 0.0;
  for (std::size_t k = 0; k < mesh.triangle_count(); ++k)
    area += mesh.triangle_area(k);
  CHECK(area == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("boundary chains: one chain per wall, one per end, closed loop") {
  auto g = std::make_shared<StripGeometry>(make_s_bend_strip(0.06, 2.0));
  Mesh mesh = build_mesh(g, 4.0, 0.2);
  std::map<BoundaryTag, int> edge_count;
  std::map<int, int> degree;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    edge_count[e.tag]++;
    degree[e.a]++;
    degree[e.b]++;
  }
  CHECK(edge_count[BoundaryTag::kWallLower] == mesh.nx);
  CHECK(edge_count[BoundaryTag::kWallUpper] == mesh.nx);
  CHECK(edge_count[BoundaryTag::kEndLeft] == mesh.ny);
  CHECK(edge_count[BoundaryTag::kEndRight] == mesh.ny);
  for (const auto& [vertex, deg] : degree) CHECK(deg == 2);
}

TEST_CASE("halving h doubles boundary chain vertex counts within two") {
  auto g = std::make_shared<StripGeometry>(make_straight_strip());
  Mesh coarse = build_mesh(g, 4.0, 0.25);
  Mesh fine = build_mesh(g, 4.0, 0.125);
  // Wall chains have nx+1 vertices.
  CHECK(std::abs((fine.nx + 1) - 2 * (coarse.nx + 1)) <= 2);
  CHECK(std::abs((fine.ny + 1) - 2 * (coarse.ny + 1)) <= 2);
}

TEST_CASE("wall vertices sit on the analytic wall; chords resolve it") {
  auto g = std::make_shared<StripGeometry>(make_s_bend_strip(0.06, 2.0));
  const double h = 0.2;
  Mesh mesh = build_mesh(g, 4.0, h);
  double worst_vertex = 0.0, worst_chord = 0.0;
  for (const BoundaryEdge& e : mesh.boundary_edges) {
    if (e.tag != BoundaryTag::kWallLower && e.tag != BoundaryTag::kWallUpper)
      continue;
    const WallProfile& wall = e.tag == BoundaryTag::kWallLower
                                  ? *g->lower_profile
                                  : *g->upper_profile;
    const Vec2 a = mesh.vertices[e.a];
    const Vec2 b = mesh.vertices[e.b];
    worst_vertex = std::max(worst_vertex, std::abs(wall.f(a.x) - a.y));
    const Vec2 mid = 0.5 * (a + b);
    worst_chord = std::max(worst_chord, std::abs(wall.f(mid.x) - mid.y));
  }
  CHECK(worst_vertex <= 1e-10 * h);
  CHECK(worst_chord <= 1e-3 * h);
}

TEST_CASE("mesh preconditions are enforced") {
  auto g = std::make_shared<StripGeometry>(make_s_bend_strip(0.06, 2.0));
  CHECK_THROWS_AS(build_mesh(g, 2.4, 0.2), ParameterError);  // zeta <= s0+1
  CHECK_THROWS_AS(build_mesh(g, 4.0, 0.3), ParameterError);  // h too large
  CHECK_THROWS_AS(build_mesh(nullptr, 4.0, 0.2), ParameterError);
}

TEST_CASE("constriction mesh is mirror symmetric") {
  auto g = std::make_shared<StripGeometry>(make_constriction_strip(0.3, 2.0));
  Mesh mesh = build_mesh(g, 4.0, 0.2);
  // Vertex mirror: (i,j) <-> (nx-i,j) with x negated, y preserved.
  for (int i = 0; i <= mesh.nx; ++i) {
    for (int j = 0; j <= mesh.ny; ++j) {
      const Vec2 a = mesh.vertices[mesh.vertex_index(i, j)];
      const Vec2 b = mesh.vertices[mesh.vertex_index(mesh.nx - i, j)];
      CHECK(a.x == doctest::Approx(-b.x).epsilon(1e-12));
      CHECK(a.y == doctest::Approx(b.y).epsilon(1e-12));
    }
  }
  // Triangle mirror: the mapped triangle set equals the original set.
  auto mirror_vertex = [&](int v) {
    const int i = v / (mesh.ny + 1);
    const int j = v % (mesh.ny + 1);
    return mesh.vertex_index(mesh.nx - i, j);
  };
  std::set<std::array<int, 3>> original, mirrored;
  for (const auto& t : mesh.triangles) {
    std::array<int, 3> sorted_t = {t[0], t[1], t[2]};
    std::sort(sorted_t.begin(), sorted_t.end());
    original.insert(sorted_t);
    std::array<int, 3> m = {mirror_vertex(t[0]), mirror_vertex(t[1]),
                            mirror_vertex(t[2])};
    std::sort(m.begin(), m.end());
    mirrored.insert(m);
  }
  CHECK(original == mirrored);
}

}  // TEST_SUITE
