// Flux carrier: mollified layer profile sigma, analytic wall-collar field,
// Poiseuille blending, and the numerical certificates (divergence, slip,
// section flux, derivative envelopes, trilinear smallness probe).

#include "leray/carrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <utility>

#include "leray/errors.hpp"

namespace leray {

namespace {

constexpr double kPi = 3.14159265358979323846;

// exp(1/(x^2-1)) underflows to exact zero once 1 - x^2 < 1e-3, so every
// derivative of the bump is exactly zero there as well.
bool bump_is_zero(double x) { return 1.0 - x * x < 1e-3; }

double bump_mass() {
  static const double mass = adaptive_simpson(
      [](double x) {
        return bump_is_zero(x) ? 0.0 : std::exp(1.0 / (x * x - 1.0));
      },
      -1.0, 1.0, 1e-15);
  return mass;
}

// Derivatives of phi(x) = 1/(x^2-1).
double phi_d1(double x) {
  const double d = x * x - 1.0;
  return -2.0 * x / (d * d);
}
double phi_d2(double x) {
  const double d = x * x - 1.0;
  return (6.0 * x * x + 2.0) / (d * d * d);
}
double phi_d3(double x) {
  const double d = x * x - 1.0;
  return -24.0 * x * (x * x + 1.0) / (d * d * d * d);
}

double min_strip_width(const StripGeometry& g) {
  const double reach = g.s0 + 5.0;
  double wmin = std::min(g.width(reach), g.width(-reach));
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double x = -reach + 2.0 * reach * static_cast<double>(i) / n;
    wmin = std::min(wmin, g.width(x));
  }
  return wmin;
}

void validate_carrier_params(const CarrierParams& p) {
  if (!(p.phi > 0.0) || !std::isfinite(p.phi))
    throw ParameterError("carrier flux must be positive and finite");
  if (!(p.delta > 0.0) || !std::isfinite(p.delta))
    throw ParameterError("carrier clearance must be positive and finite");
  if (!(p.eps > 0.0) || !(2.0 * p.eps < p.delta))
    throw ParameterError(
        "carrier layer parameter must satisfy 0 < 2 eps < delta");
  const double cutoff = p.eps * std::exp(-1.0 / p.eps);
  if (!(p.epsilon_small > 0.0) || !(p.epsilon_small < cutoff))
    throw ParameterError(
        "mollification radius must lie in (0, eps exp(-1/eps))");
  const double z = std::exp(2.0 / p.eps);
  if (!std::isfinite(z))
    throw NumericsError("carrier layer parameter too small: exp(2/eps) "
                        "is not representable");
  if (!(std::abs(p.Z - z) <= 1e-9 * z))
    throw ParameterError("carrier transition length must equal exp(2/eps)");
  if (p.epsilon_small < 1e-90)
    throw NumericsError("carrier layer parameter too small: mollification "
                        "radius underflows double precision");
}

// Blend profile: quintic smoothstep stretched over [anchor, Z].
double eta_side(double s, double anchor, double z) {
  return smoothstep5((s - anchor) / (z - anchor));
}
double eta_side_d1(double s, double anchor, double z) {
  return smoothstep5_d1((s - anchor) / (z - anchor)) / (z - anchor);
}
double eta_side_d2(double s, double anchor, double z) {
  const double w = z - anchor;
  return smoothstep5_d2((s - anchor) / w) / (w * w);
}

}  // namespace

double mollifier_value(double x) {
  if (bump_is_zero(x)) return 0.0;
  return std::exp(1.0 / (x * x - 1.0)) / bump_mass();
}

double mollifier_d1(double x) {
  if (bump_is_zero(x)) return 0.0;
  return mollifier_value(x) * phi_d1(x);
}

double mollifier_d2(double x) {
  if (bump_is_zero(x)) return 0.0;
  const double p1 = phi_d1(x);
  return mollifier_value(x) * (phi_d2(x) + p1 * p1);
}

double mollifier_d3(double x) {
  if (bump_is_zero(x)) return 0.0;
  const double p1 = phi_d1(x);
  const double p2 = phi_d2(x);
  return mollifier_value(x) * (phi_d3(x) + 3.0 * p1 * p2 + p1 * p1 * p1);
}

double default_carrier_eps(double delta) {
  if (!(delta > 0.0))
    throw ParameterError("carrier clearance must be positive");
  return std::min(delta / 2.2, 0.3);
}

double default_carrier_delta(const StripGeometry& geometry) {
  const double wmin = min_strip_width(geometry);
  if (!(wmin > 0.0))
    throw GeometryError("strip walls touch: no carrier clearance");
  return 0.9 * wmin * geometry.cos_slope_min;
}

CarrierParams make_carrier_params(double phi, double eps, double delta) {
  CarrierParams p;
  p.phi = phi;
  p.eps = eps;
  p.delta = delta;
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw ParameterError("carrier layer parameter must be positive");
  p.epsilon_small = eps * std::exp(-1.0 / eps) / 3.0;
  p.Z = std::exp(2.0 / eps);
  validate_carrier_params(p);
  return p;
}

// ---------------------------------------------------------------------------
// SigmaTable

SigmaTable::SigmaTable(const CarrierParams& params) : params_(params) {
  validate_carrier_params(params_);
  mol_radius_ = params_.epsilon_small;
  support_lo_ = 2.0 * mol_radius_;
  support_hi_ = params_.eps + mol_radius_;

  const int n_nodes = 4096;
  nodes_.resize(n_nodes);
  const double ln_lo = std::log(1.8 * mol_radius_);
  const double ln_hi = std::log(support_hi_);
  for (int i = 0; i < n_nodes; ++i) {
    const double f = static_cast<double>(i) / (n_nodes - 1);
    nodes_[i] = std::exp(ln_lo + f * (ln_hi - ln_lo));
  }
  nodes_.front() = 1.8 * mol_radius_;
  nodes_.back() = support_hi_;

  // Cumulative integral of the convolution, with mollification-scale
  // sub-panels across the upper edge zone where tau drops to zero.
  const double zone_lo = params_.eps - 9.0 * mol_radius_;
  const GaussRule& g7 = gauss_legendre(7);
  const GaussRule& g10 = gauss_legendre(10);
  auto integrate_piece = [&](double a, double b, const GaussRule& rule) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      sum += rule.weights[q] * convolution(c + h * rule.nodes[q], 0);
    return sum * h;
  };

  std::vector<double> cum(n_nodes, 0.0);
  for (int i = 1; i < n_nodes; ++i) {
    const double t0 = nodes_[i - 1], t1 = nodes_[i];
    double inc = 0.0;
    if (t1 > support_lo_) {
      if (t1 <= zone_lo || t0 >= support_hi_) {
        inc = integrate_piece(t0, t1, g7);
      } else {
        std::vector<double> breaks{t0};
        for (int j = -18; j <= 2; ++j) {
          const double e = params_.eps + 0.5 * j * mol_radius_;
          if (e > t0 && e < t1) breaks.push_back(e);
        }
        breaks.push_back(t1);
        for (std::size_t j = 0; j + 1 < breaks.size(); ++j)
          inc += integrate_piece(breaks[j], breaks[j + 1], g10);
      }
    }
    cum[i] = cum[i - 1] + inc;
  }

  const double total = cum.back();
  if (!std::isfinite(total) || std::abs(total - 1.0) > 1e-3)
    throw NumericsError("sigma normalization quadrature failed");
  c_tilde_ = 1.0 / total;

  values_.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i)
    values_[i] = -params_.phi + params_.phi * (cum[i] / total);
  for (int i = 1; i < n_nodes; ++i)
    if (values_[i] < values_[i - 1] - 1e-12 * params_.phi)
      throw NumericsError("sigma table is not nondecreasing");

  std::vector<double> knots(n_nodes);
  for (int i = 0; i < n_nodes; ++i) knots[i] = std::log(nodes_[i]);
  log_spline_ = CubicSpline(std::move(knots), values_,
                            CubicSpline::Boundary::kNatural);
}

double SigmaTable::convolution(double t, int deriv) const {
  const double m = mol_radius_;
  if (t <= support_lo_ || t >= support_hi_) return 0.0;
  const double a = std::max(3.0 * m, t - m);
  const double b = std::min(params_.eps, t + m);
  if (!(a < b)) return 0.0;
  const GaussRule& rule = gauss_legendre(64);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double scale = 1.0 / m;
  for (int j = 0; j < deriv; ++j) scale /= m;
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double s = c + h * rule.nodes[q];
    const double u = (t - s) / m;
    double w;
    switch (deriv) {
      case 0: w = mollifier_value(u); break;
      case 1: w = mollifier_d1(u); break;
      default: w = mollifier_d2(u); break;
    }
    sum += rule.weights[q] * w * (params_.eps / s);
  }
  return sum * h * scale;
}

double SigmaTable::sigma(double t) const {
  if (t < -1e-9)
    throw DomainError("sigma: negative layer coordinate");
  t = std::max(t, 0.0);
  if (t <= support_lo_) return -params_.phi;
  if (t >= support_hi_) return 0.0;
  return log_spline_.value(std::log(t));
}

double SigmaTable::sigma_d1(double t) const {
  if (t < -1e-9)
    throw DomainError("sigma: negative layer coordinate");
  return params_.phi * c_tilde_ * convolution(std::max(t, 0.0), 0);
}

double SigmaTable::sigma_d2(double t) const {
  if (t < -1e-9)
    throw DomainError("sigma: negative layer coordinate");
  return params_.phi * c_tilde_ * convolution(std::max(t, 0.0), 1);
}

double SigmaTable::sigma_d3(double t) const {
  if (t < -1e-9)
    throw DomainError("sigma: negative layer coordinate");
  return params_.phi * c_tilde_ * convolution(std::max(t, 0.0), 2);
}

std::vector<double> SigmaTable::panel_edges(double t_max) const {
  if (!(t_max > 0.0))
    throw ParameterError("panel_edges: t_max must be positive");
  std::vector<double> edges{0.0};
  const double zone_lo = params_.eps - 9.0 * mol_radius_;
  double level = support_lo_;
  while (level < std::min(zone_lo, t_max)) {
    edges.push_back(level);
    level *= 2.0;
  }
  for (int j = -9; j <= 1; ++j) {
    const double e = params_.eps + j * mol_radius_;
    if (e > 0.0 && e < t_max) edges.push_back(e);
  }
  edges.push_back(t_max);
  std::sort(edges.begin(), edges.end());
  std::vector<double> out;
  for (double e : edges)
    if (out.empty() || e - out.back() > 1e-9 * mol_radius_)
      out.push_back(e);
  if (out.back() != t_max) out.back() = t_max;
  return out;
}

SigmaTable build_sigma(const CarrierParams& params) {
  return SigmaTable(params);
}

// ---------------------------------------------------------------------------
// FluxCarrier

namespace {

std::shared_ptr<const StripGeometry> require_geometry(
    std::shared_ptr<const StripGeometry> g) {
  if (!g) throw ParameterError("carrier requires a strip geometry");
  return g;
}

}  // namespace

FluxCarrier::FluxCarrier(std::shared_ptr<const StripGeometry> geometry,
                         CarrierParams params, double alpha)
    : geometry_(require_geometry(std::move(geometry))),
      params_(params),
      alpha_(alpha),
      sigma_(params_),
      right_(params_.phi, alpha, ProfileSide::kRight, 1.0),
      left_(params_.phi, alpha, ProfileSide::kLeft, geometry_->c0) {
  if (!(alpha_ >= 0.0))
    throw ParameterError("carrier friction parameter must be >= 0");

  const StripGeometry& g = *geometry_;
  anchor_right_ = std::max({0.0, g.lower_profile->x_flat_right(),
                            g.upper_profile->x_flat_right()});
  anchor_left_ = std::max({0.0, -g.lower_profile->x_flat_left(),
                           -g.upper_profile->x_flat_left()});
  b_right_ = g.b_right_lower;
  b_left_ = g.b_left_lower;
  cos_min_ = g.cos_slope_min;
  tan_max_ = std::sqrt(std::max(0.0, 1.0 - cos_min_ * cos_min_)) / cos_min_;
  min_width_ = min_strip_width(g);

  if (!(min_width_ > 0.0))
    throw GeometryError("strip walls touch: no carrier clearance");
  const double wr = g.width(anchor_right_ + 1.0);
  const double wl = g.width(-anchor_left_ - 1.0);
  if (std::abs(wr - 1.0) > 1e-9 || std::abs(wl - g.c0) > 1e-9)
    throw GeometryError("strip end widths do not match the end profiles");
  if (params_.delta > min_width_ * (1.0 + 1e-12))
    throw ParameterError("carrier clearance exceeds the strip width");
  const double hi = sigma_.support_hi();
  if (!(hi / cos_min_ < min_width_))
    throw ParameterError("carrier layer does not fit under the upper wall");
  if (!(params_.Z >= 16.0 * anchor_right_ && params_.Z >= 16.0 * anchor_left_))
    throw ParameterError("carrier transition length is too short for the "
                         "wall transition region");
  if (!(2.0 * hi / cos_min_ * g.d2_max <= 0.9))
    throw ParameterError("wall curvature too strong for the carrier layer");
  if (!(hi * g.kappa_max <= 0.5))
    throw ParameterError("carrier layer exceeds the wall curvature reach");

  horizontal_walls_ = g.kappa_max == 0.0 && g.d2_max == 0.0 &&
                      g.lower_profile->df(0.0) == 0.0 &&
                      g.upper_profile->df(0.0) == 0.0;
}

FluxCarrier::Region FluxCarrier::region_of(double x1) const {
  if (x1 >= anchor_right_) return Region::kRight;
  if (x1 <= -anchor_left_) return Region::kLeft;
  return Region::kMiddle;
}

void FluxCarrier::check_domain(const Vec2& x, double f_low,
                               double f_up) const {
  const double tol = 1e-9 * std::max(1.0, std::abs(x.y));
  if (!(x.y >= f_low - tol && x.y <= f_up + tol))
    throw DomainError("carrier evaluation point lies outside the strip");
}

double FluxCarrier::q_right(double y) const {
  return right_.integral(y) - (sigma_.sigma(y) + params_.phi);
}

double FluxCarrier::q_left(double y) const {
  return left_.integral(y) - (sigma_.sigma(y) + params_.phi);
}

FluxCarrier::WallFrame FluxCarrier::project_lower(const Vec2& x) const {
  const WallProfile& prof = *geometry_->lower_profile;
  double xi = x.x;
  const double vert = std::max(0.0, x.y - prof.f(x.x));
  const double reach = 1.5 * vert * tan_max_ + 1e-3;
  double lo = x.x - reach, hi = x.x + reach;
  bool converged = false;
  for (int it = 0; it < 80; ++it) {
    const double fv = prof.f(xi);
    const double d1 = prof.df(xi);
    const double h = (x.x - xi) + (x.y - fv) * d1;
    const double hp = -1.0 - d1 * d1 + (x.y - fv) * prof.d2f(xi);
    if (!std::isfinite(h) || !std::isfinite(hp) || hp >= 0.0)
      throw NumericsError("wall projection is ill-conditioned");
    if (h > 0.0)
      lo = std::max(lo, xi);
    else
      hi = std::min(hi, xi);
    double step = -h / hp;
    step = std::clamp(step, -1.0, 1.0);
    double next = xi + step;
    if (next < lo || next > hi) next = 0.5 * (lo + hi);
    const double moved = std::abs(next - xi);
    xi = next;
    if (moved <= 1e-13 * (1.0 + std::abs(xi))) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericsError("wall projection did not converge");

  WallFrame frame;
  frame.xi = xi;
  const double fv = prof.f(xi);
  const double d1 = prof.df(xi);
  const double g = std::sqrt(1.0 + d1 * d1);
  frame.tau = Vec2(1.0 / g, d1 / g);
  frame.n = Vec2(-d1 / g, 1.0 / g);
  const Vec2 d = x - Vec2(xi, fv);
  frame.t = std::max(0.0, d.dot(frame.n));
  frame.kappa = prof.d2f(xi) / (g * g * g);
  frame.gamma = 1.0 / (1.0 - frame.t * frame.kappa);
  return frame;
}

Vec2 FluxCarrier::velocity(const Vec2& x) const {
  const double fl = geometry_->f_low(x.x);
  const double fu = geometry_->f_up(x.x);
  check_domain(x, fl, fu);
  switch (region_of(x.x)) {
    case Region::kRight: {
      const double y = std::clamp(x.y - b_right_, 0.0, 1.0);
      const double e = eta_side(x.x, anchor_right_, params_.Z);
      const double e1 = eta_side_d1(x.x, anchor_right_, params_.Z);
      const double s1 = sigma_.sigma_d1(y);
      return {(1.0 - e) * s1 + e * right_.value(y), -e1 * q_right(y)};
    }
    case Region::kLeft: {
      const double y = std::clamp(x.y - b_left_, 0.0, geometry_->c0);
      const double m = eta_side(-x.x, anchor_left_, params_.Z);
      const double m1 = eta_side_d1(-x.x, anchor_left_, params_.Z);
      const double s1 = sigma_.sigma_d1(y);
      return {(1.0 - m) * s1 + m * left_.value(y), m1 * q_left(y)};
    }
    case Region::kMiddle:
    default: {
      if ((x.y - fl) * cos_min_ >= sigma_.support_hi()) return {0.0, 0.0};
      const WallFrame w = project_lower(x);
      const double s1 = sigma_.sigma_d1(w.t);
      if (s1 == 0.0) return {0.0, 0.0};
      return s1 * w.tau;
    }
  }
}

Mat2 FluxCarrier::gradient(const Vec2& x) const {
  const double fl = geometry_->f_low(x.x);
  const double fu = geometry_->f_up(x.x);
  check_domain(x, fl, fu);
  switch (region_of(x.x)) {
    case Region::kRight: {
      const double y = std::clamp(x.y - b_right_, 0.0, 1.0);
      const double e = eta_side(x.x, anchor_right_, params_.Z);
      const double e1 = eta_side_d1(x.x, anchor_right_, params_.Z);
      const double e2 = eta_side_d2(x.x, anchor_right_, params_.Z);
      const double s1 = sigma_.sigma_d1(y);
      const double s2 = sigma_.sigma_d2(y);
      const double diff = right_.value(y) - s1;
      Mat2 g;
      g.d11 = e1 * diff;
      g.d12 = (1.0 - e) * s2 + e * right_.deriv(y);
      g.d21 = -e2 * q_right(y);
      g.d22 = -e1 * diff;
      return g;
    }
    case Region::kLeft: {
      const double y = std::clamp(x.y - b_left_, 0.0, geometry_->c0);
      const double m = eta_side(-x.x, anchor_left_, params_.Z);
      const double m1 = eta_side_d1(-x.x, anchor_left_, params_.Z);
      const double m2 = eta_side_d2(-x.x, anchor_left_, params_.Z);
      const double s1 = sigma_.sigma_d1(y);
      const double s2 = sigma_.sigma_d2(y);
      const double diff = left_.value(y) - s1;
      Mat2 g;
      g.d11 = -m1 * diff;
      g.d12 = (1.0 - m) * s2 + m * left_.deriv(y);
      g.d21 = -m2 * q_left(y);
      g.d22 = m1 * diff;
      return g;
    }
    case Region::kMiddle:
    default: {
      Mat2 g;
      if ((x.y - fl) * cos_min_ >= sigma_.support_hi()) return g;
      const WallFrame w = project_lower(x);
      const double s1 = sigma_.sigma_d1(w.t);
      const double s2 = sigma_.sigma_d2(w.t);
      if (s1 == 0.0 && s2 == 0.0) return g;
      const double wk = w.gamma * w.kappa * s1;
      g.d11 = s2 * w.tau.x * w.n.x + wk * w.n.x * w.tau.x;
      g.d12 = s2 * w.tau.x * w.n.y + wk * w.n.x * w.tau.y;
      g.d21 = s2 * w.tau.y * w.n.x + wk * w.n.y * w.tau.x;
      g.d22 = s2 * w.tau.y * w.n.y + wk * w.n.y * w.tau.y;
      return g;
    }
  }
}

double FluxCarrier::eta(double x1) const {
  return x1 >= 0.0 ? eta_side(x1, anchor_right_, params_.Z)
                   : eta_side(-x1, anchor_left_, params_.Z);
}

double FluxCarrier::eta_d1(double x1) const {
  return x1 >= 0.0 ? eta_side_d1(x1, anchor_right_, params_.Z)
                   : -eta_side_d1(-x1, anchor_left_, params_.Z);
}

double FluxCarrier::eta_d2(double x1) const {
  return x1 >= 0.0 ? eta_side_d2(x1, anchor_right_, params_.Z)
                   : eta_side_d2(-x1, anchor_left_, params_.Z);
}

double FluxCarrier::section_flux(double x1) const {
  const GaussRule& g16 = gauss_legendre(16);
  auto panel_sum = [&](double a, double b, auto&& f) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t q = 0; q < g16.nodes.size(); ++q)
      sum += g16.weights[q] * f(c + h * g16.nodes[q]);
    return sum * h;
  };

  const Region r = region_of(x1);
  double flux = 0.0;
  if (r != Region::kMiddle) {
    const double b = r == Region::kRight ? b_right_ : b_left_;
    const double w = r == Region::kRight ? 1.0 : geometry_->c0;
    const std::vector<double> edges = sigma_.panel_edges(w);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
      flux += panel_sum(edges[i], edges[i + 1], [&](double t) {
        return velocity(Vec2(x1, b + t)).x;
      });
  } else {
    const double fl = geometry_->f_low(x1);
    const double span = geometry_->f_up(x1) - fl;
    const double t_top = std::min(span, sigma_.support_hi() / cos_min_);
    const std::vector<double> edges = sigma_.panel_edges(t_top);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double mid = 0.5 * (edges[i] + edges[i + 1]);
      for (const auto& piece :
           {std::pair{edges[i], mid}, std::pair{mid, edges[i + 1]}})
        flux += panel_sum(piece.first, piece.second, [&](double t) {
          return velocity(Vec2(x1, fl + t)).x;
        });
    }
  }
  return flux;
}

Vec2 eval_carrier(const FluxCarrier& carrier, const Vec2& x) {
  return carrier.velocity(x);
}

// ---------------------------------------------------------------------------
// Control-volume divergence residual

namespace {

// Integral of a . (dy, -dx) over one directed mesh edge, with the edge cut
// at the layer-panel height levels so each Gauss panel sees a smooth piece.
double carrier_edge_flux(const FluxCarrier& carrier, const Vec2& a,
                         const Vec2& b,
                         const std::vector<double>& height_levels) {
  const StripGeometry& g = carrier.geometry();
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double hi = carrier.sigma().support_hi();
  const double cosm = g.cos_slope_min;

  auto height = [&](double lam) {
    return (a.y + lam * dy) - g.f_low(a.x + lam * dx);
  };

  const int n_samples = 16;
  double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin;
  double hs[n_samples + 1];
  for (int j = 0; j <= n_samples; ++j) {
    hs[j] = height(static_cast<double>(j) / n_samples);
    hmin = std::min(hmin, hs[j]);
    hmax = std::max(hmax, hs[j]);
  }
  const double corr = g.d2_max * dx * dx / 1024.0;
  hmin -= corr;
  hmax += corr;

  const double x_lo = std::min(a.x, b.x), x_hi = std::max(a.x, b.x);
  const bool fully_middle = x_lo > -carrier.blend_left_anchor() &&
                            x_hi < carrier.blend_right_anchor();
  if (fully_middle && hmin * cosm >= hi * (1.0 + 1e-9)) return 0.0;

  auto gauss_piece = [&](double l0, double l1, const GaussRule& rule) {
    const double c = 0.5 * (l0 + l1), h = 0.5 * (l1 - l0);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double lam = c + h * rule.nodes[q];
      const Vec2 v = carrier.velocity(Vec2(a.x + lam * dx, a.y + lam * dy));
      sum += rule.weights[q] * (v.x * dy - v.y * dx);
    }
    return sum * h;
  };

  const bool near_layer = hmin * cosm <= hi * 1.05;
  if (!near_layer) return gauss_piece(0.0, 1.0, gauss_legendre(7));

  std::vector<double> cuts{0.0, 1.0};
  for (double lv : height_levels) {
    if (lv <= hmin || lv >= hmax) continue;
    for (int j = 0; j < n_samples; ++j) {
      const double p0 = hs[j] - lv, p1 = hs[j + 1] - lv;
      if (!((p0 > 0.0) != (p1 > 0.0))) continue;
      double l0 = static_cast<double>(j) / n_samples;
      double l1 = static_cast<double>(j + 1) / n_samples;
      double s0 = p0;
      for (int it = 0; it < 40; ++it) {
        const double lm = 0.5 * (l0 + l1);
        const double pm = height(lm) - lv;
        if ((pm > 0.0) == (s0 > 0.0)) {
          l0 = lm;
          s0 = pm;
        } else {
          l1 = lm;
        }
      }
      cuts.push_back(0.5 * (l0 + l1));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double flux = 0.0;
  const GaussRule& g10 = gauss_legendre(10);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] < 1e-12) continue;
    flux += gauss_piece(cuts[i], cuts[i + 1], g10);
  }
  return flux;
}

}  // namespace

double divergence_residual(const FluxCarrier& carrier, const Mesh& mesh) {
  const double hi = carrier.sigma().support_hi();
  const double cosm = carrier.geometry().cos_slope_min;
  const std::vector<double> t_levels = carrier.sigma().panel_edges(hi);
  std::vector<double> height_levels;
  for (double t : t_levels) {
    if (t <= 0.0) continue;
    height_levels.push_back(t);
    height_levels.push_back(t / cosm);
  }
  std::sort(height_levels.begin(), height_levels.end());
  height_levels.erase(
      std::unique(height_levels.begin(), height_levels.end(),
                  [&](double u, double v) {
                    return v - u < 1e-6 * carrier.params().epsilon_small;
                  }),
      height_levels.end());

  std::map<std::pair<int, int>, double> cache;
  double worst = 0.0;
  for (std::size_t k = 0; k < mesh.triangle_count(); ++k) {
    const auto& tri = mesh.triangles[k];
    double circ = 0.0;
    for (int e = 0; e < 3; ++e) {
      const int i0 = tri[e], i1 = tri[(e + 1) % 3];
      const std::pair<int, int> key{std::min(i0, i1), std::max(i0, i1)};
      auto it = cache.find(key);
      double canonical;
      if (it != cache.end()) {
        canonical = it->second;
      } else {
        canonical = carrier_edge_flux(carrier, mesh.vertices[key.first],
                                      mesh.vertices[key.second],
                                      height_levels);
        cache.emplace(key, canonical);
      }
      circ += (i0 == key.first) ? canonical : -canonical;
    }
    worst = std::max(worst, std::abs(circ) / mesh.triangle_area(k));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Slip boundary residual

BoundaryResidual slip_bc_residual(const FluxCarrier& carrier, double alpha,
                                  double x_lo, double x_hi) {
  if (!(x_lo < x_hi))
    throw ParameterError("slip residual range must be nonempty");
  const StripGeometry& g = carrier.geometry();
  const double z = carrier.params().Z;
  const double ar = carrier.blend_right_anchor();
  const double al = carrier.blend_left_anchor();

  std::vector<double> xs;
  const double core_lo = -al - 2.0, core_hi = ar + 2.0;
  for (int i = 0; i <= 480; ++i)
    xs.push_back(core_lo + (core_hi - core_lo) * i / 480.0);
  for (int i = 0; i <= 400; ++i) {
    const double f = static_cast<double>(i) / 400.0;
    const double off =
        std::exp(std::log(1e-3) + f * (std::log(1.5 * z) - std::log(1e-3)));
    xs.push_back(ar + off);
    xs.push_back(-al - off);
  }
  for (double s : {0.0, ar, -al, z, -z, 1.25 * z, -1.25 * z, 1.5 * z,
                   -1.5 * z})
    xs.push_back(s);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::remove_if(xs.begin(), xs.end(),
                          [&](double x) { return x < x_lo || x > x_hi; }),
           xs.end());

  BoundaryResidual res;
  for (double x : xs) {
    for (int side = 0; side < 2; ++side) {
      const WallProfile& prof =
          side == 0 ? *g.lower_profile : *g.upper_profile;
      const double fv = prof.f(x);
      const double d1 = prof.df(x);
      const double gn = std::sqrt(1.0 + d1 * d1);
      const Vec2 tau(1.0 / gn, d1 / gn);
      const Vec2 nrm = side == 0 ? Vec2(d1 / gn, -1.0 / gn)
                                 : Vec2(-d1 / gn, 1.0 / gn);
      const Vec2 p(x, fv);
      const Vec2 a = carrier.velocity(p);
      const Mat2 grad = carrier.gradient(p);
      const double shear = tau.dot(grad.apply(nrm)) + nrm.dot(grad.apply(tau));
      const double a_tan = a.dot(tau);
      const double robin =
          std::isinf(alpha) ? std::abs(a_tan)
                            : std::abs(shear + alpha * a_tan);
      res.robin = std::max(res.robin, robin);
      res.normal = std::max(res.normal, std::abs(a.dot(nrm)));
    }
  }
  return res;
}

BoundaryResidual slip_bc_residual(const FluxCarrier& carrier, double alpha) {
  const double z = carrier.params().Z;
  return slip_bc_residual(carrier, alpha, -1.5 * z, 1.5 * z);
}

// ---------------------------------------------------------------------------
// Trilinear smallness probe

namespace {

struct ProbeShape {
  double zeta = 0.0;
  double ec = 0.0;
  double k = 0.0;
  double c = 0.0;
  double d = 0.0;
  double u_cap1 = 0.0;
  double u_cap2 = 0.0;
  std::shared_ptr<const WallProfile> lower;
};

// Collar stream profile H(u) = u (1 - s5(u/U)) on [0, U], zero above: H(0)=0
// keeps the wall a streamline, H'(0)=1 leaves tangential slip at the wall,
// and the C2 cutoff confines the field to the collar.  deriv = 0, 1, 2.
double collar_profile(double u, double cap, int deriv) {
  if (u >= cap) return 0.0;
  const double s = u / cap;
  switch (deriv) {
    case 0: return u * (1.0 - smoothstep5(s));
    case 1: return 1.0 - smoothstep5(s) - s * smoothstep5_d1(s);
    default:
      return -(2.0 * smoothstep5_d1(s) + s * smoothstep5_d2(s)) / cap;
  }
}

// C2 envelope in x1: quintic ramps of unit length at both ends of
// [-zeta, zeta], flat 1 in between.  deriv = 0, 1, 2.
double probe_bump(const ProbeShape& p, double x, int deriv) {
  if (x <= -p.zeta || x >= p.zeta) return 0.0;
  if (x < -p.zeta + 1.0) {
    const double u = x + p.zeta;
    switch (deriv) {
      case 0: return smoothstep5(u);
      case 1: return smoothstep5_d1(u);
      default: return smoothstep5_d2(u);
    }
  }
  if (x > p.zeta - 1.0) {
    const double u = p.zeta - x;
    switch (deriv) {
      case 0: return smoothstep5(u);
      case 1: return -smoothstep5_d1(u);
      default: return smoothstep5_d2(u);
    }
  }
  return deriv == 0 ? 1.0 : 0.0;
}

void probe_eval(const ProbeShape& p, const Vec2& x, bool want_grad, Vec2& v,
                Mat2& gm) {
  v = Vec2(0.0, 0.0);
  gm = Mat2();
  const double B = probe_bump(p, x.x, 0);
  const double Bp = probe_bump(p, x.x, 1);
  const double Bpp = want_grad ? probe_bump(p, x.x, 2) : 0.0;
  if (B == 0.0 && Bp == 0.0 && Bpp == 0.0) return;

  const double f = p.lower->f(x.x);
  const double fp = p.lower->df(x.x);
  const double fpp = p.lower->d2f(x.x);
  const double fu = p.upper->f(x.x);
  const double fup = p.upper->df(x.x);
  const double fupp = p.upper->d2f(x.x);
  const double w = fu - f;
  const double wp = fup - fp;
  const double wpp = fupp - fpp;

  const double u = (x.y - f) / p.ec;
  const double th = (x.y - f) / w;
  const double u1 = -fp / p.ec, u2 = 1.0 / p.ec, u11 = -fpp / p.ec;
  const double th2 = 1.0 / w;
  const double th1 = (-fp - th * wp) / w;
  const double th11 = (-fpp - 2.0 * th1 * wp - th * wpp) / w;
  const double th12 = -wp / (w * w);

  const double c1 = smoothstep5(p.a1 * u);
  const double c1p = p.a1 * smoothstep5_d1(p.a1 * u);
  const double c1pp = p.a1 * p.a1 * smoothstep5_d2(p.a1 * u);
  const double c2 = smoothstep5(p.a2 * u);
  const double c2p = p.a2 * smoothstep5_d1(p.a2 * u);
  const double c2pp = p.a2 * p.a2 * smoothstep5_d2(p.a2 * u);

  const double kp = p.k / p.ec;
  const double cs = std::cos(kp * x.x), sn = std::sin(kp * x.x);
  const double Pc = p.c * cs, Qd = p.d * sn;
  const double Pcp = -p.c * kp * sn, Qdp = p.d * kp * cs;
  const double Pcpp = -p.c * kp * kp * cs, Qdpp = -p.d * kp * kp * sn;

  const double F = Pc * c1 + Qd * c2;
  const double Fu = Pc * c1p + Qd * c2p;
  const double Fuu = Pc * c1pp + Qd * c2pp;
  const double F1 = Pcp * c1 + Qdp * c2 + Fu * u1;
  const double F2 = Fu * u2;
  const double F11 = Pcpp * c1 + Qdpp * c2 +
                     2.0 * (Pcp * c1p + Qdp * c2p) * u1 + Fuu * u1 * u1 +
                     Fu * u11;
  const double F12 = (Pcp * c1p + Qdp * c2p) * u2 + Fuu * u1 * u2;
  const double F22 = Fuu * u2 * u2;

  const double G = (1.0 - th) * (1.0 - th);
  const double Gp = -2.0 * (1.0 - th);
  const double Gpp = 2.0;

  const double W = G * F;
  const double W1 = Gp * th1 * F + G * F1;
  const double W2 = Gp * th2 * F + G * F2;

  v.x = p.ec * B * W2;
  v.y = -p.ec * (Bp * W + B * W1);

  if (!want_grad) return;
  const double W11 = Gpp * th1 * th1 * F + Gp * th11 * F +
                     2.0 * Gp * th1 * F1 + G * F11;
  const double W12 = Gpp * th1 * th2 * F + Gp * th12 * F + Gp * th1 * F2 +
                     Gp * th2 * F1 + G * F12;
  const double W22 = Gpp * th2 * th2 * F + 2.0 * Gp * th2 * F2 + G * F22;
  gm.d11 = p.ec * (Bp * W2 + B * W12);
  gm.d12 = p.ec * B * W22;
  gm.d21 = -p.ec * (Bpp * W + 2.0 * Bp * W1 + B * W11);
  gm.d22 = -gm.d11;
}

}  // namespace

std::vector<ProbeField> make_probe_fields(const StripGeometry& geometry,
                                          int count, double zeta,
                                          double collar_scale,
                                          std::uint64_t seed) {
  if (count < 1) throw ParameterError("probe family needs count >= 1");
  if (!(zeta >= 2.5))
    throw ParameterError("probe support must extend past the end ramps");
  const double wmin = min_strip_width(geometry);
  if (!(collar_scale > 0.0 && collar_scale <= 0.5 * wmin))
    throw ParameterError("probe layer scale must lie in (0, width/2]");

  std::mt19937_64 rng(seed);
  auto u01 = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  // Signed magnitude bounded away from zero so the cross term between the
  // two ramp components never degenerates.
  auto signed_mag = [&u01]() {
    const double u = u01();
    return u < 0.5 ? -(0.5 + u) : 0.5 + (u - 0.5);
  };

  std::vector<ProbeField> fields;
  fields.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    ProbeShape shape;
    shape.zeta = zeta;
    shape.ec = collar_scale;
    shape.a1 = 0.6 + 0.3 * u01();
    shape.a2 = 1.6 + 0.5 * u01();
    shape.k = 2.0 * kPi * (0.5 + u01());
    shape.c = signed_mag();
    shape.d = signed_mag();
    shape.lower = geometry.lower_profile;
    shape.upper = geometry.upper_profile;

    ProbeField field;
    field.x_lo = -zeta;
    field.x_hi = zeta;
    field.collar_scale = collar_scale;
    field.osc_wavelength = 2.0 * kPi * collar_scale / shape.k;
    field.x1_breakpoints = {-zeta, -zeta + 1.0, zeta - 1.0, zeta};
    field.x2_feature_heights = {collar_scale / shape.a1,
                                collar_scale / shape.a2, collar_scale,
                                2.0 * collar_scale};
    field.value = [shape](const Vec2& x) {
      Vec2 v;
      Mat2 g;
      probe_eval(shape, x, false, v, g);
      return v;
    };
    field.grad = [shape](const Vec2& x) {
      Vec2 v;
      Mat2 g;
      probe_eval(shape, x, true, v, g);
      return g;
    };
    fields.push_back(std::move(field));
  }
  return fields;
}

namespace {

std::vector<double> probe_x1_edges(const ProbeField& field) {
  std::vector<double> bp = field.x1_breakpoints;
  bp.push_back(field.x_lo);
  bp.push_back(field.x_hi);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end(),
                       [](double a, double b) { return b - a < 1e-12; }),
           bp.end());
  const double step =
      std::min(0.6 * std::max(field.osc_wavelength, 1e-6), 0.5);
  std::vector<double> edges;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double a = bp[i], b = bp[i + 1];
    if (b <= field.x_lo || a >= field.x_hi) continue;
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
    for (int j = 0; j < n; ++j) edges.push_back(a + (b - a) * j / n);
  }
  edges.push_back(field.x_hi);
  return edges;
}

std::vector<double> probe_height_template(const FluxCarrier& carrier,
                                          const ProbeField& field,
                                          double max_width) {
  const SigmaTable& st = carrier.sigma();
  std::vector<double> h = st.panel_edges(std::min(st.support_hi(),
                                                  max_width));
  for (int m = 1; m <= 8; ++m) h.push_back(field.collar_scale * m / 4.0);
  for (double e : field.x2_feature_heights) h.push_back(e);
  const double coarse_lo = 2.0 * field.collar_scale;
  if (coarse_lo < max_width) {
    for (int j = 1; j <= 8; ++j)
      h.push_back(coarse_lo + (max_width - coarse_lo) * j / 8.0);
  }
  h.push_back(max_width);
  std::sort(h.begin(), h.end());
  std::vector<double> out;
  for (double e : h) {
    if (e <= 0.0 || e > max_width * (1.0 + 1e-12)) continue;
    if (out.empty() || e - out.back() > 1e-12) out.push_back(e);
  }
  return out;  // positive heights, ending at max_width
}

}  // namespace

ProbeResult trilinear_smallness_probe(const FluxCarrier& carrier,
                                      const std::vector<ProbeField>& fields) {
  ProbeResult result;
  const CarrierParams& p = carrier.params();
  const double friction = std::isinf(carrier.alpha())
                              ? 1.0
                              : carrier.alpha() / (1.0 + carrier.alpha());
  result.bound_scale = p.phi * (p.eps + friction);

  const StripGeometry& g = carrier.geometry();
  const bool horizontal = g.kappa_max == 0.0 && g.d2_max == 0.0 &&
                          g.lower_profile->df(0.0) == 0.0 &&
                          g.upper_profile->df(0.0) == 0.0;
  const GaussRule& g10 = gauss_legendre(10);

  for (const ProbeField& field : fields) {
    const std::vector<double> x_edges = probe_x1_edges(field);

    double width_max = 0.0;
    for (double x : x_edges) width_max = std::max(width_max, g.width(x));

    double t_sum = 0.0, e_sum = 0.0;

    if (horizontal) {
      const double fl = g.f_low(0.0);
      const double w0 = g.width(0.0);
      const std::vector<double> heights =
          probe_height_template(carrier, field, w0);

      // Tensor grid: cache the layer profile per height and the blend per
      // column; evaluate the field closures per node.
      struct YData {
        double y, wt, s1, s2, prv, prd, qr, plv, pld, ql;
      };
      std::vector<YData> ys;
      double prev = 0.0;
      for (double h : heights) {
        for (std::size_t q = 0; q < g10.nodes.size(); ++q) {
          YData d;
          const double c = 0.5 * (prev + h), hw = 0.5 * (h - prev);
          d.y = fl + (c + hw * g10.nodes[q]);
          d.wt = g10.weights[q] * hw;
          const double yr =
              std::clamp(d.y - g.b_right_lower, 0.0, 1.0);
          const double yl = std::clamp(d.y - g.b_left_lower, 0.0, g.c0);
          d.s1 = carrier.sigma().sigma_d1(yr);
          d.s2 = carrier.sigma().sigma_d2(yr);
          d.prv = carrier.right_profile().value(yr);
          d.prd = carrier.right_profile().deriv(yr);
          d.qr = carrier.right_profile().integral(yr) -
                 (carrier.sigma().sigma(yr) + p.phi);
          d.plv = carrier.left_profile().value(yl);
          d.pld = carrier.left_profile().deriv(yl);
          d.ql = carrier.left_profile().integral(yl) -
                 (carrier.sigma().sigma(yl) + p.phi);
          ys.push_back(d);
        }
        prev = h;
      }

      for (std::size_t i = 0; i + 1 < x_edges.size(); ++i) {
        const double xc = 0.5 * (x_edges[i] + x_edges[i + 1]);
        const double xh = 0.5 * (x_edges[i + 1] - x_edges[i]);
        for (std::size_t qx = 0; qx < g10.nodes.size(); ++qx) {
          const double x1 = xc + xh * g10.nodes[qx];
          const double wx = g10.weights[qx] * xh;
          const bool right = x1 >= 0.0;
          const double e = carrier.eta(x1);
          const double e1 = right ? carrier.eta_d1(x1) : -carrier.eta_d1(x1);
          const double e2 = carrier.eta_d2(x1);
          for (const YData& d : ys) {
            const Vec2 pt(x1, d.y);
            const Vec2 v = field.value(pt);
            const Mat2 gv = field.grad(pt);
            e_sum += wx * d.wt *
                     (gv.d11 * gv.d11 + gv.d12 * gv.d12 + gv.d21 * gv.d21 +
                      gv.d22 * gv.d22);
            double d11, d12, d21;
            if (right) {
              d11 = e1 * (d.prv - d.s1);
              d12 = (1.0 - e) * d.s2 + e * d.prd;
              d21 = -e2 * d.qr;
            } else {
              d11 = -e1 * (d.plv - d.s1);
              d12 = (1.0 - e) * d.s2 + e * d.pld;
              d21 = -e2 * d.ql;
            }
            const double d22 = -d11;
            t_sum += wx * d.wt *
                     (v.x * (d11 * v.x + d12 * v.y) +
                      v.y * (d21 * v.x + d22 * v.y));
          }
        }
      }
    } else {
      const std::vector<double> heights =
          probe_height_template(carrier, field, width_max);
      for (std::size_t i = 0; i + 1 < x_edges.size(); ++i) {
        const double xc = 0.5 * (x_edges[i] + x_edges[i + 1]);
        const double xh = 0.5 * (x_edges[i + 1] - x_edges[i]);
        for (std::size_t qx = 0; qx < g10.nodes.size(); ++qx) {
          const double x1 = xc + xh * g10.nodes[qx];
          const double wx = g10.weights[qx] * xh;
          const double fl = g.f_low(x1);
          const double w_loc = g.width(x1);
          double prev = 0.0;
          for (double h : heights) {
            const double h_clip = std::min(h, w_loc);
            if (h_clip <= prev) continue;
            const double c = 0.5 * (prev + h_clip);
            const double hw = 0.5 * (h_clip - prev);
            for (std::size_t qy = 0; qy < g10.nodes.size(); ++qy) {
              const Vec2 pt(x1, fl + c + hw * g10.nodes[qy]);
              const double wt = wx * g10.weights[qy] * hw;
              const Vec2 v = field.value(pt);
              const Mat2 gv = field.grad(pt);
              const Mat2 ga = carrier.gradient(pt);
              e_sum += wt * (gv.d11 * gv.d11 + gv.d12 * gv.d12 +
                             gv.d21 * gv.d21 + gv.d22 * gv.d22);
              t_sum += wt * (v.x * (ga.d11 * v.x + ga.d12 * v.y) +
                             v.y * (ga.d21 * v.x + ga.d22 * v.y));
            }
            prev = h_clip;
          }
        }
      }
    }

    const double ratio = e_sum > 1e-300 ? std::abs(t_sum) / e_sum : 0.0;
    result.ratios.push_back(ratio);
    result.max_ratio = std::max(result.max_ratio, ratio);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Certification

std::vector<CertificationItem> certify_carrier(const FluxCarrier& carrier,
                                               const Mesh& mesh) {
  std::vector<CertificationItem> items;
  auto add = [&items](const std::string& name, double value, double bound,
                      bool pass) {
    items.push_back({name, value, bound, pass});
  };

  const SigmaTable& st = carrier.sigma();
  const CarrierParams& p = carrier.params();
  const double phi = p.phi;
  const double eps = p.eps;
  const double ms = p.epsilon_small;

  // sigma plateaus and normalization.
  double plateau_low = 0.0, plateau_high = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double t_lo = st.support_lo() * i / 64.0;
    plateau_low = std::max(plateau_low, std::abs(st.sigma(t_lo) + phi) / phi);
    const double t_hi =
        st.support_hi() + (p.delta - st.support_hi()) * i / 64.0;
    plateau_high = std::max(plateau_high, std::abs(st.sigma(t_hi)) / phi);
  }
  add("sigma_plateau_low", plateau_low, 1e-15, plateau_low <= 1e-15);
  add("sigma_plateau_high", plateau_high, 1e-15, plateau_high <= 1e-15);
  const double at_clearance = std::abs(st.sigma(p.delta - ms)) / phi;
  add("sigma_zero_at_clearance", at_clearance, 1e-12, at_clearance <= 1e-12);
  const double ct_dev = std::abs(st.c_tilde() - 1.0);
  add("c_tilde_unit", ct_dev, 1e-9, ct_dev <= 1e-9);

  // Fundamental theorem of calculus: integral of sigma' recovers phi.
  {
    const GaussRule& g16 = gauss_legendre(16);
    const std::vector<double> edges = st.panel_edges(p.delta);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const double c = 0.5 * (edges[i] + edges[i + 1]);
      const double h = 0.5 * (edges[i + 1] - edges[i]);
      for (std::size_t q = 0; q < g16.nodes.size(); ++q)
        total += g16.weights[q] * st.sigma_d1(c + h * g16.nodes[q]) * h;
    }
    const double dev = std::abs(total - phi) / phi;
    add("sigma_ftc", dev, 1e-10, dev <= 1e-10);
  }

  // Derivative bounds at the table nodes, evaluated in log space so the
  // envelopes stay representable for small eps.
  {
    const double log_phi = std::log(phi);
    const double log_env1_flat = log_phi + 1.0 / eps;
    const double log_env2 = log_phi + 2.0 / eps - std::log(eps);
    const double log_env3 = log_phi + 3.0 / eps - 2.0 * std::log(eps);
    double up = 0.0, low = 0.0, r2 = 0.0, r3 = 0.0;
    for (double t : st.nodes()) {
      const double s1 = st.sigma_d1(t);
      const double log_env1 =
          std::min(log_env1_flat, std::log(2.0 * phi * eps) - std::log(t));
      if (s1 > 0.0)
        up = std::max(up, std::exp(std::log(s1) - log_env1));
      else if (s1 < 0.0)
        low = std::min(low, -std::exp(std::log(-s1) - log_env1));
      const double s2 = std::abs(st.sigma_d2(t));
      if (s2 > 0.0) r2 = std::max(r2, std::exp(std::log(s2) - log_env2));
      const double s3 = std::abs(st.sigma_d3(t));
      if (s3 > 0.0) r3 = std::max(r3, std::exp(std::log(s3) - log_env3));
    }
    add("veest_upper", up, 1.0 + 1e-8, up <= 1.0 + 1e-8);
    add("veest_nonneg", low, -1e-8, low >= -1e-8);
    add("deriv2_envelope", r2, 10.0, r2 <= 10.0);
    add("deriv3_envelope", r3, 20.0, r3 <= 20.0);
  }

  // Blend derivative bounds scaled by exp(2/eps) and exp(4/eps) = Z, Z^2.
  {
    double sup1 = 0.0, sup2 = 0.0;
    const double z = p.Z;
    for (int side = 0; side < 2; ++side) {
      const double anchor = side == 0 ? carrier.blend_right_anchor()
                                      : carrier.blend_left_anchor();
      for (int i = 0; i <= 2000; ++i) {
        const double s = anchor + (z - anchor) * i / 2000.0;
        const double sgn = side == 0 ? 1.0 : -1.0;
        sup1 = std::max(sup1, std::abs(carrier.eta_d1(sgn * s)));
        sup2 = std::max(sup2, std::abs(carrier.eta_d2(sgn * s)));
      }
    }
    const double v1 = sup1 * z, v2 = sup2 * z * z;
    add("eta_d1_bound", v1, 2.0, v1 <= 2.0 + 1e-12);
    add("eta_d2_bound", v2, 7.0, v2 <= 7.0);
  }

  // Far-field match with the end Poiseuille profiles.
  {
    double dev = 0.0;
    const StripGeometry& g = carrier.geometry();
    for (double scale : {1.0, 1.25, 2.0}) {
      for (int i = 1; i < 32; ++i) {
        const double yr = static_cast<double>(i) / 32.0;
        const Vec2 xr(scale * p.Z, g.b_right_lower + yr);
        const Vec2 ar = carrier.velocity(xr);
        dev = std::max(dev, std::abs(ar.x - carrier.right_profile().value(
                                                 yr)) / phi);
        dev = std::max(dev, std::abs(ar.y) / phi);
        const double yl = g.c0 * static_cast<double>(i) / 32.0;
        const Vec2 xl(-scale * p.Z, g.b_left_lower + yl);
        const Vec2 al = carrier.velocity(xl);
        dev = std::max(dev, std::abs(al.x - carrier.left_profile().value(
                                                 yl)) / phi);
        dev = std::max(dev, std::abs(al.y) / phi);
      }
    }
    add("poiseuille_far_match", dev, 1e-14, dev <= 1e-14);
  }

  // The carrier vanishes identically on the wall of the middle region.
  {
    double worst = 0.0;
    const double ar = carrier.blend_right_anchor();
    const double al = carrier.blend_left_anchor();
    if (ar + al > 0.0) {
      for (int i = 0; i <= 64; ++i) {
        const double x = -al + (ar + al) * i / 64.0;
        const Vec2 w(x, carrier.geometry().f_low(x));
        worst = std::max(worst, carrier.velocity(w).norm() / phi);
      }
    }
    add("wall_vanish_middle", worst, 1e-15, worst <= 1e-15);
  }

  // Divergence, slip, and section fluxes.
  const double div_res = divergence_residual(carrier, mesh);
  add("divergence_residual", div_res, 1e-8, div_res <= 1e-8);
  const BoundaryResidual br = slip_bc_residual(carrier, carrier.alpha());
  add("slip_robin", br.robin, 1e-9, br.robin <= 1e-9);
  add("slip_normal", br.normal, 1e-12, br.normal <= 1e-12);
  {
    double dev = 0.0;
    for (double x1 : {-2.0 * p.Z, -0.5 * p.Z, 0.0, 0.5 * p.Z, 2.0 * p.Z})
      dev = std::max(dev,
                     std::abs(carrier.section_flux(x1) - phi) / phi);
    add("section_flux_dev", dev, 1e-8, dev <= 1e-8);
  }

  return items;
}

}  // namespace leray
