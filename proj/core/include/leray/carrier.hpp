#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "leray/geometry.hpp"
#include "leray/mesh.hpp"
#include "leray/numeric.hpp"
#include "leray/poiseuille.hpp"

namespace leray {

// Flux carrier: a divergence-free field a with prescribed section flux phi
// that satisfies the Navier-slip condition on both walls, equals the end
// Poiseuille profiles beyond |x1| = Z, and is supported in a thin collar of
// the lower wall in between.  Built from a mollified logarithmic cutoff
// sigma and a long smoothstep blend eta.

// Construction parameters.  epsilon_small is the mollification radius
// eps*exp(-1/eps)/3 and Z = exp(2/eps) is the blend length; both are derived
// from eps by make_carrier_params.
struct CarrierParams {
  double phi = 1.0;            // prescribed flux (> 0)
  double eps = 0.3;            // layer-construction parameter, 2*eps < delta
  double delta = 1.0;          // wall clearance budget (lower/upper distance)
  double epsilon_small = 0.0;  // mollification radius
  double Z = 0.0;              // far-field matching abscissa
};

// Default layer parameter min(delta/2.2, 0.3): keeps the profile tables
// well-conditioned while respecting 2*eps < delta.
double default_carrier_eps(double delta);

// Conservative lower bound on the distance between the two walls:
// 0.9 * (minimum vertical width) * (minimum slope cosine).
double default_carrier_delta(const StripGeometry& geometry);

// Validates phi > 0, 0 < eps < delta/2 (ParameterError) and fills in the
// derived fields; NumericsError when exp(1/eps) or exp(2/eps) is not
// representable.
CarrierParams make_carrier_params(double phi, double eps, double delta);

// Classical unit-radius bump mollifier exp(1/(x^2-1)) on (-1,1), normalized
// to unit mass, and its first three derivatives.  Exactly zero outside.
double mollifier_value(double x);
double mollifier_d1(double x);
double mollifier_d2(double x);
double mollifier_d3(double x);

// Mollified cutoff sigma(t): -phi below the collar, 0 above it, with
// sigma' = C~ phi (mollifier * tau) for tau(s) = eps/s on
// (eps e^{-1/eps}, eps).  Values come from a log-spaced cumulative table;
// derivatives are always evaluated by direct quadrature of the convolution
// so that the narrow mollification edges are exact.
class SigmaTable {
 public:
  explicit SigmaTable(const CarrierParams& params);

  double sigma(double t) const;     // -phi for t <= support_lo, 0 above hi
  double sigma_d1(double t) const;  // >= 0, supported on [lo, hi]
  double sigma_d2(double t) const;
  double sigma_d3(double t) const;

  double c_tilde() const { return c_tilde_; }
  double support_lo() const { return support_lo_; }  // 2 epsilon_small
  double support_hi() const { return support_hi_; }  // eps + epsilon_small

  // Quadrature breakpoints adapted to the sigma profile: dyadic below,
  // mollification-scale steps across the upper edge, then t_max.  Strictly
  // increasing, first entry 0, last entry t_max.
  std::vector<double> panel_edges(double t_max) const;

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& sigma_at_nodes() const { return values_; }
  const CarrierParams& params() const { return params_; }

 private:
  double convolution(double t, int deriv) const;

  CarrierParams params_;
  double mol_radius_ = 0.0;   // epsilon_small
  double support_lo_ = 0.0;
  double support_hi_ = 0.0;
  double c_tilde_ = 1.0;
  std::vector<double> nodes_;      // log-spaced sample abscissas
  std::vector<double> values_;     // sigma at the nodes
  CubicSpline log_spline_;         // sigma as a function of ln t
};

// Table construction with the invariant checks applied.
SigmaTable build_sigma(const CarrierParams& params);

// The carrier field itself.  Immutable after construction; evaluation is
// pure.  The middle region uses the analytic projection onto the lower wall
// graph; the two end regions blend the layer profile into the Poiseuille
// profiles with the long smoothstep eta.
class FluxCarrier {
 public:
  FluxCarrier(std::shared_ptr<const StripGeometry> geometry,
              CarrierParams params, double alpha);

  // Field value / spatial gradient at a point of the closed strip
  // (DomainError outside).  gradient()(i,j) = d a_i / d x_j.
  Vec2 velocity(const Vec2& x) const;
  Mat2 gradient(const Vec2& x) const;

  // Flux of a through the vertical section at x1 (quadrature).
  double section_flux(double x1) const;

  // Blend weight toward the end state at station x1 (0 in the middle
  // region, exactly 1 for |x1| >= Z) and its signed x1-derivatives.
  double eta(double x1) const;
  double eta_d1(double x1) const;
  double eta_d2(double x1) const;

  const CarrierParams& params() const { return params_; }
  const SigmaTable& sigma() const { return sigma_; }
  const StripGeometry& geometry() const { return *geometry_; }
  std::shared_ptr<const StripGeometry> geometry_ptr() const {
    return geometry_;
  }
  const PoiseuilleProfile& right_profile() const { return right_; }
  const PoiseuilleProfile& left_profile() const { return left_; }
  double alpha() const { return alpha_; }
  double blend_right_anchor() const { return anchor_right_; }
  double blend_left_anchor() const { return anchor_left_; }  // in -x1 units

 private:
  enum class Region { kLeft, kMiddle, kRight };

  Region region_of(double x1) const;
  void check_domain(const Vec2& x, double f_low, double f_up) const;
  double q_right(double y) const;  // int_0^y (P_R - sigma')
  double q_left(double y) const;

  struct WallFrame {
    double xi = 0.0;     // abscissa of the projection foot
    double t = 0.0;      // distance to the lower wall
    Vec2 tau;            // unit tangent, +x1 orientation
    Vec2 n;              // unit normal into the domain
    double kappa = 0.0;  // signed curvature at the foot
    double gamma = 0.0;  // 1/(1 - t kappa)
  };
  WallFrame project_lower(const Vec2& x) const;

  std::shared_ptr<const StripGeometry> geometry_;
  CarrierParams params_;
  double alpha_;
  SigmaTable sigma_;
  PoiseuilleProfile right_;
  PoiseuilleProfile left_;
  double anchor_right_ = 0.0;  // blend start on the right, max x_flat_right
  double anchor_left_ = 0.0;   // blend start in -x1 units, max -x_flat_left
  double b_right_ = 0.0;       // lower wall height on the right end
  double b_left_ = 0.0;
  double min_width_ = 0.0;
  double cos_min_ = 1.0;
  double tan_max_ = 0.0;
  bool horizontal_walls_ = false;
};

// Named evaluation operation (same as carrier.velocity(x)).
Vec2 eval_carrier(const FluxCarrier& carrier, const Vec2& x);

// Maximum over mesh triangles of |contour integral of a . n| / area: a
// control-volume divergence residual that is independent of the analytic
// cancellations used inside gradient().
double divergence_residual(const FluxCarrier& carrier, const Mesh& mesh);

// Wall residuals of the slip condition: robin = |2 (S a n).tan + alpha
// a.tan| (|a.tan| when alpha is infinite), normal = |a.n|; maxima over
// dense samples of both walls.
struct BoundaryResidual {
  double robin = 0.0;
  double normal = 0.0;
};
BoundaryResidual slip_bc_residual(const FluxCarrier& carrier, double alpha);
BoundaryResidual slip_bc_residual(const FluxCarrier& carrier, double alpha,
                                  double x_lo, double x_hi);

// Divergence-free test field built from a stream function that vanishes on
// both walls; value/grad are closures, the remaining fields describe its
// quadrature features (support, envelope kinks, oscillation period,
// near-wall layer scale).
struct ProbeField {
  std::function<Vec2(const Vec2&)> value;
  std::function<Mat2(const Vec2&)> grad;
  double x_lo = 0.0;
  double x_hi = 0.0;
  double collar_scale = 0.0;
  double osc_wavelength = 0.0;
  std::vector<double> x1_breakpoints;
  std::vector<double> x2_feature_heights;  // above the lower wall
};

// Deterministic family of count wall-layer-adapted oscillatory fields
// supported in |x1| <= zeta, built at layer scale collar_scale (normally
// the carrier eps, so the family follows the layer when eps changes).
std::vector<ProbeField> make_probe_fields(const StripGeometry& geometry,
                                          int count, double zeta,
                                          double collar_scale,
                                          std::uint64_t seed);

// max |int v . grad(a) v| / |grad v|_{L2}^2 over the fields, reported with
// the theoretical scale phi (eps + alpha/(1+alpha)).
struct ProbeResult {
  double max_ratio = 0.0;
  double bound_scale = 0.0;
  std::vector<double> ratios;
};
ProbeResult trilinear_smallness_probe(const FluxCarrier& carrier,
                                      const std::vector<ProbeField>& fields);

// One certified property: measured value against its bound.
struct CertificationItem {
  std::string property;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Full certification sweep: sigma plateaus and normalization, derivative
// envelopes, divergence and slip residuals, section fluxes, far-field
// match, blend bounds.  The mesh is used for the control-volume divergence
// check.
std::vector<CertificationItem> certify_carrier(const FluxCarrier& carrier,
                                               const Mesh& mesh);

}  // namespace leray
