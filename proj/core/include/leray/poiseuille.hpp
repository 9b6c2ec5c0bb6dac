#pragma once

#include <limits>

namespace leray {

// Friction sentinel: the no-slip limit alpha = +infinity.
inline constexpr double kAlphaInfinity =
    std::numeric_limits<double>::infinity();

enum class ProfileSide { kRight, kLeft };

// Closed-form Poiseuille-type end profile under Navier-slip friction alpha.
//
//   right (width 1):   P(y) = (6 phi/(6+alpha)) [alpha(-y^2+y) + 1]
//   left (width c0):   P(y) = (6 phi/(c0^2 (6+c0 alpha))) [alpha(-y^2+c0 y) + c0]
//
// alpha = kAlphaInfinity switches to the analytic no-slip parabola
// 6 phi y (width - y)/width^3.  The profile is stored as the quadratic
// a + b y + c y^2.
class PoiseuilleProfile {
 public:
  // Right profiles must have width 1; left profiles take width = c0 > 0.
  PoiseuilleProfile(double phi, double alpha, ProfileSide side,
                    double width = 1.0);

  double value(double y) const;   // 0 <= y <= width (DomainError otherwise)
  double deriv(double y) const;
  double second_deriv() const { return 2.0 * c_; }
  // Antiderivative int_0^y P; integral(width) = flux.
  double integral(double y) const;

  // C_side = -P'' (the driving pressure-gradient constant).
  double pressure_constant() const { return -2.0 * c_; }
  // max |P'| over [0, width]; attained at a wall.
  double max_abs_deriv() const;

  double flux() const { return phi_; }
  double alpha() const { return alpha_; }
  double width() const { return width_; }
  ProfileSide side() const { return side_; }
  bool no_slip() const;

 private:
  double phi_, alpha_, width_;
  ProfileSide side_;
  double a_ = 0.0, b_ = 0.0, c_ = 0.0;
};

// max |P'| compared against the friction scale alpha phi/(1+alpha)
// (phi in the no-slip limit).  ratio = max/scale, 0 when the scale vanishes.
struct DerivativeBoundReport {
  double max_abs_deriv = 0.0;
  double scale = 0.0;
  double ratio = 0.0;
};
DerivativeBoundReport derivative_bound_check(const PoiseuilleProfile& profile);

}  // namespace leray
