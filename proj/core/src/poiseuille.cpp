#include "leray/poiseuille.hpp"

#include <cmath>

#include "leray/errors.hpp"

namespace leray {

PoiseuilleProfile::PoiseuilleProfile(double phi, double alpha,
                                     ProfileSide side, double width)
    : phi_(phi), alpha_(alpha), width_(width), side_(side) {
  if (std::isnan(phi) || std::isinf(phi))
    throw ParameterError("PoiseuilleProfile: flux must be finite");
  if (std::isnan(alpha) || alpha < 0.0)
    throw ParameterError("PoiseuilleProfile: alpha must be >= 0 (or +inf)");
  if (!(width > 0.0))
    throw ParameterError("PoiseuilleProfile: width must be positive");
  if (side == ProfileSide::kRight && width != 1.0)
    throw ParameterError("PoiseuilleProfile: right profile has width 1");

  const double c0 = width_;
  if (no_slip()) {
    // 6 phi y (c0 - y) / c0^3
    const double k = 6.0 * phi_ / (c0 * c0 * c0);
    a_ = 0.0;
    b_ = k * c0;
    c_ = -k;
  } else {
    const double k = 6.0 * phi_ / (c0 * c0 * (6.0 + c0 * alpha_));
    a_ = k * c0;
    b_ = k * alpha_ * c0;
    c_ = -k * alpha_;
  }
}

bool PoiseuilleProfile::no_slip() const { return std::isinf(alpha_); }

double PoiseuilleProfile::value(double y) const {
  if (y < -1e-12 || y > width_ + 1e-12)
    throw DomainError("PoiseuilleProfile: coordinate outside [0, width]");
  return a_ + y * (b_ + y * c_);
}

double PoiseuilleProfile::deriv(double y) const {
  if (y < -1e-12 || y > width_ + 1e-12)
    throw DomainError("PoiseuilleProfile: coordinate outside [0, width]");
  return b_ + 2.0 * c_ * y;
}

double PoiseuilleProfile::integral(double y) const {
  if (y < -1e-12 || y > width_ + 1e-12)
    throw DomainError("PoiseuilleProfile: coordinate outside [0, width]");
  return y * (a_ + y * (b_ / 2.0 + y * c_ / 3.0));
}

double PoiseuilleProfile::max_abs_deriv() const {
  return std::max(std::abs(b_), std::abs(b_ + 2.0 * c_ * width_));
}

DerivativeBoundReport derivative_bound_check(const PoiseuilleProfile& profile) {
  DerivativeBoundReport report;
  report.max_abs_deriv = profile.max_abs_deriv();
  const double alpha = profile.alpha();
  const double phi = std::abs(profile.flux());
  report.scale = std::isinf(alpha) ? phi : alpha * phi / (1.0 + alpha);
  report.ratio = report.scale > 0.0 ? report.max_abs_deriv / report.scale : 0.0;
  return report;
}

}  // namespace leray
