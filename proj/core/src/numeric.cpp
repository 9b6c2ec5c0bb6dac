#include "leray/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "leray/errors.hpp"

namespace leray {

double smoothstep5(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double smoothstep5_d1(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 30.0 * x * x * (1.0 - x) * (1.0 - x);
}

double smoothstep5_d2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
}

namespace {

GaussRule compute_gauss(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev initial guess, refined by Newton on the Legendre recurrence.
    double z = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[order - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

std::map<int, GaussRule>& gauss_cache() {
  static std::map<int, GaussRule> cache;
  return cache;
}

std::mutex& gauss_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw ParameterError("gauss_legendre: order must be >= 1");
  std::lock_guard<std::mutex> lock(gauss_mutex());
  auto& cache = gauss_cache();
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss(order)).first;
  return it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a,
                       double b, int order) {
  const GaussRule& rule = gauss_legendre(order);
  const double mid = 0.5 * (a + b);
  const double hal = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < order; ++i)
    sum += rule.weights[i] * f(mid + hal * rule.nodes[i]);
  return hal * sum;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

namespace {

// Solve a tridiagonal system in place (Thomas algorithm).
void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                       std::vector<double>& sup, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<double> values,
                         Boundary boundary)
    : knots_(std::move(knots)), values_(std::move(values)) {
  const std::size_t n = knots_.size();
  if (n < 2 || values_.size() != n)
    throw ParameterError("CubicSpline: need at least two knots and matching values");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(knots_[i] < knots_[i + 1]))
      throw ParameterError("CubicSpline: knots must be strictly increasing");

  m_.assign(n, 0.0);
  if (n == 2) return;  // linear interpolant

  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = knots_[i + 1] - knots_[i];

  if (n == 3) {
    // A single parabola through three points (also the not-a-knot limit).
    const double m = 2.0 *
        ((values_[2] - values_[1]) / h[1] - (values_[1] - values_[0]) / h[0]) /
        (h[0] + h[1]);
    if (boundary == Boundary::kNotAKnot) {
      m_[0] = m_[1] = m_[2] = m;
    }
    if (boundary == Boundary::kNatural) m_[1] = 1.5 * m;
    return;
  }

  const std::size_t k = n - 2;  // unknowns M_1 .. M_{n-2}
  std::vector<double> sub(k, 0.0), diag(k, 0.0), sup(k, 0.0), rhs(k, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const std::size_t r = i - 1;
    sub[r] = h[i - 1] / 6.0;
    diag[r] = (h[i - 1] + h[i]) / 3.0;
    sup[r] = h[i] / 6.0;
    rhs[r] = (values_[i + 1] - values_[i]) / h[i] -
             (values_[i] - values_[i - 1]) / h[i - 1];
  }

  if (boundary == Boundary::kNotAKnot) {
    // Fold the end conditions (third derivative continuous at the first and
    // last interior knots) into the first and last interior equations.
    const double r0 = h[0] / h[1];
    diag[0] += (h[0] / 6.0) * (1.0 + r0);
    sup[0] -= (h[0] / 6.0) * r0;
    const double r1 = h[n - 2] / h[n - 3];
    diag[k - 1] += (h[n - 2] / 6.0) * (1.0 + r1);
    sub[k - 1] -= (h[n - 2] / 6.0) * r1;
  }

  solve_tridiagonal(sub, diag, sup, rhs);
  for (std::size_t i = 0; i < k; ++i) m_[i + 1] = rhs[i];

  if (boundary == Boundary::kNotAKnot) {
    m_[0] = m_[1] + (h[0] / h[1]) * (m_[1] - m_[2]);
    m_[n - 1] = m_[n - 2] + (h[n - 2] / h[n - 3]) * (m_[n - 2] - m_[n - 3]);
  }
}

std::size_t CubicSpline::interval(double x) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.begin()) return 0;
  std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
  if (i + 1 >= knots_.size()) i = knots_.size() - 2;
  return i;
}

double CubicSpline::value(double x) const {
  if (x < knots_.front()) return values_.front() + deriv(knots_.front()) * (x - knots_.front());
  if (x > knots_.back()) return values_.back() + deriv(knots_.back()) * (x - knots_.back());
  const std::size_t i = interval(x);
  const double h = knots_[i + 1] - knots_[i];
  const double a = knots_[i + 1] - x;
  const double b = x - knots_[i];
  return m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) +
         (values_[i] / h - m_[i] * h / 6.0) * a +
         (values_[i + 1] / h - m_[i + 1] * h / 6.0) * b;
}

double CubicSpline::deriv(double x) const {
  const double lo = knots_.front();
  const double hi = knots_.back();
  const double xc = std::min(std::max(x, lo), hi);
  const std::size_t i = interval(xc);
  const double h = knots_[i + 1] - knots_[i];
  const double a = knots_[i + 1] - xc;
  const double b = xc - knots_[i];
  return -m_[i] * a * a / (2.0 * h) + m_[i + 1] * b * b / (2.0 * h) +
         (values_[i + 1] - values_[i]) / h - (m_[i + 1] - m_[i]) * h / 6.0;
}

double CubicSpline::deriv2(double x) const {
  if (x < knots_.front() || x > knots_.back()) return 0.0;
  const std::size_t i = interval(x);
  const double h = knots_[i + 1] - knots_[i];
  return m_[i] * (knots_[i + 1] - x) / h + m_[i + 1] * (x - knots_[i]) / h;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ParameterError("fit_line: need at least two samples");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ParameterError("fit_line: all abscissae equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    const double ss_res = syy - fit.slope * sxy;
    fit.r_squared = 1.0 - std::max(0.0, ss_res) / syy;
  }
  return fit;
}

}  // namespace leray
