#ifndef TRAJMAP_POLYFIT_HPP
#define TRAJMAP_POLYFIT_HPP

#include <span>
#include <vector>

#include "trajmap/geo.hpp"

namespace trajmap {

/// Condition estimate of the scaled normal matrix above which a fit is rejected.
inline constexpr double kMaxConditionNumber = 1e12;

/**
 * A planar curve given by two polynomials of the same degree over one scalar
 * parameter (time in seconds, or arc distance in meters).
 *
 * Coefficients are stored highest power first, in the caller's parameter units:
 * x(s) = a[0]·s^d + a[1]·s^(d-1) + ... + a[d].
 */
class Curve2D {
 public:
  /// The zero curve of degree 0 over [0, 0].
  Curve2D();
  Curve2D(std::vector<double> coeffs_x, std::vector<double> coeffs_y, double s_lo, double s_hi);

  int degree() const { return static_cast<int>(coeffs_x_.size()) - 1; }
  std::span<const double> coeffs_x() const { return coeffs_x_; }
  std::span<const double> coeffs_y() const { return coeffs_y_; }
  double s_lo() const { return s_lo_; }
  double s_hi() const { return s_hi_; }

  /// Horner evaluation; no range check.
  PlanarPoint at(double s) const;
  /// (dx/ds, dy/ds).
  PlanarPoint derivative(double s) const;

  /// Same polynomials, different valid parameter range.
  Curve2D with_range(double s_lo, double s_hi) const;

  friend bool operator==(const Curve2D&, const Curve2D&) = default;

 private:
  std::vector<double> coeffs_x_;
  std::vector<double> coeffs_y_;
  double s_lo_ = 0.0;
  double s_hi_ = 0.0;
};

struct CurveEvaluation {
  PlanarPoint point;
  bool extrapolated = false;  ///< s outside the curve's param range
};

CurveEvaluation evaluate(const Curve2D& c, double s);

/// Analytic derivative (dx, dy) at s.
PlanarPoint derivative_at(const Curve2D& c, double s);

/// n ≥ 2 points at s0 + k·(s1 − s0)/(n − 1).
std::vector<PlanarPoint> sample_uniform(const Curve2D& c, double s0, double s1, int n);

/// Least-squares fit of x(s) and y(s), independently, at the given degree.
/// Throws Underdetermined for too few samples and IllConditioned when the
/// scaled normal matrix has condition above kMaxConditionNumber.
Curve2D fit_curve(std::span<const TimedSample> samples, int degree);
Curve2D fit_curve(std::span<const double> params, std::span<const PlanarPoint> points, int degree);

/// Equality constraint curve(s) == p used by fit_curve_pinned.
struct CurvePin {
  double s = 0.0;
  PlanarPoint p;
};

/// Least-squares fit subject to passing exactly through every pin. The free
/// part is fitted in the basis w(u)·u^j where w vanishes at the pins, so the
/// constraints hold by construction. Param range covers samples and pins.
Curve2D fit_curve_pinned(std::span<const double> params, std::span<const PlanarPoint> points, int degree,
                         std::span<const CurvePin> pins);

/// Σ |curve(s_i) − p_i|² over the samples.
double sum_squared_residuals(const Curve2D& c, std::span<const double> params,
                             std::span<const PlanarPoint> points);

/// Arc length of the curve between s0 and s1 (signed: negative when s1 < s0).
double arc_length(const Curve2D& c, double s0, double s1);

}  // namespace trajmap

#endif  // TRAJMAP_POLYFIT_HPP
