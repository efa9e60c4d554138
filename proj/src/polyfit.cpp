#include "trajmap/polyfit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "linalg.hpp"
#include "trajmap/error.hpp"

namespace trajmap {

namespace {

using Poly = std::vector<double>;  // ascending powers

Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly add(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

double eval_ascending(const Poly& p, double u) {
  double acc = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) acc = acc * u + p[i];
  return acc;
}

// q(u) with u = alpha·t + beta, rewritten in powers of t.
Poly compose_linear(const Poly& q, double alpha, double beta) {
  Poly r{q.back()};
  const Poly lin{beta, alpha};
  for (std::size_t j = q.size() - 1; j-- > 0;) {
    r = mul(r, lin);
    r[0] += q[j];
  }
  return r;
}

std::vector<double> highest_first(Poly p, std::size_t len) {
  p.resize(len, 0.0);
  std::reverse(p.begin(), p.end());
  return p;
}

double horner(std::span<const double> c, double s) {
  double acc = 0.0;
  for (double a : c) acc = acc * s + a;
  return acc;
}

double horner_derivative(std::span<const double> c, double s) {
  const int d = static_cast<int>(c.size()) - 1;
  double acc = 0.0;
  for (int i = 0; i < d; ++i) acc = acc * s + c[i] * (d - i);
  return acc;
}

// Lagrange interpolant through (u_k, v_k), ascending.
Poly interpolant(std::span<const double> u, std::span<const double> v) {
  Poly result{0.0};
  for (std::size_t k = 0; k < u.size(); ++k) {
    Poly basis{1.0};
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (j == k) continue;
      const double den = u[k] - u[j];
      basis = mul(basis, Poly{-u[j] / den, 1.0 / den});
    }
    for (double& b : basis) b *= v[k];
    result = add(result, basis);
  }
  return result;
}

}  // namespace

Curve2D::Curve2D() : coeffs_x_{0.0}, coeffs_y_{0.0} {}

Curve2D::Curve2D(std::vector<double> coeffs_x, std::vector<double> coeffs_y, double s_lo, double s_hi)
    : coeffs_x_(std::move(coeffs_x)), coeffs_y_(std::move(coeffs_y)), s_lo_(s_lo), s_hi_(s_hi) {
  if (coeffs_x_.empty() || coeffs_x_.size() != coeffs_y_.size()) {
    throw Error(ErrorKind::InvalidInput, "curve coefficient vectors must be non-empty and equally long");
  }
  if (!std::isfinite(s_lo_) || !std::isfinite(s_hi_) || s_lo_ > s_hi_) {
    throw Error(ErrorKind::InvalidInput, "curve parameter range must be finite with lo <= hi");
  }
  for (std::size_t i = 0; i < coeffs_x_.size(); ++i) {
    if (!std::isfinite(coeffs_x_[i]) || !std::isfinite(coeffs_y_[i])) {
      throw Error(ErrorKind::InvalidInput, "curve coefficients must be finite");
    }
  }
}

PlanarPoint Curve2D::at(double s) const { return {horner(coeffs_x_, s), horner(coeffs_y_, s)}; }

PlanarPoint Curve2D::derivative(double s) const {
  return {horner_derivative(coeffs_x_, s), horner_derivative(coeffs_y_, s)};
}

Curve2D Curve2D::with_range(double s_lo, double s_hi) const {
  return Curve2D(coeffs_x_, coeffs_y_, s_lo, s_hi);
}

CurveEvaluation evaluate(const Curve2D& c, double s) {
  return {c.at(s), s < c.s_lo() || s > c.s_hi()};
}

PlanarPoint derivative_at(const Curve2D& c, double s) { return c.derivative(s); }

std::vector<PlanarPoint> sample_uniform(const Curve2D& c, double s0, double s1, int n) {
  if (n < 2 || !(s0 < s1)) {
    throw Error(ErrorKind::InvalidInput, "sample_uniform needs n >= 2 and s0 < s1");
  }
  std::vector<PlanarPoint> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(c.at(k + 1 == n ? s1 : s0 + k * (s1 - s0) / (n - 1)));
  return out;
}

Curve2D fit_curve(std::span<const TimedSample> samples, int degree) {
  std::vector<double> params;
  std::vector<PlanarPoint> points;
  params.reserve(samples.size());
  points.reserve(samples.size());
  for (const auto& s : samples) {
    params.push_back(s.t);
    points.push_back(s.p);
  }
  return fit_curve_pinned(params, points, degree, {});
}

Curve2D fit_curve(std::span<const double> params, std::span<const PlanarPoint> points, int degree) {
  return fit_curve_pinned(params, points, degree, {});
}

Curve2D fit_curve_pinned(std::span<const double> params, std::span<const PlanarPoint> points, int degree,
                         std::span<const CurvePin> pins) {
  if (degree < 0) throw Error(ErrorKind::InvalidInput, "polynomial degree must be non-negative");
  if (params.size() != points.size()) {
    throw Error(ErrorKind::InvalidInput, "parameter and point counts differ");
  }
  const std::size_t n_coeffs = static_cast<std::size_t>(degree) + 1;
  if (pins.size() > n_coeffs) {
    throw Error(ErrorKind::Underdetermined, "more pins than polynomial coefficients");
  }
  const std::size_t n_free = n_coeffs - pins.size();
  if (params.size() < n_free || params.size() + pins.size() < n_coeffs) {
    std::ostringstream os;
    os << params.size() << " samples cannot determine a degree-" << degree << " curve";
    throw Error(ErrorKind::Underdetermined, os.str());
  }

  double lo = params.empty() ? pins.front().s : params.front();
  double hi = lo;
  for (double t : params) {
    if (!std::isfinite(t)) throw Error(ErrorKind::InvalidInput, "non-finite curve parameter");
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  for (const auto& pin : pins) {
    lo = std::min(lo, pin.s);
    hi = std::max(hi, pin.s);
  }
  for (const auto& p : points) {
    if (!is_finite(p)) throw Error(ErrorKind::InvalidInput, "non-finite sample coordinate");
  }

  const double mid = 0.5 * (lo + hi);
  double half = 0.5 * (hi - lo);
  if (!(half > 0.0)) {
    if (degree == 0 && pins.empty()) {
      half = 1.0;
    } else {
      throw Error(ErrorKind::IllConditioned, "all sample parameters are identical");
    }
  }
  auto scale = [&](double t) { return (t - mid) / half; };

  // w(u) vanishes at every pin; l(u) interpolates the pinned values.
  std::vector<double> pin_u, pin_x, pin_y;
  Poly weight{1.0};
  for (const auto& pin : pins) {
    const double u = scale(pin.s);
    pin_u.push_back(u);
    pin_x.push_back(pin.p.x);
    pin_y.push_back(pin.p.y);
    weight = mul(weight, Poly{-u, 1.0});
  }
  const Poly lx = pins.empty() ? Poly{0.0} : interpolant(pin_u, pin_x);
  const Poly ly = pins.empty() ? Poly{0.0} : interpolant(pin_u, pin_y);

  Poly qx = lx;
  Poly qy = ly;
  if (n_free > 0) {
    detail::Matrix a(params.size(), n_free);
    std::vector<std::vector<double>> rhs(2, std::vector<double>(params.size()));
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double u = scale(params[i]);
      const double w = eval_ascending(weight, u);
      double pw = 1.0;
      for (std::size_t j = 0; j < n_free; ++j) {
        a(i, j) = w * pw;
        pw *= u;
      }
      rhs[0][i] = points[i].x - eval_ascending(lx, u);
      rhs[1][i] = points[i].y - eval_ascending(ly, u);
    }
    const double cond = detail::normal_condition(a);
    if (!(cond <= kMaxConditionNumber)) {
      std::ostringstream os;
      os << "normal matrix condition estimate " << cond << " exceeds " << kMaxConditionNumber;
      throw Error(ErrorKind::IllConditioned, os.str());
    }
    const auto sol = detail::least_squares(std::move(a), std::move(rhs));
    qx = add(qx, mul(weight, sol[0]));
    qy = add(qy, mul(weight, sol[1]));
  }
  qx.resize(n_coeffs, 0.0);
  qy.resize(n_coeffs, 0.0);

  const double alpha = 1.0 / half;
  const double beta = -mid / half;
  auto cx = highest_first(compose_linear(qx, alpha, beta), n_coeffs);
  auto cy = highest_first(compose_linear(qy, alpha, beta), n_coeffs);
  return Curve2D(std::move(cx), std::move(cy), lo, hi);
}

double sum_squared_residuals(const Curve2D& c, std::span<const double> params,
                             std::span<const PlanarPoint> points) {
  double sse = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const PlanarPoint r = c.at(params[i]) - points[i];
    sse += r.x * r.x + r.y * r.y;
  }
  return sse;
}

double arc_length(const Curve2D& c, double s0, double s1) {
  static constexpr std::array<double, 8> kNodes = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
      0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> kWeights = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
      0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  if (s0 == s1) return 0.0;
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(s1 - s0) / 2.0)));
  const double step = (s1 - s0) / pieces;
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double a = s0 + k * step;
    const double mid = a + 0.5 * step;
    double part = 0.0;
    for (std::size_t i = 0; i < kNodes.size(); ++i) {
      part += kWeights[i] * norm(c.derivative(mid + 0.5 * step * kNodes[i]));
    }
    total += 0.5 * step * part;
  }
  return total;
}

}  // namespace trajmap
