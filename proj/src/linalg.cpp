#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trajmap::detail {

Matrix gram(const Matrix& a) {
  Matrix g(a.cols(), a.cols());
  for (std::size_t i = 0; i < a.cols(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, i) * a(r, j);
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

std::vector<double> symmetric_eigenvalues(Matrix s) {
  const std::size_t n = s.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        total += s(i, j) * s(i, j);
        if (i != j) off += s(i, j) * s(i, j);
      }
    }
    if (off <= 1e-30 * total) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = s(p, q);
        if (apq == 0.0) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s(k, p);
          const double skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s(p, k);
          const double sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = s(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double normal_condition(const Matrix& a) {
  if (a.cols() == 0) return 1.0;
  const auto ev = symmetric_eigenvalues(gram(a));
  const double hi = ev.back();
  const double lo = ev.front();
  if (!(hi > 0.0) || !(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

std::vector<std::vector<double>> least_squares(Matrix a, std::vector<std::vector<double>> rhs) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<double> v(m);
  for (std::size_t k = 0; k < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k; i < m; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (a(k, k) > 0) alpha = -alpha;
    for (std::size_t i = 0; i < m; ++i) v[i] = i < k ? 0.0 : a(i, k);
    v[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < m; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    for (std::size_t j = k; j < n; ++j) {
      double d = 0.0;
      for (std::size_t i = k; i < m; ++i) d += v[i] * a(i, j);
      d = 2.0 * d / vnorm2;
      for (std::size_t i = k; i < m; ++i) a(i, j) -= d * v[i];
    }
    for (auto& b : rhs) {
      double d = 0.0;
      for (std::size_t i = k; i < m; ++i) d += v[i] * b[i];
      d = 2.0 * d / vnorm2;
      for (std::size_t i = k; i < m; ++i) b[i] -= d * v[i];
    }
  }
  std::vector<std::vector<double>> out;
  out.reserve(rhs.size());
  for (const auto& b : rhs) {
    std::vector<double> x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
      double s = b[ii];
      for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
      x[ii] = s / a(ii, ii);
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace trajmap::detail
