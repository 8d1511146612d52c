#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "entmin/errors.hpp"

namespace entmin {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Interval of finiteness of a scalar convex function. Endpoints may be
/// infinite; line searches treat the interval as open.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double s) const { return s > lo && s < hi; }
};

/// Deterministic pairwise summation. Fixed reduction order, so results are
/// bit-reproducible and the rounding error grows like log(n).
inline double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

/// Sums f(i) for i in [0, n) with the same pairwise order as above.
template <typename F>
double pairwise_sum_indexed(std::size_t n, F&& f) {
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i] = f(i);
  return pairwise_sum(terms);
}

struct MaximizeResult {
  double arg = 0.0;
  double value = -kInf;
  bool unbounded = false;
};

namespace detail {

/// Golden-section ascent of a concave function on [a, b]. Values may be
/// -inf near the edges; the maximizer must be interior or at an edge limit.
template <typename F>
MaximizeResult golden_section_max(F&& g, double a, double b, double ga,
                                  double gb, int max_iter) {
  constexpr double kGolden = 0.6180339887498949;  // (sqrt(5)-1)/2
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double g1 = g(x1);
  double g2 = g(x2);
  double best_x = ga >= gb ? a : b;
  double best_v = ga >= gb ? ga : gb;
  for (int it = 0; it < max_iter; ++it) {
    if (g1 >= g2) {
      b = x2;
      x2 = x1;
      g2 = g1;
      x1 = b - kGolden * (b - a);
      g1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      g1 = g2;
      x2 = a + kGolden * (b - a);
      g2 = g(x2);
    }
    if (b - a <= 1e-14 * (1.0 + std::abs(a) + std::abs(b))) break;
  }
  if (g1 > best_v) {
    best_v = g1;
    best_x = x1;
  }
  if (g2 > best_v) {
    best_v = g2;
    best_x = x2;
  }
  return {best_x, best_v, false};
}

}  // namespace detail

/// Maximizes a concave extended-real function over the interior of `dom`.
/// `start` must have a finite value. Declares the problem unbounded when the
/// objective keeps climbing past 1/tol at the expanding bracket edge.
template <typename F>
MaximizeResult maximize_concave(F&& g, Interval dom, double start, double tol,
                                int max_iter = 200) {
  double c = start;
  double gc = g(c);
  if (!std::isfinite(gc)) {
    throw BracketFailure("maximize_concave: start point has no finite value");
  }
  const double unbounded_level = 1.0 / std::max(tol, 1e-16);

  // Walks outward from `from` past `c`; geometric steps toward an infinite
  // edge, geometric approach toward a finite one.
  auto advance = [&](double from, double step_sign) {
    const double edge = step_sign > 0 ? dom.hi : dom.lo;
    double step = std::max(1.0, 0.5 * std::abs(from));
    double x = from + step_sign * step;
    if (std::isfinite(edge)) {
      const double gap = std::abs(edge - from);
      if (std::abs(x - from) >= 0.5 * gap) x = from + step_sign * 0.5 * gap;
    }
    return x;
  };

  // Expand to the right while the objective climbs.
  double b = advance(c, +1.0);
  double gb = g(b);
  double a = advance(c, -1.0);
  double ga = g(a);
  int guard = 0;
  while (gb > gc) {
    a = c;
    ga = gc;
    c = b;
    gc = gb;
    b = advance(c, +1.0);
    gb = g(b);
    if (gc > unbounded_level && !std::isfinite(dom.hi)) {
      return {c, kInf, true};
    }
    if (std::abs(b - c) <= 1e-14 * (1.0 + std::abs(c))) break;
    if (++guard > 4000) {
      throw BracketFailure("maximize_concave: right expansion did not settle");
    }
  }
  guard = 0;
  while (ga > gc) {
    b = c;
    gb = gc;
    c = a;
    gc = ga;
    a = advance(c, -1.0);
    ga = g(a);
    if (gc > unbounded_level && !std::isfinite(dom.lo)) {
      return {c, kInf, true};
    }
    if (std::abs(c - a) <= 1e-14 * (1.0 + std::abs(c))) break;
    if (++guard > 4000) {
      throw BracketFailure("maximize_concave: left expansion did not settle");
    }
  }

  MaximizeResult res = detail::golden_section_max(g, a, b, ga, gb, max_iter);
  if (gc > res.value) {
    res.value = gc;
    res.arg = c;
  }
  return res;
}

/// Centered finite difference of a scalar function.
template <typename F>
double central_difference(F&& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace entmin
