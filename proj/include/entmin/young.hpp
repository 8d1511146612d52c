#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "entmin/errors.hpp"
#include "entmin/ground.hpp"
#include "entmin/numerics.hpp"

namespace entmin {

/// Extended-real map (point-index, scalar) -> value. The point index carries
/// the z-dependence; on a finite ground space "function of z" means "array
/// over grid points".
using PointwiseFn = std::function<double(std::size_t, double)>;

/// Shape of dom gamma* shared by all points, used by the qualification and
/// oracle modules to reason about T dom I.
enum class DensityDomain {
  FullLine,        // gamma* finite on all of R (quadratic)
  ClosedHalfLine,  // dom gamma* = [0, inf)     (Boltzmann variants)
  OpenHalfLine,    // dom gamma* = (0, inf)     (reverse relative entropy)
  Unrecognized,
};

/// Entropy integrand bundle: gamma* (the integrand of I), its conjugate
/// gamma, the derivative gamma', the pointwise minimizer m of gamma*, and
/// the interval of finiteness of gamma.
struct EntropySpec {
  std::string name;
  bool closed_form = true;

  PointwiseFn gamma_star;
  PointwiseFn gamma;
  PointwiseFn gamma_prime;
  /// Second derivative on the interior of dom gamma. Catalog entries supply
  /// it in closed form; numeric specs fall back to finite differences.
  PointwiseFn gamma_second;
  std::function<double(std::size_t)> m;
  std::function<Interval(std::size_t)> dom_gamma;

  DensityDomain density_domain = DensityDomain::Unrecognized;
  /// Analytic Delta_2 flag for catalog entries; empty for numeric specs.
  std::optional<bool> delta2_satisfied;

  double gamma_second_at(std::size_t i, double s) const {
    if (gamma_second) return gamma_second(i, s);
    const Interval dom = dom_gamma(i);
    double h = 1e-6 * (1.0 + std::abs(s));
    if (std::isfinite(dom.hi)) h = std::min(h, 0.25 * (dom.hi - s));
    if (std::isfinite(dom.lo)) h = std::min(h, 0.25 * (s - dom.lo));
    return central_difference([&](double t) { return gamma_prime(i, t); }, s,
                              h);
  }
};

/// The Young-function family built from an entropy: lambda(z,s) =
/// gamma(z,s) - m(z)s, its symmetrization lambda_max = max(lambda(s),
/// lambda(-s)), the one-sided lambda_plus/minus, and the conjugate
/// lambda_star(z,t) = gamma_star(z, t + m(z)).
struct YoungFamily {
  PointwiseFn lambda;
  PointwiseFn lambda_max;
  PointwiseFn lambda_plus;
  PointwiseFn lambda_minus;
  PointwiseFn lambda_star;
  std::function<Interval(std::size_t)> dom_lambda;
  /// dom of lambda_max: dom lambda intersected with its reflection.
  std::function<Interval(std::size_t)> dom_lambda_max;
  std::optional<bool> delta2_satisfied;
};

/// A scalar convex function together with its interval of finiteness.
struct ScalarConvexFn {
  std::function<double(double)> value;
  Interval dom;
};

struct ConjugateValue {
  double value = 0.0;
  /// Maximizer of s -> st - f(s); meaningless when value is +inf.
  double argmax = 0.0;
  bool unbounded = false;
};

/// Convex conjugate f*(t) = sup_s { s t - f(s) } evaluated numerically by
/// bracketing plus golden-section ascent of the concave objective. Returns
/// +inf when the objective is detected unbounded. `tol` is the absolute
/// accuracy of the returned value; f(0) must be finite.
inline ConjugateValue conjugate_numeric_full(const ScalarConvexFn& f, double t,
                                             double tol = 1e-10) {
  if (!(tol > 0.0)) throw InvalidArgument("conjugate_numeric: tol must be > 0");
  auto objective = [&](double s) {
    if (!std::isfinite(s) || !f.dom.contains(s)) return -kInf;
    const double fs = f.value(s);
    return std::isfinite(fs) ? s * t - fs : -kInf;
  };
  // Locate a point with a finite value; f(0) when available, otherwise a
  // geometric probe drifting inward from the domain edges.
  double start = 0.0;
  if (!std::isfinite(objective(start))) {
    bool found = false;
    auto try_start = [&](double s) {
      if (!found && std::isfinite(objective(s))) {
        start = s;
        found = true;
      }
    };
    for (int k = -40; k <= 40 && !found; ++k) {
      const double step = std::pow(2.0, k);
      if (std::isfinite(f.dom.lo)) try_start(f.dom.lo + step);
      if (std::isfinite(f.dom.hi)) try_start(f.dom.hi - step);
      if (!std::isfinite(f.dom.lo) && !std::isfinite(f.dom.hi)) {
        try_start(step);
        try_start(-step);
      }
    }
    if (!found) {
      throw BracketFailure("conjugate_numeric: no finite starting point");
    }
  }
  MaximizeResult res = maximize_concave(objective, f.dom, start, tol);
  if (res.unbounded) return {kInf, 0.0, true};
  return {res.value, res.arg, false};
}

inline double conjugate_numeric(const ScalarConvexFn& f, double t,
                                double tol = 1e-10) {
  return conjugate_numeric_full(f, t, tol).value;
}

namespace detail {

inline double xlogx(double t) { return t > 0.0 ? t * std::log(t) : 0.0; }

inline EntropySpec make_boltzmann(std::string name, Vec mvals) {
  EntropySpec spec;
  spec.name = std::move(name);
  spec.closed_form = true;
  auto mv = std::make_shared<Vec>(std::move(mvals));
  auto mz = [mv](std::size_t i) {
    return (*mv)[mv->size() == 1 ? 0 : static_cast<Eigen::Index>(i)];
  };
  spec.m = mz;
  spec.gamma_star = [mz](std::size_t i, double t) {
    if (t < 0.0) return kInf;
    const double m = mz(i);
    return xlogx(t) - (1.0 + std::log(m)) * t + m;
  };
  spec.gamma = [mz](std::size_t i, double s) {
    return mz(i) * std::expm1(s);
  };
  spec.gamma_prime = [mz](std::size_t i, double s) {
    return mz(i) * std::exp(s);
  };
  spec.gamma_second = spec.gamma_prime;
  spec.dom_gamma = [](std::size_t) { return Interval{-kInf, kInf}; };
  spec.density_domain = DensityDomain::ClosedHalfLine;
  spec.delta2_satisfied = false;  // exponential growth of lambda_max
  return spec;
}

}  // namespace detail

/// Builds a closed-form catalog entry. Names: boltzmann_variant (requires a
/// strictly positive weight function m), boltzmann_special, reverse_relative,
/// quadratic. `m` has one entry per ground point or a single broadcast entry.
inline EntropySpec catalog(const std::string& name, const GroundSpace& ground,
                           std::optional<Vec> m = std::nullopt) {
  if (name == "boltzmann_variant") {
    if (!m.has_value()) {
      throw InvalidArgument("catalog: boltzmann_variant requires m");
    }
    if (m->size() != 1 &&
        static_cast<std::size_t>(m->size()) != ground.size()) {
      throw LengthMismatch("catalog: m must have one entry per point");
    }
    for (Eigen::Index i = 0; i < m->size(); ++i) {
      if (!((*m)[i] > 0.0)) {
        throw NonpositiveWeightFunction(
            "catalog: boltzmann_variant needs m(z) > 0");
      }
    }
    return detail::make_boltzmann("boltzmann_variant", *m);
  }
  if (m.has_value()) {
    throw InvalidArgument("catalog: only boltzmann_variant accepts m");
  }
  if (name == "boltzmann_special") {
    return detail::make_boltzmann("boltzmann_special", Vec::Ones(1));
  }
  if (name == "reverse_relative") {
    EntropySpec spec;
    spec.name = name;
    spec.closed_form = true;
    spec.gamma_star = [](std::size_t, double t) {
      return t > 0.0 ? -std::log(t) + t - 1.0 : kInf;
    };
    spec.gamma = [](std::size_t, double s) {
      return s < 1.0 ? -std::log1p(-s) : kInf;
    };
    spec.gamma_prime = [](std::size_t, double s) { return 1.0 / (1.0 - s); };
    spec.gamma_second = [](std::size_t, double s) {
      const double d = 1.0 - s;
      return 1.0 / (d * d);
    };
    spec.m = [](std::size_t) { return 1.0; };
    spec.dom_gamma = [](std::size_t) { return Interval{-kInf, 1.0}; };
    spec.density_domain = DensityDomain::OpenHalfLine;
    spec.delta2_satisfied = false;  // barrier at s = 1
    return spec;
  }
  if (name == "quadratic") {
    EntropySpec spec;
    spec.name = name;
    spec.closed_form = true;
    spec.gamma_star = [](std::size_t, double t) { return 0.5 * t * t; };
    spec.gamma = [](std::size_t, double s) { return 0.5 * s * s; };
    spec.gamma_prime = [](std::size_t, double s) { return s; };
    spec.gamma_second = [](std::size_t, double) { return 1.0; };
    spec.m = [](std::size_t) { return 0.0; };
    spec.dom_gamma = [](std::size_t) { return Interval{-kInf, kInf}; };
    spec.density_domain = DensityDomain::FullLine;
    spec.delta2_satisfied = true;  // rho(2s) = 4 rho(s) globally
    return spec;
  }
  throw UnknownEntropy("catalog: unknown entropy '" + name + "'");
}

/// Builds a numeric-fallback entropy from a user integrand gamma*. gamma is
/// obtained by numeric conjugation and gamma' as the conjugate maximizer;
/// `minimizer` is the point m where gamma* vanishes.
inline EntropySpec make_numeric_entropy(std::string name, ScalarConvexFn gstar,
                                        double minimizer,
                                        double tol = 1e-10) {
  const double at_min = gstar.value(minimizer);
  if (!(std::abs(at_min) <= 1e-8)) {
    throw InvalidArgument(
        "make_numeric_entropy: gamma*(m) must vanish at the minimizer");
  }
  EntropySpec spec;
  spec.name = std::move(name);
  spec.closed_form = false;
  auto g = std::make_shared<ScalarConvexFn>(std::move(gstar));
  spec.gamma_star = [g](std::size_t, double t) {
    return g->dom.contains(t) || (t == g->dom.lo || t == g->dom.hi)
               ? g->value(t)
               : kInf;
  };
  spec.gamma = [g, tol](std::size_t, double s) {
    return conjugate_numeric(*g, s, tol);
  };
  spec.gamma_prime = [g, tol](std::size_t, double s) {
    return conjugate_numeric_full(*g, s, tol).argmax;
  };
  spec.gamma_second = nullptr;  // finite differences of gamma_prime
  spec.m = [minimizer](std::size_t) { return minimizer; };

  // Probe the interval where the conjugate stays finite.
  auto finite_at = [g, tol](double s) {
    try {
      return std::isfinite(conjugate_numeric(*g, s, tol));
    } catch (const BracketFailure&) {
      return false;
    }
  };
  auto edge = [&](double sign) {
    double inside = 0.0;
    double step = 1.0;
    while (step < 1e18 && finite_at(inside + sign * step)) {
      inside += sign * step;
      step *= 4.0;
    }
    if (step >= 1e18) return sign * kInf;
    double outside = inside + sign * step;
    for (int it = 0; it < 90; ++it) {
      const double mid = 0.5 * (inside + outside);
      (finite_at(mid) ? inside : outside) = mid;
    }
    return outside;
  };
  const double lo = edge(-1.0);
  const double hi = edge(+1.0);
  spec.dom_gamma = [lo, hi](std::size_t) { return Interval{lo, hi}; };
  spec.density_domain = DensityDomain::Unrecognized;
  return spec;
}

/// Assembles lambda, lambda_max, lambda_plus/minus and lambda_star from an
/// entropy. lambda_star uses the conjugate-shift identity
/// lambda*(z,t) = gamma*(z, t + m(z)), exact since gamma* is on hand.
inline YoungFamily young_family(const EntropySpec& spec) {
  YoungFamily fam;
  auto gamma = spec.gamma;
  auto gamma_star = spec.gamma_star;
  auto m = spec.m;
  fam.lambda = [gamma, m](std::size_t i, double s) {
    return gamma(i, s) - m(i) * s;
  };
  auto lambda = fam.lambda;
  fam.lambda_max = [lambda](std::size_t i, double s) {
    return std::max(lambda(i, s), lambda(i, -s));
  };
  fam.lambda_plus = [lambda](std::size_t i, double s) {
    return lambda(i, std::abs(s));
  };
  fam.lambda_minus = [lambda](std::size_t i, double s) {
    return lambda(i, -std::abs(s));
  };
  fam.lambda_star = [gamma_star, m](std::size_t i, double t) {
    return gamma_star(i, t + m(i));
  };
  auto dom = spec.dom_gamma;
  fam.dom_lambda = dom;
  fam.dom_lambda_max = [dom](std::size_t i) {
    const Interval d = dom(i);
    return Interval{std::max(d.lo, -d.hi), std::min(d.hi, -d.lo)};
  };
  fam.delta2_satisfied = spec.delta2_satisfied;
  return fam;
}

enum class Delta2Verdict { Satisfied, Violated, Inconclusive };

struct Delta2Report {
  Delta2Verdict verdict = Delta2Verdict::Inconclusive;
  /// Sample point with lambda_max(2s) > C lambda_max(s) at the largest
  /// escalation level reached.
  std::optional<double> witness;
  double escalation_reached = 0.0;
};

/// Classifies the Delta_2 growth condition of lambda_max. Catalog families
/// carry an analytic flag; otherwise the sample grid is scanned for
/// doubling-ratio witnesses under escalating constants.
inline Delta2Report delta2_classify(const YoungFamily& family,
                                    const std::vector<double>& samples) {
  if (samples.empty()) {
    throw InvalidArgument("delta2_classify: sample grid must be nonempty");
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i] > samples[i - 1])) {
      throw InvalidArgument("delta2_classify: sample grid must be increasing");
    }
  }
  Delta2Report report;
  auto witness_for = [&](double c) -> std::optional<double> {
    for (double s : samples) {
      const double base = family.lambda_max(0, std::abs(s));
      if (!(base > 0.0) || !std::isfinite(base)) continue;
      const double doubled = family.lambda_max(0, 2.0 * std::abs(s));
      if (doubled > c * base) return std::abs(s);
    }
    return std::nullopt;
  };
  for (double c = 4.0; c <= 1e12; c *= 4.0) {
    auto w = witness_for(c);
    if (!w.has_value()) break;
    report.witness = w;
    report.escalation_reached = c;
  }
  if (family.delta2_satisfied.has_value()) {
    report.verdict = *family.delta2_satisfied ? Delta2Verdict::Satisfied
                                              : Delta2Verdict::Violated;
    return report;
  }
  report.verdict = report.escalation_reached >= 1e9
                       ? Delta2Verdict::Violated
                       : Delta2Verdict::Inconclusive;
  if (report.verdict == Delta2Verdict::Inconclusive) report.witness.reset();
  return report;
}

}  // namespace entmin
