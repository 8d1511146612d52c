#pragma once

#include <cmath>
#include <cstddef>

#include "entmin/errors.hpp"
#include "entmin/ground.hpp"
#include "entmin/numerics.hpp"
#include "entmin/young.hpp"

namespace entmin {

/// Entropy value I(Q) = sum_i gamma*(z_i, q_i) r_i. Returns +inf as soon as
/// any term is +inf (all weights are strictly positive by construction).
inline double entropy_value(const EntropySpec& spec, const Density& q,
                            const GroundSpace& ground) {
  if (static_cast<std::size_t>(q.size()) != ground.size()) {
    throw LengthMismatch("entropy_value: density length mismatch");
  }
  const Vec& r = ground.weights();
  const std::size_t n = ground.size();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = spec.gamma_star(i, q[static_cast<Eigen::Index>(i)]);
    if (g == kInf) return kInf;
    terms[i] = g * r[static_cast<Eigen::Index>(i)];
  }
  return pairwise_sum(terms);
}

/// Luxemburg norm ||u||_rho = inf{ beta > 0 : sum_i rho(z_i, u_i/beta) r_i
/// <= 1 }, computed by bracketing and bisection on the nonincreasing modular
/// map. Returns 0 for u == 0; `tol` is relative.
inline double luxemburg_norm(const Vec& u, const PointwiseFn& rho,
                             const GroundSpace& ground, double tol = 1e-12) {
  if (static_cast<std::size_t>(u.size()) != ground.size()) {
    throw LengthMismatch("luxemburg_norm: length mismatch");
  }
  if (!(tol > 0.0)) throw InvalidArgument("luxemburg_norm: tol must be > 0");
  const std::size_t n = ground.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (rho(i, 0.0) != 0.0) {
      throw NotAYoungFunction("luxemburg_norm: rho(z, 0) != 0");
    }
  }
  if (u.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  const Vec& r = ground.weights();
  auto modular = [&](double beta) {
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double v = rho(i, u[static_cast<Eigen::Index>(i)] / beta);
      if (v < 0.0) {
        throw NotAYoungFunction("luxemburg_norm: rho takes a negative value");
      }
      if (v == kInf) return kInf;
      terms[i] = v * r[static_cast<Eigen::Index>(i)];
    }
    return pairwise_sum(terms);
  };

  double hi = 1.0;
  while (modular(hi) > 1.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) {
      throw NotAYoungFunction(
          "luxemburg_norm: modular never drops below 1 (overflow guard)");
    }
  }
  double lo = hi;
  while (modular(lo) <= 1.0) {
    lo *= 0.5;
    if (lo < 1e-300) return 0.0;
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (modular(mid) <= 1.0 ? hi : lo) = mid;
  }
  // The returned endpoint keeps the unit-ball property: modular(hi) <= 1.
  return hi;
}

struct HolderReport {
  double pairing = 0.0;       // |integral of u v dR|
  double norm_u = 0.0;        // ||u|| for lambda_max
  double norm_v_conj = 0.0;   // ||v|| for (lambda_max)*
  double bound = 0.0;         // 2 ||u|| ||v||
  bool holds = false;
};

/// Orlicz-Hoelder inequality with constant 2 for the lambda_max gauge:
/// |int u v dR| <= 2 ||u||_rho ||v||_rho*. The conjugate Young function is
/// evaluated by numeric conjugation pointwise.
inline HolderReport holder_check(const Vec& u, const Vec& v,
                                 const YoungFamily& family,
                                 const GroundSpace& ground,
                                 double tol = 1e-10) {
  if (u.size() != v.size() ||
      static_cast<std::size_t>(u.size()) != ground.size()) {
    throw LengthMismatch("holder_check: length mismatch");
  }
  PointwiseFn rho_conj = [&family, tol](std::size_t i, double t) {
    ScalarConvexFn f{[&family, i](double s) { return family.lambda_max(i, s); },
                     family.dom_lambda_max(i)};
    return conjugate_numeric(f, t, tol);
  };
  HolderReport report;
  report.pairing = std::abs(integrate(u.cwiseProduct(v), ground));
  report.norm_u = luxemburg_norm(u, family.lambda_max, ground);
  report.norm_v_conj = luxemburg_norm(v, rho_conj, ground);
  report.bound = 2.0 * report.norm_u * report.norm_v_conj;
  report.holds = report.pairing <= report.bound + 1e-9 * (1.0 + report.bound);
  return report;
}

}  // namespace entmin
