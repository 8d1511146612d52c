#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "entmin/dual.hpp"

namespace entmin {

/// Primal recovery Q_hat(dz) = gamma'(<y_hat, theta(z)>) R(dz).
inline Density recover(const MomentProblem& p, const Vec& y_hat) {
  if (!p.in_dual_domain(y_hat)) {
    throw DomainViolation("recover: y_hat outside the dual domain");
  }
  const Vec s = p.linear_forms(y_hat);
  Density q(s.size());
  for (std::size_t i = 0; i < p.points(); ++i) {
    q[static_cast<Eigen::Index>(i)] =
        p.spec().gamma_prime(i, s[static_cast<Eigen::Index>(i)]);
  }
  return q;
}

/// Machine-checkable optimality certificate: primal and dual values, duality
/// gap, Young-identity residual and the distance of the recovered moments
/// to the target set.
struct DualCertificate {
  Vec y_hat;
  Density q_hat;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  double young_residual = 0.0;
  double feasibility_residual = 0.0;
  /// Integral of gamma* composed with gamma'(<y_hat, theta>).
  double gamma_star_value = 0.0;
};

inline DualCertificate certificate(const MomentProblem& p, const Vec& y_hat) {
  DualCertificate cert;
  cert.y_hat = y_hat;
  cert.q_hat = recover(p, y_hat);
  cert.primal_value = entropy_value(p.spec(), cert.q_hat, p.ground());
  cert.dual_value = dual_objective(p, y_hat);
  cert.gap = cert.primal_value - cert.dual_value;

  const Vec s = p.linear_forms(y_hat);
  const Vec& r = p.ground().weights();
  const double gamma_part = pairwise_sum_indexed(p.points(), [&](std::size_t i) {
    return p.spec().gamma(i, s[static_cast<Eigen::Index>(i)]) *
           r[static_cast<Eigen::Index>(i)];
  });
  const double pairing = pairwise_sum_indexed(p.points(), [&](std::size_t i) {
    return s[static_cast<Eigen::Index>(i)] *
           cert.q_hat[static_cast<Eigen::Index>(i)] *
           r[static_cast<Eigen::Index>(i)];
  });
  cert.young_residual = std::abs(cert.primal_value + gamma_part - pairing);
  cert.feasibility_residual =
      p.target().distance(apply_T(p.theta(), cert.q_hat, p.ground()));
  cert.gamma_star_value = pairwise_sum_indexed(p.points(), [&](std::size_t i) {
    return p.spec().gamma_star(i, p.spec().gamma_prime(
                                      i, s[static_cast<Eigen::Index>(i)])) *
           r[static_cast<Eigen::Index>(i)];
  });
  return cert;
}

inline const char* certificate_csv_header() {
  return "primal_value,dual_value,gap,young_residual,feasibility_residual,"
         "gamma_star_value";
}

inline std::string certificate_csv_row(const DualCertificate& cert) {
  std::ostringstream os;
  os.precision(17);
  os << cert.primal_value << ',' << cert.dual_value << ',' << cert.gap << ','
     << cert.young_residual << ',' << cert.feasibility_residual << ','
     << cert.gamma_star_value;
  return os.str();
}

}  // namespace entmin
