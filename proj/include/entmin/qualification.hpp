#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>

#include "entmin/dual.hpp"
#include "entmin/lp.hpp"

namespace entmin {

enum class Feasibility { Feasible, Infeasible, Unknown };

inline const char* to_string(Feasibility f) {
  switch (f) {
    case Feasibility::Feasible: return "Feasible";
    case Feasibility::Infeasible: return "Infeasible";
    case Feasibility::Unknown: return "Unknown";
  }
  return "?";
}

struct FeasibilityReport {
  Feasibility verdict = Feasibility::Unknown;
  /// Density with T q in C and I(q) < inf, when one was found.
  std::optional<Density> witness;
};

enum class IcorVerdict { Interior, Boundary, Unknown };

inline const char* to_string(IcorVerdict v) {
  switch (v) {
    case IcorVerdict::Interior: return "Interior";
    case IcorVerdict::Boundary: return "Boundary";
    case IcorVerdict::Unknown: return "Unknown";
  }
  return "?";
}

struct IcorReport {
  IcorVerdict verdict = IcorVerdict::Unknown;
  /// Largest uniform lower bound on the hull weights, when the LP ran.
  double epsilon_star = 0.0;
};

namespace detail {

/// Standard-form LP over the hull weights w_i = q_i r_i >= 0 with target
/// membership rows; box targets get split slack columns, and the epsilon
/// mode substitutes w = v + eps*1 and maximizes eps under a cap.
struct HullLp {
  Mat a;
  Vec b;
  Vec c;
  Eigen::Index n_weights = 0;
  Eigen::Index eps_col = -1;
  static constexpr double kEpsCap = 1e6;
};

inline HullLp build_hull_lp(const MomentProblem& p, bool with_eps) {
  const Eigen::Index n = static_cast<Eigen::Index>(p.points());
  const Eigen::Index k = static_cast<Eigen::Index>(p.coords());
  std::vector<Eigen::Index> box_coords;
  if (p.target().kind() == TargetSet::Kind::Box) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (p.target().radius()[j] > 0.0) box_coords.push_back(j);
    }
  }
  const Eigen::Index nb = static_cast<Eigen::Index>(box_coords.size());
  const Eigen::Index rows = k + nb + (with_eps ? 1 : 0);
  const Eigen::Index cols = n + 3 * nb + (with_eps ? 2 : 0);

  HullLp lp;
  lp.n_weights = n;
  lp.a = Mat::Zero(rows, cols);
  lp.b = Vec::Zero(rows);
  lp.c = Vec::Zero(cols);

  lp.a.block(0, 0, k, n) = p.theta().theta;
  lp.b.head(k) = p.target().center();
  for (Eigen::Index i = 0; i < nb; ++i) {
    const Eigen::Index j = box_coords[static_cast<std::size_t>(i)];
    const double rad = p.target().radius()[j];
    const Eigen::Index cp = n + 3 * i;      // positive slack
    const Eigen::Index cn = n + 3 * i + 1;  // negative slack
    const Eigen::Index ct = n + 3 * i + 2;  // simplex filler
    lp.a(j, cp) = -rad;
    lp.a(j, cn) = rad;
    lp.a(k + i, cp) = 1.0;
    lp.a(k + i, cn) = 1.0;
    lp.a(k + i, ct) = 1.0;
    lp.b[k + i] = 1.0;
  }
  if (with_eps) {
    lp.eps_col = n + 3 * nb;
    const Eigen::Index cap_slack = lp.eps_col + 1;
    // w = v + eps: eps enters every moment row through theta * 1.
    lp.a.block(0, lp.eps_col, k, 1) = p.theta().theta * Vec::Ones(n);
    lp.a(rows - 1, lp.eps_col) = 1.0;
    lp.a(rows - 1, cap_slack) = 1.0;
    lp.b[rows - 1] = HullLp::kEpsCap;
    lp.c[lp.eps_col] = -1.0;  // maximize eps
  }
  return lp;
}

inline Density weights_to_density(const MomentProblem& p, const Vec& lp_x,
                                  Eigen::Index n, double eps) {
  Density q(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q[i] = (lp_x[i] + eps) / p.ground().weights()[i];
  }
  return q;
}

/// Minimum-norm density with T q at the target center; always exists since
/// the Gram matrix is positive definite.
inline Density least_norm_witness(const MomentProblem& p) {
  const Mat aop = p.theta().theta * p.ground().weights().asDiagonal();
  const Mat gram2 = aop * aop.transpose();
  return aop.transpose() *
         gram2.ldlt().solve(p.target().center());
}

}  // namespace detail

/// Diagnoses feasibility C intersect T dom I != empty (the attainment-tier
/// hypothesis) by a small hull-membership LP. Entropies whose density domain
/// is not recognized yield Unknown rather than a guess.
inline FeasibilityReport feasibility_check(const MomentProblem& p) {
  FeasibilityReport report;
  switch (p.spec().density_domain) {
    case DensityDomain::FullLine: {
      report.verdict = Feasibility::Feasible;
      report.witness = detail::least_norm_witness(p);
      return report;
    }
    case DensityDomain::ClosedHalfLine: {
      detail::HullLp lp = detail::build_hull_lp(p, /*with_eps=*/false);
      LpResult res = solve_lp(lp.a, lp.b, lp.c);
      if (res.status == LpResult::Status::Optimal) {
        report.verdict = Feasibility::Feasible;
        report.witness =
            detail::weights_to_density(p, res.x, lp.n_weights, 0.0);
      } else {
        report.verdict = Feasibility::Infeasible;
      }
      return report;
    }
    case DensityDomain::OpenHalfLine: {
      // Strictly positive densities only: feasibility coincides with
      // relative-interior membership.
      detail::HullLp lp = detail::build_hull_lp(p, /*with_eps=*/true);
      LpResult res = solve_lp(lp.a, lp.b, lp.c);
      const double eps =
          res.status == LpResult::Status::Optimal ? res.x[lp.eps_col] : 0.0;
      if (res.status == LpResult::Status::Optimal && eps > 1e-9) {
        report.verdict = Feasibility::Feasible;
        report.witness =
            detail::weights_to_density(p, res.x, lp.n_weights, eps);
      } else {
        report.verdict = Feasibility::Infeasible;
      }
      return report;
    }
    case DensityDomain::Unrecognized: break;
  }
  return report;
}

/// Diagnoses the interior qualification C intersect icor(T dom I) != empty
/// (the representation-tier hypothesis): maximizes a uniform lower bound on
/// the hull weights.
inline IcorReport icor_check(const MomentProblem& p) {
  IcorReport report;
  switch (p.spec().density_domain) {
    case DensityDomain::FullLine:
      // dom Gamma* is all of R^K.
      report.verdict = IcorVerdict::Interior;
      report.epsilon_star = kInf;
      return report;
    case DensityDomain::ClosedHalfLine:
    case DensityDomain::OpenHalfLine: {
      detail::HullLp lp = detail::build_hull_lp(p, /*with_eps=*/true);
      LpResult res = solve_lp(lp.a, lp.b, lp.c);
      if (res.status != LpResult::Status::Optimal) {
        report.verdict = IcorVerdict::Unknown;
        return report;
      }
      report.epsilon_star = res.x[lp.eps_col];
      // An optimal LP certifies hull membership at eps = eps*; a target that
      // only fits with some weight pinned (near) zero sits on the boundary.
      report.verdict = report.epsilon_star > 1e-9 ? IcorVerdict::Interior
                                                  : IcorVerdict::Boundary;
      return report;
    }
    case DensityDomain::Unrecognized: break;
  }
  return report;
}

}  // namespace entmin
