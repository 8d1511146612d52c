#pragma once

#include <cmath>
#include <utility>

#include "entmin/constraints.hpp"
#include "entmin/errors.hpp"
#include "entmin/ground.hpp"
#include "entmin/numerics.hpp"
#include "entmin/orlicz.hpp"
#include "entmin/young.hpp"

namespace entmin {

struct SolverOptions {
  /// Stop when the certificate gap and feasibility residual drop below this.
  double gap_tol = 1e-9;
  int max_iter = 200;
  /// Backtracking shrink factor, in (0, 1).
  double ls_shrink = 0.5;
  /// Fraction of the distance to the dom gamma boundary taken by the first
  /// trial step, in (0, 1).
  double domain_margin = 0.99;
  /// Initial dual point; empty means 0, which is always dual-feasible.
  Vec init_y;
};

/// Moment problem: minimize I(Q) subject to T Q in C. Shape consistency and
/// Gram positive-definiteness are checked at construction.
class MomentProblem {
 public:
  MomentProblem(EntropySpec spec, MomentMap theta, TargetSet target,
                GroundSpace ground, SolverOptions options = {})
      : spec_(std::move(spec)),
        theta_(std::move(theta)),
        target_(std::move(target)),
        ground_(std::move(ground)),
        options_(std::move(options)),
        gram_(checked_gram(theta_, ground_)) {
    if (theta_.points() != ground_.size()) {
      throw ShapeMismatch("MomentProblem: theta/ground shape mismatch");
    }
    if (target_.dim() != theta_.coords()) {
      throw ShapeMismatch("MomentProblem: target/theta dimension mismatch");
    }
    if (!(options_.gap_tol > 0.0) || options_.max_iter < 1 ||
        !(options_.ls_shrink > 0.0 && options_.ls_shrink < 1.0) ||
        !(options_.domain_margin > 0.0 && options_.domain_margin < 1.0)) {
      throw InvalidArgument("MomentProblem: invalid solver options");
    }
    if (options_.init_y.size() != 0 &&
        static_cast<std::size_t>(options_.init_y.size()) != theta_.coords()) {
      throw ShapeMismatch("MomentProblem: init_y has wrong length");
    }
  }

  const EntropySpec& spec() const { return spec_; }
  const MomentMap& theta() const { return theta_; }
  const TargetSet& target() const { return target_; }
  const GroundSpace& ground() const { return ground_; }
  const SolverOptions& options() const { return options_; }
  const Mat& gram() const { return gram_; }
  std::size_t coords() const { return theta_.coords(); }
  std::size_t points() const { return ground_.size(); }

  /// The linear forms s_i = <y, theta(z_i)>.
  Vec linear_forms(const Vec& y) const { return adjoint(theta_, y); }

  /// True when every linear form lies strictly inside dom gamma.
  bool in_dual_domain(const Vec& y) const {
    const Vec s = linear_forms(y);
    for (std::size_t i = 0; i < points(); ++i) {
      if (!spec_.dom_gamma(i).contains(s[static_cast<Eigen::Index>(i)])) {
        return false;
      }
    }
    return true;
  }

  /// Smallest relative distance of the forms to the dom gamma boundary,
  /// +inf when the domain is all of R.
  double boundary_distance(const Vec& y) const {
    const Vec s = linear_forms(y);
    double dist = kInf;
    for (std::size_t i = 0; i < points(); ++i) {
      const Interval dom = spec_.dom_gamma(i);
      const double si = s[static_cast<Eigen::Index>(i)];
      if (std::isfinite(dom.hi)) dist = std::min(dist, dom.hi - si);
      if (std::isfinite(dom.lo)) dist = std::min(dist, si - dom.lo);
    }
    return dist;
  }

 private:
  EntropySpec spec_;
  MomentMap theta_;
  TargetSet target_;
  GroundSpace ground_;
  SolverOptions options_;
  Mat gram_;
};

/// Dual objective inf_{x in C} <y, x> - sum_i gamma(z_i, <y, theta(z_i)>) r_i.
/// Returns -inf when some linear form leaves dom gamma.
inline double dual_objective(const MomentProblem& p, const Vec& y) {
  const Vec s = p.linear_forms(y);
  const Vec& r = p.ground().weights();
  const std::size_t n = p.points();
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = p.spec().gamma(i, s[static_cast<Eigen::Index>(i)]);
    if (!std::isfinite(g)) return -kInf;
    terms[i] = g * r[static_cast<Eigen::Index>(i)];
  }
  return support_inf(p.target(), y).value - pairwise_sum(terms);
}

/// Supergradient of the dual objective: the support-term subgradient
/// selection minus T applied to the recovered density gamma'(<y, theta>).
inline Vec dual_gradient(const MomentProblem& p, const Vec& y) {
  if (!p.in_dual_domain(y)) {
    throw DomainViolation("dual_gradient: y outside the dual domain");
  }
  const Vec s = p.linear_forms(y);
  Density q(s.size());
  for (std::size_t i = 0; i < p.points(); ++i) {
    q[static_cast<Eigen::Index>(i)] =
        p.spec().gamma_prime(i, s[static_cast<Eigen::Index>(i)]);
  }
  return support_inf(p.target(), y).subgradient - apply_T(p.theta(), q, p.ground());
}

/// Hessian of the smooth part: -sum_i theta theta^T gamma''(s_i) r_i,
/// negative semidefinite wherever gamma is twice differentiable.
inline Mat dual_hessian(const MomentProblem& p, const Vec& y) {
  if (!p.in_dual_domain(y)) {
    throw DomainViolation("dual_hessian: y outside the dual domain");
  }
  const Vec s = p.linear_forms(y);
  Vec curv(s.size());
  for (std::size_t i = 0; i < p.points(); ++i) {
    curv[static_cast<Eigen::Index>(i)] =
        p.spec().gamma_second_at(i, s[static_cast<Eigen::Index>(i)]) *
        p.ground().weights()[static_cast<Eigen::Index>(i)];
  }
  return -(p.theta().theta * curv.asDiagonal() * p.theta().theta.transpose());
}

}  // namespace entmin
