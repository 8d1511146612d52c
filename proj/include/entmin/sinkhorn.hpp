#pragma once

#include <cmath>
#include <utility>

#include "entmin/errors.hpp"
#include "entmin/numerics.hpp"
#include "entmin/recovery.hpp"

namespace entmin {

/// Marginal-constraint problem on a product grid A x B: the reference
/// measure is a nonnegative kernel matrix and the constraint prescribes both
/// marginals. Targets must carry the same total mass; structurally
/// infeasible instances (a positive target on an all-zero kernel slice) are
/// rejected at construction.
class MarginalProblem {
 public:
  MarginalProblem(Mat kernel, Vec row_target, Vec col_target)
      : kernel_(std::move(kernel)),
        row_target_(std::move(row_target)),
        col_target_(std::move(col_target)) {
    if (kernel_.rows() != row_target_.size() ||
        kernel_.cols() != col_target_.size()) {
      throw ShapeMismatch("MarginalProblem: kernel/targets shape mismatch");
    }
    if (kernel_.rows() == 0 || kernel_.cols() == 0) {
      throw InvalidArgument("MarginalProblem: empty kernel");
    }
    if (kernel_.minCoeff() < 0.0) {
      throw InvalidArgument("MarginalProblem: kernel must be nonnegative");
    }
    if (row_target_.minCoeff() < 0.0 || col_target_.minCoeff() < 0.0) {
      throw InvalidArgument("MarginalProblem: targets must be nonnegative");
    }
    const double total = row_target_.sum();
    if (std::abs(total - col_target_.sum()) >
        1e-12 * std::max(1.0, std::abs(total))) {
      throw InvalidArgument(
          "MarginalProblem: marginal targets must share their total mass");
    }
    for (Eigen::Index a = 0; a < kernel_.rows(); ++a) {
      if (row_target_[a] > 0.0 && kernel_.row(a).maxCoeff() == 0.0) {
        throw ZeroDenominator(
            "MarginalProblem: positive row target on an all-zero kernel row");
      }
    }
    for (Eigen::Index b = 0; b < kernel_.cols(); ++b) {
      if (col_target_[b] > 0.0 && kernel_.col(b).maxCoeff() == 0.0) {
        throw ZeroDenominator(
            "MarginalProblem: positive column target on an all-zero kernel "
            "column");
      }
    }
  }

  const Mat& kernel() const { return kernel_; }
  const Vec& row_target() const { return row_target_; }
  const Vec& col_target() const { return col_target_; }
  std::size_t rows() const { return static_cast<std::size_t>(kernel_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(kernel_.cols()); }

 private:
  Mat kernel_;
  Vec row_target_;
  Vec col_target_;
};

/// Multiplicative dual potentials u = e^f, v = e^g. The fitted coupling is
/// Q_hat(a,b) = u_a v_b R(a,b).
struct ScalingPair {
  Vec u;
  Vec v;
};

namespace detail {

/// Row sums of K * diag(v), pairwise per row for determinism.
inline Vec kernel_dot_cols(const Mat& kernel, const Vec& v) {
  Vec out(kernel.rows());
  for (Eigen::Index a = 0; a < kernel.rows(); ++a) {
    out[a] = pairwise_sum_indexed(
        static_cast<std::size_t>(kernel.cols()), [&](std::size_t b) {
          return kernel(a, static_cast<Eigen::Index>(b)) *
                 v[static_cast<Eigen::Index>(b)];
        });
  }
  return out;
}

inline Vec kernel_dot_rows(const Mat& kernel, const Vec& u) {
  Vec out(kernel.cols());
  for (Eigen::Index b = 0; b < kernel.cols(); ++b) {
    out[b] = pairwise_sum_indexed(
        static_cast<std::size_t>(kernel.rows()), [&](std::size_t a) {
          return kernel(static_cast<Eigen::Index>(a), b) *
                 u[static_cast<Eigen::Index>(a)];
        });
  }
  return out;
}

inline Vec scale_or_throw(const Vec& target, const Vec& denom,
                          const char* what) {
  Vec out(target.size());
  for (Eigen::Index i = 0; i < target.size(); ++i) {
    if (target[i] == 0.0) {
      out[i] = 0.0;  // zero-target slices carry no mass
    } else if (denom[i] > 0.0) {
      out[i] = target[i] / denom[i];
    } else {
      throw ZeroDenominator(what);
    }
  }
  return out;
}

}  // namespace detail

/// One IPF sweep: exact block maximization of the dual in f, then in g.
/// After the u-update the row marginals of u_a v_b R(a,b) match row_target
/// to round-off; after the v-update the column marginals match col_target.
inline ScalingPair ipf_step(const MarginalProblem& p,
                            const ScalingPair& scaling) {
  ScalingPair next;
  next.u = detail::scale_or_throw(
      p.row_target(), detail::kernel_dot_cols(p.kernel(), scaling.v),
      "ipf_step: positive row target faces a zero kernel slice");
  next.v = detail::scale_or_throw(
      p.col_target(), detail::kernel_dot_rows(p.kernel(), next.u),
      "ipf_step: positive column target faces a zero kernel slice");
  return next;
}

/// Row marginals of the coupling u_a v_b R(a,b), same reduction order as the
/// IPF updates.
inline Vec row_marginals(const MarginalProblem& p, const ScalingPair& s) {
  return s.u.cwiseProduct(detail::kernel_dot_cols(p.kernel(), s.v));
}

inline Vec col_marginals(const MarginalProblem& p, const ScalingPair& s) {
  return s.v.cwiseProduct(detail::kernel_dot_rows(p.kernel(), s.u));
}

/// Dual objective of the marginal problem at potentials f = ln u, g = ln v
/// with the relative-entropy integrand:
/// sum f row_target + sum g col_target - sum (e^{f+g} - 1) R.
/// Cells with zero kernel mass contribute nothing; zero-target potentials
/// (u or v entries equal to 0) are admissible limits and contribute their
/// target term as 0.
inline double marginal_dual_objective(const MarginalProblem& p,
                                      const ScalingPair& s) {
  double linear = 0.0;
  for (Eigen::Index a = 0; a < s.u.size(); ++a) {
    if (p.row_target()[a] > 0.0) linear += std::log(s.u[a]) * p.row_target()[a];
  }
  for (Eigen::Index b = 0; b < s.v.size(); ++b) {
    if (p.col_target()[b] > 0.0) linear += std::log(s.v[b]) * p.col_target()[b];
  }
  const std::size_t rows = p.rows();
  const std::size_t cols = p.cols();
  const double mass = pairwise_sum_indexed(rows * cols, [&](std::size_t idx) {
    const Eigen::Index a = static_cast<Eigen::Index>(idx / cols);
    const Eigen::Index b = static_cast<Eigen::Index>(idx % cols);
    return (s.u[a] * s.v[b] - 1.0) * p.kernel()(a, b);
  });
  return linear - mass;
}

struct MarginalSolution {
  /// Fitted coupling masses Q_hat(a,b) = u_a v_b R(a,b).
  Mat q_hat;
  ScalingPair scaling;
  int sweeps = 0;
};

/// Iterates IPF sweeps until both marginal l1 errors drop below tol.
inline MarginalSolution solve_marginals(const MarginalProblem& p,
                                        double tol = 1e-10,
                                        int max_sweeps = 500) {
  if (!(tol > 0.0)) throw InvalidArgument("solve_marginals: tol must be > 0");
  ScalingPair s{Vec::Ones(static_cast<Eigen::Index>(p.rows())),
                Vec::Ones(static_cast<Eigen::Index>(p.cols()))};
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    s = ipf_step(p, s);
    const double row_err = (row_marginals(p, s) - p.row_target()).lpNorm<1>();
    const double col_err = (col_marginals(p, s) - p.col_target()).lpNorm<1>();
    if (std::max(row_err, col_err) <= tol) {
      MarginalSolution sol;
      sol.scaling = s;
      sol.sweeps = sweep;
      sol.q_hat = s.u.asDiagonal() * p.kernel() * s.v.asDiagonal();
      return sol;
    }
  }
  throw NotConverged("solve_marginals: marginal errors above tol", max_sweeps);
}

/// Certificate for the marginal problem, with dual potentials read off the
/// scaling pair. The gauge freedom (f + c, g - c) is fixed by enforcing
/// sum f = 0 over rows with positive targets; y_hat stacks f then g and
/// q_hat holds the density u_a v_b row-major.
inline DualCertificate marginals_certificate(const MarginalProblem& p,
                                             const Mat& q_hat,
                                             const ScalingPair& scaling) {
  if (scaling.u.minCoeff() <= 0.0 || scaling.v.minCoeff() <= 0.0) {
    throw DomainViolation(
        "marginals_certificate: scaling must be strictly positive");
  }
  const std::size_t rows = p.rows();
  const std::size_t cols = p.cols();
  Vec f = scaling.u.array().log();
  Vec g = scaling.v.array().log();
  const double shift = f.mean();
  f.array() -= shift;
  g.array() += shift;

  DualCertificate cert;
  cert.y_hat.resize(f.size() + g.size());
  cert.y_hat << f, g;

  // Density of the coupling with respect to the kernel; zero-mass cells
  // never receive mass and drop out of every integral.
  Mat density = Mat::Zero(q_hat.rows(), q_hat.cols());
  for (Eigen::Index a = 0; a < q_hat.rows(); ++a) {
    for (Eigen::Index b = 0; b < q_hat.cols(); ++b) {
      if (p.kernel()(a, b) > 0.0) density(a, b) = q_hat(a, b) / p.kernel()(a, b);
    }
  }
  cert.q_hat.resize(static_cast<Eigen::Index>(rows * cols));
  for (std::size_t a = 0; a < rows; ++a) {
    for (std::size_t b = 0; b < cols; ++b) {
      cert.q_hat[static_cast<Eigen::Index>(a * cols + b)] =
          density(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }

  // H(Q|R) with gamma*(t) = t log t - t + 1 summed over cells with mass.
  auto cellwise = [&](auto&& f_ab) {
    return pairwise_sum_indexed(rows * cols, [&](std::size_t idx) {
      const Eigen::Index a = static_cast<Eigen::Index>(idx / cols);
      const Eigen::Index b = static_cast<Eigen::Index>(idx % cols);
      const double rab = p.kernel()(a, b);
      return rab > 0.0 ? f_ab(a, b) * rab : 0.0;
    });
  };
  cert.primal_value = cellwise([&](Eigen::Index a, Eigen::Index b) {
    const double q = density(a, b);
    return q > 0.0 ? q * std::log(q) - q + 1.0 : 1.0;
  });
  cert.dual_value = marginal_dual_objective(p, scaling);
  cert.gap = cert.primal_value - cert.dual_value;

  const double gamma_part = cellwise([&](Eigen::Index a, Eigen::Index b) {
    return std::expm1(f[a] + g[b]);
  });
  const double pairing = cellwise([&](Eigen::Index a, Eigen::Index b) {
    return (f[a] + g[b]) * density(a, b);
  });
  cert.young_residual =
      std::abs(cert.primal_value + gamma_part - pairing);
  cert.gamma_star_value = cellwise([&](Eigen::Index a, Eigen::Index b) {
    const double q = scaling.u[a] * scaling.v[b];
    return q > 0.0 ? q * std::log(q) - q + 1.0 : 1.0;
  });

  Vec row_sums(q_hat.rows());
  for (Eigen::Index a = 0; a < q_hat.rows(); ++a) {
    row_sums[a] = pairwise_sum_indexed(cols, [&](std::size_t b) {
      return q_hat(a, static_cast<Eigen::Index>(b));
    });
  }
  Vec col_sums(q_hat.cols());
  for (Eigen::Index b = 0; b < q_hat.cols(); ++b) {
    col_sums[b] = pairwise_sum_indexed(rows, [&](std::size_t a) {
      return q_hat(static_cast<Eigen::Index>(a), b);
    });
  }
  const Vec row_err = row_sums - p.row_target();
  const Vec col_err = col_sums - p.col_target();
  cert.feasibility_residual =
      std::sqrt(row_err.squaredNorm() + col_err.squaredNorm());
  return cert;
}

}  // namespace entmin
