#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

#include "entmin/errors.hpp"
#include "entmin/ground.hpp"

namespace entmin {

/// Moment map theta: K test functions sampled on the grid, stored as a
/// K x N matrix (row k holds theta_k(z_i)).
struct MomentMap {
  Mat theta;

  std::size_t coords() const { return static_cast<std::size_t>(theta.rows()); }
  std::size_t points() const { return static_cast<std::size_t>(theta.cols()); }
};

/// Convex target set C: a singleton {x0} or a componentwise box
/// [c - r, c + r].
class TargetSet {
 public:
  enum class Kind { Singleton, Box };

  static TargetSet singleton(Vec x0) {
    TargetSet t;
    t.kind_ = Kind::Singleton;
    t.center_ = std::move(x0);
    t.radius_ = Vec::Zero(t.center_.size());
    return t;
  }

  static TargetSet box(Vec center, Vec radius) {
    if (center.size() != radius.size()) {
      throw LengthMismatch("TargetSet::box: center/radius length mismatch");
    }
    for (Eigen::Index k = 0; k < radius.size(); ++k) {
      if (!(radius[k] >= 0.0)) {
        throw InvalidArgument("TargetSet::box: radii must be nonnegative");
      }
    }
    TargetSet t;
    t.kind_ = Kind::Box;
    t.center_ = std::move(center);
    t.radius_ = std::move(radius);
    return t;
  }

  Kind kind() const { return kind_; }
  const Vec& center() const { return center_; }
  const Vec& radius() const { return radius_; }
  std::size_t dim() const { return static_cast<std::size_t>(center_.size()); }

  /// Euclidean distance from x to the set.
  double distance(const Vec& x) const {
    double sq = 0.0;
    for (Eigen::Index k = 0; k < center_.size(); ++k) {
      const double excess =
          std::max(0.0, std::abs(x[k] - center_[k]) - radius_[k]);
      sq += excess * excess;
    }
    return std::sqrt(sq);
  }

  /// Euclidean projection onto the set.
  Vec project(const Vec& x) const {
    Vec p = x;
    for (Eigen::Index k = 0; k < center_.size(); ++k) {
      p[k] = std::min(std::max(x[k], center_[k] - radius_[k]),
                      center_[k] + radius_[k]);
    }
    return p;
  }

 private:
  Kind kind_ = Kind::Singleton;
  Vec center_;
  Vec radius_;
};

/// Marginal operator dimensions on a product grid A x B, flattened row-major.
struct MarginalMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

/// T q = integral of theta dQ: x_k = sum_i theta_k(z_i) q_i r_i.
inline Vec apply_T(const MomentMap& map, const Density& q,
                   const GroundSpace& ground) {
  if (map.points() != ground.size() ||
      static_cast<std::size_t>(q.size()) != ground.size()) {
    throw ShapeMismatch("apply_T: shape mismatch");
  }
  return map.theta * q.cwiseProduct(ground.weights());
}

/// Adjoint T* y(z) = <y, theta(z)>.
inline Vec adjoint(const MomentMap& map, const Vec& y) {
  if (static_cast<std::size_t>(y.size()) != map.coords()) {
    throw ShapeMismatch("adjoint: y has wrong length");
  }
  return map.theta.transpose() * y;
}

struct SupportInf {
  double value = 0.0;
  /// Point of C attaining inf_{x in C} <y, x>.
  Vec witness;
  /// Subgradient selection of y -> inf term; equals the witness, with
  /// sign(0) := 0 picking the minimal-norm subgradient at box kinks.
  Vec subgradient;
};

/// inf over x in C of <y, x>, with minimizer and subgradient selection.
inline SupportInf support_inf(const TargetSet& target, const Vec& y) {
  if (static_cast<std::size_t>(y.size()) != target.dim()) {
    throw ShapeMismatch("support_inf: y has wrong length");
  }
  SupportInf out;
  out.witness = target.center();
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    const double sign = y[k] > 0.0 ? 1.0 : (y[k] < 0.0 ? -1.0 : 0.0);
    out.witness[k] -= target.radius()[k] * sign;
  }
  out.value = y.dot(out.witness);
  out.subgradient = out.witness;
  return out;
}

/// Adjoint of the marginal operator: (f + g)(a, b) flattened row-major.
inline Vec marginal_adjoint(const MarginalMap& map, const Vec& f,
                            const Vec& g) {
  if (static_cast<std::size_t>(f.size()) != map.rows ||
      static_cast<std::size_t>(g.size()) != map.cols) {
    throw ShapeMismatch("marginal_adjoint: potential length mismatch");
  }
  Vec u(map.rows * map.cols);
  for (std::size_t a = 0; a < map.rows; ++a) {
    for (std::size_t b = 0; b < map.cols; ++b) {
      u[static_cast<Eigen::Index>(a * map.cols + b)] =
          f[static_cast<Eigen::Index>(a)] + g[static_cast<Eigen::Index>(b)];
    }
  }
  return u;
}

struct GramReport {
  Mat gram;
  double min_eigenvalue = 0.0;
  bool positive_definite = false;
};

/// Weighted Gram matrix G = sum_i theta(z_i) theta(z_i)^T r_i, the numerical
/// surrogate for injectivity of the adjoint.
inline GramReport gram_matrix(const MomentMap& map, const GroundSpace& ground) {
  if (map.points() != ground.size()) {
    throw ShapeMismatch("gram_matrix: shape mismatch");
  }
  GramReport report;
  report.gram = map.theta * ground.weights().asDiagonal() *
                map.theta.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(report.gram);
  report.min_eigenvalue = es.eigenvalues().minCoeff();
  report.positive_definite =
      report.min_eigenvalue > 1e-12 * report.gram.trace();
  return report;
}

/// gram_matrix with the degeneracy check promoted to an error.
inline Mat checked_gram(const MomentMap& map, const GroundSpace& ground) {
  GramReport report = gram_matrix(map, ground);
  if (!report.positive_definite) {
    throw DegenerateMomentMap(
        "moment map is degenerate: Gram matrix is not positive definite");
  }
  return report.gram;
}

}  // namespace entmin
