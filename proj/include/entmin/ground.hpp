#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <utility>

#include "entmin/errors.hpp"
#include "entmin/numerics.hpp"

namespace entmin {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Per-point values of dQ/dR on a ground space.
using Density = Eigen::VectorXd;

/// Finite weighted ground space: the reference measure R lives on a finite
/// list of points z_i with strictly positive masses r_i.
class GroundSpace {
 public:
  GroundSpace(Vec points, Vec weights)
      : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.size() != weights_.size()) {
      throw LengthMismatch("GroundSpace: points/weights length mismatch");
    }
    if (weights_.size() == 0) {
      throw InvalidArgument("GroundSpace: needs at least one point");
    }
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
        throw InvalidArgument(
            "GroundSpace: weights must be strictly positive and finite");
      }
    }
  }

  /// Ground space with coordinates 0, 1, ..., n-1.
  explicit GroundSpace(const Vec& weights)
      : GroundSpace(Vec::LinSpaced(weights.size(), 0.0,
                                   static_cast<double>(weights.size() - 1)),
                    Vec(weights)) {}

  std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }
  const Vec& points() const { return points_; }
  const Vec& weights() const { return weights_; }

 private:
  Vec points_;
  Vec weights_;
};

/// Integral of a per-point function against R: sum u_i r_i.
inline double integrate(const Vec& u, const GroundSpace& ground) {
  if (static_cast<std::size_t>(u.size()) != ground.size()) {
    throw LengthMismatch("integrate: length mismatch");
  }
  const Vec& r = ground.weights();
  return pairwise_sum_indexed(ground.size(),
                              [&](std::size_t i) { return u[i] * r[i]; });
}

}  // namespace entmin
