// Shared desk-scale problem builders for the test suites.
#pragma once

#include "entmin/dual.hpp"

namespace fixtures {

using entmin::GroundSpace;
using entmin::Mat;
using entmin::MomentMap;
using entmin::MomentProblem;
using entmin::SolverOptions;
using entmin::TargetSet;
using entmin::Vec;

inline GroundSpace grid(std::initializer_list<double> zs,
                        std::initializer_list<double> rs) {
  Vec z(static_cast<Eigen::Index>(zs.size()));
  Vec r(static_cast<Eigen::Index>(rs.size()));
  Eigen::Index i = 0;
  for (double v : zs) z[i++] = v;
  i = 0;
  for (double v : rs) r[i++] = v;
  return GroundSpace(z, r);
}

/// theta = (z) as a single moment coordinate.
inline MomentMap linear_map(const GroundSpace& g) {
  return {Mat(g.points().transpose())};
}

/// theta = (1, z): normalization plus mean.
inline MomentMap affine_map(const GroundSpace& g) {
  Mat theta(2, g.points().size());
  theta.row(0).setOnes();
  theta.row(1) = g.points().transpose();
  return {theta};
}

inline Vec vec(std::initializer_list<double> vals) {
  Vec v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

/// quadratic entropy, theta = (z) on z = (-1, 0, 1), C = {0.5};
/// closed form: y_hat = 0.25, value 0.0625.
inline MomentProblem quadratic_3pt(SolverOptions opts = {}) {
  GroundSpace g = grid({-1.0, 0.0, 1.0}, {1.0, 1.0, 1.0});
  return MomentProblem(entmin::catalog("quadratic", g), linear_map(g),
                       TargetSet::singleton(vec({0.5})), g, opts);
}

/// boltzmann_special, theta = (1, z) on z = (0, 1), C = {(1, 0.7)};
/// constraints pin q = (0.3, 0.7), y_hat = (ln 0.3, ln(7/3)).
inline MomentProblem boltzmann_2pt(SolverOptions opts = {}) {
  GroundSpace g = grid({0.0, 1.0}, {1.0, 1.0});
  return MomentProblem(entmin::catalog("boltzmann_special", g), affine_map(g),
                       TargetSet::singleton(vec({1.0, 0.7})), g, opts);
}

/// Same ground with an infeasible mean: no probability on {0,1} has mean 2.
inline MomentProblem boltzmann_infeasible(SolverOptions opts = {}) {
  GroundSpace g = grid({0.0, 1.0}, {1.0, 1.0});
  return MomentProblem(entmin::catalog("boltzmann_special", g), affine_map(g),
                       TargetSet::singleton(vec({1.0, 2.0})), g, opts);
}

/// reverse_relative, theta = (1, z) on z = (0, 1), C = {(1, 0.7)};
/// constraints pin q = (0.3, 0.7), I = -ln 0.3 - ln 0.7 - 1.
inline MomentProblem reverse_2pt(SolverOptions opts = {}) {
  GroundSpace g = grid({0.0, 1.0}, {1.0, 1.0});
  return MomentProblem(entmin::catalog("reverse_relative", g), affine_map(g),
                       TargetSet::singleton(vec({1.0, 0.7})), g, opts);
}

}  // namespace fixtures
