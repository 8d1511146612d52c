#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "entmin/dual.hpp"

namespace entmin {

struct OracleResult {
  double value = kInf;
  Density q;
};

/// Independent brute-force primal minimizer for tiny instances (N <= 4,
/// K <= 2): parameterizes the affine feasible set by linear algebra plus a
/// box-slack grid, then grid-searches the free parameters with repeated
/// refinement down to `resolution`, finishing one level finer around the
/// best cell. Deliberately dumb; ground truth for the solver.
inline OracleResult brute_force_primal(const MomentProblem& p,
                                       double resolution) {
  if (p.points() > 4 || p.coords() > 2) {
    throw InvalidArgument("brute_force_primal: instance larger than desk scale");
  }
  if (!(resolution > 0.0)) {
    throw InvalidArgument("brute_force_primal: resolution must be > 0");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(p.points());
  const Mat aop = p.theta().theta * p.ground().weights().asDiagonal();
  Eigen::JacobiSVD<Mat> svd(aop, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-12);
  const Eigen::Index rank = svd.rank();
  const Mat null_basis = svd.matrixV().rightCols(n - rank);

  // Particular solution of T q = x via the pseudoinverse.
  auto particular = [&](const Vec& x) { return Vec(svd.solve(x)); };

  std::vector<Eigen::Index> box_coords;
  if (p.target().kind() == TargetSet::Kind::Box) {
    for (Eigen::Index k = 0; k < p.target().center().size(); ++k) {
      if (p.target().radius()[k] > 0.0) box_coords.push_back(k);
    }
  }
  const Eigen::Index nb = static_cast<Eigen::Index>(box_coords.size());
  const Eigen::Index nt = n - rank;
  const Eigen::Index dims = nb + nt;

  const Vec q_center = particular(p.target().center());
  if ((aop * q_center - p.target().center()).cwiseAbs().maxCoeff() >
      1e-8 * (1.0 + p.target().center().cwiseAbs().maxCoeff())) {
    throw InfeasibleParameterization(
        "brute_force_primal: affine feasible set is empty");
  }

  double mmax = 0.0;
  for (std::size_t i = 0; i < p.points(); ++i) {
    mmax = std::max(mmax, std::abs(p.spec().m(i)));
  }

  auto objective_at = [&](const Vec& params, Density* q_out) {
    Vec x = p.target().center();
    for (Eigen::Index i = 0; i < nb; ++i) {
      const Eigen::Index k = box_coords[static_cast<std::size_t>(i)];
      x[k] += p.target().radius()[k] * params[i];
    }
    Density q = particular(x);
    if (nt > 0) q += null_basis * params.tail(nt);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(q[i]) > 1e3) return kInf;  // density clamp
    }
    const double val = entropy_value(p.spec(), q, p.ground());
    if (q_out != nullptr) *q_out = q;
    return val;
  };

  if (dims == 0) {
    OracleResult res;
    Density q;
    res.value = objective_at(Vec(), &q);
    if (!std::isfinite(res.value)) {
      throw InfeasibleParameterization(
          "brute_force_primal: pinned feasible point has infinite entropy");
    }
    res.q = q;
    return res;
  }

  // Coordinate-descent polish: 1-D concave maximizations along each
  // parameter keep the grid result honest in ill-conditioned valleys of the
  // (slack, null-space) parameterization.
  auto polish = [&](Vec params, double value, double window) {
    for (int sweep = 0; sweep < 200; ++sweep) {
      const double before = value;
      for (Eigen::Index j = 0; j < dims; ++j) {
        const double lo_j = j < nb ? -1.0 : -window;
        const double hi_j = j < nb ? 1.0 : window;
        Vec probe = params;
        auto line = [&](double u) {
          probe[j] = u;
          const double v = objective_at(probe, nullptr);
          return std::isfinite(v) ? -v : -kInf;
        };
        MaximizeResult r = maximize_concave(line, Interval{lo_j, hi_j},
                                            params[j], 1e-12);
        if (-r.value < value) {
          value = -r.value;
          params[j] = r.arg;
        }
      }
      if (before - value <= 1e-15 * (1.0 + std::abs(value))) break;
    }
    return std::make_pair(params, value);
  };

  double window = 8.0 * (1.0 + q_center.cwiseAbs().maxCoeff() + mmax);
  constexpr int kPointsPerDim = 33;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Vec lo(dims), hi(dims);
    for (Eigen::Index i = 0; i < dims; ++i) {
      const bool is_box = i < nb;
      lo[i] = is_box ? -1.0 : -window;
      hi[i] = is_box ? 1.0 : window;
    }

    Vec best_params = Vec::Zero(dims);
    double best_value = kInf;
    bool best_on_edge = false;
    bool resolved = false;
    bool final_pass_done = false;
    for (int level = 0; level < 80; ++level) {
      Vec step = (hi - lo) / (kPointsPerDim - 1);
      std::vector<int> idx(static_cast<std::size_t>(dims), 0);
      double level_best = kInf;
      Vec level_params = Vec::Zero(dims);
      std::vector<int> level_idx;
      bool done = false;
      while (!done) {
        Vec params(dims);
        for (Eigen::Index i = 0; i < dims; ++i) {
          params[i] = lo[i] + step[i] * idx[static_cast<std::size_t>(i)];
        }
        const double val = objective_at(params, nullptr);
        if (val < level_best) {
          level_best = val;
          level_params = params;
          level_idx = idx;
        }
        // lexicographic advance; first strict minimum wins ties
        Eigen::Index d = dims - 1;
        while (d >= 0) {
          if (++idx[static_cast<std::size_t>(d)] < kPointsPerDim) break;
          idx[static_cast<std::size_t>(d)] = 0;
          --d;
        }
        done = d < 0;
      }
      if (level_best < best_value) {
        best_value = level_best;
        best_params = level_params;
      }
      if (level == 0) {
        best_on_edge = false;
        for (Eigen::Index i = nb; i < dims; ++i) {
          const int id = level_idx.empty()
                             ? 0
                             : level_idx[static_cast<std::size_t>(i)];
          if (id == 0 || id == kPointsPerDim - 1) best_on_edge = true;
        }
        if (!std::isfinite(level_best) || best_on_edge) break;
      }
      if (final_pass_done) {
        resolved = true;
        break;
      }
      // Shrink around the best cell; clip box slacks to their native range.
      for (Eigen::Index i = 0; i < dims; ++i) {
        const double margin = 4.0 * step[i];
        lo[i] = best_params[i] - margin;
        hi[i] = best_params[i] + margin;
        if (i < nb) {
          lo[i] = std::max(lo[i], -1.0);
          hi[i] = std::min(hi[i], 1.0);
        }
      }
      if (step.maxCoeff() <= resolution) final_pass_done = true;
    }
    if (resolved) {
      auto [polished, value] = polish(best_params, best_value, window);
      OracleResult res;
      Density q;
      res.value = objective_at(polished, &q);
      res.q = q;
      if (!std::isfinite(res.value)) {
        throw InfeasibleParameterization(
            "brute_force_primal: no finite feasible point found");
      }
      return res;
    }
    window *= 4.0;  // the minimizer escaped the window; widen and retry
  }
  throw InfeasibleParameterization(
      "brute_force_primal: search window kept escaping");
}

}  // namespace entmin
