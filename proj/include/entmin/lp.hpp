#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "entmin/errors.hpp"
#include "entmin/ground.hpp"

namespace entmin {

/// Linear program in standard form: minimize c^T x subject to A x = b,
/// x >= 0.
struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Vec x;
  double objective = 0.0;
};

namespace detail {

/// Revised simplex with Bland's rule (no cycling). `basis` must index an
/// invertible feasible basis of A on entry.
inline LpResult simplex_run(const Mat& a, const Vec& b, const Vec& c,
                            std::vector<Eigen::Index> basis) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  const double tol = 1e-9 * (1.0 + b.cwiseAbs().maxCoeff());
  for (int iter = 0; iter < 20000; ++iter) {
    Mat bmat(m, m);
    for (Eigen::Index i = 0; i < m; ++i) bmat.col(i) = a.col(basis[i]);
    Eigen::PartialPivLU<Mat> lu(bmat);
    Vec xb = lu.solve(b);
    Vec cb(m);
    for (Eigen::Index i = 0; i < m; ++i) cb[i] = c[basis[i]];
    Vec y = lu.transpose().solve(cb);

    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
      if (c[j] - a.col(j).dot(y) < -tol) {
        entering = j;
        break;  // Bland: smallest index
      }
    }
    if (entering < 0) {
      LpResult res;
      res.status = LpResult::Status::Optimal;
      res.x = Vec::Zero(n);
      for (Eigen::Index i = 0; i < m; ++i) res.x[basis[i]] = std::max(xb[i], 0.0);
      res.objective = c.dot(res.x);
      return res;
    }
    Vec w = lu.solve(a.col(entering));
    Eigen::Index leaving = -1;
    double best_ratio = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (w[i] > tol) {
        const double ratio = std::max(xb[i], 0.0) / w[i];
        if (leaving < 0 || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 &&
             basis[i] < basis[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
    }
    if (leaving < 0) {
      LpResult res;
      res.status = LpResult::Status::Unbounded;
      return res;
    }
    basis[leaving] = entering;
  }
  throw Error("simplex: iteration limit exceeded");
}

}  // namespace detail

/// Two-phase dense simplex.
inline LpResult solve_lp_simplex(const Mat& a_in, const Vec& b_in,
                                 const Vec& c) {
  Mat a = a_in;
  Vec b = b_in;
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      b[i] = -b[i];
      a.row(i) = -a.row(i);
    }
  }
  // Phase 1 with artificial variables.
  Mat a1(m, n + m);
  a1 << a, Mat::Identity(m, m);
  Vec c1 = Vec::Zero(n + m);
  c1.tail(m).setOnes();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = n + i;
  LpResult phase1 = detail::simplex_run(a1, b, c1, basis);
  const double feas_tol = 1e-7 * (1.0 + b.cwiseAbs().maxCoeff());
  if (phase1.status != LpResult::Status::Optimal ||
      phase1.objective > feas_tol) {
    LpResult res;
    res.status = LpResult::Status::Infeasible;
    return res;
  }
  // Recover a basis for phase 2 from the phase-1 point: prefer columns with
  // positive value, then complete greedily to an invertible set.
  std::vector<Eigen::Index> basis2;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (phase1.x[j] > feas_tol) basis2.push_back(j);
  }
  auto rank_of = [&](const std::vector<Eigen::Index>& cols) {
    if (cols.empty()) return Eigen::Index(0);
    Mat sub(m, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
      sub.col(static_cast<Eigen::Index>(i)) = a.col(cols[i]);
    }
    Eigen::ColPivHouseholderQR<Mat> qr(sub);
    qr.setThreshold(1e-10);
    return qr.rank();
  };
  if (rank_of(basis2) < static_cast<Eigen::Index>(basis2.size())) {
    // Degenerate overlap; rebuild greedily from scratch.
    basis2.clear();
  }
  for (Eigen::Index j = 0; j < n && static_cast<Eigen::Index>(basis2.size()) < m;
       ++j) {
    if (std::find(basis2.begin(), basis2.end(), j) != basis2.end()) continue;
    basis2.push_back(j);
    if (rank_of(basis2) < static_cast<Eigen::Index>(basis2.size())) {
      basis2.pop_back();
    }
  }
  if (static_cast<Eigen::Index>(basis2.size()) < m) {
    // Rows are linearly dependent; restart from the identity artificial
    // basis with big-M costs, which is always invertible and feasible.
    Mat a2(m, n + m);
    a2 << a, Mat::Identity(m, m);
    Vec c2 = Vec::Zero(n + m);
    c2.head(n) = c;
    c2.tail(m).setConstant(1e8 * (1.0 + c.cwiseAbs().maxCoeff()));
    std::vector<Eigen::Index> full(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) full[static_cast<std::size_t>(i)] = n + i;
    LpResult res = detail::simplex_run(a2, b, c2, full);
    if (res.status == LpResult::Status::Optimal) {
      LpResult out;
      out.status = res.status;
      out.x = res.x.head(n);
      out.objective = c.dot(out.x);
      return out;
    }
    return res;
  }
  return detail::simplex_run(a, b, c, basis2);
}

/// Exhaustive basic-solution enumeration: exact at desk scale. Requires the
/// feasible region to be bounded when a minimum is requested.
inline LpResult solve_lp_enumerate(const Mat& a, const Vec& b, const Vec& c) {
  const Eigen::Index n = a.cols();
  Eigen::ColPivHouseholderQR<Mat> qr_full(a);
  qr_full.setThreshold(1e-10);
  const Eigen::Index rank = qr_full.rank();
  const double tol = 1e-9 * (1.0 + b.cwiseAbs().maxCoeff());

  LpResult best;
  best.status = LpResult::Status::Infeasible;

  std::vector<Eigen::Index> comb(static_cast<std::size_t>(rank));
  std::iota(comb.begin(), comb.end(), 0);
  auto advance = [&]() {
    Eigen::Index k = static_cast<Eigen::Index>(comb.size()) - 1;
    while (k >= 0 && comb[static_cast<std::size_t>(k)] ==
                         n - (static_cast<Eigen::Index>(comb.size()) - k)) {
      --k;
    }
    if (k < 0) return false;
    ++comb[static_cast<std::size_t>(k)];
    for (Eigen::Index j = k + 1; j < static_cast<Eigen::Index>(comb.size());
         ++j) {
      comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }
    return true;
  };

  if (rank == 0) {
    if (b.cwiseAbs().maxCoeff() <= tol) {
      best.status = LpResult::Status::Optimal;
      best.x = Vec::Zero(n);
      best.objective = 0.0;
    }
    return best;
  }
  do {
    Mat sub(a.rows(), rank);
    for (Eigen::Index i = 0; i < rank; ++i) {
      sub.col(i) = a.col(comb[static_cast<std::size_t>(i)]);
    }
    Eigen::ColPivHouseholderQR<Mat> qr(sub);
    qr.setThreshold(1e-10);
    if (qr.rank() < rank) continue;
    Vec xs = qr.solve(b);
    if ((sub * xs - b).cwiseAbs().maxCoeff() > tol) continue;
    if (xs.minCoeff() < -tol) continue;
    Vec x = Vec::Zero(n);
    for (Eigen::Index i = 0; i < rank; ++i) {
      x[comb[static_cast<std::size_t>(i)]] = std::max(xs[i], 0.0);
    }
    const double obj = c.dot(x);
    if (best.status != LpResult::Status::Optimal || obj < best.objective) {
      best.status = LpResult::Status::Optimal;
      best.x = x;
      best.objective = obj;
    }
  } while (advance());
  return best;
}

/// Vertex enumeration for desk-scale problems, simplex above.
inline LpResult solve_lp(const Mat& a, const Vec& b, const Vec& c) {
  if (a.cols() <= 20 && a.rows() <= 6) return solve_lp_enumerate(a, b, c);
  return solve_lp_simplex(a, b, c);
}

}  // namespace entmin
