#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "entmin/dual.hpp"
#include "entmin/recovery.hpp"
#include "entmin/sinkhorn.hpp"
#include "entmin/solver.hpp"

namespace entmin {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace detail {

inline Vec parse_vec(const json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidArgument(what + ": expected an array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& e : j) {
    if (!e.is_number()) throw InvalidArgument(what + ": expected numbers");
    v[i++] = e.get<double>();
  }
  return v;
}

inline Mat parse_mat(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw InvalidArgument(what + ": expected a nonempty array of rows");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Mat m;
  Eigen::Index r = 0;
  for (const auto& row : j) {
    Vec v = parse_vec(row, what + " row");
    if (cols < 0) {
      cols = v.size();
      m.resize(rows, cols);
    } else if (v.size() != cols) {
      throw InvalidArgument(what + ": ragged rows");
    }
    m.row(r++) = v.transpose();
  }
  return m;
}

inline json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

inline ordered_json vec_to_ordered(const Vec& v) {
  ordered_json arr = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace detail

/// Parsed moment-problem file: schema
/// {entropy: {name, m?}, ground: {points, weights}, theta: [[...]],
///  target: {singleton|box}, options?: {...}}.
struct ProblemFile {
  std::string entropy_name;
  std::optional<Vec> entropy_m;
  Vec points;
  Vec weights;
  Mat theta;
  TargetSet target = TargetSet::singleton(Vec::Zero(1));
  SolverOptions options;

  MomentProblem build() const {
    GroundSpace ground(points, weights);
    EntropySpec spec = catalog(entropy_name, ground, entropy_m);
    return MomentProblem(spec, MomentMap{theta}, target, ground, options);
  }
};

inline ProblemFile parse_problem(const json& j) {
  if (!j.is_object()) throw InvalidArgument("problem: expected an object");
  ProblemFile pf;
  if (!j.contains("entropy") || !j["entropy"].contains("name")) {
    throw InvalidArgument("problem: missing entropy.name");
  }
  pf.entropy_name = j["entropy"]["name"].get<std::string>();
  if (j["entropy"].contains("m")) {
    const json& jm = j["entropy"]["m"];
    if (jm.is_number()) {
      Vec m(1);
      m[0] = jm.get<double>();
      pf.entropy_m = m;
    } else {
      pf.entropy_m = detail::parse_vec(jm, "entropy.m");
    }
  }
  if (!j.contains("ground")) throw InvalidArgument("problem: missing ground");
  pf.points = detail::parse_vec(j["ground"].at("points"), "ground.points");
  pf.weights = detail::parse_vec(j["ground"].at("weights"), "ground.weights");
  if (!j.contains("theta")) throw InvalidArgument("problem: missing theta");
  pf.theta = detail::parse_mat(j["theta"], "theta");
  if (!j.contains("target")) throw InvalidArgument("problem: missing target");
  const json& jt = j["target"];
  if (jt.contains("singleton")) {
    pf.target = TargetSet::singleton(
        detail::parse_vec(jt["singleton"], "target.singleton"));
  } else if (jt.contains("box")) {
    pf.target = TargetSet::box(
        detail::parse_vec(jt["box"].at("center"), "target.box.center"),
        detail::parse_vec(jt["box"].at("radius"), "target.box.radius"));
  } else {
    throw InvalidArgument("problem: target must be singleton or box");
  }
  if (j.contains("options")) {
    const json& jo = j["options"];
    if (jo.contains("gap_tol")) pf.options.gap_tol = jo["gap_tol"].get<double>();
    if (jo.contains("max_iter")) pf.options.max_iter = jo["max_iter"].get<int>();
    if (jo.contains("ls_shrink")) {
      pf.options.ls_shrink = jo["ls_shrink"].get<double>();
    }
    if (jo.contains("domain_margin")) {
      pf.options.domain_margin = jo["domain_margin"].get<double>();
    }
    if (jo.contains("init_y")) {
      pf.options.init_y = detail::parse_vec(jo["init_y"], "options.init_y");
    }
  }
  return pf;
}

inline ProblemFile parse_problem_text(const std::string& text) {
  return parse_problem(json::parse(text));
}

/// Canonical re-serialization: fixed field order, shortest round-trip
/// numbers (courtesy of the JSON library's double formatting).
inline ordered_json dump_normalized(const ProblemFile& pf) {
  ordered_json out;
  ordered_json entropy;
  entropy["name"] = pf.entropy_name;
  if (pf.entropy_m.has_value()) {
    entropy["m"] = detail::vec_to_ordered(*pf.entropy_m);
  }
  out["entropy"] = entropy;
  ordered_json ground;
  ground["points"] = detail::vec_to_ordered(pf.points);
  ground["weights"] = detail::vec_to_ordered(pf.weights);
  out["ground"] = ground;
  ordered_json theta = ordered_json::array();
  for (Eigen::Index r = 0; r < pf.theta.rows(); ++r) {
    theta.push_back(detail::vec_to_ordered(pf.theta.row(r).transpose()));
  }
  out["theta"] = theta;
  ordered_json target;
  if (pf.target.kind() == TargetSet::Kind::Singleton) {
    target["singleton"] = detail::vec_to_ordered(pf.target.center());
  } else {
    ordered_json box;
    box["center"] = detail::vec_to_ordered(pf.target.center());
    box["radius"] = detail::vec_to_ordered(pf.target.radius());
    target["box"] = box;
  }
  out["target"] = target;
  ordered_json options;
  options["gap_tol"] = pf.options.gap_tol;
  options["max_iter"] = pf.options.max_iter;
  options["ls_shrink"] = pf.options.ls_shrink;
  options["domain_margin"] = pf.options.domain_margin;
  if (pf.options.init_y.size() > 0) {
    options["init_y"] = detail::vec_to_ordered(pf.options.init_y);
  }
  out["options"] = options;
  return out;
}

/// Parsed marginal-problem file: schema
/// {kernel: [[...]], row_target: [...], col_target: [...], tol?, max_sweeps?}.
struct MarginalFile {
  Mat kernel;
  Vec row_target;
  Vec col_target;
  double tol = 1e-10;
  int max_sweeps = 500;

  MarginalProblem build() const {
    return MarginalProblem(kernel, row_target, col_target);
  }
};

inline MarginalFile parse_marginal(const json& j) {
  if (!j.is_object()) throw InvalidArgument("marginals: expected an object");
  MarginalFile mf;
  mf.kernel = detail::parse_mat(j.at("kernel"), "kernel");
  mf.row_target = detail::parse_vec(j.at("row_target"), "row_target");
  mf.col_target = detail::parse_vec(j.at("col_target"), "col_target");
  if (j.contains("tol")) mf.tol = j["tol"].get<double>();
  if (j.contains("max_sweeps")) mf.max_sweeps = j["max_sweeps"].get<int>();
  return mf;
}

/// Flat key-value certificate report.
inline json certificate_to_json(const DualCertificate& cert) {
  json out;
  out["y_hat"] = detail::vec_to_json(cert.y_hat);
  out["q_hat"] = detail::vec_to_json(cert.q_hat);
  out["primal_value"] = cert.primal_value;
  out["dual_value"] = cert.dual_value;
  out["gap"] = cert.gap;
  out["young_residual"] = cert.young_residual;
  out["feasibility_residual"] = cert.feasibility_residual;
  out["gamma_star_value"] = cert.gamma_star_value;
  return out;
}

}  // namespace entmin
