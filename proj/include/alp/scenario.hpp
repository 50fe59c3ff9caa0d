#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "alp/bvp.hpp"
#include "alp/io.hpp"
#include "alp/lattice.hpp"
#include "alp/params.hpp"
#include "alp/quadrotor.hpp"
#include "alp/workspace.hpp"

namespace alp {

/// Full experiment description for the quadrotor campaign: the uncertain
/// attitude channel that gets identified, the planar channel that gets
/// planned, and every knob of the loop between them. The true parameters are
/// carried here for the plant simulator only; the planning pipeline never
/// reads them.
struct Scenario {
  int version = 1;
  std::string label = "scenario";
  std::string model = "quadrotor_planar";
  std::uint64_t seed = 0;
  int executions = 1;
  double dt_id = 1e-3;
  double dt_plan = 1e-2;

  // attitude channel
  QuadrotorConstants constants;
  double omega = 10.0;
  double rate_limit = 3.0;
  double attitude_input_limit = 2.0;
  LumpedParams true_theta;
  ParamPolytope psi;
  std::vector<LumpedParams> psi_d;
  Eigen::VectorXd gamma;
  double adaptation_rate = 1.0;
  double tracking_gain = 2.0;
  double nominal_tolerance = 1e-9;

  // planar channel
  Eigen::VectorXd lattice_lo, lattice_hi, lattice_resolution;
  int connectivity = 8;
  Workspace workspace;
  Eigen::VectorXi start_node, goal_node;
  double velocity_limit = 2.0;
  double acceleration_limit = 3.0;
  double loop_kp = 1.0;
  double loop_kd = 2.0;
  double tilt_coupling = 0.8;
  double input_margin = 1.25;

  // attitude excitation during execution
  Eigen::Vector3d excitation_amplitudes{0.5, 0.45, 0.35};
  Eigen::Vector3d excitation_frequencies{0.9, 0.7, 0.5};
  double plan_coupling = 0.1;
  double ramp_time = 0.5;

  BvpConfig primitive_cfg;

  SystemModel attitude_model() const {
    return quadrotor_attitude_model(omega, rate_limit, attitude_input_limit);
  }
  SystemModel position_model() const {
    double extent = std::max(workspace.bounds.hi.cwiseAbs().maxCoeff(),
                             workspace.bounds.lo.cwiseAbs().maxCoeff());
    return planar_position_model(extent + 10.0, velocity_limit, acceleration_limit);
  }
  LatticeSpec lattice() const {
    return build_lattice({0, 1}, lattice_lo, lattice_hi, lattice_resolution,
                         planar_connectivity(connectivity), Eigen::VectorXd::Zero(4));
  }
};

namespace detail {

inline void require_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) throw ScenarioError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ScenarioError("unknown key '" + it.key() + "' in " + where);
  }
}

inline Eigen::VectorXd json_vec(const nlohmann::json& j, const std::string& where,
                                Eigen::Index expected = -1) {
  if (!j.is_array()) throw ScenarioError(where + " must be an array");
  auto v = j.get<std::vector<double>>();
  if (expected >= 0 && static_cast<Eigen::Index>(v.size()) != expected)
    throw ScenarioError(where + " has the wrong length");
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Eigen::VectorXi json_ivec(const nlohmann::json& j, const std::string& where,
                                 Eigen::Index expected = -1) {
  if (!j.is_array()) throw ScenarioError(where + " must be an array");
  auto v = j.get<std::vector<int>>();
  if (expected >= 0 && static_cast<Eigen::Index>(v.size()) != expected)
    throw ScenarioError(where + " has the wrong length");
  return Eigen::Map<Eigen::VectorXi>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline LumpedParams json_params(const nlohmann::json& j, const std::string& where) {
  require_keys(j, {"theta_x", "theta_u", "rows", "p", "m"}, where);
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto p = j.at("p").get<Eigen::Index>();
  const auto m = j.at("m").get<Eigen::Index>();
  auto tx = json_vec(j.at("theta_x"), where + ".theta_x", rows * p);
  auto tu = json_vec(j.at("theta_u"), where + ".theta_u", rows * m);
  Eigen::MatrixXd mx(rows, p), mu(rows, m);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < p; ++c) mx(r, c) = tx[r * p + c];
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < m; ++c) mu(r, c) = tu[r * m + c];
  return LumpedParams(mx, mu);
}

inline void write_params(JsonWriter& w, const LumpedParams& th) {
  w.begin_object();
  w.key("rows").value(static_cast<int>(th.n()));
  w.key("p").value(static_cast<int>(th.p()));
  w.key("m").value(static_cast<int>(th.m()));
  w.key("theta_x").value(th.theta_x);
  w.key("theta_u").value(th.theta_u);
  w.end_object();
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }

  detail::require_keys(
      j,
      {"version", "label", "model", "seed", "executions", "dt_id", "dt_plan", "quadrotor",
       "true_theta", "psi_vertices", "psi_d", "gamma", "adaptation_rate", "tracking_gain",
       "nominal_tolerance", "lattice", "workspace", "start_node", "goal_node", "position",
       "attitude_excitation", "primitive"},
      "scenario");

  Scenario s;
  s.version = j.at("version").get<int>();
  if (s.version != 1) throw ScenarioError("unsupported scenario version");
  s.label = j.value("label", std::string("scenario"));
  s.model = j.at("model").get<std::string>();
  if (s.model != "quadrotor_planar")
    throw ScenarioError("unknown model label: " + s.model);
  s.seed = j.value("seed", std::uint64_t{0});
  s.executions = j.value("executions", 1);
  if (s.executions < 1) throw ScenarioError("executions must be at least 1");
  s.dt_id = j.value("dt_id", 1e-3);
  s.dt_plan = j.value("dt_plan", 1e-2);
  if (s.dt_id <= 0 || s.dt_plan <= 0) throw ScenarioError("step sizes must be positive");

  if (j.contains("quadrotor")) {
    const auto& q = j.at("quadrotor");
    detail::require_keys(q, {"omega", "rate_limit", "input_limit"}, "quadrotor");
    s.omega = q.value("omega", s.omega);
    s.rate_limit = q.value("rate_limit", s.rate_limit);
    s.attitude_input_limit = q.value("input_limit", s.attitude_input_limit);
  }

  // uncertain parameters: compact (c1, c2) pairs over the attitude model
  {
    const auto& tt = j.at("true_theta");
    detail::require_keys(tt, {"c1", "c2"}, "true_theta");
    s.true_theta = quadrotor_attitude_params(s.constants, tt.at("c1").get<double>(),
                                             tt.at("c2").get<double>());

    std::vector<LumpedParams> vertices;
    for (const auto& v : j.at("psi_vertices")) {
      if (v.is_array()) {
        auto pair = detail::json_vec(v, "psi_vertices[]", 2);
        vertices.push_back(quadrotor_attitude_params(s.constants, pair[0], pair[1]));
      } else {
        vertices.push_back(detail::json_params(v, "psi_vertices[]"));
      }
    }
    s.psi = ParamPolytope(std::move(vertices));
  }

  {
    const auto& pd = j.at("psi_d");
    detail::require_keys(pd, {"mode", "values"}, "psi_d");
    auto mode = pd.at("mode").get<std::string>();
    if (mode == "vertices_plus_centroid") {
      s.psi_d = s.psi.vertices();
      Eigen::VectorXd g = Eigen::VectorXd::Constant(
          static_cast<Eigen::Index>(s.psi.size()), 1.0 / static_cast<double>(s.psi.size()));
      s.psi_d.push_back(s.psi.convex_combine(g));
    } else if (mode == "explicit") {
      for (const auto& v : pd.at("values")) {
        auto pair = detail::json_vec(v, "psi_d.values[]", 2);
        s.psi_d.push_back(quadrotor_attitude_params(s.constants, pair[0], pair[1]));
      }
      if (s.psi_d.empty()) throw ScenarioError("psi_d.values is empty");
    } else {
      throw ScenarioError("psi_d.mode must be vertices_plus_centroid or explicit");
    }
  }

  s.gamma = detail::json_vec(j.at("gamma"), "gamma",
                             static_cast<Eigen::Index>(s.psi.size()));
  s.adaptation_rate = j.at("adaptation_rate").get<double>();
  s.tracking_gain = j.at("tracking_gain").get<double>();
  s.nominal_tolerance = j.value("nominal_tolerance", 1e-9);

  {
    const auto& l = j.at("lattice");
    detail::require_keys(l, {"resolution", "connectivity", "bounds"}, "lattice");
    s.lattice_resolution = detail::json_vec(l.at("resolution"), "lattice.resolution", 2);
    s.connectivity = l.at("connectivity").get<int>();
    const auto& b = l.at("bounds");
    if (!b.is_array() || b.size() != 2) throw ScenarioError("lattice.bounds needs two axes");
    s.lattice_lo = Eigen::VectorXd(2);
    s.lattice_hi = Eigen::VectorXd(2);
    for (int d = 0; d < 2; ++d) {
      auto axis = detail::json_vec(b[static_cast<std::size_t>(d)], "lattice.bounds[]", 2);
      s.lattice_lo[d] = axis[0];
      s.lattice_hi[d] = axis[1];
    }
  }

  {
    const auto& ws = j.at("workspace");
    detail::require_keys(ws, {"bounds", "obstacles"}, "workspace");
    const auto& b = ws.at("bounds");
    if (!b.is_array() || b.size() != 2) throw ScenarioError("workspace.bounds needs two axes");
    Eigen::VectorXd lo(2), hi(2);
    for (int d = 0; d < 2; ++d) {
      auto axis = detail::json_vec(b[static_cast<std::size_t>(d)], "workspace.bounds[]", 2);
      lo[d] = axis[0];
      hi[d] = axis[1];
    }
    s.workspace.bounds = Box(lo, hi);
    for (const auto& o : ws.at("obstacles")) {
      if (!o.is_array() || o.size() != 2) throw ScenarioError("obstacle needs lo and hi corners");
      auto olo = detail::json_vec(o[0], "obstacle.lo", 2);
      auto ohi = detail::json_vec(o[1], "obstacle.hi", 2);
      Box ob(olo, ohi);
      if (!s.workspace.bounds.contains(olo) || !s.workspace.bounds.contains(ohi))
        throw ScenarioError("obstacle extends beyond the workspace bounds");
      s.workspace.obstacles.push_back(ob);
    }
  }

  s.start_node = detail::json_ivec(j.at("start_node"), "start_node", 2);
  s.goal_node = detail::json_ivec(j.at("goal_node"), "goal_node", 2);

  if (j.contains("position")) {
    const auto& p = j.at("position");
    detail::require_keys(p,
                         {"velocity_limit", "acceleration_limit", "loop_kp", "loop_kd",
                          "tilt_coupling", "input_margin"},
                         "position");
    s.velocity_limit = p.value("velocity_limit", s.velocity_limit);
    s.acceleration_limit = p.value("acceleration_limit", s.acceleration_limit);
    s.loop_kp = p.value("loop_kp", s.loop_kp);
    s.loop_kd = p.value("loop_kd", s.loop_kd);
    s.tilt_coupling = p.value("tilt_coupling", s.tilt_coupling);
    s.input_margin = p.value("input_margin", s.input_margin);
  }

  if (j.contains("attitude_excitation")) {
    const auto& e = j.at("attitude_excitation");
    detail::require_keys(e, {"amplitudes", "frequencies", "plan_coupling", "ramp_time"},
                         "attitude_excitation");
    auto a = detail::json_vec(e.at("amplitudes"), "attitude_excitation.amplitudes", 3);
    auto f = detail::json_vec(e.at("frequencies"), "attitude_excitation.frequencies", 3);
    s.excitation_amplitudes = a;
    s.excitation_frequencies = f;
    s.plan_coupling = e.value("plan_coupling", s.plan_coupling);
    s.ramp_time = e.value("ramp_time", s.ramp_time);
  }

  if (j.contains("primitive")) {
    const auto& p = j.at("primitive");
    detail::require_keys(p, {"segments", "samples", "t_min", "t_max", "golden_tol"}, "primitive");
    s.primitive_cfg.segments = p.value("segments", s.primitive_cfg.segments);
    s.primitive_cfg.samples = p.value("samples", s.primitive_cfg.samples);
    s.primitive_cfg.t_min = p.value("t_min", s.primitive_cfg.t_min);
    s.primitive_cfg.t_max = p.value("t_max", s.primitive_cfg.t_max);
    s.primitive_cfg.golden_tol = p.value("golden_tol", s.primitive_cfg.golden_tol);
  }

  // cross-field invariants
  if (!s.psi.contains(s.true_theta, 1e-9))
    throw ScenarioError("true parameters lie outside the uncertainty set");
  if (s.adaptation_rate <= 0 || s.tracking_gain <= 0)
    throw ScenarioError("gains must be positive");
  if (s.input_margin < 1.0) throw ScenarioError("input margin must be at least 1");
  for (const auto& th : s.psi_d)
    if (!s.psi.contains(th, 1e-9))
      throw ScenarioError("a discrete nominal sample lies outside the uncertainty set");
  return s;
}

/// Serializes a scenario with the polytope as an ordered vertex list of
/// row-major matrices.
inline std::string scenario_to_json(const Scenario& s) {
  JsonWriter w;
  w.begin_object();
  w.key("version").value(1);
  w.key("label").value(s.label);
  w.key("model").value(s.model);
  w.key("seed").value(static_cast<std::int64_t>(s.seed));
  w.key("executions").value(s.executions);
  w.key("dt_id").value(s.dt_id);
  w.key("dt_plan").value(s.dt_plan);

  w.key("quadrotor").begin_object();
  w.key("omega").value(s.omega);
  w.key("rate_limit").value(s.rate_limit);
  w.key("input_limit").value(s.attitude_input_limit);
  w.end_object();

  auto [c1, c2] = attitude_c_coeffs(s.true_theta);
  w.key("true_theta").begin_object();
  w.key("c1").value(c1);
  w.key("c2").value(c2);
  w.end_object();

  w.key("psi_vertices").begin_array();
  for (const auto& v : s.psi.vertices()) detail::write_params(w, v);
  w.end_array();

  w.key("psi_d").begin_object();
  w.key("mode").value("vertices_plus_centroid");
  w.end_object();

  w.key("gamma").value(s.gamma);
  w.key("adaptation_rate").value(s.adaptation_rate);
  w.key("tracking_gain").value(s.tracking_gain);
  w.key("nominal_tolerance").value(s.nominal_tolerance);

  w.key("lattice").begin_object();
  w.key("resolution").value(s.lattice_resolution);
  w.key("connectivity").value(s.connectivity);
  w.key("bounds").begin_array();
  for (int d = 0; d < 2; ++d) {
    w.begin_array().value(s.lattice_lo[d]).value(s.lattice_hi[d]).end_array();
  }
  w.end_array();
  w.end_object();

  w.key("workspace").begin_object();
  w.key("bounds").begin_array();
  for (int d = 0; d < 2; ++d) {
    w.begin_array().value(s.workspace.bounds.lo[d]).value(s.workspace.bounds.hi[d]).end_array();
  }
  w.end_array();
  w.key("obstacles").begin_array();
  for (const auto& o : s.workspace.obstacles) {
    w.begin_array();
    w.value(o.lo);
    w.value(o.hi);
    w.end_array();
  }
  w.end_array();
  w.end_object();

  w.key("start_node").value(s.start_node);
  w.key("goal_node").value(s.goal_node);

  w.key("position").begin_object();
  w.key("velocity_limit").value(s.velocity_limit);
  w.key("acceleration_limit").value(s.acceleration_limit);
  w.key("loop_kp").value(s.loop_kp);
  w.key("loop_kd").value(s.loop_kd);
  w.key("tilt_coupling").value(s.tilt_coupling);
  w.key("input_margin").value(s.input_margin);
  w.end_object();

  w.key("attitude_excitation").begin_object();
  w.key("amplitudes").begin_array();
  for (int i = 0; i < 3; ++i) w.value(s.excitation_amplitudes[i]);
  w.end_array();
  w.key("frequencies").begin_array();
  for (int i = 0; i < 3; ++i) w.value(s.excitation_frequencies[i]);
  w.end_array();
  w.key("plan_coupling").value(s.plan_coupling);
  w.key("ramp_time").value(s.ramp_time);
  w.end_object();

  w.key("primitive").begin_object();
  w.key("segments").value(s.primitive_cfg.segments);
  w.key("samples").value(s.primitive_cfg.samples);
  w.key("t_min").value(s.primitive_cfg.t_min);
  w.key("t_max").value(s.primitive_cfg.t_max);
  w.key("golden_tol").value(s.primitive_cfg.golden_tol);
  w.end_object();

  w.end_object();
  return w.str();
}

}  // namespace alp
