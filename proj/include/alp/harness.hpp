#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "alp/identifier.hpp"
#include "alp/planner.hpp"
#include "alp/primitives.hpp"
#include "alp/scenario.hpp"
#include "alp/svg.hpp"
#include "alp/tube_control.hpp"

namespace alp {

/// Piecewise reference along a plan: absolute position, velocity and
/// acceleration of the chained primitive samples, with a hover hold past the
/// final node.
class PlanReference {
 public:
  PlanReference(const Plan& plan, const PrimitiveLibrary& lib) {
    const auto& lattice = lib.lattice;
    double t = 0.0;
    for (std::size_t k = 0; k < plan.offsets.size(); ++k) {
      const MotionPrimitive* mp = lib.find(plan.nominal_id, plan.offsets[k]);
      if (!mp) throw Error("plan references a missing primitive");
      Edge e;
      e.start_time = t;
      e.duration = mp->duration;
      e.anchor = lattice.node_position(plan.nodes[k]);
      e.mp = mp;
      edges_.push_back(e);
      t += mp->duration;
    }
    total_ = t;
    if (!plan.nodes.empty()) final_pos_ = lib.lattice.node_position(plan.nodes.back());
  }

  double duration() const { return total_; }

  struct Sample {
    Eigen::Vector2d pos, vel, acc;
  };

  Sample at(double t) const {
    Sample s;
    s.pos = final_pos_;
    s.vel.setZero();
    s.acc.setZero();
    if (edges_.empty() || t >= total_) return s;
    // locate the active edge (few edges; linear scan is fine)
    const Edge* e = &edges_.back();
    for (const auto& cand : edges_) {
      if (t < cand.start_time + cand.duration + 1e-12) {
        e = &cand;
        break;
      }
    }
    const auto& st = e->mp->states;
    const auto& in = e->mp->inputs;
    const auto ns = static_cast<int>(st.size());
    double local = std::clamp(t - e->start_time, 0.0, e->duration);
    double grid = local / e->duration * (ns - 1);
    auto k = std::min(static_cast<int>(std::floor(grid)), ns - 2);
    double a = grid - k;

    Eigen::VectorXd x = (1.0 - a) * st[static_cast<std::size_t>(k)] +
                        a * st[static_cast<std::size_t>(k + 1)];
    Eigen::VectorXd u = (1.0 - a) * in[static_cast<std::size_t>(k)] +
                        a * in[static_cast<std::size_t>(k + 1)];
    s.pos = e->anchor + x.head<2>();
    s.vel = x.segment<2>(2);
    s.acc = u.head<2>();
    return s;
  }

 private:
  struct Edge {
    double start_time = 0.0;
    double duration = 0.0;
    Eigen::Vector2d anchor;
    const MotionPrimitive* mp = nullptr;
  };
  std::vector<Edge> edges_;
  double total_ = 0.0;
  Eigen::Vector2d final_pos_{0.0, 0.0};
};

/// Smooth attitude-rate reference: biased sinusoids for excitation plus an
/// optional coupling to the plan's acceleration profile, ramped in so the
/// reference starts exactly at hover.
class AttitudeReference {
 public:
  AttitudeReference(const Scenario& s, const PlanReference* plan, const Eigen::Vector3d& phases)
      : amp_(s.excitation_amplitudes),
        freq_(s.excitation_frequencies),
        phase_(phases),
        coupling_(s.plan_coupling),
        ramp_(s.ramp_time),
        plan_(plan) {}

  // The plan enters through its velocity profile, which stays continuous
  // across primitive junctions, so the reference never asks the attitude
  // loop to jump; its derivative picks up the piecewise accelerations.
  Eigen::Vector3d rates(double t) const {
    Eigen::Vector3d r;
    for (int i = 0; i < 3; ++i)
      r[i] = amp_[i] * (std::cos(phase_[i]) - std::cos(freq_[i] * t + phase_[i]));
    if (plan_ && coupling_ != 0.0) {
      auto s = plan_->at(t);
      double ramp = ramp_ > 0.0 ? std::min(t / ramp_, 1.0) : 1.0;
      r[0] += coupling_ * ramp * s.vel[1];
      r[1] += coupling_ * ramp * s.vel[0];
    }
    return r;
  }

  Eigen::Vector3d rates_dot(double t) const {
    Eigen::Vector3d r;
    for (int i = 0; i < 3; ++i) r[i] = amp_[i] * freq_[i] * std::sin(freq_[i] * t + phase_[i]);
    if (plan_ && coupling_ != 0.0) {
      auto s = plan_->at(t);
      double ramp = ramp_ > 0.0 ? std::min(t / ramp_, 1.0) : 1.0;
      double dramp = (ramp_ > 0.0 && t < ramp_) ? 1.0 / ramp_ : 0.0;
      r[0] += coupling_ * (dramp * s.vel[1] + ramp * s.acc[1]);
      r[1] += coupling_ * (dramp * s.vel[0] + ramp * s.acc[0]);
    }
    return r;
  }

 private:
  Eigen::Vector3d amp_, freq_, phase_;
  double coupling_;
  double ramp_;
  const PlanReference* plan_;
};

struct ExecutionRecord {
  int index = 0;
  double diam_start = 0.0;
  double diam_end = 0.0;
  double delta = 0.0;
  int nominal_id = 0;
  double plan_cost = 0.0;
  double max_tube_dev = 0.0;
  bool tube_violation = false;
  bool diam_increase = false;
  Plan plan;
  std::vector<Eigen::Vector2d> executed_positions;   // at dt_plan
  std::vector<Eigen::Vector2d> nominal_positions;    // at dt_plan
  std::string identifier_csv;                        // t,diam_S,norm_xtilde,delta
  std::vector<std::string> files;
};

struct CampaignReport {
  std::vector<ExecutionRecord> records;
  std::string metrics_csv;
  bool any_violation = false;
};

/// Everything the offline block produces before the plant is ever touched.
/// Pure function of the scenario minus its true parameters.
struct OfflinePlan {
  double diam_start = 0.0;
  double delta = 0.0;
  int nominal_id = 0;
  LumpedParams theta_bar;
  std::shared_ptr<const PrimitiveLibrary> library;
  Plan plan;
};

namespace detail {

/// Correction budget of the position loop when the attitude channel can err
/// by up to delta: steady position gain 1/kp, velocity kernel L1 norm
/// 2 e^{-1} / sqrt(kp) for the critically damped pair.
inline double position_correction_bound(const Scenario& s, double delta) {
  const double kp = s.loop_kp, kd = s.loop_kd, kappa = s.tilt_coupling;
  const double pos_dev = kappa * delta / kp;
  const double vel_dev = kappa * delta * 2.0 * std::exp(-1.0) / std::sqrt(kp);
  return kp * pos_dev + kd * vel_dev;
}

}  // namespace detail

/// Cache of generated libraries keyed by their configuration digest, owned
/// by a campaign so unchanged tightening reuses the previous generation.
using LibraryCache = std::map<std::string, std::shared_ptr<const PrimitiveLibrary>>;

/// Offline block: freeze the tube radius from the carried model set, tighten
/// every constraint, pick the nominal parameters, generate (or reuse) the
/// primitive library and solve the graph search. Never reads true_theta.
inline OfflinePlan offline_plan(const Scenario& s, const IdentifierState& id,
                                LibraryCache* cache = nullptr) {
  OfflinePlan out;
  out.diam_start = id.s0_diam;
  out.delta = delta_bound(id.s0_diam, s.adaptation_rate);

  auto [theta_hat, x_hat] = combined_estimate(id);
  (void)x_hat;
  auto [nominal_id, theta_bar] =
      select_nominal(s.psi_d, model_set(id), theta_hat, s.nominal_tolerance);
  out.nominal_id = nominal_id;
  out.theta_bar = theta_bar;

  // Tightened planar boxes: velocities shrink by the tube radius, inputs by
  // the margin times the worst position-loop correction.
  SystemModel pos_model = s.position_model();
  const double corr = detail::position_correction_bound(s, out.delta);
  Box input_s = tighten_inputs(pos_model.input_box,
                               {Eigen::VectorXd::Constant(2, corr)}, s.input_margin);
  BvpLimits limits = BvpLimits::unbounded_state(input_s, pos_model.n);
  const double vel_s = s.velocity_limit - out.delta;
  if (vel_s <= 0.0) throw EmptySet("velocity set empty after tightening");
  limits.state_lo[2] = limits.state_lo[3] = -vel_s;
  limits.state_hi[2] = limits.state_hi[3] = vel_s;

  // One planar nominal slot per attitude nominal: the planar dynamics are
  // exactly known, so the slices coincide, but the (nominal, offset) keying
  // of the library is preserved.
  std::vector<LumpedParams> planar_nominals(s.psi_d.size(), planar_position_params());

  std::string digest_seed = "delta=" + format_number(out.delta) + "|vel=" + format_number(vel_s);
  LatticeSpec lattice = s.lattice();
  std::shared_ptr<const PrimitiveLibrary> lib;
  {
    // the digest is known before generating: hash the same seed string
    // build_library uses
    std::string digest_src = digest_seed;
    digest_src += "|segments=" + std::to_string(s.primitive_cfg.segments);
    digest_src += "|samples=" + std::to_string(s.primitive_cfg.samples);
    digest_src += "|trange=" + format_number(s.primitive_cfg.t_min) + ":" +
                  format_number(s.primitive_cfg.t_max);
    digest_src += "|n=" + std::to_string(planar_nominals.size());
    for (const auto& th : planar_nominals) digest_src += "|" + format_number(th.frobenius_norm());
    for (Eigen::Index j = 0; j < limits.input_box.dims(); ++j)
      digest_src += "|u" + format_number(limits.input_box.lo[j]) + ":" +
                    format_number(limits.input_box.hi[j]);
    std::string digest = hex64(fnv1a64(digest_src));
    if (cache) {
      auto it = cache->find(digest);
      if (it != cache->end()) lib = it->second;
    }
    if (!lib) {
      auto [built, rep] = build_library(planar_nominals, pos_model, lattice,
                                        RunningCost::standard(2), limits, s.primitive_cfg,
                                        digest_seed);
      auto shared = std::make_shared<PrimitiveLibrary>(std::move(built));
      if (shared->digest != digest) throw Error("library digest mismatch");
      lib = shared;
      if (cache) (*cache)[digest] = lib;
    }
  }
  out.library = lib;

  out.plan = plan_path(s.start_node, s.goal_node, *lib, nominal_id, s.workspace, out.delta);
  return out;
}

/// Online block: simulate the true plant along the plan while the identifier
/// runs on the attitude channel. Returns the record and the carried
/// identifier state.
inline std::pair<ExecutionRecord, IdentifierState> run_execution(
    const Scenario& s, const std::optional<IdentifierState>& carried, int index = 0,
    LibraryCache* cache = nullptr, const Eigen::Vector3d& excitation_phases = {0, 0, 0}) {
  SystemModel att = s.attitude_model();
  Eigen::VectorXd att0 = Eigen::VectorXd::Zero(3);
  IdentifierState id = carried ? rebase_identifier(*carried, att0)
                               : init_identifier(s.psi, s.gamma, s.adaptation_rate,
                                                 s.tracking_gain, att0);

  OfflinePlan off = offline_plan(s, id, cache);

  ExecutionRecord rec;
  rec.index = index;
  rec.diam_start = off.diam_start;
  rec.delta = off.delta;
  rec.nominal_id = off.nominal_id;
  rec.plan = off.plan;
  rec.plan_cost = off.plan.cost;

  PlanReference plan_ref(off.plan, *off.library);
  AttitudeReference att_ref(s, &plan_ref, excitation_phases);
  ControlContext ctx(off.theta_bar, s.tracking_gain, att);

  const double dt = s.dt_id;
  const auto steps = static_cast<std::int64_t>(std::ceil(plan_ref.duration() / dt - 1e-9));
  const auto stride = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(s.dt_plan / dt)));

  Eigen::VectorXd r = att0;                       // attitude plant state
  Eigen::Vector2d p = plan_ref.at(0.0).pos;       // position plant
  Eigen::Vector2d v = Eigen::Vector2d::Zero();

  rec.identifier_csv = "t,diam_S,norm_xtilde,delta\n";
  auto record_sample = [&](double t) {
    rec.executed_positions.push_back(p);
    rec.nominal_positions.push_back(plan_ref.at(t).pos);
    auto [th, xh] = combined_estimate(id);
    (void)th;
    rec.identifier_csv += format_number(t) + "," + format_number(current_diam(id)) + "," +
                          format_number((r - xh).norm()) + "," + format_number(rec.delta) + "\n";
  };

  for (std::int64_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k % stride == 0) record_sample(t);

    Eigen::VectorXd rbar = att_ref.rates(t);
    Eigen::VectorXd rdot = att_ref.rates_dot(t);
    Eigen::VectorXd ubar =
        ctx.theta_bar.theta_u.fullPivLu().solve(rdot - ctx.theta_bar.theta_x * att.phi(rbar));

    auto [theta_hat, x_hat] = combined_estimate(id);
    (void)x_hat;
    Eigen::VectorXd u_att = ubar + nu(r, rbar, ubar, theta_hat, ctx);

    std::vector<LumpedParams> psis;
    std::vector<Eigen::VectorXd> xhats;
    psis.reserve(id.q());
    xhats.reserve(id.q());
    for (const auto& vx : id.vertices) {
      psis.push_back(vx.psi_hat);
      xhats.push_back(vx.x_hat);
    }
    auto u_hats = vertex_controls(r, rbar, ubar, psis, xhats, id.gamma, ctx);

    // attitude tracking error drives the realized-acceleration disturbance
    Eigen::Vector2d e_att(r[1] - rbar[1], r[0] - rbar[0]);
    auto plan_s = plan_ref.at(t);
    auto plan_mid = plan_ref.at(t + 0.5 * dt);  // midpoint feedforward for the held step
    Eigen::Vector2d a_cmd =
        plan_mid.acc + s.loop_kp * (plan_s.pos - p) + s.loop_kd * (plan_s.vel - v);
    Eigen::Vector2d a_real = a_cmd + s.tilt_coupling * e_att;

    id = identifier_step(id, att, r, u_att, u_hats, dt);
    {
      auto f = [&](double, const Eigen::VectorXd& x) {
        return eval_dynamics(att, s.true_theta, x, u_att);
      };
      r = rk4_step(f, t, r, dt);
    }
    {
      // closed-form step of the double integrator under the held acceleration
      p += v * dt + 0.5 * a_real * dt * dt;
      v += a_real * dt;
    }

    double dev = (p - plan_ref.at(t + dt).pos).norm();
    rec.max_tube_dev = std::max(rec.max_tube_dev, dev);
  }
  record_sample(static_cast<double>(steps) * dt);

  rec.diam_end = current_diam(id);
  // The flag allows for the representation floor of the sampled primitives
  // and the held-input loop, which persists even with zero radius.
  rec.tube_violation = rec.max_tube_dev > rec.delta + 2e-3;
  rec.diam_increase = rec.diam_end > rec.diam_start + 1e-8;
  return {std::move(rec), std::move(id)};
}

inline std::string metrics_csv_header() {
  return "execution,diam_start,diam_end,delta,plan_cost,max_tube_dev\n";
}

inline std::string metrics_csv_row(const ExecutionRecord& r) {
  std::string row = std::to_string(r.index);
  row += "," + format_number(r.diam_start);
  row += "," + format_number(r.diam_end);
  row += "," + format_number(r.delta);
  row += "," + format_number(r.plan_cost);
  row += "," + format_number(r.max_tube_dev);
  row += "\n";
  return row;
}

/// Chains executions with identifier carry-over; optionally writes metrics,
/// trajectories, plans and the overlay plot under out_dir.
inline CampaignReport run_campaign(const Scenario& s, const std::string& out_dir = "",
                                   bool emit_plots = false) {
  namespace fs = std::filesystem;
  CampaignReport report;
  report.metrics_csv = metrics_csv_header();
  LibraryCache cache;
  std::optional<IdentifierState> carried;

  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> uphase(0.0, 2.0 * 3.14159265358979323846);

  const bool write = !out_dir.empty();
  if (write) fs::create_directories(out_dir);

  std::vector<SvgPath> svg_paths;
  for (int e = 1; e <= s.executions; ++e) {
    Eigen::Vector3d phases(uphase(rng), uphase(rng), uphase(rng));
    auto [rec, id] = run_execution(s, carried, e, &cache, phases);
    carried = std::move(id);
    report.metrics_csv += metrics_csv_row(rec);
    report.any_violation = report.any_violation || rec.tube_violation || rec.diam_increase;

    if (write) {
      char tag[16];
      std::snprintf(tag, sizeof(tag), "%02d", e);
      auto save = [&](const std::string& name, const std::string& content) {
        write_text_file(out_dir + "/" + name, content);
        rec.files.push_back(name);
      };
      save("plan_" + std::string(tag) + ".json", plan_to_json(rec.plan));
      // executed and nominal traces at the plan step
      std::string ex = "t,x1,x2\n", nom = "t,x1,x2\n";
      for (std::size_t i = 0; i < rec.executed_positions.size(); ++i) {
        double t = static_cast<double>(i) * s.dt_plan;
        ex += format_number(t) + "," + format_number(rec.executed_positions[i][0]) + "," +
              format_number(rec.executed_positions[i][1]) + "\n";
        nom += format_number(t) + "," + format_number(rec.nominal_positions[i][0]) + "," +
               format_number(rec.nominal_positions[i][1]) + "\n";
      }
      save("exec_" + std::string(tag) + "_executed.csv", ex);
      save("exec_" + std::string(tag) + "_nominal.csv", nom);
      save("exec_" + std::string(tag) + "_identifier.csv", rec.identifier_csv);
    }
    if (emit_plots) {
      SvgPath path;
      path.nominal = rec.nominal_positions;
      path.executed = rec.executed_positions;
      path.tube_radius = rec.delta;
      path.label = "execution " + std::to_string(e) +
                   " (cost " + std::to_string(rec.plan_cost).substr(0, 6) + ")";
      svg_paths.push_back(std::move(path));
    }
    report.records.push_back(std::move(rec));
  }

  if (write) {
    write_text_file(out_dir + "/metrics.csv", report.metrics_csv);
    if (emit_plots) write_text_file(out_dir + "/campaign.svg", campaign_svg(s.workspace, svg_paths));
  }
  return report;
}

}  // namespace alp
