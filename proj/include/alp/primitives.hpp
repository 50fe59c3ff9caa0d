#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <json.hpp>

#include "alp/bvp.hpp"
#include "alp/io.hpp"
#include "alp/lattice.hpp"
#include "alp/params.hpp"

namespace alp {

/// One feasible edge of the lattice, stored relative to its start node: the
/// planned coordinates of states[0] are zero and the remaining coordinates
/// carry the boundary values.
struct MotionPrimitive {
  Eigen::VectorXi from_offset;  // all zeros by construction
  Eigen::VectorXi to_offset;
  int nominal_id = 0;
  double duration = 0.0;
  double cost = 0.0;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> inputs;

  /// Collision-checking footprint: the stored state samples.
  const std::vector<Eigen::VectorXd>& footprint() const { return states; }
};

inline std::string offset_key(const Eigen::VectorXi& o) {
  std::string k;
  for (Eigen::Index i = 0; i < o.size(); ++i) {
    if (i) k += ',';
    k += std::to_string(o[i]);
  }
  return k;
}

struct PrimitiveLibrary {
  static constexpr const char* kVersion = "alp-primitive-library/1";

  LatticeSpec lattice;
  std::vector<LumpedParams> nominal_params;
  std::map<std::pair<int, std::string>, MotionPrimitive> entries;
  std::string digest;
  std::string model_label;  // which dynamics generated the entries
  double model_omega = 0.0; // auxiliary constant for models that need one

  const MotionPrimitive* find(int nominal_id, const Eigen::VectorXi& offset) const {
    auto it = entries.find({nominal_id, offset_key(offset)});
    return it == entries.end() ? nullptr : &it->second;
  }

  /// Offsets available for one nominal id.
  std::vector<const MotionPrimitive*> slice(int nominal_id) const {
    std::vector<const MotionPrimitive*> out;
    for (const auto& [key, mp] : entries)
      if (key.first == nominal_id) out.push_back(&mp);
    return out;
  }
};

struct GenerationEntryReport {
  int nominal_id = 0;
  Eigen::VectorXi offset;
  bool success = false;
  std::string message;
  double endpoint_error = 0.0;
  double cost = 0.0;
};

struct GenerationReport {
  std::vector<GenerationEntryReport> entries;
  int attempted() const { return static_cast<int>(entries.size()); }
  int succeeded() const {
    int c = 0;
    for (const auto& e : entries) c += e.success ? 1 : 0;
    return c;
  }
};

/// Re-integrates the stored inputs at a ten-times-finer step and returns the
/// endpoint gap to the target node in grid units (per-coordinate gaps are
/// scaled by the lattice resolution in the planned dimensions).
inline double verify_primitive(const MotionPrimitive& mp, const SystemModel& sys,
                               const LumpedParams& theta_bar, const LatticeSpec& lattice,
                               int fine_factor = 10) {
  if (mp.states.empty()) throw Error("primitive has no samples");
  if (mp.duration == 0.0) return 0.0;
  Eigen::VectorXd target = lattice.node_state(mp.to_offset);
  // relative frame: from-node planned coordinates are zero
  for (Eigen::Index d = 0; d < lattice.dims(); ++d) {
    auto sd = lattice.planning_dims[static_cast<std::size_t>(d)];
    target[sd] = mp.to_offset[d] * lattice.resolution[d];
  }
  Eigen::VectorXd endpoint =
      detail::rollout_endpoint(sys, theta_bar, mp.states.front(), mp.inputs, mp.duration,
                               fine_factor);
  Eigen::VectorXd gap = endpoint - target;
  double err = 0.0;
  std::vector<bool> planned(static_cast<std::size_t>(sys.n), false);
  for (Eigen::Index d = 0; d < lattice.dims(); ++d) {
    auto sd = lattice.planning_dims[static_cast<std::size_t>(d)];
    planned[static_cast<std::size_t>(sd)] = true;
    err = std::max(err, std::abs(gap[sd]) / lattice.resolution[d]);
  }
  for (Eigen::Index j = 0; j < sys.n; ++j)
    if (!planned[static_cast<std::size_t>(j)]) err = std::max(err, std::abs(gap[j]));
  return err;
}

/// Solves the two-point problem for every (nominal, offset) pair. Failures
/// are recorded in the report and leave no library entry.
inline std::pair<PrimitiveLibrary, GenerationReport> build_library(
    const std::vector<LumpedParams>& psi_d, const SystemModel& sys, const LatticeSpec& lattice,
    const RunningCost& cost, const BvpLimits& limits, const BvpConfig& cfg,
    const std::string& config_digest_seed = "") {
  PrimitiveLibrary lib;
  lib.lattice = lattice;
  lib.nominal_params = psi_d;
  lib.model_label = sys.label;
  GenerationReport report;

  Eigen::VectorXd from = lattice.node_state(Eigen::VectorXi::Zero(lattice.dims()));
  for (Eigen::Index d = 0; d < lattice.dims(); ++d)
    from[lattice.planning_dims[static_cast<std::size_t>(d)]] = 0.0;

  // Bit-identical nominal parameters yield bit-identical primitives (the
  // solver is deterministic), so duplicated entries are copied, not re-solved.
  auto param_key = [](const LumpedParams& th) {
    Eigen::MatrixXd c = th.combined();
    return std::string(reinterpret_cast<const char*>(c.data()),
                       static_cast<std::size_t>(c.size()) * sizeof(double));
  };
  std::map<std::pair<std::string, std::string>, std::pair<GenerationEntryReport, MotionPrimitive>>
      solved;

  for (std::size_t ni = 0; ni < psi_d.size(); ++ni) {
    for (const auto& offset : lattice.connectivity) {
      GenerationEntryReport entry;
      entry.nominal_id = static_cast<int>(ni);
      entry.offset = offset;

      auto cache_key = std::make_pair(param_key(psi_d[ni]), offset_key(offset));
      auto hit = solved.find(cache_key);
      if (hit != solved.end()) {
        entry = hit->second.first;
        entry.nominal_id = static_cast<int>(ni);
        if (entry.success) {
          MotionPrimitive mp = hit->second.second;
          mp.nominal_id = static_cast<int>(ni);
          lib.entries[{static_cast<int>(ni), offset_key(offset)}] = std::move(mp);
        }
        report.entries.push_back(std::move(entry));
        continue;
      }

      Eigen::VectorXd to = from;
      for (Eigen::Index d = 0; d < lattice.dims(); ++d)
        to[lattice.planning_dims[static_cast<std::size_t>(d)]] = offset[d] * lattice.resolution[d];
      MotionPrimitive mp;
      try {
        BvpSolution sol = solve_primitive_bvp(sys, psi_d[ni], from, to, cost, limits, cfg);
        mp.from_offset = Eigen::VectorXi::Zero(lattice.dims());
        mp.to_offset = offset;
        mp.nominal_id = static_cast<int>(ni);
        mp.duration = sol.duration;
        mp.cost = sol.cost;
        mp.states = sol.states;
        mp.inputs = sol.inputs;
        entry.endpoint_error = verify_primitive(mp, sys, psi_d[ni], lattice);
        entry.cost = sol.cost;
        if (entry.endpoint_error > 1e-4) {
          entry.message = "endpoint error above tolerance: " + format_number(entry.endpoint_error);
        } else {
          entry.success = true;
          lib.entries[{static_cast<int>(ni), offset_key(offset)}] = mp;
        }
      } catch (const std::exception& e) {
        entry.message = e.what();
      }
      solved[cache_key] = {entry, std::move(mp)};
      report.entries.push_back(std::move(entry));
    }
  }

  std::string digest_src = config_digest_seed;
  digest_src += "|segments=" + std::to_string(cfg.segments);
  digest_src += "|samples=" + std::to_string(cfg.samples);
  digest_src += "|trange=" + format_number(cfg.t_min) + ":" + format_number(cfg.t_max);
  digest_src += "|n=" + std::to_string(psi_d.size());
  for (const auto& th : psi_d) digest_src += "|" + format_number(th.frobenius_norm());
  for (Eigen::Index j = 0; j < limits.input_box.dims(); ++j)
    digest_src += "|u" + format_number(limits.input_box.lo[j]) + ":" +
                  format_number(limits.input_box.hi[j]);
  lib.digest = hex64(fnv1a64(digest_src));
  return {std::move(lib), std::move(report)};
}

// --- persistence ---

namespace detail {

inline void write_matrix(JsonWriter& w, const Eigen::MatrixXd& m) {
  w.begin_object();
  w.key("rows").value(static_cast<int>(m.rows()));
  w.key("cols").value(static_cast<int>(m.cols()));
  w.key("data").value(m);
  w.end_object();
}

inline Eigen::MatrixXd read_matrix(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw Error("matrix payload size mismatch");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  return m;
}

inline void write_samples(JsonWriter& w, const std::vector<Eigen::VectorXd>& samples) {
  w.begin_array();
  for (const auto& s : samples) w.value(s);
  w.end_array();
}

inline std::vector<Eigen::VectorXd> read_samples(const nlohmann::json& j) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& row : j) {
    auto v = row.get<std::vector<double>>();
    out.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  return out;
}

}  // namespace detail

inline std::string library_to_json(const PrimitiveLibrary& lib) {
  JsonWriter w;
  w.begin_object();
  w.key("version").value(PrimitiveLibrary::kVersion);
  w.key("digest").value(lib.digest);
  w.key("model").begin_object();
  w.key("label").value(lib.model_label);
  w.key("omega").value(lib.model_omega);
  w.end_object();

  w.key("lattice").begin_object();
  {
    const auto& l = lib.lattice;
    w.key("planning_dims").begin_array();
    for (auto d : l.planning_dims) w.value(static_cast<int>(d));
    w.end_array();
    w.key("lo").value(l.lo);
    w.key("hi").value(l.hi);
    w.key("resolution").value(l.resolution);
    w.key("boundary_state").value(l.boundary_state);
    w.key("connectivity").begin_array();
    for (const auto& o : l.connectivity) w.value(o);
    w.end_array();
  }
  w.end_object();

  w.key("nominal_params").begin_array();
  for (const auto& th : lib.nominal_params) {
    w.begin_object();
    w.key("theta_x");
    detail::write_matrix(w, th.theta_x);
    w.key("theta_u");
    detail::write_matrix(w, th.theta_u);
    w.end_object();
  }
  w.end_array();

  w.key("entries").begin_array();
  for (const auto& [key, mp] : lib.entries) {
    w.begin_object();
    w.key("nominal_id").value(mp.nominal_id);
    w.key("from_offset").value(mp.from_offset);
    w.key("to_offset").value(mp.to_offset);
    w.key("duration").value(mp.duration);
    w.key("cost").value(mp.cost);
    w.key("states");
    detail::write_samples(w, mp.states);
    w.key("inputs");
    detail::write_samples(w, mp.inputs);
    w.end_object();
  }
  w.end_array();

  w.end_object();
  return w.str();
}

inline PrimitiveLibrary library_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("version").get<std::string>() != PrimitiveLibrary::kVersion)
    throw Error("unsupported library version");
  PrimitiveLibrary lib;
  lib.digest = j.at("digest").get<std::string>();
  if (j.contains("model")) {
    lib.model_label = j.at("model").at("label").get<std::string>();
    lib.model_omega = j.at("model").at("omega").get<double>();
  }

  const auto& jl = j.at("lattice");
  LatticeSpec l;
  for (const auto& d : jl.at("planning_dims")) l.planning_dims.push_back(d.get<Eigen::Index>());
  auto to_vec = [](const nlohmann::json& a) {
    auto v = a.get<std::vector<double>>();
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
  };
  auto to_ivec = [](const nlohmann::json& a) {
    auto v = a.get<std::vector<int>>();
    return Eigen::Map<Eigen::VectorXi>(v.data(), static_cast<Eigen::Index>(v.size())).eval();
  };
  l.lo = to_vec(jl.at("lo"));
  l.hi = to_vec(jl.at("hi"));
  l.resolution = to_vec(jl.at("resolution"));
  l.boundary_state = to_vec(jl.at("boundary_state"));
  for (const auto& o : jl.at("connectivity")) l.connectivity.push_back(to_ivec(o));
  lib.lattice = l;

  for (const auto& jt : j.at("nominal_params")) {
    lib.nominal_params.emplace_back(detail::read_matrix(jt.at("theta_x")),
                                    detail::read_matrix(jt.at("theta_u")));
  }

  for (const auto& je : j.at("entries")) {
    MotionPrimitive mp;
    mp.nominal_id = je.at("nominal_id").get<int>();
    mp.from_offset = to_ivec(je.at("from_offset"));
    mp.to_offset = to_ivec(je.at("to_offset"));
    mp.duration = je.at("duration").get<double>();
    mp.cost = je.at("cost").get<double>();
    mp.states = detail::read_samples(je.at("states"));
    mp.inputs = detail::read_samples(je.at("inputs"));
    lib.entries[{mp.nominal_id, offset_key(mp.to_offset)}] = std::move(mp);
  }
  return lib;
}

}  // namespace alp
