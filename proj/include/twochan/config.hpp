#pragma once

// Experiment configuration: one JSON document, keys mirror the struct fields.
// Parsing collects every violated invariant before failing.

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twochan/errors.hpp"
#include "twochan/kernel.hpp"
#include "twochan/oracle.hpp"
#include "twochan/phys_core.hpp"
#include "twochan/quadrature.hpp"
#include "twochan/series.hpp"

namespace twochan {

enum class RunMode { stationary, propagate, oracle, series, compare };

inline const char *to_string(RunMode m) {
  switch (m) {
  case RunMode::stationary:
    return "stationary";
  case RunMode::propagate:
    return "propagate";
  case RunMode::oracle:
    return "oracle";
  case RunMode::series:
    return "series";
  case RunMode::compare:
    return "compare";
  }
  return "?";
}

inline std::optional<RunMode> parse_mode(const std::string &s) {
  for (RunMode m : {RunMode::stationary, RunMode::propagate, RunMode::oracle,
                    RunMode::series, RunMode::compare})
    if (s == to_string(m))
      return m;
  return std::nullopt;
}

/// Wavenumber scan for the stationary mode.
struct StationaryScan {
  double k_min = 0.1;
  double k_max = 10.0;
  std::size_t n_k = 100;
};

struct ExperimentConfig {
  RunMode mode = RunMode::propagate;
  PhysParams phys;
  PacketParams packet;
  SpatialGrid grid;
  std::vector<double> times{0.0};
  QuadratureSpec quad;
  KernelOptions kernel;
  std::optional<OracleConfig> oracle;
  std::optional<SeriesParams> series;
  std::optional<StationaryScan> scan;
  /// Position at which the series mode tabulates individual terms.
  double series_probe_x = 0.0;
  std::string output_dir = "out";
  /// Config as read, echoed into the summary.
  nlohmann::json source;
};

namespace detail {

class Collector {
public:
  void add(std::string msg) { errors_.push_back(std::move(msg)); }
  bool empty() const { return errors_.empty(); }
  std::string joined() const {
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto &e : errors_)
      os << "\n  - " << e;
    return os.str();
  }

  template <class T>
  void read(const nlohmann::json &obj, const char *section, const char *key,
            T &out) {
    if (!obj.contains(key))
      return;
    try {
      out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
      add(std::string(section) + "." + key + ": wrong type");
    }
  }

  /// Run a validate() style check, recording its message instead of throwing.
  template <class F> void check(F &&f) {
    try {
      f();
    } catch (const error &e) {
      add(e.what());
    }
  }

private:
  std::vector<std::string> errors_;
};

inline const nlohmann::json *section(const nlohmann::json &j,
                                     const char *name, Collector &c,
                                     bool required) {
  if (j.contains(name)) {
    if (!j.at(name).is_object()) {
      c.add(std::string(name) + ": must be an object");
      return nullptr;
    }
    return &j.at(name);
  }
  if (required)
    c.add(std::string("missing required section '") + name + "'");
  return nullptr;
}

} // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json &j) {
  detail::Collector c;
  ExperimentConfig cfg;
  cfg.source = j;
  if (!j.is_object())
    throw config_error("invalid configuration:\n  - top level must be an "
                       "object");

  if (j.contains("mode")) {
    std::string m;
    c.read(j, "config", "mode", m);
    if (auto pm = parse_mode(m))
      cfg.mode = *pm;
    else
      c.add("mode: unknown value '" + m + "'");
  }
  c.read(j, "config", "output_dir", cfg.output_dir);

  if (auto s = detail::section(j, "phys", c, true)) {
    c.read(*s, "phys", "m", cfg.phys.m);
    c.read(*s, "phys", "hbar", cfg.phys.hbar);
    c.read(*s, "phys", "k0", cfg.phys.k0);
    c.read(*s, "phys", "V0", cfg.phys.V0);
    c.check([&] { cfg.phys.validate(); });
  }

  const bool needs_packet = cfg.mode != RunMode::stationary;
  if (auto s = detail::section(j, "packet", c, needs_packet)) {
    c.read(*s, "packet", "x0", cfg.packet.x0);
    c.read(*s, "packet", "sigma", cfg.packet.sigma);
    c.read(*s, "packet", "k1", cfg.packet.k1);
  }
  if (needs_packet)
    c.check([&] { cfg.packet.validate(); });

  if (auto s = detail::section(j, "grid", c, needs_packet)) {
    c.read(*s, "grid", "x_min", cfg.grid.x_min);
    c.read(*s, "grid", "x_max", cfg.grid.x_max);
    c.read(*s, "grid", "n_points", cfg.grid.n_points);
  }
  if (needs_packet)
    c.check([&] { cfg.grid.validate(); });

  c.read(j, "config", "times", cfg.times);
  if (cfg.times.empty())
    c.add("times: must list at least one time");
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    if (!(cfg.times[i] >= 0.0) || !std::isfinite(cfg.times[i]))
      c.add("times[" + std::to_string(i) + "]: must be finite and >= 0");
    if (i > 0 && !(cfg.times[i] > cfg.times[i - 1]))
      c.add("times: must be strictly ascending");
  }

  if (auto s = detail::section(j, "quad", c, false)) {
    c.read(*s, "quad", "n_nodes", cfg.quad.n_nodes);
    c.read(*s, "quad", "u_max", cfg.quad.u_max);
    c.read(*s, "quad", "rel_tol", cfg.quad.rel_tol);
    c.read(*s, "quad", "max_depth", cfg.quad.max_depth);
    std::string scheme = "adaptive";
    c.read(*s, "quad", "scheme", scheme);
    if (scheme == "adaptive")
      cfg.quad.scheme = QuadScheme::adaptive;
    else if (scheme == "trapezoid")
      cfg.quad.scheme = QuadScheme::trapezoid;
    else
      c.add("quad.scheme: unknown value '" + scheme + "'");
  }
  c.check([&] { cfg.quad.validate(); });

  if (auto s = detail::section(j, "kernel", c, false)) {
    std::string rule = "half_residue";
    c.read(*s, "kernel", "pole_rule", rule);
    if (rule == "half_residue")
      cfg.kernel.pole_rule = OnLinePoleRule::half_residue;
    else if (rule == "zero_weight")
      cfg.kernel.pole_rule = OnLinePoleRule::zero_weight;
    else
      c.add("kernel.pole_rule: unknown value '" + rule + "'");
  }

  const bool needs_oracle =
      cfg.mode == RunMode::oracle || cfg.mode == RunMode::compare;
  if (auto s = detail::section(j, "oracle", c, needs_oracle)) {
    OracleConfig oc;
    oc.grid = cfg.grid;
    c.read(*s, "oracle", "dt", oc.dt);
    c.read(*s, "oracle", "delta_width", oc.delta_width);
    std::string stencil = "compact";
    c.read(*s, "oracle", "stencil", stencil);
    if (stencil == "compact")
      oc.stencil = Stencil::compact;
    else if (stencil == "second_order")
      oc.stencil = Stencil::second_order;
    else
      c.add("oracle.stencil: unknown value '" + stencil + "'");
    if (s->contains("boundary")) {
      const auto &b = s->at("boundary");
      std::string kind = "reflecting";
      c.read(b, "oracle.boundary", "kind", kind);
      if (kind == "reflecting")
        oc.boundary.kind = BoundaryKind::reflecting;
      else if (kind == "absorbing")
        oc.boundary.kind = BoundaryKind::absorbing;
      else
        c.add("oracle.boundary.kind: unknown value '" + kind + "'");
      c.read(b, "oracle.boundary", "strength", oc.boundary.strength);
      c.read(b, "oracle.boundary", "width", oc.boundary.width);
    }
    c.check([&] { oc.validate(cfg.phys); });
    for (std::size_t i = 0; i < cfg.times.size(); ++i) {
      const double steps = cfg.times[i] / oc.dt;
      if (std::abs(steps - std::round(steps)) > 1e-6)
        c.add("times[" + std::to_string(i) +
              "]: not a whole number of oracle steps");
    }
    cfg.oracle = oc;
  }

  if (auto s = detail::section(j, "series", c, cfg.mode == RunMode::series)) {
    SeriesParams sp;
    std::string regime = "high_energy";
    c.read(*s, "series", "regime", regime);
    if (regime == "high_energy")
      sp.regime = SeriesRegime::high_energy;
    else if (regime == "low_energy")
      sp.regime = SeriesRegime::low_energy;
    else
      c.add("series.regime: unknown value '" + regime + "'");
    c.read(*s, "series", "n_terms", sp.n_terms);
    c.read(*s, "series", "k1_factor", sp.k1_factor);
    std::string env = "decaying";
    c.read(*s, "series", "envelope", env);
    if (env == "decaying")
      sp.envelope = EnvelopeReading::decaying;
    else if (env == "literal")
      sp.envelope = EnvelopeReading::literal;
    else
      c.add("series.envelope: unknown value '" + env + "'");
    c.read(*s, "series", "probe_x", cfg.series_probe_x);
    c.check([&] { sp.validate(); });
    if (sp.regime == SeriesRegime::low_energy && !(cfg.phys.V0 > 0.0))
      c.add("series.regime: low_energy needs phys.V0 > 0");
    cfg.series = sp;
  }

  if (auto s = detail::section(j, "stationary", c,
                               cfg.mode == RunMode::stationary)) {
    StationaryScan sc;
    c.read(*s, "stationary", "k_min", sc.k_min);
    c.read(*s, "stationary", "k_max", sc.k_max);
    c.read(*s, "stationary", "n_k", sc.n_k);
    if (!(sc.k_min > 0.0))
      c.add("stationary.k_min: must be > 0");
    if (!(sc.k_max >= sc.k_min))
      c.add("stationary.k_max: must be >= k_min");
    if (sc.n_k < 1)
      c.add("stationary.n_k: must be >= 1");
    cfg.scan = sc;
  }

  if (!c.empty())
    throw config_error(c.joined());
  return cfg;
}

/// Read a JSON config file. A mode given here replaces the file's "mode".
inline ExperimentConfig load_config(const std::string &path,
                                    std::optional<RunMode> mode = {}) {
  std::ifstream in(path);
  if (!in)
    throw io_error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error &e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (mode && j.is_object())
    j["mode"] = to_string(*mode);
  return parse_config(j);
}

} // namespace twochan
