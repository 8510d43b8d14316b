#pragma once

// Experiment driver behind the command-line tool. Data files carry no
// timestamps or timings, so equal configs give byte-identical output.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twochan/analysis.hpp"
#include "twochan/config.hpp"
#include "twochan/errors.hpp"
#include "twochan/io.hpp"
#include "twochan/kernel.hpp"
#include "twochan/oracle.hpp"
#include "twochan/series.hpp"
#include "twochan/stationary.hpp"

#ifndef TWOCHAN_VERSION
#define TWOCHAN_VERSION "unknown"
#endif

namespace twochan {

enum ExitStatus : int {
  exit_ok = 0,
  exit_config = 2,
  exit_numerical = 3,
  exit_io = 4,
};

struct RunOptions {
  std::optional<std::string> output_dir;
  std::optional<RunMode> mode;
  bool quiet = false;
};

struct TimeComparison {
  double t = 0.0;
  double l2_psi1 = 0.0;
  double l2_psi2 = 0.0;
  double rel_density_psi1 = 0.0;
  double rel_density_psi2 = 0.0;
  std::pair<double, double> analytic_norms;
  std::pair<double, double> oracle_norms;
};

struct ComparisonReport {
  std::vector<TimeComparison> per_time;
  Populations stationary;
  Transmission oracle_final;
  /// Mean packet energy over V0; infinite when V0 = 0.
  double energy_ratio = 0.0;
  std::vector<std::string> warnings;
};

namespace detail {

inline nlohmann::json norms_json(double t, std::pair<double, double> n) {
  return {{"t", t}, {"N1", n.first}, {"N2", n.second},
          {"total", n.first + n.second}};
}

inline void check_ledger(std::pair<double, double> n, double t,
                         std::vector<std::string> &warn) {
  const double tol = 1e-6;
  if (n.first < 0.0 || n.first > 1.0 + tol || n.second < 0.0 ||
      n.second > 1.0 + tol || n.first + n.second > 1.0 + tol)
    warn.push_back("norm ledger out of [0, 1] at t = " + format_double(t));
}

inline double energy_ratio(const ExperimentConfig &c) {
  if (c.phys.V0 == 0.0)
    return INFINITY;
  return packet_energy(c.phys, c.packet) / c.phys.V0;
}

inline nlohmann::json ratio_json(double r) {
  return std::isfinite(r) ? nlohmann::json(r) : nlohmann::json(nullptr);
}

/// Oracle snapshots at each configured time.
inline std::vector<WaveField> oracle_snapshots(const ExperimentConfig &c) {
  const OracleConfig &oc = *c.oracle;
  Propagator prop(oc, c.phys);
  WaveField f = initial_packet(c.packet, c.grid);
  std::vector<WaveField> out;
  std::size_t done = 0;
  for (double t : c.times) {
    const auto target = static_cast<std::size_t>(std::llround(t / oc.dt));
    for (; done < target; ++done)
      prop.advance(f);
    f.t = static_cast<double>(done) * oc.dt;
    out.push_back(f);
  }
  return out;
}

inline std::string snapshot_name(std::size_t i) {
  return "t_" + std::to_string(i) + ".csv";
}

} // namespace detail

/// Analytic and oracle fields at the configured times, compared pointwise.
inline ComparisonReport compare_fields(const ExperimentConfig &c,
                                       const std::vector<WaveField> &analytic,
                                       const std::vector<WaveField> &oracle) {
  ComparisonReport rep;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    TimeComparison tc;
    tc.t = analytic[i].t;
    const auto d = l2_distance(analytic[i], oracle[i]);
    tc.l2_psi1 = d.first;
    tc.l2_psi2 = d.second;
    tc.rel_density_psi1 = relative_density_l2(analytic[i].psi1, oracle[i].psi1);
    tc.rel_density_psi2 = relative_density_l2(analytic[i].psi2, oracle[i].psi2);
    tc.analytic_norms = channel_norms(analytic[i]);
    tc.oracle_norms = channel_norms(oracle[i]);
    detail::check_ledger(tc.analytic_norms, tc.t, rep.warnings);
    detail::check_ledger(tc.oracle_norms, tc.t, rep.warnings);
    rep.per_time.push_back(tc);
  }
  if (c.phys.k0 != 0.0 || c.phys.V0 != 0.0)
    rep.stationary = stationary_average(c.phys, c.packet);
  else
    rep.stationary = {0.0, 1.0, 0.0};
  if (!oracle.empty())
    rep.oracle_final = transmission(oracle.back());
  rep.energy_ratio = detail::energy_ratio(c);
  return rep;
}

inline nlohmann::json to_json(const ComparisonReport &r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto &tc : r.per_time)
    per.push_back({{"t", tc.t},
                   {"l2_psi1", tc.l2_psi1},
                   {"l2_psi2", tc.l2_psi2},
                   {"rel_density_l2_psi1", tc.rel_density_psi1},
                   {"rel_density_l2_psi2", tc.rel_density_psi2},
                   {"analytic", detail::norms_json(tc.t, tc.analytic_norms)},
                   {"oracle", detail::norms_json(tc.t, tc.oracle_norms)}});
  return {{"per_time", per},
          {"transmission",
           {{"stationary_average",
             {{"R", r.stationary.R}, {"T1", r.stationary.T1},
              {"T2", r.stationary.T2}}},
            {"oracle_final",
             {{"R", r.oracle_final.R}, {"T1", r.oracle_final.T1},
              {"T2", r.oracle_final.T2}}}}},
          {"energy_over_V0", detail::ratio_json(r.energy_ratio)},
          {"warnings", r.warnings}};
}

/// Execute one experiment. Throws twochan::error subclasses on failure.
inline nlohmann::json run_experiment(const ExperimentConfig &c,
                                     const std::filesystem::path &dir,
                                     std::ostream &log) {
  ensure_directory(dir);
  nlohmann::json summary;
  summary["provenance"] = {{"tool", "twochan"},
                           {"version", TWOCHAN_VERSION},
                           {"config", c.source}};
  summary["mode"] = to_string(c.mode);
  summary["times"] = c.times;

  switch (c.mode) {
  case RunMode::stationary: {
    const StationaryScan &sc = *c.scan;
    std::string csv = "k,R,T1,T2,channel2_open\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < sc.n_k; ++i) {
      const double k =
          sc.n_k == 1 ? sc.k_min
                      : sc.k_min + (sc.k_max - sc.k_min) *
                                       static_cast<double>(i) /
                                       static_cast<double>(sc.n_k - 1);
      const FluxBalance fb = flux_balance(c.phys, channel_momenta_at(c.phys, k));
      worst = std::max(worst, std::abs(fb.total() - 1.0));
      csv += format_double(k) + ',' + format_double(fb.R) + ',' +
             format_double(fb.T1) + ',' + format_double(fb.T2) + ',' +
             (fb.channel2_open ? "1" : "0") + '\n';
    }
    write_text(dir / "stationary.csv", csv);
    summary["stationary"] = {{"n_k", sc.n_k},
                             {"max_flux_deviation", worst}};
    break;
  }
  case RunMode::propagate: {
    nlohmann::json norms = nlohmann::json::array();
    std::vector<std::string> warn;
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      log << "propagate: t = " << c.times[i] << '\n';
      const WaveField f =
          analytic_field(c.phys, c.packet, c.grid, c.times[i], c.quad, c.kernel);
      write_field_csv(dir / detail::snapshot_name(i), f);
      const auto n = channel_norms(f);
      detail::check_ledger(n, f.t, warn);
      norms.push_back(detail::norms_json(f.t, n));
    }
    summary["norms"] = norms;
    summary["energy_over_V0"] = detail::ratio_json(detail::energy_ratio(c));
    summary["warnings"] = warn;
    break;
  }
  case RunMode::oracle: {
    std::vector<std::string> warn = c.oracle->validate(c.phys);
    const auto snaps = detail::oracle_snapshots(c);
    const double n0 = discrete_norm(initial_packet(c.packet, c.grid));
    const bool absorbing = c.oracle->boundary.kind == BoundaryKind::absorbing;
    nlohmann::json norms = nlohmann::json::array();
    nlohmann::json pops = nlohmann::json::array();
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      write_field_csv(dir / detail::snapshot_name(i), snaps[i]);
      const auto n = channel_norms(snaps[i]);
      detail::check_ledger(n, snaps[i].t, warn);
      norms.push_back(detail::norms_json(snaps[i].t, n));
      const Transmission tr = transmission(snaps[i]);
      nlohmann::json row = {
          {"t", snaps[i].t}, {"R", tr.R}, {"T1", tr.T1}, {"T2", tr.T2}};
      // with a reflecting wall the discrete norm is conserved exactly
      if (absorbing)
        row["absorbed"] = n0 - discrete_norm(snaps[i]);
      pops.push_back(row);
    }
    summary["norms"] = norms;
    summary["populations"] = pops;
    summary["warnings"] = warn;
    break;
  }
  case RunMode::series: {
    const SeriesParams &sp = *c.series;
    std::string terms_csv = "time_index,t,channel,index,re,im,abs\n";
    nlohmann::json probes = nlohmann::json::array();
    bool regime_ok = true;
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      const double t = c.times[i];
      WaveField f(c.grid, t);
      for (std::size_t j = 0; j < c.grid.n_points; ++j) {
        const double x = c.grid.x(j);
        f.psi1[j] = psi1_series(sp, c.phys, c.packet, x, t).value;
        f.psi2[j] = psi2_series(sp, c.phys, c.packet, x, t).value;
      }
      write_field_csv(dir / detail::snapshot_name(i), f);
      const auto s1 = psi1_series(sp, c.phys, c.packet, c.series_probe_x, t);
      const auto s2 = psi2_series(sp, c.phys, c.packet, c.series_probe_x, t);
      regime_ok = regime_ok && s1.regime_ok;
      for (int ch = 1; ch <= 2; ++ch) {
        const SeriesResult &s = ch == 1 ? s1 : s2;
        for (std::size_t n = 0; n < s.terms.size(); ++n)
          terms_csv += std::to_string(i) + ',' + format_double(t) + ',' +
                       std::to_string(ch) + ',' + std::to_string(n) + ',' +
                       format_double(s.terms[n].real()) + ',' +
                       format_double(s.terms[n].imag()) + ',' +
                       format_double(std::abs(s.terms[n])) + '\n';
      }
      probes.push_back(
          {{"t", t},
           {"x", c.series_probe_x},
           {"psi1", {s1.value.real(), s1.value.imag()}},
           {"psi1_truncation_index", s1.truncation_index},
           {"psi2", {s2.value.real(), s2.value.imag()}},
           {"psi2_truncation_index", s2.truncation_index}});
    }
    write_text(dir / "series_terms.csv", terms_csv);
    summary["series"] = {
        {"regime", sp.regime == SeriesRegime::high_energy ? "high_energy"
                                                          : "low_energy"},
        {"regime_ok", regime_ok},
        {"probes", probes}};
    summary["energy_over_V0"] = detail::ratio_json(detail::energy_ratio(c));
    if (!regime_ok)
      log << "warning: E/V0 lies outside the series validity window\n";
    break;
  }
  case RunMode::compare: {
    std::vector<std::string> warn = c.oracle->validate(c.phys);
    std::vector<WaveField> analytic;
    for (double t : c.times) {
      log << "compare: analytic field at t = " << t << '\n';
      analytic.push_back(
          analytic_field(c.phys, c.packet, c.grid, t, c.quad, c.kernel));
    }
    log << "compare: oracle run\n";
    const auto oracle = detail::oracle_snapshots(c);
    ensure_directory(dir / "oracle");
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      write_field_csv(dir / detail::snapshot_name(i), analytic[i]);
      write_field_csv(dir / "oracle" / detail::snapshot_name(i), oracle[i]);
    }
    ComparisonReport rep = compare_fields(c, analytic, oracle);
    rep.warnings.insert(rep.warnings.begin(), warn.begin(), warn.end());
    summary["comparison"] = to_json(rep);
    break;
  }
  }
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  return summary;
}

/// Load, run and map failures to exit statuses; diagnostics go to err.
inline int run(const std::string &config_path, const RunOptions &opts,
               std::ostream &err = std::cerr) {
  std::ostream null_stream(nullptr);
  std::ostream &log = opts.quiet ? null_stream : err;
  try {
    ExperimentConfig c = load_config(config_path, opts.mode);
    const std::filesystem::path dir = opts.output_dir.value_or(c.output_dir);
    const auto start = std::chrono::steady_clock::now();
    run_experiment(c, dir, log);
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    log << "done: " << to_string(c.mode) << " in " << secs << " s, output in "
        << dir.string() << '\n';
    return exit_ok;
  } catch (const config_error &e) {
    err << e.what() << '\n';
    return exit_config;
  } catch (const domain_error &e) {
    err << "configuration: " << e.what() << '\n';
    return exit_config;
  } catch (const regime_error &e) {
    err << "configuration: " << e.what() << '\n';
    return exit_config;
  } catch (const io_error &e) {
    err << "i/o: " << e.what() << '\n';
    return exit_io;
  } catch (const error &e) {
    err << "numerical: " << e.what() << '\n';
    return exit_numerical;
  }
}

} // namespace twochan
