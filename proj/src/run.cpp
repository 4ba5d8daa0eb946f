#include "nhdqpt/run.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "nhdqpt/dilation.hpp"
#include "nhdqpt/dynphase.hpp"
#include "nhdqpt/errors.hpp"
#include "nhdqpt/io.hpp"
#include "nhdqpt/parallel.hpp"
#include "nhdqpt/quench.hpp"
#include "nhdqpt/topology.hpp"

namespace nhdqpt {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

class OutputSink {
 public:
  explicit OutputSink(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void put(const std::string& name, const std::string& text) {
    write_text(dir_ / name, text);
    files_.push_back({name, sha256_hex(text), text.size()});
  }
  void put_json(const std::string& name, const ordered_json& j) { put(name, j.dump(2) + "\n"); }

  const std::vector<OutputFile>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<OutputFile> files_;
};

std::vector<double> uniform_times(double t0, double t1, double dt) {
  const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / dt * (1.0 + 1e-12))) + 1;
  std::vector<double> ts(n);
  for (std::size_t i = 0; i < n; ++i) ts[i] = t0 + static_cast<double>(i) * dt;
  return ts;
}

ordered_json run_spectrum(const RunConfig& c, OutputSink& out) {
  const auto& m = c.model;
  const auto& o = c.spectrum;
  CsvTable table({"k", "h_a", "h_b", "g_a", "g_b", "re_E", "im_E"});
  for (int j = 0; j < o.n_k; ++j) {
    const double k = -kPi + 2.0 * kPi * j / (o.n_k - 1);
    const auto comp = m.components(k);
    const Complex e = dispersion(m, k);
    table.add_row({k, comp.h_a, comp.h_b, comp.g_a, comp.g_b, e.real(), e.imag()});
  }
  out.put("spectrum.csv", table.str());

  ordered_json s;
  s["model"] = to_json(m);
  s["axes"] = {{"a", std::string(1, axis_label(m.axis_a()))},
               {"b", std::string(1, axis_label(m.axis_b()))},
               {"chiral", std::string(1, axis_label(m.chiral()))}};
  s["gapless"] = to_json(gapless_momenta(m));
  s["winding"] = to_json(winding_number(m, o.winding_n_k, o.gap_tol));
  if (m.has_constant_loss()) {
    const auto eps = exceptional_points(m);
    s["exceptional_points"] = ordered_json::array();
    for (const auto& p : eps.points) s["exceptional_points"].push_back({p.a, p.b});
    s["winding_via_ep"] = to_json(winding_via_ep_enclosure(m, o.winding_n_k));
    const auto ws = ep_windings(m, o.winding_n_k);
    s["ep_windings"] = {ws[0], ws[1]};
  }
  s["symmetries"] = to_json(verify_symmetries(m));
  if (m.family() != ModelFamily::generic) s["phase_boundary_residual"] = phase_boundary_residual(m);
  out.put_json("spectrum.json", s);
  return {{"w", s["winding"]["w"]}};
}

ordered_json run_phase_diagram(const RunConfig& c, OutputSink& out) {
  const auto& o = c.phase_diagram;
  const auto grid = phase_diagram(c.model, o.axis1, o.axis2, o.n_k, c.workers, o.gap_tol);
  CsvTable table({o.axis1.name, o.axis2.name, "status", "w"});
  std::map<double, int> plateaus;
  int boundary = 0, invalid = 0;
  for (int i = 0; i < o.axis1.steps; ++i) {
    for (int j = 0; j < o.axis2.steps; ++j) {
      const auto& cell = grid.at(i, j);
      const bool gapped = cell.status == CellStatus::gapped;
      table.add_row({o.axis1.value(i), o.axis2.value(j), std::string(status_name(cell.status)),
                     gapped ? cell.w : std::nan("")});
      if (gapped) ++plateaus[std::round(cell.w * 2.0) / 2.0 + 0.0];
      else if (cell.status == CellStatus::boundary) ++boundary;
      else ++invalid;
    }
  }
  out.put("phase_diagram.csv", table.str());
  ordered_json pl = ordered_json::array();
  for (const auto& [w, n] : plateaus) pl.push_back({{"w", w}, {"cells", n}});
  ordered_json s = {{"plateaus", pl}, {"boundary_cells", boundary}, {"invalid_cells", invalid}};
  out.put_json("phase_diagram.json", s);
  return s;
}

ordered_json run_quench(const RunConfig& c, OutputSink& out) {
  const auto& o = c.quench;
  const auto trace = quench_trace(c.model, o.t0, o.t1, o.dt, o.n_k, c.workers);
  CsvTable rate({"t", "g"});
  for (std::size_t i = 0; i < trace.times.size(); ++i) rate.add_row({trace.times[i], trace.rate[i]});
  out.put("rate.csv", rate.str());

  const auto crit = critical_set(c.model, 1, o.n_max);
  CsvTable ct({"k", "energy", "period", "n", "t_n"});
  for (std::size_t i = 0; i < crit.momenta.size(); ++i) {
    for (int n = crit.n_min; n <= crit.n_max; ++n) {
      const auto& m = crit.momenta[i];
      ct.add_row({m.k, m.energy, m.period, static_cast<long long>(n), crit.time(i, n)});
    }
  }
  out.put("critical_times.csv", ct.str());

  const auto cusps = detect_cusps(trace, o.cusps);
  const auto predicted = crit.times_in_window(o.t0, o.t1);
  CsvTable cc({"t_cusp", "t_predicted", "difference"});
  for (double t : cusps) {
    double best = std::nan("");
    for (double p : predicted) {
      if (std::isnan(best) || std::abs(p - t) < std::abs(best - t)) best = p;
    }
    cc.add_row({t, best, t - best});
  }
  out.put("cusps.csv", cc.str());

  ordered_json s = {{"critical", to_json(crit)},
                    {"predicted_in_window", predicted},
                    {"cusps", cusps}};
  out.put_json("quench.json", s);
  return {{"cusps", cusps.size()}, {"predicted_in_window", predicted.size()}};
}

ordered_json run_dtop(const RunConfig& c, OutputSink& out) {
  const auto& o = c.dtop;
  const auto& m = c.model;
  const auto times = uniform_times(o.t0, o.t1, o.dt);
  const auto series = dtop_series(m, times, o.n_k, c.workers, o.range);
  CsvTable table({"t", "nu", "n_k"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    table.add_row({times[i], series[i].nu, static_cast<long long>(series[i].n_k)});
  }
  out.put("dtop.csv", table.str());

  const auto crit = critical_set(m, 1, o.n_max);
  std::vector<double> tcs;
  for (double t : crit.times_in_window(o.t0 + o.jump_delta, o.t1)) tcs.push_back(t);
  std::vector<DtopJump> jumps(tcs.size());
  parallel_for(tcs.size(), c.workers, [&](std::size_t i) {
    jumps[i] = dtop_jump(m, tcs[i], o.jump_delta, o.n_k, o.range);
  });
  CsvTable jt({"t_c", "nu_before", "nu_after", "raw_jump", "boundary_drift", "quantized_jump"});
  for (std::size_t i = 0; i < tcs.size(); ++i) {
    const auto& j = jumps[i];
    jt.add_row({tcs[i], j.before, j.after, j.raw, j.boundary_drift, j.quantized});
  }
  out.put("dtop_jumps.csv", jt.str());

  if (o.heatmap) {
    const auto ht = uniform_times(o.t0, o.t1, o.heatmap_dt);
    std::vector<std::vector<double>> wrapped(ht.size()), unwrapped(ht.size());
    parallel_for(ht.size(), c.workers, [&](std::size_t i) {
      auto& w = wrapped[i];
      auto& u = unwrapped[i];
      w.resize(static_cast<std::size_t>(o.heatmap_n_k));
      u.resize(w.size());
      double acc = 0.0, prev = std::nan("");
      for (int j = 0; j < o.heatmap_n_k; ++j) {
        const double k = -kPi + 2.0 * kPi * j / (o.heatmap_n_k - 1);
        double g = std::nan("");
        try {
          g = geometric_phase(m, k, ht[i]);
        } catch (const CriticalPointError&) {
        }
        w[j] = std::isnan(g) ? g : g - 2.0 * kPi * std::floor((g + kPi) / (2.0 * kPi));
        if (std::isnan(g)) {
          u[j] = g;
          prev = std::nan("");
          continue;
        }
        acc = std::isnan(prev) ? g : acc + std::remainder(g - prev, 2.0 * kPi);
        u[j] = acc;
        prev = g;
      }
    });
    CsvTable hm({"k", "t", "phi_g_wrapped", "phi_g_unwrapped"});
    for (std::size_t i = 0; i < ht.size(); ++i) {
      for (int j = 0; j < o.heatmap_n_k; ++j) {
        hm.add_row({-kPi + 2.0 * kPi * j / (o.heatmap_n_k - 1), ht[i], wrapped[i][j], unwrapped[i][j]});
      }
    }
    out.put("phase_heatmap.csv", hm.str());
  }

  ordered_json js = ordered_json::array();
  for (std::size_t i = 0; i < tcs.size(); ++i) {
    js.push_back({{"t_c", tcs[i]}, {"raw", jumps[i].raw}, {"quantized", jumps[i].quantized}});
  }
  const BzRange r = o.range.value_or(default_bz_range(m));
  ordered_json s = {{"bz_range", range_name(r)}, {"jumps", js}};
  out.put_json("dtop.json", s);
  return {{"bz_range", range_name(r)}, {"jumps", tcs.size()}};
}

/// Uniform in [-pi, pi) from the top 53 bits of a 64-bit Mersenne twister.
std::vector<double> random_momenta(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::vector<double> ks(static_cast<std::size_t>(n));
  for (auto& k : ks) k = -kPi + 2.0 * kPi * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  return ks;
}

ordered_json run_dilation_check(const RunConfig& c, OutputSink& out) {
  const auto& o = c.dilation;
  const auto ks = o.k.empty() ? random_momenta(c.seed, o.random_k) : o.k;
  std::vector<DilationRun> runs(ks.size());
  parallel_for(ks.size(), c.workers, [&](std::size_t i) {
    DilationConfig dc{o.m0, o.t_max, o.n_steps, ks[i]};
    runs[i] = run_dilation(c.model, o.psi0, dc);
  });
  ordered_json per_k = ordered_json::array();
  double worst = 0.0, worst_herm = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto& r = runs[i];
    CsvTable t({"t", "infidelity", "hermiticity_residual", "plus_residual", "norm_drift", "A0", "A1",
                "A2", "A3", "B0", "B1", "B2", "B3"});
    for (std::size_t f = 0; f < r.frames.size(); ++f) {
      if (f % static_cast<std::size_t>(o.frame_stride) != 0 && f + 1 != r.frames.size()) continue;
      const auto& fr = r.frames[f];
      t.add_row({fr.t, fr.infidelity, fr.hermiticity_residual, fr.plus_residual, fr.norm_drift,
                 fr.a[0], fr.a[1], fr.a[2], fr.a[3], fr.b[0], fr.b[1], fr.b[2], fr.b[3]});
    }
    out.put("dilation_k" + std::to_string(i) + ".csv", t.str());
    per_k.push_back({{"k", ks[i]},
                     {"m0", r.m0},
                     {"doublings", r.doublings},
                     {"max_infidelity", r.max_infidelity},
                     {"max_hermiticity_residual", r.max_hermiticity_residual},
                     {"max_plus_residual", r.max_plus_residual},
                     {"max_norm_drift", r.max_norm_drift},
                     {"max_coefficient_imag", r.max_coefficient_imag}});
    worst = std::max(worst, r.max_infidelity);
    worst_herm = std::max(worst_herm, r.max_hermiticity_residual);
  }
  ordered_json s = {{"momenta", per_k},
                    {"max_infidelity", worst},
                    {"max_hermiticity_residual", worst_herm}};
  out.put_json("dilation.json", s);
  return {{"max_infidelity", worst}, {"max_hermiticity_residual", worst_herm}};
}

ordered_json run_report(const RunConfig& c, OutputSink& out) {
  const auto rep = dqpt_report(c.model, c.report.n_k, 1, c.report.n_max);
  ordered_json s = to_json(rep);
  s["model"] = to_json(c.model);
  s["symmetries"] = to_json(verify_symmetries(c.model));
  out.put_json("report.json", s);
  return {{"w", rep.winding.w}, {"consistent", rep.consistent}};
}

}  // namespace

ordered_json to_json(const RunManifest& m) {
  ordered_json outs = ordered_json::array();
  for (const auto& f : m.outputs) outs.push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"task", task_name(m.task)},
          {"config", m.config},
          {"wall_clock_seconds", m.wall_clock_seconds},
          {"summary", m.summary},
          {"outputs", outs}};
}

RunManifest run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  OutputSink out(config.output_dir);
  RunManifest man;
  man.task = config.task;
  man.config = to_json(config);
  try {
    switch (config.task) {
      case Task::spectrum: man.summary = run_spectrum(config, out); break;
      case Task::phase_diagram: man.summary = run_phase_diagram(config, out); break;
      case Task::quench: man.summary = run_quench(config, out); break;
      case Task::dtop: man.summary = run_dtop(config, out); break;
      case Task::dilation_check: man.summary = run_dilation_check(config, out); break;
      case Task::report: man.summary = run_report(config, out); break;
    }
  } catch (const DomainError& e) {
    throw DomainError(std::string(task_name(config.task)) + ": " + e.what());
  } catch (const ParameterError& e) {
    throw ParameterError(std::string(task_name(config.task)) + ": " + e.what());
  }
  man.outputs = out.files();
  man.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_text(out.dir() / "manifest.json", to_json(man).dump(2) + "\n");
  return man;
}

std::vector<std::string> verify_manifest(const fs::path& dir) {
  const auto j = nlohmann::json::parse(read_text(dir / "manifest.json"));
  std::vector<std::string> bad;
  for (const auto& f : j.at("outputs")) {
    const auto name = f.at("file").get<std::string>();
    const auto path = dir / name;
    if (!fs::exists(path) || sha256_hex(read_text(path)) != f.at("sha256").get<std::string>()) {
      bad.push_back(name);
    }
  }
  return bad;
}

}  // namespace nhdqpt
