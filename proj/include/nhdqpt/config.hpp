#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nhdqpt/bloch.hpp"
#include "nhdqpt/dynphase.hpp"
#include "nhdqpt/quench.hpp"
#include "nhdqpt/topology.hpp"

namespace nhdqpt {

enum class Task { spectrum, phase_diagram, quench, dtop, dilation_check, report };

/// "spectrum", "phase-diagram", "quench", "dtop", "dilation-check", "report"
std::string_view task_name(Task task);
std::optional<Task> parse_task(std::string_view name);

struct SpectrumOptions {
  int n_k = 513;
  int winding_n_k = kDefaultWindingGrid;
  double gap_tol = kGapTolerance;
};

struct PhaseDiagramOptions {
  ParameterAxis axis1;
  ParameterAxis axis2;
  int n_k = 1025;
  double gap_tol = kGapTolerance;
};

struct QuenchOptions {
  double t0 = 0.0;
  double t1 = 10.0;
  double dt = 1e-3;
  int n_k = kDefaultRateGrid;
  int n_max = 8;
  CuspOptions cusps;
};

struct DtopOptions {
  double t0 = 0.0;
  double t1 = 10.0;
  double dt = 0.01;
  int n_k = kDefaultDtopGrid;
  std::optional<BzRange> range;  ///< nullopt: the family default
  int n_max = 8;
  double jump_delta = 0.05;
  bool heatmap = false;
  int heatmap_n_k = 256;
  double heatmap_dt = 0.05;
};

struct DilationOptions {
  double m0 = 20.0;
  double t_max = 3.0;
  int n_steps = 3000;
  std::vector<double> k;  ///< empty: draw random_k momenta from the seed
  int random_k = 5;
  Vector2C psi0 = Vector2C(1.0, 0.0);
  int frame_stride = 10;
};

struct ReportOptions {
  int n_k = kDefaultWindingGrid;
  int n_max = 8;
};

struct RunConfig {
  Task task = Task::report;
  ChiralTwoBandModel model = build_lkc({});
  int workers = 1;
  std::string output_dir = "out";
  std::uint64_t seed = 0;

  SpectrumOptions spectrum;
  PhaseDiagramOptions phase_diagram;
  QuenchOptions quench;
  DtopOptions dtop;
  DilationOptions dilation;
  ReportOptions report;
};

/// Fully resolved configuration, defaults included.
nlohmann::ordered_json to_json(const RunConfig& config);

struct ConfigIssue {
  int line = 0;  ///< 0 when the problem is not tied to one line
  std::string field;
  std::string message;

  std::string str() const;
};

struct ParsedConfig {
  std::optional<RunConfig> config;
  std::vector<ConfigIssue> issues;

  bool ok() const { return config.has_value(); }
};

/// Parses the flat `key = value` format with `[section]` headers. Every
/// problem is collected; `config` is set only when there are none.
/// A task given here must agree with a `task` key in the text, if any.
ParsedConfig parse_config(std::string_view text, std::optional<Task> task = std::nullopt);

/// Human-readable list of every accepted key with its type and default.
std::string config_schema();

}  // namespace nhdqpt
