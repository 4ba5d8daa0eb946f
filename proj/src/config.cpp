#include "nhdqpt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "nhdqpt/errors.hpp"
#include "nhdqpt/io.hpp"

namespace nhdqpt {

namespace {

enum class Kind { number, integer, string, boolean, list };

std::string_view kind_name(Kind k) {
  switch (k) {
    case Kind::number: return "number";
    case Kind::integer: return "integer";
    case Kind::string: return "string";
    case Kind::boolean: return "boolean";
    case Kind::list: return "list of numbers";
  }
  return "value";
}

struct KeyDef {
  std::string key;
  Kind kind;
  std::string fallback;
  std::string help;
  std::optional<ModelFamily> family;  // model parameters only
};

const std::vector<std::string> kGenericProfileKeys = {"h_a_cos", "h_a_sin", "h_b_cos", "h_b_sin",
                                                      "g_a_cos", "g_a_sin", "g_b_cos", "g_b_sin"};

std::vector<KeyDef> build_schema() {
  std::vector<KeyDef> s = {
      {"task", Kind::string, "(subcommand)", "spectrum | phase-diagram | quench | dtop | dilation-check | report", {}},
      {"run.workers", Kind::integer, "1", "worker threads (>= 1)", {}},
      {"run.output", Kind::string, "out", "output directory", {}},
      {"run.seed", Kind::integer, "0", "seed for randomly drawn momenta (>= 0)", {}},
      {"model.family", Kind::string, "(required)", "lkc | nnn-lkc | nrssh | generic", {}},
  };
  for (ModelFamily f : {ModelFamily::lkc, ModelFamily::nnn_lkc, ModelFamily::nrssh}) {
    ChiralTwoBandModel def = f == ModelFamily::lkc       ? build_lkc({})
                             : f == ModelFamily::nnn_lkc ? build_nnn_lkc({})
                                                         : build_nrssh({});
    for (const auto& name : parameter_names(f)) {
      s.push_back({"model." + name, Kind::number, format_double(parameter_value(def, name)),
                   std::string(family_name(f)) + " parameter", f});
    }
  }
  s.push_back({"model.axis_a", Kind::string, "z", "generic: first Pauli axis (x, y or z)", ModelFamily::generic});
  s.push_back({"model.axis_b", Kind::string, "y", "generic: second Pauli axis", ModelFamily::generic});
  for (const auto& k : kGenericProfileKeys) {
    const bool is_sin = k.ends_with("sin");
    s.push_back({"model." + k, Kind::list, "[]",
                 std::string("generic: ") + (is_sin ? "sin coefficients for n = 1, 2, ..."
                                                    : "cos coefficients for n = 0, 1, ..."),
                 ModelFamily::generic});
  }
  const std::vector<KeyDef> rest = {
      {"spectrum.n_k", Kind::integer, "513", "k samples over [-pi, pi] (>= 2)", {}},
      {"spectrum.winding_n_k", Kind::integer, "4097", "winding-number grid (>= 64)", {}},
      {"spectrum.gap_tol", Kind::number, "1e-08", "|E| below this counts as gapless (> 0)", {}},
      {"phase_diagram.axis1", Kind::string, "(required)", "first swept parameter", {}},
      {"phase_diagram.axis1_min", Kind::number, "0", "", {}},
      {"phase_diagram.axis1_max", Kind::number, "1", "must exceed axis1_min", {}},
      {"phase_diagram.axis1_steps", Kind::integer, "2", "grid points (>= 2)", {}},
      {"phase_diagram.axis2", Kind::string, "(required)", "second swept parameter", {}},
      {"phase_diagram.axis2_min", Kind::number, "0", "", {}},
      {"phase_diagram.axis2_max", Kind::number, "1", "must exceed axis2_min", {}},
      {"phase_diagram.axis2_steps", Kind::integer, "2", "grid points (>= 2)", {}},
      {"phase_diagram.n_k", Kind::integer, "1025", "winding grid per cell (>= 64)", {}},
      {"phase_diagram.gap_tol", Kind::number, "1e-08", "(> 0)", {}},
      {"quench.t0", Kind::number, "0", "first time (>= 0)", {}},
      {"quench.t1", Kind::number, "10", "last time (> t0)", {}},
      {"quench.dt", Kind::number, "0.001", "time step (> 0)", {}},
      {"quench.n_k", Kind::integer, "8192", "midpoint k samples for g(t) (>= 64)", {}},
      {"quench.n_max", Kind::integer, "8", "largest n in the critical-time ladders (>= 1)", {}},
      {"quench.cusp_threshold", Kind::number, "50", "second-difference jump factor (> 0)", {}},
      {"quench.cusp_window", Kind::integer, "50", "half-width of the median window (>= 2)", {}},
      {"quench.cusp_floor", Kind::number, "1e-10", "second differences below this are ignored (> 0)", {}},
      {"quench.cusp_merge", Kind::integer, "20", "candidates this close (samples) merge (>= 1)", {}},
      {"dtop.t0", Kind::number, "0", "first time (>= 0)", {}},
      {"dtop.t1", Kind::number, "10", "last time (> t0)", {}},
      {"dtop.dt", Kind::number, "0.01", "time step (> 0)", {}},
      {"dtop.n_k", Kind::integer, "4096", "k segments (>= 256)", {}},
      {"dtop.range", Kind::string, "default", "default | reduced | full", {}},
      {"dtop.n_max", Kind::integer, "8", "largest n for the jump table (>= 1)", {}},
      {"dtop.jump_delta", Kind::number, "0.05", "offset on each side of a critical time (> 0)", {}},
      {"dtop.heatmap", Kind::boolean, "false", "also write Phi_G over (k, t)", {}},
      {"dtop.heatmap_n_k", Kind::integer, "256", "heatmap k samples (>= 2)", {}},
      {"dtop.heatmap_dt", Kind::number, "0.05", "heatmap time step (> 0)", {}},
      {"dilation.m0", Kind::number, "20", "initial metric scale (> 1)", {}},
      {"dilation.t_max", Kind::number, "3", "time window (>= 0)", {}},
      {"dilation.n_steps", Kind::integer, "3000", "RK4 steps (>= 16)", {}},
      {"dilation.k", Kind::list, "[]", "momenta; empty draws random_k from run.seed", {}},
      {"dilation.random_k", Kind::integer, "5", "number of random momenta (>= 1)", {}},
      {"dilation.psi0_re", Kind::list, "[1, 0]", "initial state, real parts (normalized on use)", {}},
      {"dilation.psi0_im", Kind::list, "[0, 0]", "initial state, imaginary parts", {}},
      {"dilation.frame_stride", Kind::integer, "10", "write every n-th frame (>= 1)", {}},
      {"report.n_k", Kind::integer, "4097", "winding grid (>= 64)", {}},
      {"report.n_max", Kind::integer, "8", "largest n in the critical-time ladders (>= 1)", {}},
  };
  s.insert(s.end(), rest.begin(), rest.end());
  return s;
}

const std::vector<KeyDef>& schema() {
  static const std::vector<KeyDef> s = build_schema();
  return s;
}

const std::set<std::string> kSections = {"run", "model", "spectrum", "phase_diagram",
                                         "quench", "dtop", "dilation", "report"};

struct Value {
  enum class Type { number, string, boolean, list } type = Type::string;
  double num = 0.0;
  std::string str;
  bool flag = false;
  std::vector<double> list;
};

std::string describe(const Value& v) {
  switch (v.type) {
    case Value::Type::number: return "number " + format_double(v.num);
    case Value::Type::boolean: return v.flag ? "boolean true" : "boolean false";
    case Value::Type::list: return "list";
    case Value::Type::string: return "string \"" + v.str + "\"";
  }
  return "value";
}

struct Entry {
  int line = 0;
  Value value;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return x;
}

/// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::optional<Value> parse_value(std::string_view s, std::string& error) {
  Value v;
  if (s.empty()) {
    error = "missing value";
    return std::nullopt;
  }
  if (s.front() == '"') {
    std::string out;
    std::size_t i = 1;
    for (; i < s.size() && s[i] != '"'; ++i) {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      out += s[i];
    }
    if (i >= s.size()) {
      error = "unterminated string";
      return std::nullopt;
    }
    if (!trim(s.substr(i + 1)).empty()) {
      error = "unexpected text after string";
      return std::nullopt;
    }
    v.type = Value::Type::string;
    v.str = std::move(out);
    return v;
  }
  if (s.front() == '[') {
    if (s.back() != ']') {
      error = "unterminated list";
      return std::nullopt;
    }
    v.type = Value::Type::list;
    std::string_view body = trim(s.substr(1, s.size() - 2));
    while (!body.empty()) {
      const auto comma = body.find(',');
      const auto item = trim(body.substr(0, comma));
      const auto x = parse_number(item);
      if (!x) {
        error = "list elements must be numbers, got '" + std::string(item) + "'";
        return std::nullopt;
      }
      v.list.push_back(*x);
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
      if (body.empty()) {
        error = "trailing comma in list";
        return std::nullopt;
      }
    }
    return v;
  }
  if (s == "true" || s == "false") {
    v.type = Value::Type::boolean;
    v.flag = s == "true";
    return v;
  }
  if (auto x = parse_number(s)) {
    v.type = Value::Type::number;
    v.num = *x;
    return v;
  }
  v.type = Value::Type::string;
  v.str = std::string(s);
  return v;
}

/// Builds a RunConfig from type-checked entries, recording every problem.
class Binder {
 public:
  Binder(std::map<std::string, Entry> entries, std::vector<ConfigIssue>& issues)
      : entries_(std::move(entries)), issues_(issues) {}

  void issue(const std::string& key, std::string msg) {
    const auto it = entries_.find(key);
    issues_.push_back({it == entries_.end() ? 0 : it->second.line, key, std::move(msg)});
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  void num(const std::string& key, double& out) {
    if (auto it = entries_.find(key); it != entries_.end()) out = it->second.value.num;
  }
  void integer(const std::string& key, int& out) {
    if (auto it = entries_.find(key); it != entries_.end()) out = static_cast<int>(it->second.value.num);
  }
  void text(const std::string& key, std::string& out) {
    if (auto it = entries_.find(key); it != entries_.end()) out = it->second.value.str;
  }
  void flag(const std::string& key, bool& out) {
    if (auto it = entries_.find(key); it != entries_.end()) out = it->second.value.flag;
  }
  void list(const std::string& key, std::vector<double>& out) {
    if (auto it = entries_.find(key); it != entries_.end()) out = it->second.value.list;
  }

  void at_least(const std::string& key, int value, int min) {
    if (value < min) issue(key, "must be at least " + std::to_string(min) + ", got " + std::to_string(value));
  }
  void positive(const std::string& key, double value) {
    if (!(value > 0.0)) issue(key, "must be positive, got " + format_double(value));
  }

 private:
  std::map<std::string, Entry> entries_;
  std::vector<ConfigIssue>& issues_;
};

std::optional<ModelFamily> parse_family(std::string_view s) {
  for (ModelFamily f : {ModelFamily::generic, ModelFamily::lkc, ModelFamily::nnn_lkc, ModelFamily::nrssh}) {
    if (family_name(f) == s) return f;
  }
  return std::nullopt;
}

std::optional<ChiralTwoBandModel> bind_model(Binder& b, ModelFamily family) {
  try {
    switch (family) {
      case ModelFamily::lkc: {
        LkcParams p;
        b.num("model.J", p.J);
        b.num("model.Delta", p.Delta);
        b.num("model.u", p.u);
        b.num("model.v", p.v);
        return build_lkc(p);
      }
      case ModelFamily::nnn_lkc: {
        NnnLkcParams p;
        b.num("model.J1", p.J1);
        b.num("model.J2", p.J2);
        b.num("model.Delta1", p.Delta1);
        b.num("model.Delta2", p.Delta2);
        b.num("model.u", p.u);
        b.num("model.v", p.v);
        return build_nnn_lkc(p);
      }
      case ModelFamily::nrssh: {
        NrsshParams p;
        b.num("model.J1", p.J1);
        b.num("model.J2", p.J2);
        b.num("model.gamma", p.gamma);
        return build_nrssh(p);
      }
      case ModelFamily::generic: {
        std::string a = "z", bb = "y";
        b.text("model.axis_a", a);
        b.text("model.axis_b", bb);
        if (a.size() != 1 || bb.size() != 1) {
          b.issue("model.axis_a", "axes must be one of x, y, z");
          return std::nullopt;
        }
        std::map<std::string, FourierProfile> prof;
        for (const auto& key : kGenericProfileKeys) {
          std::vector<double> xs;
          b.list("model." + key, xs);
          auto& p = prof[key.substr(0, 3)];
          if (key.ends_with("cos")) {
            p.cos_coeffs = xs;
          } else if (!xs.empty()) {
            p.sin_coeffs.assign(1, 0.0);
            p.sin_coeffs.insert(p.sin_coeffs.end(), xs.begin(), xs.end());
          }
        }
        return ChiralTwoBandModel(parse_axis(a[0]), parse_axis(bb[0]), prof["h_a"], prof["h_b"],
                                  prof["g_a"], prof["g_b"]);
      }
    }
  } catch (const ParameterError& e) {
    b.issue("model.family", e.what());
  }
  return std::nullopt;
}

}  // namespace

std::string_view task_name(Task task) {
  switch (task) {
    case Task::spectrum: return "spectrum";
    case Task::phase_diagram: return "phase-diagram";
    case Task::quench: return "quench";
    case Task::dtop: return "dtop";
    case Task::dilation_check: return "dilation-check";
    case Task::report: return "report";
  }
  return "report";
}

std::optional<Task> parse_task(std::string_view name) {
  for (Task t : {Task::spectrum, Task::phase_diagram, Task::quench, Task::dtop,
                 Task::dilation_check, Task::report}) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

std::string ConfigIssue::str() const {
  std::string s;
  if (line > 0) s += "line " + std::to_string(line) + ": ";
  if (!field.empty()) s += field + ": ";
  return s + message;
}

ParsedConfig parse_config(std::string_view text, std::optional<Task> task) {
  ParsedConfig result;
  auto& issues = result.issues;
  std::map<std::string, Entry> entries;
  std::string section;
  bool section_ok = true;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        issues.push_back({line_no, "", "malformed section header"});
        section_ok = false;
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      section_ok = kSections.count(section) != 0;
      if (!section_ok) issues.push_back({line_no, section, "unknown section"});
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({line_no, "", "expected 'key = value'"});
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    if (!is_identifier(key)) {
      issues.push_back({line_no, std::string(key), "invalid key"});
      continue;
    }
    if (!section_ok) continue;  // already reported
    const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    std::string err;
    auto value = parse_value(trim(line.substr(eq + 1)), err);
    if (!value) {
      issues.push_back({line_no, full, err});
      continue;
    }
    if (entries.count(full)) {
      issues.push_back({line_no, full, "duplicate key (first set on line " +
                                           std::to_string(entries[full].line) + ")"});
      continue;
    }
    entries[full] = {line_no, std::move(*value)};
  }

  // family decides which model keys exist
  std::optional<ModelFamily> family;
  if (auto it = entries.find("model.family"); it == entries.end()) {
    issues.push_back({0, "model.family", "required key is missing"});
  } else if (it->second.value.type != Value::Type::string ||
             !(family = parse_family(it->second.value.str))) {
    issues.push_back({it->second.line, "model.family",
                      "expected one of lkc, nnn-lkc, nrssh, generic, got " + describe(it->second.value)});
  }

  // unknown keys and type checks
  std::map<std::string, const KeyDef*> defs;
  for (const auto& d : schema()) {
    if (!defs.count(d.key) || (family && d.family == family)) defs[d.key] = &d;
  }
  for (auto it = entries.begin(); it != entries.end();) {
    const auto& [key, entry] = *it;
    const auto d = defs.find(key);
    bool drop = false;
    if (d == defs.end()) {
      issues.push_back({entry.line, key, "unknown key"});
      drop = true;
    } else if (d->second->family && family && *d->second->family != *family) {
      issues.push_back({entry.line, key,
                        "unknown key for model family " + std::string(family_name(*family))});
      drop = true;
    } else {
      const Kind kind = d->second->kind;
      const auto& v = entry.value;
      bool ok = false;
      switch (kind) {
        case Kind::number: ok = v.type == Value::Type::number; break;
        case Kind::integer:
          ok = v.type == Value::Type::number && v.num == std::floor(v.num) && std::abs(v.num) <= 2147483647.0;
          break;
        case Kind::string: ok = v.type == Value::Type::string; break;
        case Kind::boolean: ok = v.type == Value::Type::boolean; break;
        case Kind::list: ok = v.type == Value::Type::list; break;
      }
      if (!ok) {
        issues.push_back({entry.line, key, "type mismatch: expected " + std::string(kind_name(kind)) +
                                               ", got " + describe(v)});
        drop = true;
      } else if (v.type == Value::Type::number && !std::isfinite(v.num)) {
        issues.push_back({entry.line, key, "must be finite"});
        drop = true;
      } else if (v.type == Value::Type::list &&
                 !std::all_of(v.list.begin(), v.list.end(), [](double x) { return std::isfinite(x); })) {
        issues.push_back({entry.line, key, "list elements must be finite"});
        drop = true;
      }
    }
    it = drop ? entries.erase(it) : std::next(it);
  }

  RunConfig cfg;
  Binder b(std::move(entries), issues);

  // task
  std::string task_text;
  b.text("task", task_text);
  if (!task_text.empty()) {
    const auto t = parse_task(task_text);
    if (!t) {
      b.issue("task", "unknown task \"" + task_text + "\"");
    } else if (task && *task != *t) {
      b.issue("task", "config asks for " + task_text + " but the command is " + std::string(task_name(*task)));
    } else {
      cfg.task = *t;
    }
  } else if (task) {
    cfg.task = *task;
  } else {
    issues.push_back({0, "task", "no task given (use a subcommand or the task key)"});
  }
  if (task) cfg.task = *task;

  // run
  b.integer("run.workers", cfg.workers);
  b.at_least("run.workers", cfg.workers, 1);
  b.text("run.output", cfg.output_dir);
  if (cfg.output_dir.empty()) b.issue("run.output", "must not be empty");
  int seed = 0;
  b.integer("run.seed", seed);
  if (seed < 0) b.issue("run.seed", "must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(std::max(seed, 0));

  // model
  if (family) {
    if (auto m = bind_model(b, *family)) cfg.model = *m;
  }

  // spectrum
  auto& sp = cfg.spectrum;
  b.integer("spectrum.n_k", sp.n_k);
  b.at_least("spectrum.n_k", sp.n_k, 2);
  b.integer("spectrum.winding_n_k", sp.winding_n_k);
  b.at_least("spectrum.winding_n_k", sp.winding_n_k, 64);
  b.num("spectrum.gap_tol", sp.gap_tol);
  b.positive("spectrum.gap_tol", sp.gap_tol);

  // phase diagram
  auto& pd = cfg.phase_diagram;
  for (int i : {1, 2}) {
    auto& ax = i == 1 ? pd.axis1 : pd.axis2;
    const std::string p = "phase_diagram.axis" + std::to_string(i);
    b.text(p, ax.name);
    b.num(p + "_min", ax.min);
    b.num(p + "_max", ax.max);
    b.integer(p + "_steps", ax.steps);
    b.at_least(p + "_steps", ax.steps, 2);
    if (!(ax.max > ax.min)) {
      b.issue(b.has(p + "_max") ? p + "_max" : p + "_min", "empty parameter range: max must exceed min");
    }
    if (cfg.task == Task::phase_diagram) {
      if (ax.name.empty()) {
        b.issue(p, "required for the phase-diagram task");
      } else if (family) {
        const auto names = parameter_names(*family);
        if (std::find(names.begin(), names.end(), ax.name) == names.end()) {
          b.issue(p, "\"" + ax.name + "\" is not a parameter of " + std::string(family_name(*family)));
        }
      }
    }
  }
  if (cfg.task == Task::phase_diagram && !pd.axis1.name.empty() && pd.axis1.name == pd.axis2.name) {
    b.issue("phase_diagram.axis2", "must differ from axis1");
  }
  b.integer("phase_diagram.n_k", pd.n_k);
  b.at_least("phase_diagram.n_k", pd.n_k, 64);
  b.num("phase_diagram.gap_tol", pd.gap_tol);
  b.positive("phase_diagram.gap_tol", pd.gap_tol);

  // time windows shared by quench and dtop
  auto window = [&](const std::string& p, double& t0, double& t1, double& dt) {
    b.num(p + ".t0", t0);
    b.num(p + ".t1", t1);
    b.num(p + ".dt", dt);
    if (t0 < 0.0) b.issue(p + ".t0", "must be non-negative");
    if (!(t1 > t0)) b.issue(p + ".t1", "empty time range: t1 must exceed t0");
    b.positive(p + ".dt", dt);
  };

  auto& q = cfg.quench;
  window("quench", q.t0, q.t1, q.dt);
  b.integer("quench.n_k", q.n_k);
  b.at_least("quench.n_k", q.n_k, 64);
  b.integer("quench.n_max", q.n_max);
  b.at_least("quench.n_max", q.n_max, 1);
  b.num("quench.cusp_threshold", q.cusps.jump_threshold);
  b.positive("quench.cusp_threshold", q.cusps.jump_threshold);
  b.integer("quench.cusp_window", q.cusps.window);
  b.at_least("quench.cusp_window", q.cusps.window, 2);
  b.num("quench.cusp_floor", q.cusps.noise_floor);
  b.positive("quench.cusp_floor", q.cusps.noise_floor);
  b.integer("quench.cusp_merge", q.cusps.merge_gap);
  b.at_least("quench.cusp_merge", q.cusps.merge_gap, 1);

  auto& d = cfg.dtop;
  window("dtop", d.t0, d.t1, d.dt);
  b.integer("dtop.n_k", d.n_k);
  b.at_least("dtop.n_k", d.n_k, 256);
  std::string range = "default";
  b.text("dtop.range", range);
  if (range == "reduced") d.range = BzRange::reduced;
  else if (range == "full") d.range = BzRange::full;
  else if (range != "default") b.issue("dtop.range", "expected default, reduced or full");
  b.integer("dtop.n_max", d.n_max);
  b.at_least("dtop.n_max", d.n_max, 1);
  b.num("dtop.jump_delta", d.jump_delta);
  b.positive("dtop.jump_delta", d.jump_delta);
  b.flag("dtop.heatmap", d.heatmap);
  b.integer("dtop.heatmap_n_k", d.heatmap_n_k);
  b.at_least("dtop.heatmap_n_k", d.heatmap_n_k, 2);
  b.num("dtop.heatmap_dt", d.heatmap_dt);
  b.positive("dtop.heatmap_dt", d.heatmap_dt);

  auto& dl = cfg.dilation;
  b.num("dilation.m0", dl.m0);
  if (!(dl.m0 > 1.0)) b.issue("dilation.m0", "must exceed 1");
  b.num("dilation.t_max", dl.t_max);
  if (dl.t_max < 0.0) b.issue("dilation.t_max", "must be non-negative");
  b.integer("dilation.n_steps", dl.n_steps);
  b.at_least("dilation.n_steps", dl.n_steps, 16);
  b.list("dilation.k", dl.k);
  b.integer("dilation.random_k", dl.random_k);
  b.at_least("dilation.random_k", dl.random_k, 1);
  std::vector<double> re{1.0, 0.0}, im{0.0, 0.0};
  b.list("dilation.psi0_re", re);
  b.list("dilation.psi0_im", im);
  if (re.size() != 2) b.issue("dilation.psi0_re", "needs exactly 2 entries");
  if (im.size() != 2) b.issue("dilation.psi0_im", "needs exactly 2 entries");
  if (re.size() == 2 && im.size() == 2) {
    Vector2C psi(Complex(re[0], im[0]), Complex(re[1], im[1]));
    if (psi.norm() == 0.0) {
      b.issue("dilation.psi0_re", "initial state must be non-zero");
    } else {
      dl.psi0 = psi / psi.norm();
    }
  }
  b.integer("dilation.frame_stride", dl.frame_stride);
  b.at_least("dilation.frame_stride", dl.frame_stride, 1);

  auto& r = cfg.report;
  b.integer("report.n_k", r.n_k);
  b.at_least("report.n_k", r.n_k, 64);
  b.integer("report.n_max", r.n_max);
  b.at_least("report.n_max", r.n_max, 1);

  if (family == ModelFamily::generic &&
      (cfg.task == Task::report || cfg.task == Task::phase_diagram)) {
    b.issue("model.family", "the " + std::string(task_name(cfg.task)) + " task needs a built-in family");
  }

  std::stable_sort(issues.begin(), issues.end(),
                   [](const ConfigIssue& a, const ConfigIssue& c) { return a.line < c.line; });
  if (issues.empty()) result.config = std::move(cfg);
  return result;
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  using nlohmann::ordered_json;
  auto axis = [](const ParameterAxis& a) {
    return ordered_json{{"name", a.name}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}};
  };
  ordered_json psi0 = ordered_json::array();
  for (int i = 0; i < 2; ++i) psi0.push_back({c.dilation.psi0(i).real(), c.dilation.psi0(i).imag()});
  return {
      {"task", task_name(c.task)},
      {"model", to_json(c.model)},
      {"run", {{"workers", c.workers}, {"output", c.output_dir}, {"seed", c.seed}}},
      {"spectrum", {{"n_k", c.spectrum.n_k}, {"winding_n_k", c.spectrum.winding_n_k}, {"gap_tol", c.spectrum.gap_tol}}},
      {"phase_diagram",
       {{"axis1", axis(c.phase_diagram.axis1)},
        {"axis2", axis(c.phase_diagram.axis2)},
        {"n_k", c.phase_diagram.n_k},
        {"gap_tol", c.phase_diagram.gap_tol}}},
      {"quench",
       {{"t0", c.quench.t0},
        {"t1", c.quench.t1},
        {"dt", c.quench.dt},
        {"n_k", c.quench.n_k},
        {"n_max", c.quench.n_max},
        {"cusp_threshold", c.quench.cusps.jump_threshold},
        {"cusp_window", c.quench.cusps.window},
        {"cusp_floor", c.quench.cusps.noise_floor},
        {"cusp_merge", c.quench.cusps.merge_gap}}},
      {"dtop",
       {{"t0", c.dtop.t0},
        {"t1", c.dtop.t1},
        {"dt", c.dtop.dt},
        {"n_k", c.dtop.n_k},
        {"range", c.dtop.range ? std::string(range_name(*c.dtop.range)) : "default"},
        {"n_max", c.dtop.n_max},
        {"jump_delta", c.dtop.jump_delta},
        {"heatmap", c.dtop.heatmap},
        {"heatmap_n_k", c.dtop.heatmap_n_k},
        {"heatmap_dt", c.dtop.heatmap_dt}}},
      {"dilation",
       {{"m0", c.dilation.m0},
        {"t_max", c.dilation.t_max},
        {"n_steps", c.dilation.n_steps},
        {"k", c.dilation.k},
        {"random_k", c.dilation.random_k},
        {"psi0", psi0},
        {"frame_stride", c.dilation.frame_stride}}},
      {"report", {{"n_k", c.report.n_k}, {"n_max", c.report.n_max}}},
  };
}

std::string config_schema() {
  std::ostringstream os;
  os << "# nhdqpt run configuration\n"
     << "# key = value; [section] prefixes keys with 'section.'; '#' starts a comment.\n"
     << "# Values: numbers, \"strings\" (bare words also read as strings), true/false,\n"
     << "# and lists [1, 2, 3]. Unknown keys are rejected.\n\n";
  for (const auto& d : schema()) {
    os << d.key << " : " << kind_name(d.kind) << " = " << d.fallback;
    if (!d.help.empty()) os << "  # " << d.help;
    os << '\n';
  }
  return os.str();
}

}  // namespace nhdqpt
