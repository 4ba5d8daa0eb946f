#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "nhdqpt/config.hpp"

using namespace nhdqpt;

namespace {

bool has_issue(const ParsedConfig& p, const std::string& field, const std::string& needle, int line = -1) {
  for (const auto& i : p.issues) {
    if (i.field == field && i.message.find(needle) != std::string::npos && (line < 0 || i.line == line)) return true;
  }
  return false;
}

std::string dump(const ParsedConfig& p) {
  std::string s;
  for (const auto& i : p.issues) s += i.str() + "\n";
  return s;
}

}  // namespace

TEST_CASE("task names round-trip") {
  for (Task t : {Task::spectrum, Task::phase_diagram, Task::quench, Task::dtop, Task::dilation_check, Task::report}) {
    CHECK(parse_task(task_name(t)) == t);
  }
  CHECK_FALSE(parse_task("phase_diagram").has_value());
  CHECK(task_name(Task::dilation_check) == "dilation-check");
}

TEST_CASE("minimal config uses defaults") {
  const auto p = parse_config("task = report\n[model]\nfamily = lkc\n");
  INFO(dump(p));
  REQUIRE(p.ok());
  const auto& c = *p.config;
  CHECK(c.task == Task::report);
  CHECK(c.model.family() == ModelFamily::lkc);
  CHECK(c.workers == 1);
  CHECK(c.output_dir == "out");
  CHECK(c.seed == 0);
  CHECK(c.spectrum.n_k == 513);
  CHECK(c.quench.dt == doctest::Approx(1e-3));
  CHECK(c.dtop.jump_delta == doctest::Approx(0.05));
  CHECK_FALSE(c.dtop.range.has_value());
  CHECK(c.dilation.m0 == 20.0);
  CHECK(c.dilation.k.empty());
  CHECK(c.report.n_max == 8);
}

TEST_CASE("values: quoting, comments, signs, booleans, lists") {
  const char* text = R"(# leading comment
task = "dtop"   # trailing comment
[run]
output = "runs/#1 \"a\""  # hash inside quotes survives
workers = +4
seed = 17
[model]
family = nrssh
J1 = -0.5
J2 = 0.4
gamma = 0.5
[dtop]
heatmap = true
range = full
t1 = 2.5e1
[dilation]
k = [0.1, -2, +3.5e-1]
psi0_re = [3, 0]
psi0_im = [0, 4]
)";
  const auto p = parse_config(text);
  INFO(dump(p));
  REQUIRE(p.ok());
  const auto& c = *p.config;
  CHECK(c.task == Task::dtop);
  CHECK(c.output_dir == "runs/#1 \"a\"");
  CHECK(c.workers == 4);
  CHECK(c.seed == 17);
  CHECK(c.model.family() == ModelFamily::nrssh);
  CHECK(parameter_value(c.model, "J1") == -0.5);
  CHECK(parameter_value(c.model, "gamma") == 0.5);
  CHECK(c.dtop.heatmap);
  REQUIRE(c.dtop.range.has_value());
  CHECK(*c.dtop.range == BzRange::full);
  CHECK(c.dtop.t1 == 25.0);
  REQUIRE(c.dilation.k.size() == 3);
  CHECK(c.dilation.k[2] == 0.35);
  // psi0 is normalized
  CHECK(std::abs(c.dilation.psi0.norm() - 1.0) <= 1e-15);
  CHECK(std::abs(c.dilation.psi0(0) - Complex(0.6, 0.0)) <= 1e-15);
  CHECK(std::abs(c.dilation.psi0(1) - Complex(0.0, 0.8)) <= 1e-15);
}

TEST_CASE("generic model from Fourier lists") {
  // h_z = 0.3 + cos k, h_y = sin k, g_z = 0.2: an LKC in disguise
  const char* text = R"(
[model]
family = generic
h_a_cos = [0.3, 1]
h_b_sin = [1]
g_a_cos = [0.2]
)";
  const auto p = parse_config(text, Task::spectrum);
  INFO(dump(p));
  REQUIRE(p.ok());
  const auto& m = p.config->model;
  const auto ref = build_lkc({1, 1, 0.3, 0.2});
  CHECK(m.family() == ModelFamily::generic);
  CHECK(m.axis_a() == PauliAxis::z);
  CHECK(m.axis_b() == PauliAxis::y);
  for (double k : {-2.0, 0.0, 0.7, 3.0}) {
    CHECK(max_abs_diff(hamiltonian(m, k), hamiltonian(ref, k)) <= 1e-15);
  }

  const auto q = parse_config("[model]\nfamily = generic\naxis_a = x\naxis_b = z\nh_a_cos = [1]\n", Task::spectrum);
  REQUIRE(q.ok());
  CHECK(q.config->model.chiral() == PauliAxis::y);

  CHECK(has_issue(parse_config("[model]\nfamily = generic\naxis_a = xy\n", Task::spectrum), "model.axis_a",
                  "axes must be one of x, y, z"));
  CHECK_FALSE(parse_config("[model]\nfamily = generic\naxis_a = x\naxis_b = x\n", Task::spectrum).ok());
}

TEST_CASE("lexical errors") {
  CHECK(has_issue(parse_config("[model\nfamily = lkc\n", Task::report), "", "malformed section header", 1));
  CHECK(has_issue(parse_config("[bogus]\nx = 1\n[model]\nfamily = lkc\n", Task::report), "bogus",
                  "unknown section", 1));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\njust words\n", Task::report), "",
                  "expected 'key = value'", 3));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\nJ.x = 1\n", Task::report), "J.x", "invalid key", 3));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\nu =\n", Task::report), "model.u", "missing value"));
  CHECK(has_issue(parse_config("[run]\noutput = \"abc\n[model]\nfamily = lkc\n", Task::report), "run.output",
                  "unterminated string"));
  CHECK(has_issue(parse_config("[run]\noutput = \"abc\" x\n[model]\nfamily = lkc\n", Task::report),
                  "run.output", "unexpected text after string"));
  CHECK(has_issue(parse_config("[dilation]\nk = [1, 2\n[model]\nfamily = lkc\n", Task::report), "dilation.k",
                  "unterminated list"));
  CHECK(has_issue(parse_config("[dilation]\nk = [1, 2,]\n[model]\nfamily = lkc\n", Task::report), "dilation.k",
                  "trailing comma in list"));
  CHECK(has_issue(parse_config("[dilation]\nk = [1, a]\n[model]\nfamily = lkc\n", Task::report), "dilation.k",
                  "list elements must be numbers, got 'a'"));
  const auto dup = parse_config("[model]\nfamily = lkc\nu = 1\nu = 2\n", Task::report);
  CHECK(has_issue(dup, "model.u", "duplicate key (first set on line 3)", 4));
  CHECK_FALSE(dup.ok());
}

TEST_CASE("family and key checks") {
  CHECK(has_issue(parse_config("[run]\nworkers = 2\n", Task::report), "model.family", "required key is missing", 0));
  CHECK(has_issue(parse_config("[model]\nfamily = kitaev\n", Task::report), "model.family",
                  "expected one of lkc, nnn-lkc, nrssh, generic, got string \"kitaev\""));
  CHECK(has_issue(parse_config("[model]\nfamily = 3\n", Task::report), "model.family", "got number 3"));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\nfoo = 1\n", Task::report), "model.foo", "unknown key"));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\ngamma = 1\n", Task::report), "model.gamma",
                  "unknown key for model family lkc"));
  CHECK(has_issue(parse_config("[model]\nfamily = nrssh\nh_a_cos = [1]\n", Task::report), "model.h_a_cos",
                  "unknown key for model family nrssh"));
  CHECK(has_issue(parse_config("[model]\nfamily = nrssh\nJ2 = 0\n", Task::report), "model.family", "J2"));
}

TEST_CASE("type checks") {
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\nu = abc\n", Task::report), "model.u",
                  "type mismatch: expected number, got string \"abc\""));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\n[run]\nworkers = 1.5\n", Task::report), "run.workers",
                  "type mismatch: expected integer"));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\n[dtop]\nheatmap = 1\n", Task::report), "dtop.heatmap",
                  "type mismatch: expected boolean, got number 1"));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\n[dilation]\nk = 1\n", Task::report), "dilation.k",
                  "expected list of numbers"));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\n[run]\noutput = true\n", Task::report), "run.output",
                  "expected string, got boolean true"));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\nu = inf\n", Task::report), "model.u", "must be finite"));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\nu = nan\n", Task::report), "model.u", "must be finite"));
  CHECK(has_issue(parse_config("[model]\nfamily = lkc\n[dilation]\nk = [1, inf]\n", Task::report), "dilation.k",
                  "list elements must be finite"));
}

TEST_CASE("task selection") {
  const std::string model = "[model]\nfamily = lkc\n";
  CHECK(has_issue(parse_config(model), "task", "no task given (use a subcommand or the task key)"));
  CHECK(has_issue(parse_config("task = fly\n" + model), "task", "unknown task \"fly\""));
  CHECK(has_issue(parse_config("task = quench\n" + model, Task::dtop), "task",
                  "config asks for quench but the command is dtop"));
  const auto p = parse_config("task = quench\n" + model, Task::quench);
  REQUIRE(p.ok());
  CHECK(p.config->task == Task::quench);
  const auto q = parse_config(model, Task::dilation_check);
  REQUIRE(q.ok());
  CHECK(q.config->task == Task::dilation_check);
}

TEST_CASE("range and bound checks") {
  auto check = [](const std::string& body, const std::string& field, const std::string& msg) {
    const auto p = parse_config("[model]\nfamily = lkc\n" + body, Task::report);
    INFO(body);
    INFO(dump(p));
    CHECK(has_issue(p, field, msg));
    CHECK_FALSE(p.ok());
  };
  check("[run]\nworkers = 0\n", "run.workers", "must be at least 1, got 0");
  check("[run]\noutput = \"\"\n", "run.output", "must not be empty");
  check("[run]\nseed = -1\n", "run.seed", "must be non-negative");
  check("[spectrum]\nn_k = 1\n", "spectrum.n_k", "must be at least 2, got 1");
  check("[spectrum]\nwinding_n_k = 10\n", "spectrum.winding_n_k", "must be at least 64, got 10");
  check("[spectrum]\ngap_tol = 0\n", "spectrum.gap_tol", "must be positive, got 0");
  check("[quench]\nt0 = -1\n", "quench.t0", "must be non-negative");
  check("[quench]\nt0 = 5\nt1 = 5\n", "quench.t1", "empty time range: t1 must exceed t0");
  check("[quench]\ndt = -0.1\n", "quench.dt", "must be positive");
  check("[quench]\nn_k = 32\n", "quench.n_k", "must be at least 64");
  check("[quench]\ncusp_window = 1\n", "quench.cusp_window", "must be at least 2");
  check("[dtop]\nt1 = -2\n", "dtop.t1", "empty time range");
  check("[dtop]\nn_k = 100\n", "dtop.n_k", "must be at least 256");
  check("[dtop]\nrange = half\n", "dtop.range", "expected default, reduced or full");
  check("[dtop]\njump_delta = 0\n", "dtop.jump_delta", "must be positive");
  check("[dilation]\nm0 = 1\n", "dilation.m0", "must exceed 1");
  check("[dilation]\nt_max = -1\n", "dilation.t_max", "must be non-negative");
  check("[dilation]\nn_steps = 8\n", "dilation.n_steps", "must be at least 16");
  check("[dilation]\npsi0_re = [1]\n", "dilation.psi0_re", "needs exactly 2 entries");
  check("[dilation]\npsi0_im = [1, 2, 3]\n", "dilation.psi0_im", "needs exactly 2 entries");
  check("[dilation]\npsi0_re = [0, 0]\n", "dilation.psi0_re", "initial state must be non-zero");
  check("[report]\nn_k = 8\n", "report.n_k", "must be at least 64");
}

TEST_CASE("phase diagram axes") {
  const std::string model = "[model]\nfamily = lkc\n";
  const auto missing = parse_config(model, Task::phase_diagram);
  CHECK(has_issue(missing, "phase_diagram.axis1", "required for the phase-diagram task"));
  CHECK(has_issue(missing, "phase_diagram.axis2", "required for the phase-diagram task"));

  const auto bad = parse_config(model + "[phase_diagram]\naxis1 = gamma\naxis2 = v\n", Task::phase_diagram);
  CHECK(has_issue(bad, "phase_diagram.axis1", "\"gamma\" is not a parameter of lkc"));

  const auto same = parse_config(model + "[phase_diagram]\naxis1 = u\naxis2 = u\n", Task::phase_diagram);
  CHECK(has_issue(same, "phase_diagram.axis2", "must differ from axis1"));

  const auto empty = parse_config(model + "[phase_diagram]\naxis1 = u\naxis1_min = 1\naxis1_max = 1\naxis2 = v\n",
                                  Task::phase_diagram);
  CHECK(has_issue(empty, "phase_diagram.axis1_max", "empty parameter range: max must exceed min"));

  const auto ok = parse_config(model + "[phase_diagram]\naxis1 = u\naxis1_min = -2\naxis1_max = 2\naxis1_steps = 41\n"
                                       "axis2 = v\naxis2_max = 1.5\naxis2_steps = 31\n",
                               Task::phase_diagram);
  INFO(dump(ok));
  REQUIRE(ok.ok());
  const auto& pd = ok.config->phase_diagram;
  CHECK(pd.axis1.name == "u");
  CHECK(pd.axis1.min == -2.0);
  CHECK(pd.axis1.steps == 41);
  CHECK(pd.axis2.name == "v");
  CHECK(pd.axis2.max == 1.5);

  // axes are not required by other tasks
  CHECK(parse_config(model, Task::quench).ok());
}

TEST_CASE("generic family is rejected where a built-in is needed") {
  const std::string model = "[model]\nfamily = generic\nh_a_cos = [0.2, 1]\nh_b_sin = [1]\n";
  CHECK(has_issue(parse_config(model, Task::report), "model.family", "the report task needs a built-in family"));
  CHECK(has_issue(parse_config(model + "[phase_diagram]\naxis1 = u\naxis2 = v\n", Task::phase_diagram),
                  "model.family", "the phase-diagram task needs a built-in family"));
  CHECK(parse_config(model, Task::spectrum).ok());
  CHECK(parse_config(model, Task::dilation_check).ok());
}

TEST_CASE("issues are collected, sorted by line and formatted") {
  const char* text = R"([model]
family = lkc
u = abc
[run]
workers = 0
[nowhere]
)";
  const auto p = parse_config(text, Task::report);
  CHECK_FALSE(p.ok());
  REQUIRE(p.issues.size() >= 3);
  for (std::size_t i = 1; i < p.issues.size(); ++i) CHECK(p.issues[i - 1].line <= p.issues[i].line);
  CHECK(has_issue(p, "model.u", "type mismatch", 3));
  CHECK(has_issue(p, "run.workers", "must be at least 1", 5));
  CHECK(has_issue(p, "nowhere", "unknown section", 6));
  CHECK(p.issues.front().str() == "line 3: model.u: type mismatch: expected number, got string \"abc\"");
  CHECK(ConfigIssue{0, "task", "x"}.str() == "task: x");
  CHECK(ConfigIssue{2, "", "y"}.str() == "line 2: y");
}

TEST_CASE("resolved json and schema") {
  const auto p = parse_config("[model]\nfamily = nnn-lkc\nv = 0.4\n[quench]\nt1 = 20\n", Task::quench);
  INFO(dump(p));
  REQUIRE(p.ok());
  const auto j = to_json(*p.config);
  CHECK(j["task"] == "quench");
  CHECK(j["model"]["family"] == "nnn-lkc");
  CHECK(j["quench"]["t1"] == 20.0);
  CHECK(j.contains("dilation"));
  CHECK(j.dump() == to_json(*p.config).dump());

  const auto s = config_schema();
  for (const char* key : {"task :", "run.workers :", "model.family :", "model.J2 :", "model.gamma :",
                          "model.h_a_cos :", "quench.cusp_threshold :", "dtop.range :", "dilation.psi0_im :",
                          "report.n_max :", "phase_diagram.axis2_steps :"}) {
    CHECK_MESSAGE(s.find(key) != std::string::npos, key);
  }
}
