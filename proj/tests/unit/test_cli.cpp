#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ksdk/cli/commands.hpp"
#include "ksdk/error.hpp"

using namespace ksdk;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ksdk_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

RunConfig quick(const fs::path& out) {
  RunConfig c = parse_config("", {"model.M=8", "model.T=0.005", "run.output_dir=\"" + out.string() + "\""});
  return c;
}

}  // namespace

TEST_CASE("minimal config applies defaults") {
  RunConfig c;
  apply_config_text(c, "[run]\nseed = 9  # comment\n");
  c.resolve();
  CHECK(c.seed == 9);
  CHECK(c.model.seed == 9);
  CHECK(c.model.M == 32);
  CHECK(c.model.T == 0.25);
  CHECK(c.model.dt == 2.5e-4);
  CHECK(c.regime.regular.size() == 3);
  CHECK(c.regime.regular_decreasing);
}

TEST_CASE("every value type parses") {
  RunConfig c;
  apply_config_text(c,
                    "[model]\nscheme = \"etd1\"\nchi = 2\n"
                    "[initial]\nkind = \"cosine\"\ncos_x2 = -0.1\n"
                    "[schedule]\neps_list = [1e-2, 1e-3, 0]\ndelta_rule = \"fixed\"\n"
                    "[experiment]\nprobes = [[0.05, 1, 0], [0.1, -2, 3],]\ncoupled = false\n"
                    "[particles]\nN_list = [10, 20]\n");
  c.resolve();
  CHECK(c.model.scheme == TimeScheme::etd1);
  CHECK(c.model.chi == 2.0);
  CHECK(c.initial.kind == InitialCondition::Kind::cosine);
  CHECK(c.schedule.eps_list == std::vector<double>{1e-2, 1e-3, 0.0});
  CHECK(c.schedule.delta_rule.kind == DeltaRule::Kind::fixed);
  REQUIRE(c.experiment.probes.size() == 2);
  CHECK(c.experiment.probes[1].mode == Mode{-2, 3});
  CHECK(!c.experiment.coupled);
  CHECK(c.particles.N_list == std::vector<std::size_t>{10, 20});
}

TEST_CASE("errors name the key path") {
  RunConfig c;
  const std::string unknown = message_of([&] { apply_config_text(c, "[model]\nepsilon = 1\n", "f.toml"); });
  CHECK(unknown.find("f.toml:2") != std::string::npos);
  CHECK(unknown.find("'model.epsilon'") != std::string::npos);
  const std::string type = message_of([&] { apply_config_text(c, "[model]\nM = 3.5\n"); });
  CHECK(type.find("'model.M' expects an integer, got float") != std::string::npos);
  const std::string str = message_of([&] { apply_config_text(c, "[run]\noutput_dir = 4\n"); });
  CHECK(str.find("'run.output_dir' expects a string") != std::string::npos);
  const std::string section = message_of([&] { apply_config_text(c, "[modle]\n"); });
  CHECK(section.find("unknown section 'modle'") != std::string::npos);
  const std::string elem = message_of([&] { apply_config_text(c, "[schedule]\neps_list = [0.1, \"x\"]\n"); });
  CHECK(elem.find("'schedule.eps_list[1]'") != std::string::npos);
  const std::string value = message_of([&] {
    RunConfig d;
    apply_override(d, "model.dt=-1");
    d.resolve();
  });
  CHECK(value.find("'model.dt'") != std::string::npos);
  CHECK_THROWS_AS(apply_override(c, "model.eps"), ConfigError);
}

TEST_CASE("flags override the file") {
  const fs::path dir = scratch("override");
  {
    std::ofstream f(dir / "c.toml");
    f << "[model]\neps = 0.01\nchi = 3\n";
  }
  const RunConfig c = parse_config((dir / "c.toml").string(), {"model.eps=0.002"});
  CHECK(c.model.eps == 0.002);
  CHECK(c.model.chi == 3.0);
  CHECK_THROWS_AS(parse_config((dir / "missing.toml").string()), ConfigError);
}

TEST_CASE("regime violations are warnings") {
  const RunConfig c = parse_config("", {"schedule.delta_exponent=1.0"});
  CHECK(!c.warnings.empty());
}

TEST_CASE("echo round trip") {
  RunConfig a = parse_config("", {"model.chi=0.5", "experiment.probes=[[0.1, 1, 1]]", "run.output_dir=\"x y\""});
  RunConfig b;
  apply_config_text(b, a.to_text());
  b.resolve();
  CHECK(b.to_text() == a.to_text());
  CHECK(config_keys().size() > 30);
}

TEST_CASE("simulate-det on uniform data writes a constant trajectory") {
  const fs::path out = scratch("det");
  std::ostringstream log;
  CHECK(dispatch("simulate-det", quick(out), log) == 0);
  const std::string csv = slurp(out / "trajectory.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,t,mass,l2_norm,min_value,energy_residual");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find(",1,1,1,") != std::string::npos);
  }
  CHECK(rows == 21);
  CHECK(fs::exists(out / "resolved_config.toml"));
  CHECK(slurp(out / "VERSION") == version_string() + "\n");
  CHECK(fs::exists(out / "snapshots" / "rho_000020.ksdk"));
}

TEST_CASE("experiment-lln with an eps = 0 endpoint reports a zero gap") {
  const fs::path out = scratch("lln");
  RunConfig c = quick(out);
  apply_override(c, "schedule.eps_list=[0.01, 0]");
  apply_override(c, "experiment.samples=3");
  c.resolve();
  std::ostringstream log;
  dispatch("experiment-lln", c, log);
  const std::string csv = slurp(out / "report.csv");
  CHECK(csv.find("eps=0,0,") != std::string::npos);
  CHECK(csv.find(",sup_gap,0,0,1\n") != std::string::npos);
}

TEST_CASE("selftest passes") {
  const fs::path out = scratch("self");
  std::ostringstream log;
  CHECK(dispatch("selftest", quick(out), log) == 0);
  for (const auto& c : run_selftest(1)) CHECK_MESSAGE(c.passed, c.name);
}

TEST_CASE("every subcommand is dispatchable and reruns are byte-identical") {
  for (const auto& info : command_table()) {
    if (info.name.rfind("experiment-", 0) == 0 || info.name == "enhancement-scan") continue;
    const fs::path a = scratch("a_" + info.name), b = scratch("b_" + info.name);
    RunConfig ca = quick(a), cb = quick(b);
    for (RunConfig* c : {&ca, &cb}) {
      apply_override(*c, "initial.kind=\"cosine\"");
      apply_override(*c, "particles.N=20");
      c->resolve();
    }
    std::ostringstream log;
    CHECK(dispatch(info.name, ca, log) == 0);
    CHECK(dispatch(info.name, cb, log) == 0);
    for (const auto& e : fs::recursive_directory_iterator(a)) {
      if (!e.is_regular_file()) continue;
      const fs::path rel = fs::relative(e.path(), a);
      if (rel == "resolved_config.toml") continue;  // echoes the directory
      const std::string what = info.name + "/" + rel.string();
      CHECK_MESSAGE(slurp(e.path()) == slurp(b / rel), what);
    }
  }
  std::ostringstream log;
  CHECK_THROWS_AS(dispatch("simulate-nothing", quick(scratch("none")), log), InputError);
}

#ifdef KSDK_CLI_PATH
TEST_CASE("executable exit codes") {
  const fs::path out = scratch("exe");
  const std::string exe = KSDK_CLI_PATH;
  auto run = [&](const std::string& args) {
    const int s = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(run("selftest --out " + (out / "s").string()) == 0);
  CHECK(run("simulate-det --set model.nope=1 --out " + (out / "x").string()) == 1);
  CHECK(run("no-such-command") == 1);
  CHECK(run("--help") == 0);
  // eps values too close for a drop beyond two standard errors
  CHECK(run("experiment-lln --modes 8 --samples 2 --set model.T=0.005 --set 'schedule.eps_list=[0.01, 0.0099]' "
            "--set 'schedule.delta_rule=\"fixed\"' --set schedule.delta_coefficient=0.2 --out " +
            (out / "l").string()) == 2);
  CHECK(run("simulate-det --modes 8 --set model.T=0.005 --seed 3 --out " + (out / "d").string()) == 0);
  CHECK(slurp(out / "d" / "resolved_config.toml").find("seed = 3") != std::string::npos);
}
#endif
