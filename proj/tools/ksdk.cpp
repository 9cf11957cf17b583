// ksdk command-line front end.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ksdk/cli/commands.hpp"
#include "ksdk/error.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::optional<double> eps, delta, chi;
  std::optional<int> modes, samples;
  std::vector<std::string> set;
};

std::string number(double x) { return ksdk::format_number(x); }

std::vector<std::string> overrides(const Flags& f) {
  std::vector<std::string> o;
  if (f.seed) o.push_back("run.seed=" + std::to_string(*f.seed));
  if (f.workers) o.push_back("run.workers=" + std::to_string(*f.workers));
  if (f.out) {
    std::string q;
    for (char c : *f.out) q += (c == '"' || c == '\\') ? std::string("\\") + c : std::string(1, c);
    o.push_back("run.output_dir=\"" + q + "\"");
  }
  if (f.eps) o.push_back("model.eps=" + number(*f.eps));
  if (f.delta) o.push_back("model.delta=" + number(*f.delta));
  if (f.chi) o.push_back("model.chi=" + number(*f.chi));
  if (f.modes) o.push_back("model.M=" + std::to_string(*f.modes));
  if (f.samples) o.push_back("experiment.samples=" + std::to_string(*f.samples));
  o.insert(o.end(), f.set.begin(), f.set.end());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keller-Segel SPDE toolkit: simulations, Monte Carlo experiments and self checks"};
  app.set_version_flag("--version", ksdk::version_string());
  app.require_subcommand(1);
  app.footer("Outputs go to --out, else run.output_dir, else $KSDK_OUT/<subcommand> (default root ksdk_out).\n"
             "Exit status: 0 success, 2 an experiment verdict failed, 1 error.");

  Flags flags;
  for (const auto& info : ksdk::command_table()) {
    CLI::App* sub = app.add_subcommand(info.name, info.summary);
    sub->footer("Outputs (besides resolved_config.toml and VERSION):\n" + info.outputs);
    sub->add_option("--config", flags.config, "configuration file ([section] key = value)")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "run.seed");
    sub->add_option("--workers", flags.workers, "run.workers");
    sub->add_option("--out", flags.out, "run.output_dir");
    sub->add_option("--eps", flags.eps, "model.eps");
    sub->add_option("--delta", flags.delta, "model.delta");
    sub->add_option("--chi", flags.chi, "model.chi");
    sub->add_option("--modes", flags.modes, "model.M (Fourier cutoff)");
    sub->add_option("--samples", flags.samples, "experiment.samples");
    sub->add_option("--set", flags.set, "any section.key=value override (repeatable, applied last)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    ksdk::RunConfig cfg = ksdk::parse_config(flags.config, overrides(flags));
    if (cfg.output_dir.empty()) {
      const char* root = std::getenv("KSDK_OUT");
      cfg.output_dir = std::string(root && *root ? root : "ksdk_out") + "/" + name;
    }
    return ksdk::dispatch(name, cfg, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "ksdk: error: " << e.what() << "\n";
    return 1;
  }
}
