#include "ksdk/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ksdk/error.hpp"
#include "ksdk/particles/particles.hpp"
#include "ksdk/spectral/operators.hpp"
#include "ksdk/spectral/snapshot.hpp"

#ifndef KSDK_VERSION
#define KSDK_VERSION "0.0.0"
#endif

namespace ksdk {
namespace {

namespace fs = std::filesystem;

const char* kReportOutputs =
    "report.json  estimates, fits, verdicts, warnings and the config echo\n"
    "report.csv   experiment,point,<parameters...>,quantity,value,std_error,n_samples\n"
    "             (one row per estimate; parameters are the union over points)";

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + p.string() + "'");
  out << content;
  if (!out) throw Error("write failed for '" + p.string() + "'");
}

std::string snapshot_name(int step) {
  std::ostringstream os;
  os << "rho_" << std::setw(6) << std::setfill('0') << step << ".ksdk";
  return os.str();
}

class Output {
 public:
  explicit Output(const RunConfig& cfg) : dir_(cfg.output_dir), stride_(cfg.snapshot_stride) {
    if (dir_.empty()) throw ConfigError("key 'run.output_dir' is empty");
    fs::create_directories(dir_);
  }

  const fs::path& dir() const { return dir_; }
  void write(const std::string& name, const std::string& content) const { write_file(dir_ / name, content); }

  /// Stores fields at multiples of the snapshot stride and at the last step.
  void maybe_snapshot(int step, int last_step, const FourierField& f) const {
    if (stride_ <= 0 || (step % stride_ != 0 && step != last_step)) return;
    fs::create_directories(dir_ / "snapshots");
    save_snapshot((dir_ / "snapshots" / snapshot_name(step)).string(), f);
  }

 private:
  fs::path dir_;
  int stride_;
};

std::string resolved_config_text(const RunConfig& cfg, const std::string& command) {
  std::ostringstream os;
  os << "# ksdk " << version_string() << "\n# command: " << command << "\n";
  for (const auto& w : cfg.warnings) os << "# warning: " << w << "\n";
  os << "# schedule regime (eps^(1/2) delta^(-gamma-2) | eps log(1/delta)):";
  for (std::size_t i = 0; i < cfg.regime.regular.size(); ++i)
    os << " " << format_number(cfg.regime.regular[i]) << "|" << format_number(cfg.regime.rough[i]);
  os << "\n\n" << cfg.to_text();
  return os.str();
}

std::string join(std::initializer_list<std::string> xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ",") + x;
  return out + "\n";
}

DetBaseline baseline(const FourierField& rho0, const SpdeConfig& cfg, bool ou) {
  return cfg.chi == 0.0 && is_uniform_density(rho0) ? DetBaseline::uniform(cfg, ou)
                                                     : DetBaseline::build(rho0, cfg, ou);
}

MonteCarloOptions mc_options(const RunConfig& cfg) { return {cfg.experiment.samples, cfg.workers}; }

int finish_report(const ExperimentReport& rep, const Output& out, std::ostream& log) {
  out.write("report.json", rep.to_json().dump(2) + "\n");
  out.write("report.csv", rep.to_csv());
  for (const auto& w : rep.warnings) log << "warning: " << w << "\n";
  for (const auto& v : rep.verdicts)
    log << (v.passed ? "PASS " : "FAIL ") << v.name << ": " << v.rule << " (" << v.detail << ")\n";
  log << "wrote " << (out.dir() / "report.json").string() << "\n";
  return rep.passed() ? 0 : 2;
}

std::string optional_time(const std::optional<double>& t) { return t ? format_number(*t) : "none"; }

int simulate_det(const RunConfig& cfg, const Output& out, std::ostream& log) {
  const FourierField rho0 = cfg.initial.build(cfg.model.M);
  DetConfig dc = cfg.model.det();
  const Trajectory traj = solve_det(rho0, dc);
  std::string csv = join({"step", "t", "mass", "l2_norm", "min_value", "energy_residual"});
  const int last = static_cast<int>(traj.size()) - 1;
  for (int s = 0; s <= last; ++s) {
    const auto i = static_cast<std::size_t>(s);
    csv += std::to_string(s) + "," + format_number(traj.times[i]) + "," + format_number(traj.fields[i].mean()) + "," +
           format_number(sobolev_norm(traj.fields[i], 0.0)) + "," + format_number(traj.min_value[i]) + "," +
           format_number(i < traj.energy_residual.size() ? traj.energy_residual[i] : 0.0) + "\n";
    out.maybe_snapshot(s, last, traj.fields[i]);
  }
  out.write("trajectory.csv", csv);
  out.write("summary.csv", join({"steps", "blew_up_at"}) + std::to_string(last) + "," + optional_time(traj.blew_up_at) + "\n");
  log << "simulate-det: " << last << " steps, blow-up " << optional_time(traj.blew_up_at) << "\n";
  return 0;
}

int simulate_spde(const RunConfig& cfg, const Output& out, std::ostream& log) {
  const FourierField rho0 = cfg.initial.build(cfg.model.M);
  const DetBaseline b = baseline(rho0, cfg.model, false);
  const int steps = cfg.model.steps();
  std::string csv = join({"step", "t", "mass", "l2_norm", "negative_part_l2", "gap_l2"});
  SpdeRunOptions opts;
  opts.observer = [&](const SpdeStepView& v) {
    const FourierField gap = v.rho - b.det.fields[static_cast<std::size_t>(v.step)];
    csv += std::to_string(v.step) + "," + format_number(v.t) + "," + format_number(v.rho.mean()) + "," +
           format_number(v.l2_norm) + "," + format_number(v.negative_part_l2) + "," +
           format_number(sobolev_norm(gap, 0.0)) + "\n";
    out.maybe_snapshot(v.step, steps, v.rho);
    return true;
  };
  const StoppedPath p = solve_spde(rho0, b, cfg.model, 0, opts);
  out.write("trajectory.csv", csv);
  out.write("summary.csv", join({"stopping_time", "blew_up_at"}) + format_number(p.stopping_time) + "," +
                               optional_time(p.trajectory.blew_up_at) + "\n");
  log << "simulate-spde: stopping time " << format_number(p.stopping_time) << "\n";
  return 0;
}

int simulate_ou(const RunConfig& cfg, const Output& out, std::ostream& log) {
  const FourierField rho0 = cfg.initial.build(cfg.model.M);
  const DetBaseline b = baseline(rho0, cfg.model, true);
  const int steps = cfg.model.steps();
  std::string csv = join({"step", "t", "l2_norm", "h_minus1_norm"});
  solve_ou(b, cfg.model, 0, 0, [&](int step, double t, const FourierField& v) {
    csv += std::to_string(step) + "," + format_number(t) + "," + format_number(sobolev_norm(v, 0.0)) + "," +
           format_number(sobolev_norm(v, -1.0)) + "\n";
    out.maybe_snapshot(step, steps, v);
  });
  out.write("trajectory.csv", csv);
  log << "simulate-ou: " << steps << " steps\n";
  return 0;
}

int simulate_particles(const RunConfig& cfg, const Output& out, std::ostream& log) {
  const auto& pc = cfg.particles;
  const FourierField rho0 = cfg.initial.build(cfg.model.M);
  DetConfig dc = cfg.model.det();
  const Trajectory det = is_uniform_density(rho0) && dc.chi == 0.0 ? Trajectory{} : solve_det(rho0, dc);
  if (det.blew_up_at) throw InputError("simulate-particles: deterministic solution blows up before T");
  const int steps = dc.steps();
  const double delta = pc.delta_coefficient / std::sqrt(static_cast<double>(pc.N));
  const MollifierSymbol moll(cfg.model.M, delta);
  const InteractionKernel kernel(pc.M_kernel);
  const RandomStream rng(cfg.seed, 0);
  std::string pos = join({"t", "i", "x1", "x2"});
  std::string gaps = join({"step", "t", "gap_h_gamma"});
  const FourierField one = FourierField::constant(cfg.model.M, 1.0);
  simulate_particles(sample_initial_positions(rho0, pc.N, rng), dc.chi, dc.dt, steps, kernel, rng,
                     [&](int step, const ParticleState& s) {
                       if (step % pc.stride != 0 && step != steps) return;
                       const std::string t = format_number(s.t);
                       for (std::size_t i = 0; i < s.size(); ++i)
                         pos += t + "," + std::to_string(i) + "," + format_number(s.positions[i][0]) + "," +
                                format_number(s.positions[i][1]) + "\n";
                       FourierField d = empirical_density(s, moll);
                       d -= det.fields.empty() ? one : det.fields[static_cast<std::size_t>(step)];
                       gaps += std::to_string(step) + "," + t + "," + format_number(sobolev_norm(d, pc.gamma)) + "\n";
                     });
  out.write("positions.csv", pos);
  out.write("density_gap.csv", gaps);
  log << "simulate-particles: N = " << pc.N << ", " << steps << " steps\n";
  return 0;
}

int skeleton(const RunConfig& cfg, const Output& out, std::ostream& log) {
  const FourierField rho0 = cfg.initial.build(cfg.model.M);
  const DetBaseline b = baseline(rho0, cfg.model, false);
  const int steps = cfg.model.steps();
  const Mode k{cfg.skeleton.k1, cfg.skeleton.k2};
  FourierField h(cfg.model.M, 2, true);
  if (k == Mode{})
    h.at(0, 0, 0) = cfg.skeleton.amplitude;
  else if (h.contains(k))
    h.set_component(0, FourierField::real_mode(cfg.model.M, k, Complex{cfg.skeleton.amplitude / 2, 0.0}));
  else
    throw ConfigError("key 'skeleton.k1' / 'skeleton.k2' lies outside the retained modes");
  const ControlPath control(static_cast<std::size_t>(steps) + 1, h);
  const Trajectory traj = skeleton_solve(rho0, control, b, cfg.model);
  std::string csv = join({"step", "t", "mass", "l2_norm", "distance_to_det_l2"});
  const int last = static_cast<int>(traj.size()) - 1;
  for (int s = 0; s <= last; ++s) {
    const auto i = static_cast<std::size_t>(s);
    const FourierField d = traj.fields[i] - b.det.fields[i];
    csv += std::to_string(s) + "," + format_number(traj.times[i]) + "," + format_number(traj.fields[i].mean()) + "," +
           format_number(sobolev_norm(traj.fields[i], 0.0)) + "," + format_number(sobolev_norm(d, 0.0)) + "\n";
    out.maybe_snapshot(s, last, traj.fields[i]);
  }
  out.write("trajectory.csv", csv);
  const double rate = rate_functional(control, cfg.model.dt);
  out.write("summary.csv", join({"rate_functional", "blew_up_at"}) + format_number(rate) + "," +
                               optional_time(traj.blew_up_at) + "\n");
  log << "skeleton: rate functional " << format_number(rate) << "\n";
  return 0;
}

int enhancement_scan(const RunConfig& cfg, const Output& out, std::ostream& log) {
  EnhancementScanOptions o;
  o.stride = cfg.experiment.stride;
  return finish_report(run_enhancement_scan(cfg.experiment.delta_list, cfg.model, cfg.initial.build(cfg.model.M),
                                            mc_options(cfg), o),
                       out, log);
}

int experiment_lln(const RunConfig& cfg, const Output& out, std::ostream& log) {
  return finish_report(run_lln(cfg.schedule, cfg.model, cfg.initial.build(cfg.model.M), mc_options(cfg)), out, log);
}

int experiment_clt(const RunConfig& cfg, const Output& out, std::ostream& log) {
  CltOptions o;
  o.coupled = cfg.experiment.coupled;
  o.simulate_ou = cfg.experiment.simulate_ou;
  o.tolerance = cfg.experiment.tolerance;
  o.oracle_sigmas = cfg.experiment.oracle_sigmas;
  return finish_report(run_clt(cfg.model.eps, cfg.schedule.delta_rule, cfg.model, cfg.initial.build(cfg.model.M),
                               cfg.experiment.probes, mc_options(cfg), o),
                       out, log);
}

int experiment_negativity(const RunConfig& cfg, const Output& out, std::ostream& log) {
  return finish_report(run_negativity(cfg.schedule.eps_list, cfg.schedule.delta_rule, cfg.experiment.level,
                                      cfg.experiment.L, cfg.model, cfg.initial.build(cfg.model.M), mc_options(cfg)),
                       out, log);
}

int experiment_blowup(const RunConfig& cfg, const Output& out, std::ostream& log) {
  return finish_report(run_blowup(cfg.schedule.eps_list, cfg.schedule.delta_rule, cfg.experiment.chi_large,
                                  cfg.experiment.S, cfg.model, cfg.initial.build(cfg.model.M), mc_options(cfg)),
                       out, log);
}

int experiment_particles(const RunConfig& cfg, const Output& out, std::ostream& log) {
  ParticleComparisonConfig pc;
  pc.chi = cfg.model.chi;
  pc.T = cfg.model.T;
  pc.dt = cfg.model.dt;
  pc.M = cfg.model.M;
  pc.M_kernel = cfg.particles.M_kernel;
  pc.gamma = cfg.particles.gamma;
  pc.delta_coefficient = cfg.particles.delta_coefficient;
  pc.seed = cfg.seed;
  return finish_report(
      run_particle_comparison(cfg.particles.N_list, pc, cfg.initial.build(cfg.model.M), mc_options(cfg)), out, log);
}

int selftest(const RunConfig& cfg, const Output& out, std::ostream& log) {
  const auto checks = run_selftest(cfg.seed);
  std::string csv = join({"check", "passed", "value", "tolerance"});
  bool ok = true;
  for (const auto& c : checks) {
    csv += c.name + "," + (c.passed ? "1" : "0") + "," + format_number(c.value) + "," + format_number(c.tolerance) + "\n";
    log << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << format_number(c.value) << " (tolerance "
        << format_number(c.tolerance) << ")\n";
    ok = ok && c.passed;
  }
  out.write("selftest.csv", csv);
  return ok ? 0 : 2;
}

using Handler = int (*)(const RunConfig&, const Output&, std::ostream&);

struct Entry {
  CommandInfo info;
  Handler run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {{"simulate-det", "deterministic Keller-Segel trajectory from [initial] with [model] chi, T, dt, M",
        "trajectory.csv  step,t,mass,l2_norm,min_value,energy_residual\n"
        "summary.csv     steps,blew_up_at\n"
        "snapshots/      rho_<step>.ksdk every run.snapshot_stride steps"},
       simulate_det},
      {{"simulate-spde", "one SPDE path (noise keys: run.seed, path 0) stopped at S_L",
        "trajectory.csv  step,t,mass,l2_norm,negative_part_l2,gap_l2 (gap_l2 = ||rho - rho_det||_L2)\n"
        "summary.csv     stopping_time,blew_up_at\n"
        "snapshots/      rho_<step>.ksdk every run.snapshot_stride steps"},
       simulate_spde},
      {{"simulate-ou", "one path of the linearised fluctuation process around rho_det",
        "trajectory.csv  step,t,l2_norm,h_minus1_norm\n"
        "snapshots/      rho_<step>.ksdk every run.snapshot_stride steps"},
       simulate_ou},
      {{"simulate-particles", "particles.N interacting particles; delta = particles.delta_coefficient N^(-1/2)",
        "positions.csv    t,i,x1,x2 every particles.stride steps\n"
        "density_gap.csv  step,t,gap_h_gamma (mollified empirical density minus rho_det in H^particles.gamma)"},
       simulate_particles},
      {{"skeleton", "controlled equation with h = skeleton.amplitude (cos(2 pi k.x), 0)",
        "trajectory.csv  step,t,mass,l2_norm,distance_to_det_l2\n"
        "summary.csv     rate_functional,blew_up_at\n"
        "snapshots/      rho_<step>.ksdk every run.snapshot_stride steps"},
       skeleton},
      {{"enhancement-scan", "enhancement norms over experiment.delta_list, nonuniform sigma and sigma = 1",
        kReportOutputs},
       enhancement_scan},
      {{"experiment-lln", "law of large numbers gap along schedule.eps_list", kReportOutputs}, experiment_lln},
      {{"experiment-clt", "fluctuation covariance at experiment.probes against the OU ensemble (eps = model.eps)",
        kReportOutputs},
       experiment_clt},
      {{"experiment-negativity", "probability that ||rho^-||_L2 reaches experiment.level, per schedule.eps_list",
        kReportOutputs},
       experiment_negativity},
      {{"experiment-blowup", "threshold-crossing frequency before experiment.S at chi = experiment.chi_large",
        kReportOutputs},
       experiment_blowup},
      {{"experiment-particles", "particle / mean-field gap over particles.N_list", kReportOutputs},
       experiment_particles},
      {{"selftest", "closed-form and exact-identity checks", "selftest.csv  check,passed,value,tolerance"}, selftest},
  };
  return table;
}

}  // namespace

const std::vector<CommandInfo>& command_table() {
  static const std::vector<CommandInfo> infos = [] {
    std::vector<CommandInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

std::string version_string() { return KSDK_VERSION; }

int dispatch(const std::string& name, const RunConfig& cfg, std::ostream& log) {
  for (const auto& e : entries()) {
    if (e.info.name != name) continue;
    const Output out(cfg);
    out.write("resolved_config.toml", resolved_config_text(cfg, name));
    out.write("VERSION", version_string() + "\n");
    for (const auto& w : cfg.warnings) log << "warning: " << w << "\n";
    try {
      return e.run(cfg, out, log);
    } catch (const Error& err) {
      throw Error(name + ": " + err.what());
    }
  }
  throw InputError("unknown subcommand '" + name + "'");
}

}  // namespace ksdk
