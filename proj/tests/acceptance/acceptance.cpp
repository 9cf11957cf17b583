// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ksdk/cli/commands.hpp"
#include "ksdk/det/deterministic.hpp"
#include "ksdk/experiments/experiments.hpp"
#include "ksdk/noise/noise.hpp"
#include "ksdk/parallel.hpp"
#include "ksdk/particles/particles.hpp"
#include "ksdk/spde/spde.hpp"
#include "ksdk/spectral/etd.hpp"
#include "ksdk/spectral/littlewood_paley.hpp"
#include "ksdk/spectral/operators.hpp"

using namespace ksdk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct Options {
  int workers = 1;
  std::uint64_t seed = 20240601;
  std::string cli;
  std::string workdir;
};

constexpr int kM = 32;
constexpr double kDt = 2.5e-4;
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string num(double x) { return format_number(x); }

void note(const std::string& s) { std::cout << "    " << s << "\n"; }

void require(Outcome& o, bool ok, const std::string& what) {
  note(std::string(ok ? "ok   " : "FAIL ") + what);
  if (!ok) o.passed = false;
  o.detail += (o.detail.empty() ? "" : "; ") + what;
}

FourierField with_modes(int M, std::initializer_list<std::pair<Mode, Complex>> modes) {
  FourierField f = FourierField::constant(M, 1.0);
  for (const auto& [w, a] : modes) f += FourierField::real_mode(M, w, a);
  return f;
}

FourierField cosine_x1(int M, double a) { return with_modes(M, {{{1, 0}, Complex{a / 2, 0.0}}}); }

FourierField cosine_both(int M, double a) {
  return with_modes(M, {{{1, 0}, Complex{a / 2, 0.0}}, {{0, 1}, Complex{a / 2, 0.0}}});
}

/// Real field with normal coefficients damped by 1/(1+|w|^2) on |w_i| <= band.
FourierField random_field(int M, std::uint64_t seed, int band) {
  const RandomStream rng(seed, 99);
  FourierField f(M);
  for_each_mode(M, [&](Mode w) {
    if (!in_upper_half(w) || std::abs(w.k1) > band || std::abs(w.k2) > band) return;
    const auto [a, b] = rng.normal_pair(0, mode_slot(w), 0);
    const double s = 1.0 / (1.0 + w.norm_sq());
    f.at(0, w) = Complex{a * s, b * s};
    f.at(0, -w) = Complex{a * s, -b * s};
  });
  f.at(0, 0, 0) = rng.normal_pair(1, 0, 0).first;
  return f;
}

/// Product by direct convolution of the coefficient arrays, truncated to the
/// dealiased lattice.
FourierField convolve(const FourierField& f, const FourierField& g) {
  const int M = f.resolution(), K = dealias_cutoff(M);
  std::vector<std::pair<Mode, Complex>> fs, gs;
  for_each_mode(M, [&](Mode w) {
    if (f.at(0, w) != Complex{}) fs.push_back({w, f.at(0, w)});
    if (g.at(0, w) != Complex{}) gs.push_back({w, g.at(0, w)});
  });
  FourierField h(M);
  for (const auto& [a, fa] : fs)
    for (const auto& [b, gb] : gs) {
      const Mode w{a.k1 + b.k1, a.k2 + b.k2};
      if (std::abs(w.k1) <= K && std::abs(w.k2) <= K) h.at(0, w) += fa * gb;
    }
  return h;
}

SpdeConfig base_config(std::uint64_t seed, double chi, double T) {
  SpdeConfig c;
  c.M = kM;
  c.dt = kDt;
  c.T = T;
  c.chi = chi;
  c.seed = seed;
  return c;
}

void print_report(const ExperimentReport& r) {
  for (const auto& p : r.points) {
    std::ostringstream os;
    os << p.label << ":";
    for (const auto& v : p.values) os << " " << v.quantity << "=" << num(v.value) << " (se " << num(v.std_error) << ")";
    note(os.str());
  }
  for (const auto& f : r.fits)
    note("fit " + f.name + ": slope " + num(f.fit.slope) + " CI [" + num(f.fit.slope_ci.lo) + ", " +
         num(f.fit.slope_ci.hi) + "]");
  for (const auto& v : r.verdicts) note(std::string(v.passed ? "pass " : "fail ") + v.name + ": " + v.detail);
  for (const auto& w : r.warnings) note("warning: " + w);
}

bool has_verdict(const ExperimentReport& r, const std::string& name) {
  return std::any_of(r.verdicts.begin(), r.verdicts.end(), [&](const Verdict& v) { return v.name == name; });
}

bool verdict_passed(const ExperimentReport& r, const std::string& name) {
  return has_verdict(r, name) && r.verdict(name).passed;
}

// 1
Outcome spectral_identities(const Options&) {
  Outcome o;
  const LittlewoodPaley lp(kM);
  double bony = 0, semigroup = 0, heat = 0, green = 0, parseval = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const FourierField f = random_field(kM, 2 * s + 1, 7), g = random_field(kM, 2 * s + 2, 7);
    const FourierField prod = convolve(f, g);
    const FourierField bsum = lp.paraproduct(f, g) + lp.paraproduct(g, f) + lp.resonant(f, g);
    bony = std::max(bony, (bsum - prod).max_abs() / prod.max_abs());

    const double t1 = 1e-3 * (1 + s % 5), t2 = 2e-3 * (1 + s % 3);
    const FourierField a = heat_propagate(heat_propagate(f, t1), t2), b = heat_propagate(f, t1 + t2);
    semigroup = std::max(semigroup, (a - b).max_abs() / f.max_abs());
    FourierField exact = f;
    for_each_mode(kM, [&](Mode w) { exact.at(0, w) *= std::exp(-laplace_symbol(w) * (t1 + t2)); });
    heat = std::max(heat, (b - exact).max_abs() / f.max_abs());

    FourierField centred = f;
    centred.at(0, 0, 0) = 0.0;
    green = std::max(green, (laplacian(green_potential(f)) * -1.0 - centred).max_abs() / f.max_abs());

    double coeff_sq = 0.0;
    for (const Complex& z : f.coeffs()) coeff_sq += std::norm(z);
    const double l2 = lp_norm(f, 2.0);
    parseval = std::max(parseval, std::abs(l2 * l2 - coeff_sq) / coeff_sq);
  }
  require(o, bony <= 1e-10, "Bony reconstruction rel err " + num(bony));
  require(o, semigroup <= 1e-10, "heat semigroup law rel err " + num(semigroup));
  require(o, heat <= 1e-10, "heat propagator vs exp(-|2 pi w|^2 t) rel err " + num(heat));
  require(o, green <= 1e-10, "Green round trip rel err " + num(green));
  require(o, parseval <= 1e-10, "Parseval rel err " + num(parseval));
  return o;
}

// 2
Outcome deterministic_checks(const Options&) {
  Outcome o;
  DetConfig cfg;
  cfg.M = kM;
  cfg.dt = kDt;
  cfg.T = 0.25;

  double fixed = 0.0;
  for (double chi : {-5.0, 0.0, 1.0, 20.0, 100.0}) {
    cfg.chi = chi;
    const Trajectory tr = solve_det(FourierField::constant(kM, 1.0), cfg);
    for (const auto& f : tr.fields) fixed = std::max(fixed, (f - FourierField::constant(kM, 1.0)).max_abs());
    if (tr.blew_up_at) fixed = INFINITY;
  }
  require(o, fixed <= 1e-12, "(a) uniform data fixed for chi in {-5,0,1,20,100}: max dev " + num(fixed));

  cfg.chi = 0.0;
  const FourierField rho0 = with_modes(kM, {{{1, 0}, Complex{0.15, 0.0}},
                                            {{1, 2}, Complex{0.0, -0.1}},
                                            {{0, 3}, Complex{0.05, 0.02}},
                                            {{7, -4}, Complex{0.01, 0.0}}});
  const Trajectory heat = solve_det(rho0, cfg);
  double heat_err = 0.0;
  for (std::size_t i = 0; i < heat.size(); ++i) {
    FourierField exact = rho0;
    for_each_mode(kM, [&](Mode w) { exact.at(0, w) *= std::exp(-laplace_symbol(w) * heat.times[i]); });
    heat_err = std::max(heat_err, (heat.fields[i] - exact).max_abs());
  }
  require(o, heat_err <= 1e-8, "(b) chi = 0 vs analytic heat modes: max err " + num(heat_err));

  cfg.chi = 1.0;
  const FourierField smooth = cosine_both(kM, 0.4);
  const Trajectory run = solve_det(smooth, cfg);
  double drift = 0.0;
  for (const auto& f : run.fields) drift = std::max(drift, std::abs(f.mean() - 1.0));
  require(o, !run.blew_up_at && drift <= 1e-13, "(c) mass drift over [0, 0.25] at chi = 1: " + num(drift));

  auto max_abs = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  const double r1 = max_abs(run.energy_residual);
  DetConfig half = cfg;
  half.dt = cfg.dt / 2;
  const double r2 = max_abs(solve_det(smooth, half).energy_residual);
  require(o, r1 / r2 >= 3.5,
          "(d) energy residual " + num(r1) + " -> " + num(r2) + " under dt/2, factor " + num(r1 / r2));
  return o;
}

// 3
Outcome noise_law(const Options& opt) {
  Outcome o;
  const double delta = 0.05, t = 0.05;
  const int steps = static_cast<int>(std::llround(t / kDt));
  const int n = 2000;
  const std::vector<Mode> probes{{1, 0}, {0, 1}, {1, 1}, {2, -1}, {3, 2}};
  const MollifierSymbol moll(kM, delta);
  const SigmaPath one = SigmaPath::constant(kM, 1.0);
  const EtdWeights& w = etd_weights(kM, kDt);
  std::vector<std::vector<double>> sq(probes.size(), std::vector<double>(n));
  parallel_for(static_cast<std::size_t>(n), opt.workers, [&](std::size_t k) {
    const RandomStream rng(opt.seed, k);
    FourierField ti(kM);
    for (int s = 0; s < steps; ++s)
      ti = lolli_step(ti, one.at(0), sample_increment(rng, static_cast<std::uint64_t>(s), kM, kDt, &moll), moll, w);
    for (std::size_t p = 0; p < probes.size(); ++p) sq[p][k] = std::norm(ti.at(0, probes[p]));
  });
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const Estimate e = estimate_mean(sq[p]);
    const double phi = moll(probes[p]);
    const double oracle = phi * phi * -std::expm1(-2.0 * t * laplace_symbol(probes[p])) / 2.0;
    const double z = (e.mean - oracle) / e.std_error;
    require(o, std::abs(z) <= 3.0,
            "w=(" + std::to_string(probes[p].k1) + "," + std::to_string(probes[p].k2) + "): " + num(e.mean) +
                " vs " + num(oracle) + ", z " + num(z));
  }
  return o;
}

// 4
Outcome lolli_scaling(const Options& opt) {
  Outcome o;
  const SpdeConfig c = base_config(opt.seed, 1.0, 0.25);
  const DetBaseline b = DetBaseline::build(cosine_both(kM, 0.4), c, false);
  LolliScanConfig sc;
  sc.gamma = 0.0;
  sc.dt = kDt;
  sc.steps = c.steps();
  sc.n_samples = 50;
  sc.seed = opt.seed;
  sc.workers = opt.workers;
  const std::vector<double> deltas{0.25, 0.125, 0.0625, 0.03125, 0.015625};
  const auto est = lolli_norm_scan(deltas, b.sigma, sc);
  std::vector<double> x, y, se;
  for (const auto& e : est) {
    note("delta=" + num(e.delta) + ": E norm " + num(e.mean) + " (se " + num(e.std_error) + ")");
    x.push_back(std::log(1.0 / e.delta));
    y.push_back(std::log(e.mean));
    se.push_back(e.std_error / e.mean);
  }
  const LineFit f = fit_line(x, y, se);
  require(o, f.slope <= 2.2,
          "slope of log E norm vs log(1/delta) " + num(f.slope) + " CI [" + num(f.slope_ci.lo) + ", " +
              num(f.slope_ci.hi) + "] <= 2.2");
  return o;
}

// 5
Outcome lln(const Options& opt) {
  Outcome o;
  ScalingSchedule sch;
  sch.eps_list = {1e-2, 3e-3, 1e-3};
  sch.delta_rule = DeltaRule::power(0.125);
  sch.gamma = 0.0;
  const MonteCarloOptions mc{400, opt.workers};

  const ExperimentReport a = run_lln(sch, base_config(opt.seed, 1.0, 0.1), cosine_x1(kM, 0.2), mc);
  print_report(a);
  require(o, verdict_passed(a, "decreasing"), "chi = 1: sup gap decreasing beyond 2 se");

  const ExperimentReport z = run_lln(sch, base_config(opt.seed, 0.0, 0.1), FourierField::constant(kM, 1.0), mc);
  print_report(z);
  require(o, verdict_passed(z, "decreasing"), "chi = 0: sup gap decreasing beyond 2 se");
  require(o, verdict_passed(z, "linear_oracle"), "chi = 0: within 10% of the linear oracle");
  return o;
}

// 6
Outcome clt(const Options& opt) {
  Outcome o;
  const std::vector<ProbePoint> probes{{0.05, {1, 0}}, {0.05, {1, 1}}, {0.1, {0, 1}}, {0.1, {2, 1}}};
  const MonteCarloOptions mc{1000, opt.workers};
  CltOptions co;
  co.coupled = true;
  co.simulate_ou = true;
  co.tolerance = 0.15;
  const ExperimentReport a =
      run_clt(1e-3, DeltaRule::fixed(0.05), base_config(opt.seed, 1.0, 0.1), cosine_x1(kM, 0.2), probes, mc, co);
  print_report(a);
  require(o, verdict_passed(a, "covariance_match"), "chi = 1: covariance within 15% of the OU ensemble");

  co.simulate_ou = false;
  co.oracle_sigmas = 3.0;
  const ExperimentReport z = run_clt(1e-3, DeltaRule::fixed(0.05), base_config(opt.seed, 0.0, 0.1),
                                     FourierField::constant(kM, 1.0), probes, mc, co);
  print_report(z);
  require(o, verdict_passed(z, "ou_oracle"), "chi = 0: within 3 se of the closed-form OU value");
  return o;
}

// 7
Outcome negativity(const Options& opt) {
  Outcome o;
  const ExperimentReport r =
      run_negativity({3e-2, 1e-2, 3e-3}, DeltaRule::fixed(0.19), 0.05, 1e3, base_config(opt.seed, 0.0, 0.25),
                     FourierField::constant(kM, 1.0), MonteCarloOptions{1000, opt.workers});
  print_report(r);
  require(o, verdict_passed(r, "non_increasing"), "p_hat non-increasing beyond Wilson overlap");
  require(o, verdict_passed(r, "slope_negative"), "log p_hat regression slope negative, CI excludes 0");
  return o;
}

// 8
Outcome enhancement(const Options& opt) {
  Outcome o;
  EnhancementScanOptions eo;
  eo.stride = 200;
  eo.uniform_control = true;
  const ExperimentReport r = run_enhancement_scan({1.0 / 16, 1.0 / 32, 1.0 / 64}, base_config(opt.seed, 1.0, 0.25),
                                                  cosine_both(kM, 0.4), MonteCarloOptions{40, opt.workers}, eo);
  print_report(r);
  const LineFit& p = r.fit("power_ty_nonuniform").fit;
  const LineFit& l = r.fit("log_ty_nonuniform").fit;
  require(o, p.slope_ci.hi < 0.25, "power exponent of E ty " + num(p.slope) + ", 95% upper " + num(p.slope_ci.hi));
  require(o, l.slope > 0.0, "log-fit slope of E ty " + num(l.slope));
  require(o, verdict_passed(r, "uniform_flat"), "sigma = 1: ty and tp vary < 20%");
  return o;
}

// 9
Outcome skeleton(const Options&) {
  Outcome o;
  SpdeConfig c = base_config(1, 1.0, 0.25);
  c.eps = 0.0;
  const FourierField rho0 = cosine_both(kM, 0.4);
  const DetBaseline b = DetBaseline::build(rho0, c, false);
  const Trajectory det = solve_det(rho0, c.det());
  const std::size_t n = static_cast<std::size_t>(c.steps()) + 1;
  const Trajectory s = skeleton_solve(rho0, ControlPath(n, FourierField(kM, 2, true)), b, c);
  bool same = s.size() == det.size();
  for (std::size_t i = 0; same && i < s.size(); ++i) same = s.fields[i] == det.fields[i];
  require(o, same, "h = 0 skeleton equals the deterministic solution bit for bit");

  ControlPath h(n);
  const FourierField h0 = gradient(random_field(kM, 5, 4)), h1 = gradient(random_field(kM, 6, 4));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * c.dt;
    h[i] = h0 * std::cos(kTwoPi * 4 * t) + h1 * t;
  }
  const double J = rate_functional(h, c.dt);
  double hom = 0.0;
  for (double k : {0.5, 2.0, 3.0, -1.7, 10.0}) {
    ControlPath hk = h;
    for (auto& x : hk) x *= k;
    hom = std::max(hom, std::abs(rate_functional(hk, c.dt) - k * k * J) / (k * k * J));
  }
  require(o, J > 0.0 && hom <= 1e-12, "rate functional homogeneity rel err " + num(hom));

  SpdeConfig lin = c;
  lin.chi = 0.0;
  const DetBaseline bl = DetBaseline::build(rho0, lin, false);
  ControlPath g(n), hg(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = gradient(random_field(kM, 7, 5)) * (1.0 - static_cast<double>(i) / n);
    hg[i] = h[i] + g[i];
  }
  const FourierField r1 = skeleton_solve(rho0, h, bl, lin).back() - bl.det.back();
  const FourierField r2 = skeleton_solve(rho0, g, bl, lin).back() - bl.det.back();
  const FourierField r12 = skeleton_solve(rho0, hg, bl, lin).back() - bl.det.back();
  const double lin_err = (r12 - r1 - r2).max_abs();
  require(o, lin_err <= 1e-10, "chi = 0 superposition error " + num(lin_err));
  return o;
}

// 10
Outcome particles(const Options& opt) {
  Outcome o;
  const std::vector<std::size_t> Ns{250, 1000, 4000};
  ParticleComparisonConfig pc;
  pc.chi = 0.0;
  pc.T = 0.25;
  pc.dt = kDt;
  pc.M = kM;
  pc.gamma = -1.0;
  pc.delta_coefficient = 1.0;
  pc.seed = opt.seed;
  const ExperimentReport r =
      run_particle_comparison(Ns, pc, FourierField::constant(kM, 1.0), MonteCarloOptions{200, opt.workers});
  print_report(r);
  std::vector<double> lx, ly;
  for (std::size_t N : Ns) {
    lx.push_back(std::log(static_cast<double>(N)));
    ly.push_back(0.5 * std::log(iid_gap_squared(kM, 1.0 / std::sqrt(static_cast<double>(N)), -1.0, N)));
  }
  note("i.i.d. oracle slope with delta = N^(-1/2): " + num(fit_line(lx, ly).slope));
  const double slope = r.fit("log_gap_vs_log_N").fit.slope;
  require(o, slope >= -0.6 && slope <= -0.4, "fitted slope " + num(slope) + " in [-0.6, -0.4]");

  const std::size_t N = 1000;
  const InteractionKernel kernel(kM);
  const MollifierSymbol moll(kM, 1.0 / std::sqrt(static_cast<double>(N)));
  bool inside = true;
  auto in_unit = [&](const ParticleState& s) {
    for (const auto& p : s.positions)
      if (!(p[0] >= 0.0 && p[0] < 1.0 && p[1] >= 0.0 && p[1] < 1.0)) inside = false;
  };
  const ParticleState s0 = sample_initial_positions(cosine_x1(kM, 0.4), N, RandomStream(opt.seed, 0));
  const ParticleState end = simulate_particles(s0, 5.0, kDt, 400, kernel, RandomStream(opt.seed, 1),
                                               [&](int, const ParticleState& s) { in_unit(s); });
  require(o, inside, "positions stay in [0,1)^2 at every step (chi = 5, 400 steps)");

  const FourierField d = empirical_density(end, moll);
  bool exch = true;
  ParticleState perm = end;
  for (std::uint64_t r2 = 0; r2 < 5; ++r2) {
    std::reverse(perm.positions.begin(), perm.positions.end());
    std::rotate(perm.positions.begin(), perm.positions.begin() + static_cast<long>(37 * (r2 + 1)),
                perm.positions.end());
    if (!(empirical_density(perm, moll) == d)) exch = false;
  }
  require(o, exch && d.mean() == 1.0, "empirical density invariant under permutations, total mass exactly 1");

  bool wrap = true;
  for (const auto& p : end.positions)
    for (double x : p)
      for (double k : {-3.0, -1.0, 1.0, 2.0}) {
        const double y = x + k;
        if (y - k != x) continue;  // shift not representable exactly
        if (wrap_unit(y) != x) wrap = false;
      }
  ParticleState shifted = end;
  for (auto& p : shifted.positions) p = {wrap_unit(p[0] + 0.5), wrap_unit(p[1] - 0.25)};
  const FourierField ds = empirical_density(shifted, moll);
  double phase = 0.0;
  for_each_mode(kM, [&](Mode w) {
    const Complex rot = std::polar(1.0, -kTwoPi * (0.5 * w.k1 - 0.25 * w.k2));
    phase = std::max(phase, std::abs(ds.at(0, w) - d.at(0, w) * rot));
  });
  require(o, wrap && phase < 1e-12, "torus wrap: integer shifts map back exactly; translation phase err " + num(phase));
  return o;
}

// 11
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility(const Options& opt) {
  Outcome o;
  if (opt.cli.empty()) {
    require(o, false, "no --cli executable given");
    return o;
  }
  const fs::path root = opt.workdir.empty() ? fs::temp_directory_path() / "ksdk_acceptance_c11" : fs::path(opt.workdir);
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string exe = fs::absolute(opt.cli).string();
  {
    std::ofstream c(root / "config.toml");
    c << "[model]\nM = 8\nT = 0.01\nchi = 1\n"
         "[initial]\nkind = \"cosine\"\n"
         "[schedule]\neps_list = [1e-2, 1e-3]\n"
         "[experiment]\nsamples = 4\nS = 0.01\nprobes = [[0.01, 1, 0]]\ndelta_list = [0.25, 0.125]\nstride = 20\n"
         "[particles]\nN = 50\nN_list = [20, 40, 80]\nM_kernel = 8\n";
  }
  for (const auto& info : command_table()) {
    std::vector<fs::path> dirs{root / ("a_" + info.name), root / ("b_" + info.name)};
    bool ran = true;
    for (const auto& d : dirs) {
      fs::create_directories(d);
      const std::string cmd = "cd '" + d.string() + "' && '" + exe + "' " + info.name + " --config '" +
                              (root / "config.toml").string() + "' --seed 7 --workers " +
                              std::to_string(std::max(2, opt.workers)) + " --out out > log.txt 2>&1";
      const int s = std::system(cmd.c_str());
      const int code = WIFEXITED(s) ? WEXITSTATUS(s) : -1;
      if (code != 0 && code != 2) ran = false;
    }
    if (!fs::is_directory(dirs[0] / "out") || !fs::is_directory(dirs[1] / "out")) ran = false;
    if (!ran) {
      require(o, false, info.name + " (did not run)");
      continue;
    }
    std::size_t files = 0;
    bool same = true;
    for (const auto& e : fs::recursive_directory_iterator(dirs[0] / "out")) {
      if (!e.is_regular_file()) continue;
      ++files;
      const fs::path rel = fs::relative(e.path(), dirs[0]);
      if (!fs::exists(dirs[1] / rel) || slurp(e.path()) != slurp(dirs[1] / rel)) same = false;
    }
    for (const auto& e : fs::recursive_directory_iterator(dirs[1] / "out"))
      if (e.is_regular_file()) --files;
    require(o, same && files == 0, info.name);
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(const Options&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  Options opt;
  std::vector<int> which;
  opt.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--criterion", which, "criteria to run (default: all)")->check(CLI::Range(1, 11));
  app.add_option("--workers", opt.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "master seed");
  app.add_option("--cli", opt.cli, "ksdk executable (criterion 11)");
  app.add_option("--workdir", opt.workdir, "scratch directory (criterion 11)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "spectral identities", spectral_identities},
      {2, "deterministic KS", deterministic_checks},
      {3, "noise law", noise_law},
      {4, "stochastic convolution scaling", lolli_scaling},
      {5, "law of large numbers", lln},
      {6, "fluctuations", clt},
      {7, "negativity", negativity},
      {8, "enhancement scaling", enhancement},
      {9, "skeleton and rate function", skeleton},
      {10, "particle system", particles},
      {11, "reproducibility", reproducibility},
  };
  if (which.empty())
    for (const auto& c : all) which.push_back(c.id);

  bool ok = true;
  for (int id : which) {
    const Criterion& c = all[static_cast<std::size_t>(id - 1)];
    std::cout << "criterion " << c.id << " (" << c.name << ")\n" << std::flush;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run(opt);
    } catch (const std::exception& e) {
      out.passed = false;
      out.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", secs);
    std::cout << (out.passed ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.name << " [" << buf
              << " s]: " << out.detail << "\n"
              << std::flush;
    ok = ok && out.passed;
  }
  return ok ? 0 : 1;
}
