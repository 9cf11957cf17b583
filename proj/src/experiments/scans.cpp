#include <algorithm>
#include <cmath>
#include <sstream>

#include "internal.hpp"
#include "ksdk/error.hpp"
#include "ksdk/experiments/experiments.hpp"
#include "ksdk/parallel.hpp"
#include "ksdk/particles/particles.hpp"
#include "ksdk/spde/enhancement.hpp"
#include "ksdk/spectral/littlewood_paley.hpp"
#include "ksdk/spectral/operators.hpp"

namespace ksdk {
namespace {

struct NormMaxima {
  double ti = 0, ty = 0, tp = 0, tc = 0;
};

NormMaxima enhancement_path(const SigmaPath& sigma, const SpdeConfig& cfg, const MollifierSymbol& moll,
                            const LittlewoodPaley& lp, int stride, std::uint64_t trajectory) {
  const int steps = cfg.steps();
  const RandomStream rng(cfg.seed, trajectory);
  EnhancementEvolution ev(cfg.M, cfg.dt);
  NormMaxima m;
  for (int s = 0; s < steps; ++s) {
    const auto incr = sample_increment(rng, static_cast<std::uint64_t>(s), cfg.M, cfg.dt, &moll);
    enhancement_step(ev, sigma.at(static_cast<std::size_t>(s)), incr, moll);
    if ((s + 1) % stride == 0 || s + 1 == steps) {
      const EnhancementNorms n = enhancement_norms(ev.tuple(lp), lp);
      m.ti = std::max(m.ti, n.ti);
      m.ty = std::max(m.ty, n.ty);
      m.tp = std::max(m.tp, n.tp);
      m.tc = std::max(m.tc, n.tc);
    }
  }
  return m;
}

std::string interval_text(const LineFit& f) {
  return format_number(f.slope) + " [" + format_number(f.slope_ci.lo) + ", " + format_number(f.slope_ci.hi) + "]";
}

}  // namespace

ExperimentReport run_enhancement_scan(const std::vector<double>& delta_list, const SpdeConfig& base,
                                      const FourierField& rho0, const MonteCarloOptions& mc,
                                      const EnhancementScanOptions& opts) {
  if (delta_list.size() < 2) throw InputError("run_enhancement_scan: need at least two deltas");
  const double ratio = delta_list[1] / delta_list[0];
  for (std::size_t i = 0; i < delta_list.size(); ++i) {
    if (!(delta_list[i] > 0.0)) throw InputError("run_enhancement_scan: deltas must be positive");
    if (i > 0 && std::abs(delta_list[i] / delta_list[i - 1] - ratio) > 1e-9 * ratio)
      throw InputError("run_enhancement_scan: delta_list must be geometric");
  }
  if (!(ratio < 1.0)) throw InputError("run_enhancement_scan: delta_list must be decreasing");
  if (opts.stride < 1) throw InputError("run_enhancement_scan: stride must be >= 1");
  if (mc.n_samples < 2) throw InputError("run_enhancement_scan: n_samples must be >= 2");
  base.validate();

  ExperimentReport rep;
  rep.name = "enhancement_scan";
  rep.seed = base.seed;
  rep.config["spde"] = detail::spde_config_json(base);
  rep.config["delta_list"] = delta_list;
  rep.config["n_samples"] = mc.n_samples;
  rep.config["stride"] = opts.stride;
  rep.config["uniform_control"] = opts.uniform_control;
  rep.config["rho0"] = detail::field_json(rho0);

  const DetBaseline b = is_uniform_density(rho0) ? DetBaseline::uniform(base, false)
                                                 : DetBaseline::build(rho0, base, false);
  const LittlewoodPaley lp(base.M);
  struct Case {
    std::string name;
    SigmaPath sigma;
  };
  std::vector<Case> cases{{"nonuniform", b.sigma}};
  if (opts.uniform_control) cases.push_back({"uniform", SigmaPath::constant(base.M, 1.0)});

  const std::size_t n = static_cast<std::size_t>(mc.n_samples);
  const char* names[4] = {"ti", "ty", "tp", "tc"};
  for (const auto& c : cases) {
    std::vector<std::vector<Estimate>> est(4);
    for (double delta : delta_list) {
      const MollifierSymbol moll(base.M, delta);
      std::vector<NormMaxima> res(n);
      parallel_for(n, mc.workers, [&](std::size_t k) {
        res[k] = enhancement_path(c.sigma, base, moll, lp, opts.stride, k);
      });
      std::vector<double> col(n);
      ReportPoint p;
      p.label = c.name + ",delta=" + format_number(delta);
      p.params = {{"delta", delta}, {"log_inv_delta", std::log(1.0 / delta)},
                  {"uniform", c.name == "uniform" ? 1.0 : 0.0}};
      for (int q = 0; q < 4; ++q) {
        for (std::size_t k = 0; k < n; ++k) {
          const NormMaxima& r = res[k];
          col[k] = q == 0 ? r.ti : q == 1 ? r.ty : q == 2 ? r.tp : r.tc;
        }
        const Estimate e = estimate_mean(col);
        est[q].push_back(e);
        p.add(names[q], e);
      }
      rep.points.push_back(std::move(p));
    }
    std::vector<double> x;
    for (double d : delta_list) x.push_back(std::log(1.0 / d));
    for (int q = 0; q < 4; ++q) {
      std::vector<double> ly, lse, y, se;
      for (const auto& e : est[q]) {
        ly.push_back(std::log(e.mean));
        lse.push_back(std::max(e.std_error, 1e-300) / e.mean);
        y.push_back(e.mean);
        se.push_back(std::max(e.std_error, 1e-300));
      }
      rep.fits.push_back({std::string("power_") + names[q] + "_" + c.name, "log(1/delta)",
                          std::string("log E ") + names[q], fit_line(x, ly, lse)});
      rep.fits.push_back({std::string("log_") + names[q] + "_" + c.name, "log(1/delta)",
                          std::string("E ") + names[q], fit_line(x, y, se)});
    }
    if (c.name == "uniform") {
      std::ostringstream os;
      bool ok = true;
      for (int q : {1, 2}) {
        double lo = est[q][0].mean, hi = lo;
        for (const auto& e : est[q]) {
          lo = std::min(lo, e.mean);
          hi = std::max(hi, e.mean);
        }
        const double var = (hi - lo) / lo;
        os << (q == 1 ? "" : "; ") << names[q] << " variation " << format_number(var);
        if (!(var < opts.flatness_bound)) ok = false;
      }
      rep.verdicts.push_back({"uniform_flat", ok,
                              "sigma = 1: (max - min) / min of E ty and E tp across deltas < " +
                                  format_number(opts.flatness_bound),
                              os.str()});
    }
  }
  const auto& bty = rep.fit("power_ty_nonuniform").fit;
  const auto& btp = rep.fit("power_tp_nonuniform").fit;
  const auto& lty = rep.fit("log_ty_nonuniform").fit;
  rep.verdicts.push_back({"ty_tp_subpower", bty.slope_ci.hi < opts.beta_bound && btp.slope_ci.hi < opts.beta_bound,
                          "power-law exponent of E ty and E tp: upper 95% bound < " + format_number(opts.beta_bound),
                          "ty " + interval_text(bty) + "; tp " + interval_text(btp)});
  rep.verdicts.push_back({"ty_log_growth", lty.slope > 0.0, "slope of E ty against log(1/delta) > 0",
                          "ty " + interval_text(lty)});
  const auto& bti = rep.fit("power_ti_nonuniform").fit;
  const auto& btc = rep.fit("power_tc_nonuniform").fit;
  rep.verdicts.push_back({"ti_tc_bounded", bti.slope_ci.hi < opts.beta_bound && btc.slope_ci.hi < opts.beta_bound,
                          "power-law exponent of E ti and E tc: upper 95% bound < " + format_number(opts.beta_bound),
                          "ti " + interval_text(bti) + "; tc " + interval_text(btc)});
  return rep;
}

ExperimentReport run_particle_comparison(const std::vector<std::size_t>& N_list,
                                         const ParticleComparisonConfig& cfg,
                                         const FourierField& rho0, const MonteCarloOptions& mc) {
  if (N_list.size() < 2) throw InputError("run_particle_comparison: need at least two population sizes");
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] < 1) throw InputError("run_particle_comparison: N must be >= 1");
    if (i > 0 && !(N_list[i] > N_list[i - 1]))
      throw InputError("run_particle_comparison: N_list must be increasing");
  }
  if (!(cfg.gamma <= 0.0 && cfg.gamma >= -1.0))
    throw InputError("run_particle_comparison: gamma must lie in [-1, 0]");
  if (mc.n_samples < 2) throw InputError("run_particle_comparison: n_samples must be >= 2");
  DetConfig dc;
  dc.chi = cfg.chi;
  dc.T = cfg.T;
  dc.dt = cfg.dt;
  dc.M = cfg.M;
  dc.validate();
  if (rho0.resolution() != cfg.M) throw InputError("run_particle_comparison: rho0 resolution differs from M");
  const bool uniform = is_uniform_density(rho0);
  const int steps = dc.steps();
  FourierField rho_T = rho0;
  if (!uniform) {
    const Trajectory det = solve_det(rho0, dc);
    if (det.blew_up_at) throw InputError("run_particle_comparison: deterministic solution blows up before T");
    rho_T = det.fields.back();
  }

  ExperimentReport rep;
  rep.name = "particles";
  rep.seed = cfg.seed;
  rep.config["chi"] = cfg.chi;
  rep.config["T"] = cfg.T;
  rep.config["dt"] = cfg.dt;
  rep.config["M"] = cfg.M;
  rep.config["M_kernel"] = cfg.M_kernel;
  rep.config["gamma"] = cfg.gamma;
  rep.config["delta_coefficient"] = cfg.delta_coefficient;
  rep.config["N_list"] = N_list;
  rep.config["n_samples"] = mc.n_samples;
  rep.config["rho0"] = detail::field_json(rho0);

  const InteractionKernel kernel(cfg.M_kernel);
  const std::size_t n = static_cast<std::size_t>(mc.n_samples);
  std::vector<Estimate> gaps;
  std::vector<double> x, y, se;
  for (std::size_t N : N_list) {
    const double delta = cfg.delta_coefficient / std::sqrt(static_cast<double>(N));
    const MollifierSymbol moll(cfg.M, delta);
    std::vector<double> g0(n), gT(n);
    parallel_for(n, mc.workers, [&](std::size_t k) {
      const RandomStream rng(cfg.seed, k);
      ParticleState s = sample_initial_positions(rho0, N, rng);
      FourierField d0 = empirical_density(s, moll);
      d0 -= rho0;
      g0[k] = sobolev_norm(d0, cfg.gamma);
      s = simulate_particles(std::move(s), cfg.chi, cfg.dt, steps, kernel, rng);
      FourierField dT = empirical_density(s, moll);
      dT -= rho_T;
      gT[k] = sobolev_norm(dT, cfg.gamma);
    });
    const Estimate e0 = estimate_mean(g0), eT = estimate_mean(gT);
    gaps.push_back(eT);
    ReportPoint p;
    p.label = "N=" + std::to_string(N);
    p.params = {{"N", static_cast<double>(N)}, {"delta", delta}};
    p.add("gap_t0", e0);
    p.add("gap_T", eT);
    if (uniform && cfg.chi == 0.0) p.add("iid_oracle", std::sqrt(iid_gap_squared(cfg.M, delta, cfg.gamma, N)), 0.0, 0);
    rep.points.push_back(std::move(p));
    x.push_back(std::log(static_cast<double>(N)));
    y.push_back(std::log(eT.mean));
    se.push_back(std::max(eT.std_error, 1e-300) / eT.mean);
  }
  const LineFit f = fit_line(x, y, se);
  rep.fits.push_back({"log_gap_vs_log_N", "log N", "log E gap_T", f});
  std::string d;
  rep.verdicts.push_back({"decreasing", decreasing_beyond(gaps, 2.0, &d),
                          "E gap strictly decreasing in N beyond 2 combined standard errors", d});
  if (uniform && cfg.chi == 0.0)
    rep.verdicts.push_back({"slope_near_half", f.slope >= cfg.slope_lo && f.slope <= cfg.slope_hi,
                            "chi = 0, uniform start: fitted slope in [" + format_number(cfg.slope_lo) + ", " +
                                format_number(cfg.slope_hi) + "]",
                            "slope " + interval_text(f) + ", CI width " +
                                format_number(f.slope_ci.hi - f.slope_ci.lo)});
  return rep;
}

}  // namespace ksdk
