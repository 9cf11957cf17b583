#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "internal.hpp"
#include "ksdk/error.hpp"
#include "ksdk/experiments/experiments.hpp"
#include "ksdk/noise/philox.hpp"
#include "ksdk/parallel.hpp"
#include "ksdk/spectral/operators.hpp"

namespace ksdk {

Estimate linear_lolli_sup_oracle(int M, double delta, double gamma, double T, double dt,
                                 int n_samples, std::uint64_t seed, int workers) {
  if (n_samples < 1) throw InputError("linear_lolli_sup_oracle: n_samples must be >= 1");
  const MollifierSymbol moll(M, delta);
  struct ModeLaw {
    Mode w;
    double decay;
    double innovation_sd;  // per real / imaginary part
    double weight;         // 2 (1 + lambda)^gamma: the mode and its conjugate
  };
  std::vector<ModeLaw> modes;
  for_each_mode(M, [&](Mode w) {
    if (!in_upper_half(w)) return;
    const double phi = moll(w);
    if (phi == 0.0) return;
    const double lam = laplace_symbol(w);
    const double a = std::exp(-lam * dt);
    // E|z|^2 per step: phi^2 (1 - a^2) / 2, split evenly over Re and Im.
    modes.push_back({w, a, std::sqrt(phi * phi * (1.0 - a * a) / 4.0),
                     2.0 * std::pow(1.0 + lam, gamma)});
  });
  const int steps = static_cast<int>(std::llround(T / dt));
  std::vector<double> sups(static_cast<std::size_t>(n_samples));
  parallel_for(sups.size(), workers, [&](std::size_t k) {
    const RandomStream rng(seed, k);
    std::vector<Complex> z(modes.size());
    double sup = 0.0;
    for (int s = 0; s < steps; ++s) {
      double norm2 = 0.0;
      for (std::size_t m = 0; m < modes.size(); ++m) {
        const auto [g1, g2] = rng.normal_pair(static_cast<std::uint64_t>(s), mode_slot(modes[m].w), 0,
                                              StreamPurpose::auxiliary);
        z[m] = modes[m].decay * z[m] + modes[m].innovation_sd * Complex{g1, g2};
        norm2 += modes[m].weight * std::norm(z[m]);
      }
      sup = std::max(sup, std::sqrt(norm2));
    }
    sups[k] = sup;
  });
  return estimate_mean(sups);
}

ExperimentReport run_lln(const ScalingSchedule& schedule, const SpdeConfig& base,
                         const FourierField& rho0, const MonteCarloOptions& mc,
                         double oracle_tolerance) {
  schedule.validate();
  base.validate();
  if (mc.n_samples < 2) throw InputError("run_lln: n_samples must be >= 2");
  ExperimentReport rep;
  rep.name = "lln";
  rep.seed = base.seed;
  rep.config["spde"] = detail::spde_config_json(base);
  rep.config["eps_list"] = schedule.eps_list;
  rep.config["delta_rule"] = detail::rule_json(schedule.delta_rule);
  rep.config["gamma"] = schedule.gamma;
  rep.config["n_samples"] = mc.n_samples;
  rep.config["rho0"] = detail::field_json(rho0);

  const auto regime = schedule.regime();
  if (!regime.regular_decreasing)
    rep.warnings.push_back("eps^{1/2} delta^{-gamma-2} is not decreasing along the schedule");

  const bool linear = base.chi == 0.0 && is_uniform_density(rho0);
  const DetBaseline b = linear ? DetBaseline::uniform(base, false) : DetBaseline::build(rho0, base, false);
  const auto deltas = schedule.deltas();
  std::vector<Estimate> gaps;
  bool oracle_ok = true;
  std::ostringstream oracle_detail;
  for (std::size_t i = 0; i < schedule.eps_list.size(); ++i) {
    SpdeConfig cfg = base;
    cfg.eps = schedule.eps_list[i];
    cfg.delta = deltas[i];
    cfg.gamma = schedule.gamma;
    const std::size_t n = cfg.eps == 0.0 ? 1 : static_cast<std::size_t>(mc.n_samples);
    std::vector<double> sup(n);
    parallel_for(n, mc.workers, [&](std::size_t k) {
      double m = 0.0;
      SpdeRunOptions opts;
      opts.observer = [&](const SpdeStepView& v) {
        FourierField d = v.rho;
        d -= b.det.fields[static_cast<std::size_t>(v.step)];
        m = std::max(m, sobolev_norm(d, cfg.gamma));
        return v.l2_norm <= cfg.negativity_level_L && v.t < cfg.negativity_level_L;
      };
      solve_spde(rho0, b, cfg, k, opts);
      sup[k] = m;
    });
    const Estimate e = estimate_mean(sup);
    gaps.push_back(e);
    ReportPoint p;
    p.label = "eps=" + format_number(cfg.eps);
    p.params = {{"eps", cfg.eps},
                {"delta", cfg.delta},
                {"regular_scaling", regime.regular[i]},
                {"rough_scaling", regime.rough[i]}};
    p.add("sup_gap", e);
    if (linear && cfg.eps > 0.0) {
      const Estimate o = linear_lolli_sup_oracle(cfg.M, cfg.delta, cfg.gamma, cfg.T, cfg.dt,
                                                 std::max(4 * mc.n_samples, 1000), base.seed, mc.workers);
      const double root = std::sqrt(cfg.eps);
      p.add("oracle_sup_gap", root * o.mean, root * o.std_error, o.n);
      const double rel = std::abs(e.mean - root * o.mean) / (root * o.mean);
      p.add("oracle_relative_error", rel, 0.0, e.n);
      oracle_detail << (oracle_detail.tellp() > 0 ? "; " : "") << p.label << ": "
                    << format_number(rel);
      if (!(rel < oracle_tolerance)) oracle_ok = false;
    }
    rep.points.push_back(std::move(p));
  }
  std::string d;
  const bool dec = decreasing_beyond(gaps, 2.0, &d);
  rep.verdicts.push_back({"decreasing", dec, "sup gap strictly decreasing beyond 2 combined standard errors", d});
  if (linear)
    rep.verdicts.push_back({"linear_oracle", oracle_ok,
                            "relative error to the exact linear-case oracle < " + format_number(oracle_tolerance),
                            oracle_detail.str()});
  return rep;
}

namespace {

struct Cov2 {
  double xx = 0, yy = 0, xy = 0;
  double frobenius() const { return std::sqrt(xx * xx + yy * yy + 2 * xy * xy); }
};

Cov2 covariance(const std::vector<Complex>& z) {
  Cov2 c;
  const double n = static_cast<double>(z.size());
  if (z.size() < 2) return c;
  Complex m{};
  for (const auto& v : z) m += v;
  m /= n;
  for (const auto& v : z) {
    const Complex d = v - m;
    c.xx += d.real() * d.real();
    c.yy += d.imag() * d.imag();
    c.xy += d.real() * d.imag();
  }
  c.xx /= n - 1;
  c.yy /= n - 1;
  c.xy /= n - 1;
  return c;
}

std::vector<double> centred_square(const std::vector<Complex>& z) {
  Complex m{};
  for (const auto& v : z) m += v;
  m /= static_cast<double>(z.size());
  std::vector<double> out;
  out.reserve(z.size());
  for (const auto& v : z) out.push_back(std::norm(v - m));
  return out;
}

}  // namespace

ExperimentReport run_clt(double eps, const DeltaRule& delta_rule, const SpdeConfig& base,
                         const FourierField& rho0, const std::vector<ProbePoint>& probes,
                         const MonteCarloOptions& mc, const CltOptions& opts) {
  if (!(eps > 0.0)) throw InputError("run_clt: eps must be positive");
  if (probes.empty()) throw InputError("run_clt: no probe points");
  if (mc.n_samples < 2) throw InputError("run_clt: n_samples must be >= 2");
  SpdeConfig cfg = base;
  cfg.eps = eps;
  cfg.delta = delta_rule(eps);
  cfg.validate();
  std::vector<int> probe_step;
  int last = 0;
  for (const auto& p : probes) {
    const int s = static_cast<int>(std::llround(p.t / cfg.dt));
    if (std::abs(s * cfg.dt - p.t) > 1e-9 || s < 0 || s > cfg.steps())
      throw InputError("run_clt: probe time " + format_number(p.t) + " is not a grid time in [0, T]");
    if (std::abs(p.mode.k1) > cfg.M || std::abs(p.mode.k2) > cfg.M)
      throw InputError("run_clt: probe mode outside the retained lattice");
    probe_step.push_back(s);
    last = std::max(last, s);
  }
  // Nothing after the last probe is needed.
  cfg.T = last > 0 ? last * cfg.dt : cfg.dt;

  ExperimentReport rep;
  rep.name = "clt";
  rep.seed = cfg.seed;
  rep.config["spde"] = detail::spde_config_json(cfg);
  rep.config["delta_rule"] = detail::rule_json(delta_rule);
  rep.config["n_samples"] = mc.n_samples;
  rep.config["coupled"] = opts.coupled;
  rep.config["simulate_ou"] = opts.simulate_ou;
  rep.config["rho0"] = detail::field_json(rho0);
  nlohmann::ordered_json jp = nlohmann::ordered_json::array();
  for (const auto& p : probes) jp.push_back({p.t, p.mode.k1, p.mode.k2});
  rep.config["probes"] = jp;

  const bool linear = cfg.chi == 0.0 && is_uniform_density(rho0);
  const DetBaseline b = linear ? DetBaseline::uniform(cfg, opts.simulate_ou)
                               : DetBaseline::build(rho0, cfg, opts.simulate_ou);
  const std::size_t n = static_cast<std::size_t>(mc.n_samples);
  const double scale = 1.0 / std::sqrt(eps);
  std::vector<std::vector<Complex>> spde(probes.size(), std::vector<Complex>(n));
  std::vector<std::vector<Complex>> ou(probes.size(), std::vector<Complex>(n));
  parallel_for(n, mc.workers, [&](std::size_t k) {
    SpdeRunOptions so;
    so.observer = [&](const SpdeStepView& v) {
      for (std::size_t p = 0; p < probes.size(); ++p)
        if (probe_step[p] == v.step)
          spde[p][k] = scale * (v.rho.at(0, probes[p].mode) -
                                b.det.fields[static_cast<std::size_t>(v.step)].at(0, probes[p].mode));
      return true;
    };
    solve_spde(rho0, b, cfg, k, so);
    if (opts.simulate_ou) {
      solve_ou(b, cfg, opts.coupled ? k : n + k, 0, [&](int step, double, const FourierField& v) {
        for (std::size_t p = 0; p < probes.size(); ++p)
          if (probe_step[p] == step) ou[p][k] = v.at(0, probes[p].mode);
      });
    }
  });

  double worst = 0.0;
  bool oracle_ok = true;
  std::ostringstream od;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    ReportPoint pt;
    const Mode w = probes[p].mode;
    pt.label = "t=" + format_number(probes[p].t) + ",w=(" + std::to_string(w.k1) + "," +
               std::to_string(w.k2) + ")";
    pt.params = {{"t", probes[p].t}, {"k1", static_cast<double>(w.k1)}, {"k2", static_cast<double>(w.k2)}};
    const Cov2 cs = covariance(spde[p]);
    pt.add("spde_cov_re_re", cs.xx, 0.0, n);
    pt.add("spde_cov_im_im", cs.yy, 0.0, n);
    pt.add("spde_cov_re_im", cs.xy, 0.0, n);
    if (opts.simulate_ou) {
      const Cov2 co = covariance(ou[p]);
      pt.add("ou_cov_re_re", co.xx, 0.0, n);
      pt.add("ou_cov_im_im", co.yy, 0.0, n);
      pt.add("ou_cov_re_im", co.xy, 0.0, n);
      const Cov2 diff{cs.xx - co.xx, cs.yy - co.yy, cs.xy - co.xy};
      const double denom = co.frobenius();
      const double rel = denom > 0.0 ? diff.frobenius() / denom : (diff.frobenius() == 0.0 ? 0.0 : 1.0);
      pt.add("relative_discrepancy", rel, 0.0, n);
      worst = std::max(worst, rel);
      if (denom > 0.0) {
        const RatioEstimate r = paired_mean_ratio(centred_square(spde[p]), centred_square(ou[p]));
        pt.add("variance_ratio", r.ratio, r.std_error, n);
      }
    }
    if (linear) {
      const double lam = laplace_symbol(w);
      const double oracle = w == Mode{} ? 0.0 : -0.5 * std::expm1(-2.0 * lam * probes[p].t);
      std::vector<double> sq;
      sq.reserve(n);
      for (const auto& z : spde[p]) sq.push_back(std::norm(z));
      const Estimate e = estimate_mean(sq);
      pt.add("spde_second_moment", e);
      pt.add("oracle_second_moment", oracle, 0.0, 0);
      const bool ok = std::abs(e.mean - oracle) <= opts.oracle_sigmas * e.std_error;
      od << (od.tellp() > 0 ? "; " : "") << pt.label << ": " << format_number(e.mean) << " vs "
         << format_number(oracle) << " (se " << format_number(e.std_error) << ")";
      if (!ok) oracle_ok = false;
    }
    rep.points.push_back(std::move(pt));
  }
  if (opts.simulate_ou)
    rep.verdicts.push_back({"covariance_match", worst < opts.tolerance,
                            "max relative Frobenius covariance discrepancy < " + format_number(opts.tolerance),
                            "max " + format_number(worst)});
  if (linear)
    rep.verdicts.push_back({"ou_oracle", oracle_ok,
                            "second moment within " + format_number(opts.oracle_sigmas) +
                                " standard errors of the closed-form OU value",
                            od.str()});
  return rep;
}

}  // namespace ksdk
