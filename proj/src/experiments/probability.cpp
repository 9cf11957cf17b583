#include <algorithm>
#include <cmath>
#include <sstream>

#include "internal.hpp"
#include "ksdk/error.hpp"
#include "ksdk/experiments/experiments.hpp"
#include "ksdk/parallel.hpp"
#include "ksdk/spectral/operators.hpp"

namespace ksdk {
namespace {

struct EventCounts {
  double eps;
  double delta;
  std::size_t n;
  std::size_t k;
};

void check_eps_list(const std::vector<double>& eps_list, const char* op) {
  ScalingSchedule s;
  s.eps_list = eps_list;
  try {
    s.validate();
  } catch (const InputError& e) {
    throw InputError(std::string(op) + ": " + e.what());
  }
}

ReportPoint event_point(const EventCounts& c, double level) {
  ReportPoint p;
  p.label = "eps=" + format_number(c.eps);
  const double speed = c.eps > 0.0 ? 1.0 / (c.eps * std::pow(1.0 + std::pow(c.delta, -2.0), 2.0)) : 0.0;
  p.params = {{"eps", c.eps}, {"delta", c.delta}, {"speed", speed},
              {"inv_eps", c.eps > 0.0 ? 1.0 / c.eps : 0.0}};
  const double nn = static_cast<double>(c.n);
  const double ph = static_cast<double>(c.k) / nn;
  const Interval w = wilson_interval(c.k, c.n, level);
  p.add("p_hat", ph, std::sqrt(ph * (1 - ph) / nn), c.n);
  p.add("wilson_lo", w.lo, 0.0, c.n);
  p.add("wilson_hi", w.hi, 0.0, c.n);
  p.add("events", static_cast<double>(c.k), 0.0, c.n);
  return p;
}

// Non-increasing in decreasing eps unless a later interval lies wholly above.
Verdict non_increasing_verdict(const std::vector<EventCounts>& cs) {
  Verdict v{"non_increasing", true, "p_hat non-increasing as eps decreases beyond Wilson-interval overlap", ""};
  std::ostringstream os;
  for (std::size_t i = 1; i < cs.size(); ++i) {
    const Interval a = wilson_interval(cs[i - 1].k, cs[i - 1].n);
    const Interval b = wilson_interval(cs[i].k, cs[i].n);
    const bool up = cs[i].k * cs[i - 1].n > cs[i - 1].k * cs[i].n;
    if (up && b.lo > a.hi) v.passed = false;
    os << (i > 1 ? "; " : "") << format_number(static_cast<double>(cs[i - 1].k) / cs[i - 1].n) << " -> "
       << format_number(static_cast<double>(cs[i].k) / cs[i].n);
  }
  v.detail = os.str();
  return v;
}

void below_resolution_warnings(const std::vector<EventCounts>& cs, ExperimentReport& rep) {
  for (const auto& c : cs)
    if (c.k == 0 && c.eps > 0.0)
      rep.warnings.push_back("eps=" + format_number(c.eps) + ": no events in " + std::to_string(c.n) +
                             " paths (below MC resolution)");
}

}  // namespace

ExperimentReport run_negativity(const std::vector<double>& eps_list, const DeltaRule& delta_rule,
                                double level, double L, const SpdeConfig& base,
                                const FourierField& rho0, const MonteCarloOptions& mc) {
  check_eps_list(eps_list, "run_negativity");
  if (!(level > 0.0)) throw InputError("run_negativity: level must be positive");
  base.validate();
  SpdeConfig cfg0 = base;
  cfg0.negativity_level_L = L;
  const bool uniform = cfg0.chi == 0.0 && is_uniform_density(rho0);
  const DetBaseline b = uniform ? DetBaseline::uniform(cfg0, false) : DetBaseline::build(rho0, cfg0, false);
  double det_sup = 0.0;
  for (const auto& f : b.det.fields) det_sup = std::max(det_sup, sobolev_norm(f, 0.0));
  if (!(L > det_sup))
    throw InputError("run_negativity: L = " + format_number(L) + " must exceed ||rho_det||_{C_T L^2} = " +
                     format_number(det_sup));

  ExperimentReport rep;
  rep.name = "negativity";
  rep.seed = base.seed;
  rep.config["spde"] = detail::spde_config_json(cfg0);
  rep.config["eps_list"] = eps_list;
  rep.config["delta_rule"] = detail::rule_json(delta_rule);
  rep.config["level"] = level;
  rep.config["L"] = L;
  rep.config["n_samples"] = mc.n_samples;
  rep.config["rho0"] = detail::field_json(rho0);

  std::vector<EventCounts> counts;
  double prev_delta = 1.0;
  for (double eps : eps_list) {
    SpdeConfig cfg = cfg0;
    cfg.eps = eps;
    cfg.delta = eps > 0.0 || delta_rule.kind == DeltaRule::Kind::fixed ? delta_rule(eps) : prev_delta;
    prev_delta = cfg.delta;
    const std::size_t n = eps == 0.0 ? 1 : static_cast<std::size_t>(mc.n_samples);
    std::vector<char> hit(n, 0);
    parallel_for(n, mc.workers, [&](std::size_t k) {
      SpdeRunOptions opts;
      opts.observer = [&](const SpdeStepView& v) {
        if (v.negative_part_l2 >= level) {
          hit[k] = 1;
          return false;
        }
        return v.l2_norm <= L && v.t < L;
      };
      solve_spde(rho0, b, cfg, k, opts);
    });
    std::size_t k = 0;
    for (char h : hit) k += h;
    counts.push_back({eps, cfg.delta, n, k});
    rep.points.push_back(event_point(counts.back(), 0.95));
  }

  std::vector<double> xs, xi, ys, se;
  const double z = normal_critical(0.95);
  for (const auto& c : counts) {
    if (c.k == 0 || c.eps == 0.0) continue;
    const Interval w = wilson_interval(c.k, c.n);
    xs.push_back(1.0 / (c.eps * std::pow(1.0 + std::pow(c.delta, -2.0), 2.0)));
    xi.push_back(1.0 / c.eps);
    ys.push_back(std::log(static_cast<double>(c.k) / c.n));
    se.push_back((std::log(w.hi) - std::log(w.lo)) / (2 * z));
  }
  rep.verdicts.push_back(non_increasing_verdict(counts));
  below_resolution_warnings(counts, rep);
  if (xs.size() >= 2) {
    const LineFit f = fit_line(xs, ys, se);
    rep.fits.push_back({"log_p_vs_speed", "1/(eps (1 + delta^-2)^2)", "log p_hat", f});
    rep.fits.push_back({"log_p_vs_inv_eps", "1/eps", "log p_hat", fit_line(xi, ys, se)});
    rep.verdicts.push_back({"slope_negative", f.slope < 0.0 && f.slope_ci.hi < 0.0,
                            "weighted fit of log p_hat against 1/(eps (1 + delta^-2)^2) on points with p_hat > 0: "
                            "slope < 0 with 95% interval excluding 0",
                            "slope " + format_number(f.slope) + " CI [" + format_number(f.slope_ci.lo) + ", " +
                                format_number(f.slope_ci.hi) + "] on " + std::to_string(xs.size()) + " points"});
  } else {
    rep.warnings.push_back("fewer than two points with p_hat > 0; slope not evaluated");
  }
  return rep;
}

ExperimentReport run_blowup(const std::vector<double>& eps_list, const DeltaRule& delta_rule,
                            double chi_large, double S, const SpdeConfig& base,
                            const FourierField& rho0, const MonteCarloOptions& mc) {
  check_eps_list(eps_list, "run_blowup");
  if (!(S > 0.0)) throw InputError("run_blowup: S must be positive");
  SpdeConfig cfg0 = base;
  cfg0.chi = chi_large;
  cfg0.T = S;
  cfg0.validate();
  const DetBaseline b = DetBaseline::build(rho0, cfg0, false);

  ExperimentReport rep;
  rep.name = "blowup";
  rep.seed = base.seed;
  rep.config["spde"] = detail::spde_config_json(cfg0);
  rep.config["eps_list"] = eps_list;
  rep.config["delta_rule"] = detail::rule_json(delta_rule);
  rep.config["n_samples"] = mc.n_samples;
  rep.config["rho0"] = detail::field_json(rho0);

  std::vector<EventCounts> counts;
  double prev_delta = 1.0;
  for (double eps : eps_list) {
    SpdeConfig cfg = cfg0;
    cfg.eps = eps;
    cfg.delta = eps > 0.0 || delta_rule.kind == DeltaRule::Kind::fixed ? delta_rule(eps) : prev_delta;
    prev_delta = cfg.delta;
    const std::size_t n = eps == 0.0 ? 1 : static_cast<std::size_t>(mc.n_samples);
    std::vector<char> hit(n, 0);
    parallel_for(n, mc.workers, [&](std::size_t k) {
      const StoppedPath p = solve_spde(rho0, b, cfg, k);
      hit[k] = p.trajectory.blew_up_at.has_value() ? 1 : 0;
    });
    std::size_t k = 0;
    for (char h : hit) k += h;
    counts.push_back({eps, cfg.delta, n, k});
    rep.points.push_back(event_point(counts.back(), 0.95));
  }
  rep.verdicts.push_back(non_increasing_verdict(counts));
  below_resolution_warnings(counts, rep);
  return rep;
}

}  // namespace ksdk
