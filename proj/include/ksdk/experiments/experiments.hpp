// Monte Carlo experiments on the SPDE, its fluctuations, the enhancement and
// the particle system. Every run is a pure function of its inputs: path i
// always uses noise keys (seed, i), results are reduced in index order.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ksdk/experiments/report.hpp"
#include "ksdk/spde/spde.hpp"
#include "ksdk/spectral/field.hpp"

namespace ksdk {

/// delta as a function of eps.
struct DeltaRule {
  enum class Kind { power, logarithmic, fixed };
  Kind kind = Kind::power;
  /// power: c eps^p; logarithmic: c log(1/eps)^(-p); fixed: c.
  double coefficient = 1.0;
  double exponent = 0.125;

  /// eps > 0 unless fixed; DomainError otherwise or if the result is not in (0, inf).
  double operator()(double eps) const;
  std::string describe() const;
  static DeltaRule fixed(double delta) { return {Kind::fixed, delta, 0.0}; }
  static DeltaRule power(double p, double c = 1.0) { return {Kind::power, c, p}; }
};

DeltaRule::Kind parse_delta_rule_kind(const std::string& s);
std::string to_string(DeltaRule::Kind k);

struct ScalingSchedule {
  /// Strictly decreasing; only the last entry may be 0.
  std::vector<double> eps_list;
  DeltaRule delta_rule;
  double gamma = 0.0;

  void validate() const;
  /// delta per eps; an eps = 0 entry reuses the previous delta (1 if alone).
  std::vector<double> deltas() const;

  struct Regime {
    std::vector<double> regular;  // eps^{1/2} delta^{-gamma-2}
    std::vector<double> rough;    // eps log(1/delta)
    bool regular_decreasing = false;
    bool rough_decreasing = false;
  };
  Regime regime() const;
};

struct MonteCarloOptions {
  int n_samples = 100;
  int workers = 1;
};

/// True when f is the constant 1 (mean 1, every other coefficient exactly 0).
bool is_uniform_density(const FourierField& f);

/// E sup_{t <= T} ||ti_t||_{H^gamma} at sigma = 1 from exact per-mode
/// Ornstein-Uhlenbeck transitions on the grid times (independent of the SPDE
/// stepper and its noise stream).
Estimate linear_lolli_sup_oracle(int M, double delta, double gamma, double T, double dt,
                                 int n_samples, std::uint64_t seed, int workers = 1);

/// Per eps: E sup_{t <= S_L} ||rho - rho_det||_{H^gamma}. Verdict: strictly
/// decreasing along the schedule beyond 2 combined standard errors. At
/// chi = 0 with rho0 = 1 each point also carries the linear-case oracle
/// (verdict: relative error < oracle_tolerance).
ExperimentReport run_lln(const ScalingSchedule& schedule, const SpdeConfig& base,
                         const FourierField& rho0, const MonteCarloOptions& mc,
                         double oracle_tolerance = 0.10);

struct ProbePoint {
  double t = 0.0;
  Mode mode;
};

struct CltOptions {
  /// OU path i shares the noise keys of SPDE path i.
  bool coupled = true;
  /// When false only the closed-form comparison (chi = 0, rho0 = 1) is made.
  bool simulate_ou = true;
  double tolerance = 0.15;
  /// Standard errors allowed against the closed-form oracle.
  double oracle_sigmas = 3.0;
};

/// Covariance of (Re, Im) of the rescaled fluctuation at each probe against the
/// OU ensemble (relative Frobenius discrepancy, paired variance ratio) and,
/// at chi = 0 with rho0 = 1, against E|v(t, w)|^2 = (1 - exp(-2 |2 pi w|^2 t)) / 2.
ExperimentReport run_clt(double eps, const DeltaRule& delta_rule, const SpdeConfig& base,
                         const FourierField& rho0, const std::vector<ProbePoint>& probes,
                         const MonteCarloOptions& mc, const CltOptions& opts = {});

/// Per eps: p = P(sup_{t <= S_L} ||rho^-||_{L^2} >= level) with Wilson
/// intervals; fits of log p against eps^{-1} (1 + delta^{-2})^{-2} and against
/// 1/eps on the points with p > 0.
ExperimentReport run_negativity(const std::vector<double>& eps_list, const DeltaRule& delta_rule,
                                double level, double L, const SpdeConfig& base,
                                const FourierField& rho0, const MonteCarloOptions& mc);

/// Per eps: frequency of ||rho||_{L^2} crossing base.blowup_threshold before S,
/// with chi = chi_large. The deterministic solution must survive [0, S].
ExperimentReport run_blowup(const std::vector<double>& eps_list, const DeltaRule& delta_rule,
                            double chi_large, double S, const SpdeConfig& base,
                            const FourierField& rho0, const MonteCarloOptions& mc);

struct EnhancementScanOptions {
  /// Checkpoint every `stride` steps (and at T); norms are maxima over checkpoints.
  int stride = 200;
  /// Also run the sigma = 1 control.
  bool uniform_control = true;
  double beta_bound = 0.25;
  double flatness_bound = 0.20;
};

ExperimentReport run_enhancement_scan(const std::vector<double>& delta_list, const SpdeConfig& base,
                                      const FourierField& rho0, const MonteCarloOptions& mc,
                                      const EnhancementScanOptions& opts = {});

struct ParticleComparisonConfig {
  double chi = 0.0;
  double T = 0.25;
  double dt = 2.5e-4;
  int M = 32;
  int M_kernel = 32;
  double gamma = -1.0;
  /// delta(N) = coefficient N^{-1/2}
  double delta_coefficient = 1.0;
  std::uint64_t seed = 1;
  double slope_lo = -0.6;
  double slope_hi = -0.4;
};

/// Per N: E ||empirical_density(X_T) - rho_det(T)||_{H^gamma}, a log-log fit
/// against N and, at chi = 0 with rho0 = 1, the i.i.d. oracle.
ExperimentReport run_particle_comparison(const std::vector<std::size_t>& N_list,
                                         const ParticleComparisonConfig& cfg,
                                         const FourierField& rho0, const MonteCarloOptions& mc);

/// Strictly decreasing sequence of estimates beyond k combined standard errors.
bool decreasing_beyond(const std::vector<Estimate>& xs, double k, std::string* detail = nullptr);

}  // namespace ksdk
